#include "doctest.h"

#include <atomic>
#include <thread>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "fixtures.hpp"
#include "httplib.h"
#include "procrastimate/persistence/save_file.hpp"
#include "procrastimate/service/api_router.hpp"
#include "procrastimate/service/http_server.hpp"
#include "procrastimate/service/session_service.hpp"

using namespace procrastimate;
using namespace procrastimate::service;
using nlohmann::json;

namespace {

const StoryPack& pack() { return reference_pack(); }

std::shared_ptr<const dialogue::Dialogue> stub_dialogue() {
  return std::make_shared<dialogue::Dialogue>(bundled_deck(), dialogue::TemplateSet::bundled(),
                                              std::make_shared<dialogue::StubProvider>());
}

ServiceConfig config_for(const std::filesystem::path& dir) {
  ServiceConfig config;
  config.save_dir = dir;
  auto tick = std::make_shared<std::atomic<std::int64_t>>(1'000'000);
  config.clock = [tick] { return tick->fetch_add(1000); };
  return config;
}

std::unique_ptr<SessionService> make_service(const std::filesystem::path& dir) {
  return std::make_unique<SessionService>(PackRegistry::with_reference(), stub_dialogue(), config_for(dir));
}

void finish_level0(SessionService& svc, const std::string& id) {
  for (const auto& c : pack().l0_cases) svc.submit_action(id, rules::L0Choice{c.case_id, *c.major_cause});
}

// Reaches Level 2 with cards 3 (self-efficacy) and 15 (task value) in the handbook.
void reach_level2_with_3_and_15(SessionService& svc, const std::string& id) {
  finish_level0(svc, id);
  for (Cause cause : kAllCauses) {
    const auto& chapter = pack().l1_chapter(cause);
    for (std::size_t i = 0; i < chapter.size(); ++i) {
      int card = static_cast<int>(index_of(cause)) * 10 + 1;
      if (cause == Cause::SelfEfficacy && i == 0) card = 3;
      if (cause == Cause::TaskValue && i == 0) {
        svc.submit_action(id, rules::BuyCard{15});
        card = 15;
      }
      svc.submit_action(id, rules::PlayCard{chapter[i].case_id, card});
    }
  }
}

const Case& l2_case_with(Cause a, Cause b) {
  for (const auto& c : pack().l2_cases) {
    if (*c.cause_pair == CausePair(a, b)) return c;
  }
  throw std::logic_error("missing pair");
}

}  // namespace

TEST_CASE("create_session starts at level 0 with the starting hand") {
  testing::TempDir dir;
  auto svc = make_service(dir.path());
  const auto created = svc->create_session("reference", 7);
  CHECK(created.view["level"] == "L0");
  CHECK(created.view["owned_cards"].size() == 16);
  CHECK(created.view["points"]["earned"] == 0);
  CHECK(created.view["pending_cases"].size() == 8);
  CHECK(std::filesystem::exists(persist::save_path(dir.path(), created.session_id)));
  CHECK(svc->create_session("reference").session_id != created.session_id);
  CHECK_THROWS_AS(svc->create_session("nope"), NotFoundError);
  CHECK_THROWS_AS(svc->get_view("unknown-session"), NotFoundError);
  CHECK_THROWS_AS(svc->get_view("../etc/passwd"), NotFoundError);
}

TEST_CASE("views hide unsolved causes") {
  testing::TempDir dir;
  auto svc = make_service(dir.path());
  const auto id = svc->create_session("reference", 1).session_id;
  for (const auto& c : svc->get_view(id)["pending_cases"]) {
    CHECK_FALSE(c.contains("major_cause"));
    CHECK(c.contains("misconception"));
  }
  finish_level0(*svc, id);
  const json l1 = svc->get_view(id);
  CHECK(l1["level"] == "L1");
  for (const auto& c : l1["pending_cases"]) CHECK(c.contains("major_cause"));

  reach_level2_with_3_and_15(*svc, svc->create_session("reference", 1).session_id);
  const auto ids = svc->session_ids();
  for (const auto& sid : ids) {
    const json view = svc->get_view(sid);
    if (view["level"] != "L2") continue;
    CHECK(view["pending_cases"].size() == 8);
    for (const auto& c : view["pending_cases"]) CHECK_FALSE(c.contains("cause_pair"));
  }
}

TEST_CASE("PlayCard(7) on a self-efficacy case wins with positive dialogue") {
  testing::TempDir dir;
  auto svc = make_service(dir.path());
  const auto id = svc->create_session("reference", 3).session_id;
  finish_level0(*svc, id);
  // Card 7 is a shop card: earn a point with card 1, buy 7, then play it.
  svc->submit_action(id, rules::PlayCard{pack().l1_chapter(Cause::SelfEfficacy)[0].case_id, 1});
  svc->submit_action(id, rules::BuyCard{7});
  const auto& c = pack().l1_chapter(Cause::SelfEfficacy)[1];
  const auto result = svc->submit_action(id, rules::PlayCard{c.case_id, 7});
  REQUIRE(result.outcome);
  CHECK(result.outcome->result == rules::Result::Win);
  REQUIRE(result.dialogue.size() == 1);
  CHECK(result.dialogue[0].response.tone == rules::Tone::Positive);
  CHECK(result.view["handbook"]["SelfEfficacy"]["count"] == 2);
  CHECK(result.view["dialogue"].back()["tone"] == "Positive");

  const auto lose = svc->submit_action(id, rules::PlayCard{pack().l1_chapter(Cause::SelfEfficacy)[2].case_id, 32});
  CHECK(lose.outcome->result == rules::Result::Lose);
  CHECK(lose.dialogue[0].response.tone == rules::Tone::Critical);
  CHECK(lose.view["handbook"]["SelfEfficacy"]["count"] == 2);
}

TEST_CASE("PlayPair(3,15) on a self-efficacy and task-value case creates a merged card") {
  testing::TempDir dir;
  auto svc = make_service(dir.path());
  const auto id = svc->create_session("reference", 5).session_id;
  reach_level2_with_3_and_15(*svc, id);
  REQUIRE(svc->get_view(id)["level"] == "L2");
  const Case& target = l2_case_with(Cause::SelfEfficacy, Cause::TaskValue);
  const auto result = svc->submit_action(id, rules::PlayPair{target.case_id, 3, 15});
  CHECK(result.outcome->result == rules::Result::Win);
  REQUIRE(result.view["merged_cards"].size() == 1);
  CHECK(result.view["merged_cards"][0]["source_low"] == 3);
  CHECK(result.view["merged_cards"][0]["source_high"] == 15);
  CHECK_FALSE(result.view["merged_cards"][0]["generated_title"].get<std::string>().empty());
  REQUIRE(result.dialogue.size() == 2);  // feedback plus merged-card text
  CHECK(result.dialogue[1].response.purpose == dialogue::Purpose::MergedCard);
  bool solved_visible = false;
  for (const auto& c : result.view["pending_cases"]) solved_visible |= c["case_id"] == target.case_id;
  CHECK_FALSE(solved_visible);
}

TEST_CASE("engine rejections keep their reason codes and change nothing") {
  testing::TempDir dir;
  auto svc = make_service(dir.path());
  const auto id = svc->create_session("reference", 3).session_id;
  const json before = svc->get_view(id);
  try {
    svc->submit_action(id, rules::PlayCard{pack().l1_chapter(Cause::SelfEfficacy)[0].case_id, 1});
    FAIL("expected WRONG_LEVEL");
  } catch (const StateError& e) {
    CHECK(e.code() == "WRONG_LEVEL");
  }
  CHECK(svc->get_view(id) == before);

  ApiRouter router(*svc);
  const auto res = router.handle("POST", "/api/sessions/" + id + "/actions",
                                 R"({"type":"PlayCard","case_id":"l1-se-1","card_id":1})");
  CHECK(res.status == 409);
  CHECK(res.body["error"]["code"] == "WRONG_LEVEL");
  CHECK(router.handle("POST", "/api/sessions/" + id + "/actions", "{").body["error"]["code"] == "BAD_JSON");
  CHECK(router.handle("POST", "/api/sessions/" + id + "/actions", R"({"type":"Dance"})").status == 400);
  CHECK(router.handle("POST", "/api/sessions/" + id + "/actions", R"({"type":"BuyCard","card_id":25})").status ==
        409);
  CHECK(router.handle("GET", "/api/sessions/missing", "").status == 404);
  CHECK(router.handle("DELETE", "/api/sessions/" + id, "").status == 405);
  CHECK(router.handle("GET", "/api/elsewhere", "").status == 404);
}

TEST_CASE("router endpoints") {
  testing::TempDir dir;
  auto svc = make_service(dir.path());
  ApiRouter router(*svc);
  const auto packs = router.handle("GET", "/api/packs", "");
  CHECK(packs.status == 200);
  CHECK(packs.body[0]["pack_id"] == "reference");
  CHECK(packs.body[0]["cases"]["L1"] == 24);
  const auto deck = router.handle("GET", "/api/deck", "");
  CHECK(deck.body.size() == 40);
  CHECK(deck.body[0]["title"] == "Step by Step");
  CHECK(deck.body[39]["cause"] == "DistantDelay");

  const auto created = router.handle("POST", "/api/sessions", R"({"pack_id":"reference","seed":"18446744073709551615"})");
  CHECK(created.status == 201);
  const std::string id = created.body["session_id"];
  CHECK(router.handle("POST", "/api/sessions", R"({"pack_id":"ghost"})").status == 404);
  CHECK(router.handle("POST", "/api/sessions", R"({"seed":-4})").status == 400);

  // case_id defaults to the current case.
  const auto l0 = pack().l0_cases[0];
  const auto acted = router.handle("POST", "/api/sessions/" + id + "/actions?x=1",
                                   json{{"type", "L0Choice"}, {"cause", to_string(*l0.major_cause)}}.dump());
  CHECK(acted.status == 200);
  CHECK(acted.body["outcome"]["result"] == "Win");
  CHECK(acted.body["dialogue"][0]["tone"] == "Positive");
  CHECK(router.handle("GET", "/api/sessions/" + id, "").body == acted.body["view"]);
  CHECK(ApiRouter::events_session("/api/sessions/abc/events") == std::optional<std::string>("abc"));
  CHECK_FALSE(ApiRouter::events_session("/api/sessions/abc").has_value());
}

TEST_CASE("parallel clients on one session are linearized") {
  testing::TempDir dir;
  auto svc = make_service(dir.path());
  const auto id = svc->create_session("reference", 9).session_id;
  finish_level0(*svc, id);
  std::atomic<int> accepted{0};
  std::vector<std::thread> clients;
  for (int t = 0; t < 8; ++t) {
    clients.emplace_back([&, t] {
      for (int i = 0; i < 12; ++i) {
        const auto view = svc->get_view(id);
        if (view["current_case"].is_null()) return;
        const std::string case_id = view["current_case"]["case_id"];
        const int card = (t % 2 == 0) ? 32 : 1;  // mix of losing and winning plays
        try {
          svc->submit_action(id, rules::PlayCard{case_id, card});
          ++accepted;
        } catch (const Error&) {
        }
      }
    });
  }
  for (auto& c : clients) c.join();
  const auto record = svc->get_record(id);
  CHECK(record.state.action_log.size() == 8 + static_cast<std::size_t>(accepted.load()));
  for (std::size_t i = 0; i < record.state.action_log.size(); ++i) CHECK(record.state.action_log[i].seq == i + 1);
  CHECK(rules::check_invariants(record.state, pack()).empty());
  CHECK(rules::replay(pack(), id, record.state.rng_seed, record.state.action_log) == record.state);
  CHECK(persist::load_state(persist::save_path(dir.path(), id)) == record.state);
}

TEST_CASE("sessions run concurrently") {
  testing::TempDir dir;
  auto svc = make_service(dir.path());
  std::vector<std::thread> players;
  std::atomic<int> finished{0};
  for (int p = 0; p < 6; ++p) {
    players.emplace_back([&, p] {
      const auto id = svc->create_session("reference", static_cast<std::uint64_t>(p)).session_id;
      finish_level0(*svc, id);
      if (svc->get_view(id)["level"] == "L1") ++finished;
    });
  }
  for (auto& p : players) p.join();
  CHECK(finished == 6);
}

TEST_CASE("restart and recovery reproduce identical views") {
  testing::TempDir dir;
  std::vector<std::pair<std::string, json>> views;
  {
    auto svc = make_service(dir.path());
    for (int i = 0; i < 3; ++i) {
      const auto id = svc->create_session("reference", 40 + i).session_id;
      if (i > 0) finish_level0(*svc, id);
      if (i > 1) reach_level2_with_3_and_15(*svc, svc->create_session("reference", 1).session_id);
    }
    for (const auto& id : svc->session_ids()) views.emplace_back(id, svc->get_view(id));
  }
  auto restarted = make_service(dir.path());
  CHECK(restarted->recover() == views.size());
  for (const auto& [id, view] : views) CHECK(restarted->get_view(id) == view);

  // Lazy load without recover() and fallback to the rolling backup.
  auto lazy = make_service(dir.path());
  const auto& [id, view] = views.back();
  CHECK(lazy->get_view(id) == view);
}

TEST_CASE("HTTP server and WebSocket events") {
  testing::TempDir dir;
  auto svc = make_service(dir.path());
  HttpServer server(*svc, {"127.0.0.1", 0});
  const auto port = server.start();
  REQUIRE(port != 0);

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/api/sessions", R"({"pack_id":"reference","seed":11})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
  const std::string id = json::parse(created->body)["session_id"];
  auto got = client.Get("/api/sessions/" + id);
  REQUIRE(got);
  CHECK(json::parse(got->body)["level"] == "L0");
  CHECK(client.Get("/api/deck")->status == 200);
  CHECK(client.Get("/api/packs")->status == 200);
  CHECK(client.Get("/api/sessions/none")->status == 404);

  namespace beast = boost::beast;
  namespace ws = beast::websocket;
  boost::asio::io_context io;
  boost::asio::ip::tcp::resolver resolver(io);
  ws::stream<boost::asio::ip::tcp::socket> socket(io);
  boost::asio::connect(socket.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
  socket.handshake("127.0.0.1", "/api/sessions/" + id + "/events");
  beast::flat_buffer buffer;
  socket.read(buffer);
  const json first = json::parse(beast::buffers_to_string(buffer.data()));
  CHECK(first["type"] == "view");
  CHECK(first["view"]["session_id"] == id);

  const auto& c = pack().l0_cases[0];
  auto posted = client.Post("/api/sessions/" + id + "/actions",
                            json{{"type", "L0Choice"}, {"case_id", c.case_id}, {"cause", "TaskValue"}}.dump(),
                            "application/json");
  REQUIRE(posted);
  CHECK(posted->status == 200);
  buffer.clear();
  socket.read(buffer);
  const json update = json::parse(beast::buffers_to_string(buffer.data()));
  CHECK(update["type"] == "update");
  CHECK(update["outcome"]["result"] == (c.major_cause == Cause::TaskValue ? "Win" : "Lose"));
  CHECK(update["dialogue"].size() == 1);
  CHECK(update["view"] == json::parse(posted->body)["view"]);
  socket.close(ws::close_code::normal);

  server.stop();
}
