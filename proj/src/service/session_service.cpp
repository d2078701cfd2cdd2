#include "procrastimate/service/session_service.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "procrastimate/errors.hpp"
#include "procrastimate/persistence/save_file.hpp"

namespace procrastimate::service {

namespace fs = std::filesystem;
using nlohmann::json;

struct SessionService::Session {
  std::mutex mutex;
  SessionRecord record;
  std::vector<DialogueEntry> history;
  const StoryPack* pack = nullptr;
};

namespace {

fs::path sidecar_path(const fs::path& dir, const std::string& session_id) {
  return dir / (session_id + ".session.json");
}

std::string random_hex_id() {
  static std::mutex mutex;
  static std::random_device device;
  std::lock_guard lock(mutex);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  for (int i = 0; i < 4; ++i) {
    std::uint32_t word = device();
    for (int j = 0; j < 8; ++j, word >>= 4) id += kHex[word & 0xF];
  }
  return id;
}

std::uint64_t random_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

}  // namespace

bool is_valid_session_id(const std::string& session_id) {
  if (session_id.empty() || session_id.size() > 64) return false;
  for (const char ch : session_id) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
                    ch == '_';
    if (!ok) return false;
  }
  return true;
}

std::optional<dialogue::DialogueResponse> adjudication_feedback(const dialogue::Dialogue& dialogue,
                                                                const StoryPack& pack, const rules::Action& action,
                                                                rules::Result result, std::uint64_t seed) {
  return std::visit(
      [&](const auto& a) -> std::optional<dialogue::DialogueResponse> {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, rules::L0Choice>) {
          return dialogue.feedback_level0(*pack.find_case(a.case_id), a.cause, result, seed);
        } else if constexpr (std::is_same_v<T, rules::PlayCard>) {
          return dialogue.generate_feedback(*pack.find_case(a.case_id), {a.card_id}, result, seed);
        } else if constexpr (std::is_same_v<T, rules::PlayPair>) {
          return dialogue.generate_feedback(*pack.find_case(a.case_id), {a.card_a, a.card_b}, result, seed);
        } else {
          return std::nullopt;
        }
      },
      action);
}

SessionService::SessionService(PackRegistry packs, std::shared_ptr<const dialogue::Dialogue> dialogue,
                               ServiceConfig config)
    : packs_(std::move(packs)), dialogue_(std::move(dialogue)), config_(std::move(config)) {
  if (config_.save_dir.empty()) config_.save_dir = persist::default_save_dir();
}

SessionService::~SessionService() = default;

std::int64_t SessionService::now() const {
  if (config_.clock) return config_.clock();
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void SessionService::persist(const Session& session, const GameState& state,
                             const std::vector<DialogueEntry>& history, std::int64_t last_action_at) const {
  persist::save_state(state, persist::save_path(config_.save_dir, state.session_id));
  json dialogue = json::array();
  for (const auto& entry : history) dialogue.push_back(dialogue_to_json(entry));
  const json sidecar = {{"session_id", state.session_id},
                        {"created_at", session.record.created_at},
                        {"last_action_at", last_action_at},
                        {"dialogue", std::move(dialogue)}};
  persist::write_atomically(sidecar_path(config_.save_dir, state.session_id), sidecar.dump(2) + "\n", false);
}

CreateResult SessionService::create_session(const std::string& pack_id, std::optional<std::uint64_t> seed) {
  const StoryPack& pack = packs_.get(pack_id);
  auto session = std::make_shared<Session>();
  session->pack = &pack;

  std::unique_lock table(table_mutex_);
  std::string id;
  do {
    id = config_.id_source ? config_.id_source() : random_hex_id();
  } while (sessions_.count(id) != 0 || fs::exists(persist::save_path(config_.save_dir, id)));
  if (!is_valid_session_id(id)) throw Error("BAD_SESSION_ID", "generated session id is not usable: " + id);

  const std::uint64_t rng_seed = seed ? *seed : (config_.seed_source ? config_.seed_source() : random_seed());
  session->record = {id, pack.pack_id, rules::new_game(pack, id, rng_seed), now(), 0};
  session->record.last_action_at = session->record.created_at;
  persist(*session, session->record.state, session->history, session->record.last_action_at);
  sessions_.emplace(id, session);
  return {id, session_view(session->record.state, pack, session->history)};
}

std::shared_ptr<SessionService::Session> SessionService::load_from_disk(const std::string& session_id) {
  const fs::path path = persist::save_path(config_.save_dir, session_id);
  auto recovered = persist::load_with_backup(path);
  const StoryPack& pack = packs_.get(recovered.state.pack_id);
  const auto problems = rules::check_invariants(recovered.state, pack);
  if (!problems.empty()) throw persist::TamperError(path.string() + ": " + problems.front());
  if (recovered.state.session_id != session_id) {
    throw persist::TamperError(path.string() + ": save belongs to session " + recovered.state.session_id);
  }

  auto session = std::make_shared<Session>();
  session->pack = &pack;
  session->record = {session_id, pack.pack_id, std::move(recovered.state), 0, 0};

  std::ifstream in(sidecar_path(config_.save_dir, session_id), std::ios::binary);
  if (in) {
    std::ostringstream text;
    text << in.rdbuf();
    const auto doc = json::parse(text.str(), nullptr, false);
    if (doc.is_object()) {
      try {
        session->record.created_at = doc.value("created_at", std::int64_t{0});
        session->record.last_action_at = doc.value("last_action_at", std::int64_t{0});
        const std::uint64_t last_seq = session->record.state.action_log.empty()
                                           ? 0
                                           : session->record.state.action_log.back().seq;
        for (const auto& item : doc.at("dialogue")) {
          DialogueEntry entry = dialogue_from_json(item);
          // Entries newer than the save (crash between the two writes) are dropped.
          if (entry.seq <= last_seq) session->history.push_back(std::move(entry));
        }
      } catch (const json::exception&) {
        session->history.clear();
      }
    }
  }
  return session;
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& session_id) {
  {
    std::shared_lock table(table_mutex_);
    const auto it = sessions_.find(session_id);
    if (it != sessions_.end()) return it->second;
  }
  if (!is_valid_session_id(session_id) || !fs::exists(persist::save_path(config_.save_dir, session_id))) {
    throw NotFoundError("unknown session '" + session_id + "'");
  }
  auto loaded = load_from_disk(session_id);
  std::unique_lock table(table_mutex_);
  return sessions_.try_emplace(session_id, std::move(loaded)).first->second;
}

SubmitResult SessionService::submit_action_json(const std::string& session_id, const json& body) {
  auto session = find(session_id);
  rules::Action action;
  {
    std::lock_guard lock(session->mutex);
    action = action_from_json(body, session->record.state, *session->pack);
  }
  return submit_action(session_id, action);
}

SubmitResult SessionService::submit_action(const std::string& session_id, const rules::Action& action) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  const GameState& before = session->record.state;
  const StoryPack& pack = *session->pack;

  const std::int64_t timestamp = now();
  dialogue::DialogueNarrator narrator(*dialogue_);
  rules::ApplyResult applied = rules::apply(before, pack, action, {timestamp, &narrator});

  const std::uint64_t seq = applied.state.action_log.back().seq;
  const std::uint64_t seed = rules::dialogue_seed(before);
  std::vector<DialogueEntry> produced;
  if (applied.outcome) {
    auto feedback = adjudication_feedback(*dialogue_, pack, action, applied.outcome->result, seed);
    if (feedback) produced.push_back({seq, applied.state.action_log.back().case_id, std::move(*feedback)});
  }
  const std::string case_id = applied.state.action_log.back().case_id;
  for (const auto& response : narrator.responses()) produced.push_back({seq, case_id, response});

  std::vector<DialogueEntry> history = session->history;
  history.insert(history.end(), produced.begin(), produced.end());
  if (history.size() > config_.history_limit) {
    history.erase(history.begin(), history.end() - static_cast<std::ptrdiff_t>(config_.history_limit));
  }

  persist(*session, applied.state, history, timestamp);

  session->record.state = std::move(applied.state);
  session->record.last_action_at = timestamp;
  session->history = std::move(history);

  SubmitResult out;
  out.view = session_view(session->record.state, pack, session->history);
  out.outcome = applied.outcome;
  out.dialogue = std::move(produced);

  json frame = {{"type", "update"}, {"view", out.view}, {"dialogue", json::array()}};
  frame["outcome"] = out.outcome ? outcome_to_json(*out.outcome) : json(nullptr);
  for (const auto& entry : out.dialogue) frame["dialogue"].push_back(dialogue_to_json(entry));
  publish(session_id, frame);
  return out;
}

json SessionService::get_view(const std::string& session_id) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session_view(session->record.state, *session->pack, session->history);
}

SessionRecord SessionService::get_record(const std::string& session_id) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session->record;
}

std::vector<DialogueEntry> SessionService::get_history(const std::string& session_id) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session->history;
}

std::size_t SessionService::recover() {
  std::error_code ec;
  if (!fs::is_directory(config_.save_dir, ec)) return 0;
  static constexpr std::string_view kSuffix = ".save.json";
  std::size_t restored = 0;
  for (const auto& entry : fs::directory_iterator(config_.save_dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.size() <= kSuffix.size() || name.compare(name.size() - kSuffix.size(), kSuffix.size(), kSuffix) != 0) {
      continue;
    }
    const std::string id = name.substr(0, name.size() - kSuffix.size());
    if (!is_valid_session_id(id)) continue;
    {
      std::shared_lock table(table_mutex_);
      if (sessions_.count(id) != 0) continue;
    }
    try {
      auto session = load_from_disk(id);
      std::unique_lock table(table_mutex_);
      if (sessions_.try_emplace(id, std::move(session)).second) ++restored;
    } catch (const Error&) {
    }
  }
  return restored;
}

std::vector<std::string> SessionService::session_ids() const {
  std::shared_lock table(table_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, session] : sessions_) ids.push_back(id);
  return ids;
}

std::uint64_t SessionService::subscribe(const std::string& session_id, EventSink sink) {
  find(session_id);
  std::lock_guard lock(sink_mutex_);
  const std::uint64_t token = next_token_++;
  sinks_.emplace(token, std::make_pair(session_id, std::move(sink)));
  return token;
}

void SessionService::unsubscribe(std::uint64_t token) {
  std::lock_guard lock(sink_mutex_);
  sinks_.erase(token);
}

void SessionService::publish(const std::string& session_id, const json& frame) {
  std::lock_guard lock(sink_mutex_);
  for (const auto& [token, entry] : sinks_) {
    if (entry.first == session_id) entry.second(frame);
  }
}

void SessionService::flush_all() {
  std::vector<std::shared_ptr<Session>> all;
  {
    std::shared_lock table(table_mutex_);
    for (const auto& [id, session] : sessions_) all.push_back(session);
  }
  for (const auto& session : all) {
    std::lock_guard lock(session->mutex);
    persist(*session, session->record.state, session->history, session->record.last_action_at);
  }
}

}  // namespace procrastimate::service
