#include "doctest.h"

#include <fstream>

#include "fixtures.hpp"
#include "mock_llm.hpp"
#include "procrastimate/dialogue/dialogue.hpp"

using namespace procrastimate;
using namespace procrastimate::dialogue;
using rules::Result;
using rules::Tone;

namespace {

const Case& self_efficacy_case() { return reference_pack().l1_chapter(Cause::SelfEfficacy).front(); }
const Case& pair_case() { return reference_pack().l2_cases.front(); }

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

Dialogue stub_dialogue() { return Dialogue(bundled_deck(), TemplateSet::bundled(), std::make_shared<StubProvider>()); }

RemoteConfig mock_config(const testing::MockLlm& mock) {
  RemoteConfig config;
  config.url = mock.url();
  config.api_key = "sk-secret-123";
  config.model = "mock-model";
  config.timeout = std::chrono::milliseconds(500);
  return config;
}

}  // namespace

TEST_CASE("render_prompt substitutes named placeholders") {
  const TemplateSet set = TemplateSet::bundled();
  const auto& feedback = set.get("feedback");
  Bindings context{{"npc_name", "Lin"},        {"npc_basic_info", "A sophomore"},
                   {"npc_persona", "anxious"}, {"case_narrative", "Lin avoids the lab report."},
                   {"case_causes", "task value"}, {"played", bundled_deck().card(7).title},
                   {"played_causes", "self-efficacy"}, {"result", "Lose"}};
  const std::string text = render_prompt(feedback, context);
  CHECK(contains(text, "Lin"));
  CHECK(contains(text, bundled_deck().card(7).title));
  CHECK_FALSE(contains(text, "{"));
  CHECK(text == render_prompt(feedback, context));
}

TEST_CASE("unbound placeholders are render errors naming them") {
  const PromptTemplate tpl{"t", Purpose::Feedback, "Play {card_title} for {npc_name}."};
  try {
    render_prompt(tpl, {{"npc_name", "Lin"}});
    FAIL("expected a render error");
  } catch (const RenderError& e) {
    CHECK(e.code() == "UNBOUND_PLACEHOLDER");
    CHECK(contains(e.what(), "card_title"));
    REQUIRE(e.placeholders().size() == 1);
    CHECK(e.placeholders()[0] == "card_title");
  }
  CHECK_THROWS_AS(render_prompt({"t", Purpose::Feedback, "{card_title}"}, {}), RenderError);
}

TEST_CASE("brace escapes and malformed templates") {
  CHECK(render_prompt({"t", Purpose::Feedback, "{{literal}} {x}"}, {{"x", "1"}}) == "{literal} 1");
  CHECK(placeholders("{a} {b} {a}") == std::vector<std::string>{"a", "b"});
  try {
    placeholders("oops {unterminated");
    FAIL("expected syntax error");
  } catch (const RenderError& e) {
    CHECK(e.code() == "TEMPLATE_SYNTAX");
  }
  CHECK_THROWS_AS(placeholders("stray } brace"), RenderError);
}

TEST_CASE("template directories overlay the bundled set") {
  testing::TempDir dir;
  std::ofstream(dir.path() / "letter_formal.txt") << "Formal letter from {npc_name}: {granted_titles}";
  std::ofstream(dir.path() / "feedback.txt") << "Override {npc_name} {played} {case_causes} {result}";
  const TemplateSet set = TemplateSet::load_dir(dir.path());
  CHECK(set.get("letter_formal").purpose == Purpose::Letter);
  CHECK(contains(set.get("feedback").body, "Override"));
  CHECK(set.contains("merged_card"));
  CHECK_THROWS_AS(set.get("missing"), NotFoundError);
  CHECK_THROWS_AS(TemplateSet::load_dir(dir.path() / "nope"), Error);
  std::ofstream(dir.path() / "bad.txt") << "{broken";
  CHECK_THROWS_AS(TemplateSet::load_dir(dir.path()), RenderError);
}

TEST_CASE("stub feedback on a losing play is critical and names card and cause") {
  const Dialogue d = stub_dialogue();
  const auto response = d.generate_feedback(self_efficacy_case(), {32}, Result::Lose, 7);
  CHECK(response.tone == Tone::Critical);
  CHECK(contains(response.text, bundled_deck().card(32).title));
  CHECK(contains(response.text, "self-efficacy"));
  CHECK(response.provider_id == "stub");
  CHECK_FALSE(response.degraded);
  CHECK(response.text == d.generate_feedback(self_efficacy_case(), {32}, Result::Lose, 7).text);
}

TEST_CASE("stub feedback on a winning play is positive") {
  const Dialogue d = stub_dialogue();
  const auto response = d.generate_feedback(self_efficacy_case(), {3}, Result::Win, 7);
  CHECK(response.tone == Tone::Positive);
  CHECK(contains(response.text, bundled_deck().card(3).title));
  CHECK(response.speaker == self_efficacy_case().npc.name);
}

TEST_CASE("feedback tone follows the result for every seed and card") {
  const Dialogue d = stub_dialogue();
  for (int card = 1; card <= 40; ++card) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Result result = card <= 10 ? Result::Win : Result::Lose;
      const auto response = d.generate_feedback(self_efficacy_case(), {card}, result, seed);
      CHECK((response.tone == Tone::Critical) == (result == Result::Lose));
      CHECK(contains(response.text, bundled_deck().card(card).title));
    }
  }
  const auto l0 = d.feedback_level0(reference_pack().l0_cases[0], Cause::TaskValue, Result::Lose, 1);
  CHECK(l0.tone == Tone::Critical);
  CHECK_THROWS_AS(d.generate_feedback(self_efficacy_case(), {}, Result::Lose, 1), DomainError);
}

TEST_CASE("stub letters name every granted card") {
  const Dialogue d = stub_dialogue();
  const auto letter = d.generate_letter(Cause::SelfEfficacy, {5, 6}, nullptr, "letter", 11);
  CHECK(contains(letter.text, bundled_deck().card(5).title));
  CHECK(contains(letter.text, bundled_deck().card(6).title));
  CHECK(letter.tone == Tone::Positive);
  CHECK(letter.text == d.generate_letter(Cause::SelfEfficacy, {5, 6}, nullptr, "letter", 11).text);
  CHECK_THROWS_AS(d.generate_letter(Cause::SelfEfficacy, {}, nullptr, "letter", 11), DomainError);
  // Unknown template ids fall back to the default letter.
  CHECK(d.generate_letter(Cause::TaskValue, {19}, nullptr, "letter_custom", 1).purpose == Purpose::Letter);
}

TEST_CASE("stub merged text is symmetric and reproducible") {
  const Dialogue d = stub_dialogue();
  const auto ab = d.generate_merged_text(3, 15, pair_case(), 5);
  const auto ba = d.generate_merged_text(15, 3, pair_case(), 5);
  CHECK(contains(ab.merged.title, bundled_deck().card(3).title));
  CHECK(contains(ab.merged.title, bundled_deck().card(15).title));
  CHECK(ab.merged.title == ba.merged.title);
  CHECK(ab.merged.text == ba.merged.text);
  CHECK_FALSE(ab.merged.text.empty());
  CHECK(ab.merged.text == d.generate_merged_text(3, 15, pair_case(), 5).merged.text);
  CHECK_THROWS_AS(d.generate_merged_text(3, 3, pair_case(), 5), DomainError);
}

TEST_CASE("dual voice produces one line per persona") {
  const Dialogue d = stub_dialogue();
  const auto voices = d.generate_dual_voice("You face a deadline.", Cause::TaskValue, 12, 15, 35, 4);
  CHECK(contains(voices.motivational.text, "Motivational mind"));
  CHECK(contains(voices.procrastinating.text, "Procrastinating mind"));
  CHECK(voices.motivational.tone == Tone::Positive);
  CHECK(voices.procrastinating.tone == Tone::Critical);
}

TEST_CASE("markup stripping and length cap") {
  CHECK(strip_markup("## Title\n**bold** <b>tag</b>  `code`\n\n\n> quote") == "Title\nbold tag code\nquote");
  CHECK(strip_markup("a < b") == "a < b");
  CHECK(cap_length("one two three four", 9) == "one two...");
  CHECK(cap_length("short", 10) == "short");
  CHECK(redact("key=abc and abc", "abc") == "key=*** and ***");
}

TEST_CASE("remote provider talks chat-completions and cleans the reply") {
  testing::MockLlm mock;
  std::vector<std::string> log;
  auto remote = std::make_shared<RemoteProvider>(mock_config(mock), [&](std::string_view line) {
    log.emplace_back(line);
  });
  const Dialogue d(bundled_deck(), TemplateSet::bundled(), remote);
  const auto response = d.generate_feedback(self_efficacy_case(), {3}, Result::Win, 1);
  CHECK(response.text == "Reply\nRemote voice: thanks for the strategy.");
  CHECK(response.provider_id == "remote:mock-model");
  CHECK_FALSE(response.degraded);
  CHECK(response.tone == Tone::Positive);
  CHECK(mock.last_authorization() == "Bearer sk-secret-123");
  CHECK(contains(mock.last_body(), "mock-model"));
  REQUIRE_FALSE(log.empty());
  for (const auto& line : log) CHECK_FALSE(contains(line, "sk-secret-123"));

  const auto merged = d.generate_merged_text(3, 15, pair_case(), 1);
  CHECK(merged.merged.title == "Mock merged plan");
  CHECK(merged.merged.text == "Do both things together.");

  RemoteConfig capped = mock_config(mock);
  capped.max_chars = 12;
  RemoteProvider short_remote(capped);
  CHECK(short_remote.complete({"feedback", Purpose::Feedback, {}, "hi", 0}).size() <= 15);
}

TEST_CASE("remote failures fall back to the stub in degraded mode") {
  testing::MockLlm mock;
  const Dialogue d(bundled_deck(), TemplateSet::bundled(), std::make_shared<RemoteProvider>(mock_config(mock)));
  const auto expected = stub_dialogue().generate_feedback(self_efficacy_case(), {32}, Result::Lose, 7);

  for (const auto mode : {testing::MockLlm::Mode::ServerError, testing::MockLlm::Mode::Slow,
                          testing::MockLlm::Mode::Garbage}) {
    mock.set_mode(mode);
    const auto response = d.generate_feedback(self_efficacy_case(), {32}, Result::Lose, 7);
    CHECK(response.degraded);
    CHECK(response.provider_id == "stub");
    CHECK(response.tone == Tone::Critical);
    CHECK(response.text == expected.text);
  }

  mock.set_mode(testing::MockLlm::Mode::NoMergeFormat);
  const auto merged = d.generate_merged_text(3, 15, pair_case(), 2);
  CHECK(merged.response.degraded);
  CHECK(contains(merged.merged.title, bundled_deck().card(3).title));
}

TEST_CASE("unreachable remote provider degrades") {
  RemoteConfig config;
  config.url = "http://127.0.0.1:1/v1/chat/completions";
  config.timeout = std::chrono::milliseconds(300);
  const Dialogue d(bundled_deck(), TemplateSet::bundled(), std::make_shared<RemoteProvider>(config));
  const auto response = d.generate_feedback(self_efficacy_case(), {3}, Result::Win, 1);
  CHECK(response.degraded);
  CHECK(response.tone == Tone::Positive);
}

TEST_CASE("provider factory") {
  CHECK(make_provider("stub")->id() == "stub");
  CHECK_THROWS_AS(make_provider("gpt"), ProviderError);
  CHECK_THROWS_AS(RemoteProvider(RemoteConfig{"no-scheme", "", "m"}), ProviderError);
}

TEST_CASE("dialogue narrator supplies letters and merged cards to the engine") {
  const StoryPack& pack = reference_pack();
  const Dialogue d = stub_dialogue();
  DialogueNarrator narrator(d);
  GameState state = testing::solve_level0(rules::new_game(pack, "s", 3), pack);
  for (Cause cause : kAllCauses) {
    for (const auto& c : pack.l1_chapter(cause)) {
      state = rules::adjudicate_level1(state, pack, c.case_id, testing::first_owned_of(state, cause),
                                       {0, &narrator})
                  .state;
    }
  }
  REQUIRE(state.letters_received.size() == 4);
  for (const auto& letter : state.letters_received) {
    for (int id : letter.granted_cards) CHECK(contains(letter.text, bundled_deck().card(id).title));
  }
  CHECK(narrator.responses().size() == 4);
}
