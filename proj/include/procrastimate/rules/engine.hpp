#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "procrastimate/domain/game_state.hpp"
#include "procrastimate/pack/story_pack.hpp"
#include "procrastimate/rules/narrator.hpp"

namespace procrastimate::rules {

enum class Result : std::uint8_t { Win, Lose };
enum class Tone : std::uint8_t { Critical, Positive };

std::string_view to_string(Result result);
std::string_view to_string(Tone tone);

constexpr Tone tone_for(Result result) {
  return result == Result::Win ? Tone::Positive : Tone::Critical;
}

struct StateDelta {
  std::optional<Cause> handbook_chapter;
  std::optional<HandbookEntry> handbook_entry;
  int points_awarded = 0;
  std::vector<std::string> letters;  // milestones whose letters were granted
  std::vector<int> cards_gained;
  std::optional<Level> level_advanced_to;
  std::optional<MergedCard> merged;

  bool operator==(const StateDelta&) const = default;
};

struct Outcome {
  Result result = Result::Lose;
  Tone feedback_tone = Tone::Critical;
  StateDelta delta;

  bool win() const { return result == Result::Win; }
  bool operator==(const Outcome&) const = default;
};

struct ActionContext {
  std::int64_t timestamp_ms = 0;
  Narrator* narrator = nullptr;  // PlainNarrator when null
};

struct Transition {
  GameState state;
  Outcome outcome;
};

// Pure win predicates. They assume the case carries the fields of its level.
Result judge_level0(const Case& c, Cause choice);
Result judge_level1(const Case& c, int card_id);
Result judge_level2(const Case& c, int card_a, int card_b);

GameState new_game(const StoryPack& pack, std::string session_id, std::uint64_t rng_seed);

// L0 -> L1 at 8 solved quiz cases, L1 -> L2 when all four chapters hold 6
// entries, L2 -> Completed at 8 solved dual-cause cases.
Level progression(const GameState& state);

Transition adjudicate_level0(const GameState& state, const StoryPack& pack,
                             const std::string& case_id, Cause choice,
                             const ActionContext& ctx = {});

Transition adjudicate_level1(const GameState& state, const StoryPack& pack,
                             const std::string& case_id, int card_id,
                             const ActionContext& ctx = {});

// On a win delta.merged holds the merged card that was appended to the state.
Transition adjudicate_level2(const GameState& state, const StoryPack& pack,
                             const std::string& case_id, int card_a, int card_b,
                             const ActionContext& ctx = {});

GameState buy_card(const GameState& state, const StoryPack& pack, int card_id,
                   const ActionContext& ctx = {});

// Grants the scripted cards of a completed chapter. Also triggered
// automatically by the Level-1 win that completes the chapter.
GameState grant_letter(const GameState& state, const StoryPack& pack, Cause chapter,
                       const ActionContext& ctx = {});

// Moves the client's focus to an unsolved case of the current level.
GameState advance_case(const GameState& state, const StoryPack& pack,
                       const std::string& case_id, const ActionContext& ctx = {});

// Shop cards not yet owned.
std::vector<ShopListing> shop_listings(const GameState& state, const StoryPack& pack);

// Unsolved cases of the current level, in pack order.
std::vector<const Case*> pending_cases(const GameState& state, const StoryPack& pack);

// The focused case if still pending, else the first pending case.
const Case* current_case(const GameState& state, const StoryPack& pack);

// Cards playable in the current level: owned cards in L1, handbook cards in L2.
std::set<int> playable_cards(const GameState& state);

bool is_solved(const GameState& state, const Case& c);

// Pack-aware invariants (economy conservation, level consistency, provenance
// of owned cards) on top of GameState::problems().
std::vector<std::string> check_invariants(const GameState& state, const StoryPack& pack);

// ---------------------------------------------------------------------------
// Uniform action interface used by the session service, bots and replay.

struct L0Choice {
  std::string case_id;
  Cause cause = Cause::SelfEfficacy;
};
struct PlayCard {
  std::string case_id;
  int card_id = 0;
};
struct PlayPair {
  std::string case_id;
  int card_a = 0;
  int card_b = 0;
};
struct BuyCard {
  int card_id = 0;
};
struct AdvanceCase {
  std::string case_id;
};
struct GrantLetter {
  Cause chapter = Cause::SelfEfficacy;
};

using Action = std::variant<L0Choice, PlayCard, PlayPair, BuyCard, AdvanceCase, GrantLetter>;

struct ApplyResult {
  GameState state;
  std::optional<Outcome> outcome;  // set for adjudications
};

ApplyResult apply(const GameState& state, const StoryPack& pack, const Action& action,
                  const ActionContext& ctx = {});

Action action_from_record(const ActionRecord& record);

// Rebuilds a session from its log. Throws StateError if an entry is rejected
// or the recorded adjudication result differs.
GameState replay(const StoryPack& pack, const std::string& session_id, std::uint64_t rng_seed,
                 const std::vector<ActionRecord>& log);

// Seed for dialogue requests attached to the next action of this state.
std::uint64_t dialogue_seed(const GameState& state);

}  // namespace procrastimate::rules
