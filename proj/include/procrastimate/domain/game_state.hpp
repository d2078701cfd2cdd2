#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "procrastimate/domain/case.hpp"
#include "procrastimate/domain/cause.hpp"
#include "procrastimate/domain/handbook.hpp"

namespace procrastimate {

enum class Level : std::uint8_t { L0, L1, L2, Completed };

std::string_view to_string(Level level);
std::optional<Level> parse_level(std::string_view name);

struct MergedCard {
  int source_low = 0;  // unordered pair, stored low/high
  int source_high = 0;
  std::string generated_title;
  std::string generated_text;
  std::string case_id;

  bool operator==(const MergedCard&) const = default;
};

// Milestone keys look like "chapter:SelfEfficacy".
std::string chapter_milestone(Cause cause);
std::optional<Cause> milestone_chapter(std::string_view milestone);

struct LetterRecord {
  std::string milestone;
  std::vector<int> granted_cards;
  std::string sender_npc_id;
  std::string text;

  bool operator==(const LetterRecord&) const = default;
};

enum class ActionKind : std::uint8_t { L0Choice, PlayCard, PlayPair, BuyCard, AdvanceCase, GrantLetter };

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> parse_action_kind(std::string_view name);

// One accepted action. Rejected actions are never logged. Text produced by the
// narrator while applying the action is recorded in call order so that replay
// does not need a dialogue provider.
struct ActionRecord {
  std::uint64_t seq = 0;
  std::int64_t timestamp_ms = 0;
  ActionKind kind = ActionKind::L0Choice;
  std::string case_id;
  std::vector<int> cards;
  std::optional<Cause> cause;  // L0 choice, or the chapter for GrantLetter
  std::optional<bool> win;     // adjudications only
  std::vector<std::string> generated;

  bool operator==(const ActionRecord&) const = default;
};

struct GameState {
  std::string session_id;
  std::string pack_id;
  Level current_level = Level::L0;
  std::set<std::string> solved_l0;
  std::set<std::string> solved_l1;
  std::set<std::string> solved_l2;
  std::set<int> owned_cards;
  int points_earned = 0;
  int points_spent = 0;
  Handbook handbook;
  std::vector<MergedCard> merged_cards;
  std::vector<LetterRecord> letters_received;
  std::uint64_t rng_seed = 0;
  std::vector<ActionRecord> action_log;

  int points_available() const { return points_earned - points_spent; }
  bool has_letter(std::string_view milestone) const;

  // Pack-independent invariants; empty when the state is well formed.
  std::vector<std::string> problems() const;

  bool operator==(const GameState&) const = default;
};

}  // namespace procrastimate
