#include "procrastimate/domain/game_state.hpp"

#include <array>

#include "procrastimate/domain/card.hpp"

namespace procrastimate {

namespace {
constexpr std::array<std::string_view, 4> kLevelNames = {"L0", "L1", "L2", "Completed"};
constexpr std::array<std::string_view, 6> kActionNames = {
    "L0Choice", "PlayCard", "PlayPair", "BuyCard", "AdvanceCase", "GrantLetter"};
constexpr std::string_view kChapterPrefix = "chapter:";
}  // namespace

std::string_view to_string(Level level) { return kLevelNames[static_cast<std::size_t>(level)]; }

std::optional<Level> parse_level(std::string_view name) {
  for (std::size_t i = 0; i < kLevelNames.size(); ++i) {
    if (kLevelNames[i] == name) return static_cast<Level>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ActionKind kind) {
  return kActionNames[static_cast<std::size_t>(kind)];
}

std::optional<ActionKind> parse_action_kind(std::string_view name) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == name) return static_cast<ActionKind>(i);
  }
  return std::nullopt;
}

std::string chapter_milestone(Cause cause) {
  return std::string(kChapterPrefix) + std::string(to_string(cause));
}

std::optional<Cause> milestone_chapter(std::string_view milestone) {
  if (!milestone.starts_with(kChapterPrefix)) return std::nullopt;
  return parse_cause(milestone.substr(kChapterPrefix.size()));
}

bool GameState::has_letter(std::string_view milestone) const {
  for (const auto& letter : letters_received) {
    if (letter.milestone == milestone) return true;
  }
  return false;
}

std::vector<std::string> GameState::problems() const {
  std::vector<std::string> out = handbook.problems();
  if (points_earned < 0 || points_spent < 0) out.emplace_back("negative point counter");
  if (points_spent > points_earned) {
    out.push_back("points_spent (" + std::to_string(points_spent) + ") exceeds points_earned (" +
                  std::to_string(points_earned) + ")");
  }
  if (points_earned != static_cast<int>(solved_l1.size())) {
    out.push_back("points_earned (" + std::to_string(points_earned) +
                  ") differs from solved Level-1 cases (" + std::to_string(solved_l1.size()) + ")");
  }
  if (owned_cards.size() > static_cast<std::size_t>(kDeckSize)) {
    out.emplace_back("more than 40 owned cards");
  }
  for (int id : owned_cards) {
    if (!is_valid_card_id(id)) out.push_back("owned card id " + std::to_string(id) + " out of range");
  }
  if (solved_l1.size() != handbook.total_entries()) {
    out.emplace_back("solved Level-1 cases do not match handbook entries");
  }
  for (const auto& case_id : solved_l1) {
    if (!handbook.contains_case(case_id)) {
      out.push_back("solved case " + case_id + " missing from the handbook");
    }
  }
  for (const auto& merged : merged_cards) {
    if (merged.source_low >= merged.source_high || !is_valid_card_id(merged.source_low) ||
        !is_valid_card_id(merged.source_high)) {
      out.push_back("merged card for " + merged.case_id + " has an invalid source pair");
    }
  }
  for (std::size_t i = 0; i < action_log.size(); ++i) {
    if (action_log[i].seq != i + 1) {
      out.emplace_back("action log sequence numbers are not contiguous");
      break;
    }
  }
  return out;
}

}  // namespace procrastimate
