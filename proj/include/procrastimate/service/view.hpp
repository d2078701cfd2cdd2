#pragma once

#include <nlohmann/json.hpp>

#include "procrastimate/dialogue/dialogue.hpp"
#include "procrastimate/domain/game_state.hpp"
#include "procrastimate/pack/story_pack.hpp"
#include "procrastimate/rules/engine.hpp"

// JSON projections shared by the session service, the HTTP API and the CLI.
namespace procrastimate::service {

struct DialogueEntry {
  std::uint64_t seq = 0;  // action seq that produced it
  std::string case_id;
  dialogue::DialogueResponse response;

  bool operator==(const DialogueEntry&) const = default;
};

// Unsolved L0 cases hide major_cause; unsolved L2 cases hide cause_pair.
nlohmann::json case_view(const Case& c, bool solved);

nlohmann::json session_view(const GameState& state, const StoryPack& pack,
                            const std::vector<DialogueEntry>& history);

nlohmann::json dialogue_to_json(const DialogueEntry& entry);
DialogueEntry dialogue_from_json(const nlohmann::json& doc);

nlohmann::json outcome_to_json(const rules::Outcome& outcome);
nlohmann::json deck_json(const Deck& deck);
nlohmann::json pack_summary(const StoryPack& pack);

// {"type": "PlayCard", "case_id": "...", "card_id": 7} and friends. case_id
// may be omitted for adjudications and defaults to the current case.
// Throws DomainError BAD_ACTION.
rules::Action action_from_json(const nlohmann::json& doc, const GameState& state, const StoryPack& pack);
nlohmann::json action_to_json(const rules::Action& action);

}  // namespace procrastimate::service
