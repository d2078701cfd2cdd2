#pragma once

#include <nlohmann/json.hpp>

#include "procrastimate/domain/game_state.hpp"
#include "procrastimate/errors.hpp"

namespace procrastimate::persist {

// JSON form of a GameState. Sets become sorted arrays; the 64-bit seed is a
// decimal string so JavaScript clients keep every bit.
nlohmann::json state_to_json(const GameState& state);

// Throws Error STATE_SCHEMA on a missing or mistyped field.
GameState state_from_json(const nlohmann::json& doc);

nlohmann::json action_record_to_json(const ActionRecord& record);

}  // namespace procrastimate::persist
