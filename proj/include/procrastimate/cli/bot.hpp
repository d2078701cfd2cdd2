#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "procrastimate/dialogue/dialogue.hpp"
#include "procrastimate/errors.hpp"
#include "procrastimate/rules/engine.hpp"
#include "procrastimate/util/rng.hpp"

namespace procrastimate::cli {

// perfect: buys every affordable shop card and always plays a winning move.
// random: random diagnoses, cards and pairs, with occasional purchases.
// cause-only: correct Level-0 diagnoses, random cards and pairs afterwards.
enum class BotPolicy : std::uint8_t { Perfect, Random, CauseOnly };

std::string_view to_string(BotPolicy policy);
std::optional<BotPolicy> parse_bot_policy(std::string_view name);

// No pending case can be won with the cards at hand or affordable.
class DeadlockError : public StateError {
 public:
  explicit DeadlockError(const std::string& message) : StateError("DEADLOCK", message) {}
};

class Bot {
 public:
  Bot(BotPolicy policy, std::uint64_t seed);

  // nullopt once the game is Completed. Throws DeadlockError.
  std::optional<rules::Action> next_action(const GameState& state, const StoryPack& pack);

 private:
  BotPolicy policy_;
  Rng rng_;
};

struct PlayOptions {
  std::string session_id = "bot";
  std::size_t action_cap = 100000;
  const dialogue::Dialogue* dialogue = nullptr;  // PlainNarrator and no feedback when null
  bool record_trajectory = false;
  std::function<void(const std::string& line)> on_line;  // transcript lines as produced
  std::function<void(const GameState& state)> on_state;  // after every accepted action
};

struct PlayReport {
  GameState final_state;
  bool completed = false;
  bool deadlocked = false;
  bool capped = false;
  std::string deadlock_reason;
  std::size_t actions = 0;
  std::size_t adjudications = 0;
  std::size_t wins = 0;
  std::size_t losses = 0;
  std::size_t tone_mismatches = 0;
  std::vector<dialogue::DialogueResponse> dialogue;
  std::vector<std::string> transcript;
  std::vector<GameState> trajectory;  // state after each action, if recorded
};

// Action n carries timestamp_ms = n.
PlayReport play_bot(const StoryPack& pack, BotPolicy policy, std::uint64_t seed, const PlayOptions& options = {});

std::string describe_action(const rules::Action& action);
std::string describe_state(const GameState& state, const StoryPack& pack);

// Copy with every provider-generated string blanked: letter texts, merged
// titles and texts, and the generated entries of the action log.
GameState mask_generated(GameState state);

}  // namespace procrastimate::cli
