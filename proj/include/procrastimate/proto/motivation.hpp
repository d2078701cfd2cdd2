#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "procrastimate/domain/cause.hpp"

// Formative-prototype loop: a short story with one hidden cause and a
// Motivation meter that starts at 20% and is won once it exceeds 80%.
namespace procrastimate::proto {

inline constexpr int kInitialMotivation = 20;
inline constexpr int kWinThreshold = 80;  // strictly exceeded to win
inline constexpr int kMaxMotivation = 100;
inline constexpr int kCauseBonus = 5;
inline constexpr int kCardBonus = 10;

struct ProtoStory {
  std::string story_id;
  std::string text;
  Cause true_cause = Cause::SelfEfficacy;
};

// floor_five: a turn with both choices wrong still yields +5 (the reading in
// which "+5, +10 or +15" is exhaustive). Off by default.
struct RuleVariant {
  bool floor_five = false;
};

struct Turn {
  Cause declared_cause = Cause::SelfEfficacy;
  int card_id = 0;
  int delta = 0;
  int motivation_after = 0;

  bool operator==(const Turn&) const = default;
};

struct MotivationSession {
  ProtoStory story;
  RuleVariant variant;
  int motivation = kInitialMotivation;
  std::vector<Turn> turn_log;
};

MotivationSession start_session(ProtoStory story, RuleVariant variant = {});

int turn_delta(Cause true_cause, Cause declared_cause, int card_id, RuleVariant variant = {});

// Throws DomainError for an out-of-range card and StateError (SESSION_WON)
// once the session is won.
MotivationSession play_turn(const MotivationSession& session, Cause declared_cause, int card_id);

bool is_won(const MotivationSession& session);

enum class Policy : std::uint8_t { Perfect, CauseOnly, CardOnly, Random };

std::string_view to_string(Policy policy);  // "perfect", "cause-only", "card-only", "random"
std::optional<Policy> parse_policy(std::string_view name);

struct SimulationSummary {
  Policy policy = Policy::Perfect;
  std::size_t runs = 0;
  std::size_t wins = 0;
  std::vector<int> turns_to_win;  // one entry per won run
  double mean_turns = 0.0;
  double median_turns = 0.0;
  int min_turns = 0;
  int max_turns = 0;
};

// Run `run` of a simulation: the hidden cause and every choice come from
// mix_seed(seed, run).
MotivationSession simulate_one(Policy policy, std::size_t run, std::uint64_t seed, RuleVariant variant = {},
                               int turn_cap = 1000);

// Runs `runs` independent sessions. Run i draws its hidden cause and its
// choices from mix_seed(seed, i), so results do not depend on run order.
SimulationSummary simulate(Policy policy, std::size_t runs, std::uint64_t seed,
                           RuleVariant variant = {}, int turn_cap = 1000);

// Fixed-width table: policy, runs, wins, mean, median, min, max.
std::string format_summary_table(const std::vector<SimulationSummary>& rows);

}  // namespace procrastimate::proto
