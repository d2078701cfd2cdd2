#include "procrastimate/proto/motivation.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <numeric>

#include "procrastimate/domain/card.hpp"
#include "procrastimate/errors.hpp"
#include "procrastimate/util/rng.hpp"

namespace procrastimate::proto {

namespace {

constexpr std::array<std::string_view, 4> kPolicyNames = {"perfect", "cause-only", "card-only",
                                                         "random"};

Cause other_cause(Cause cause, Rng& rng) {
  const auto offset = static_cast<std::size_t>(1 + rng.below(3));
  return kAllCauses[(index_of(cause) + offset) % kAllCauses.size()];
}

int card_of(Cause cause, Rng& rng) {
  return static_cast<int>(index_of(cause)) * kCardsPerCause + 1 + static_cast<int>(rng.below(kCardsPerCause));
}

}  // namespace

MotivationSession start_session(ProtoStory story, RuleVariant variant) {
  MotivationSession session;
  session.story = std::move(story);
  session.variant = variant;
  return session;
}

int turn_delta(Cause true_cause, Cause declared_cause, int card_id, RuleVariant variant) {
  const bool cause_right = declared_cause == true_cause;
  const bool card_right = cause_of_card(card_id) == true_cause;
  int delta = (cause_right ? kCauseBonus : 0) + (card_right ? kCardBonus : 0);
  if (delta == 0 && variant.floor_five) delta = kCauseBonus;
  return delta;
}

MotivationSession play_turn(const MotivationSession& session, Cause declared_cause, int card_id) {
  if (is_won(session)) {
    throw StateError("SESSION_WON", "the story is already won");
  }
  const int delta = turn_delta(session.story.true_cause, declared_cause, card_id, session.variant);
  MotivationSession next = session;
  next.motivation = std::min(kMaxMotivation, session.motivation + delta);
  next.turn_log.push_back({declared_cause, card_id, delta, next.motivation});
  return next;
}

bool is_won(const MotivationSession& session) { return session.motivation > kWinThreshold; }

std::string_view to_string(Policy policy) { return kPolicyNames[static_cast<std::size_t>(policy)]; }

std::optional<Policy> parse_policy(std::string_view name) {
  for (std::size_t i = 0; i < kPolicyNames.size(); ++i) {
    if (kPolicyNames[i] == name) return static_cast<Policy>(i);
  }
  return std::nullopt;
}

MotivationSession simulate_one(Policy policy, std::size_t run, std::uint64_t seed, RuleVariant variant,
                               int turn_cap) {
  Rng rng(mix_seed(seed, run));
  ProtoStory story;
  story.story_id = "sim-" + std::to_string(run);
  story.text = "You keep postponing a task that matters to you.";
  story.true_cause = kAllCauses[rng.below(kAllCauses.size())];
  MotivationSession session = start_session(story, variant);

  while (!is_won(session) && static_cast<int>(session.turn_log.size()) < turn_cap) {
    const Cause truth = story.true_cause;
    Cause declared = truth;
    int card = 0;
    switch (policy) {
      case Policy::Perfect: card = card_of(truth, rng); break;
      case Policy::CauseOnly: card = card_of(other_cause(truth, rng), rng); break;
      case Policy::CardOnly:
        declared = other_cause(truth, rng);
        card = card_of(truth, rng);
        break;
      case Policy::Random:
        declared = kAllCauses[rng.below(kAllCauses.size())];
        card = 1 + static_cast<int>(rng.below(kDeckSize));
        break;
    }
    session = play_turn(session, declared, card);
  }
  return session;
}

SimulationSummary simulate(Policy policy, std::size_t runs, std::uint64_t seed, RuleVariant variant,
                           int turn_cap) {
  SimulationSummary summary;
  summary.policy = policy;
  summary.runs = runs;
  for (std::size_t run = 0; run < runs; ++run) {
    const MotivationSession session = simulate_one(policy, run, seed, variant, turn_cap);
    if (is_won(session)) {
      ++summary.wins;
      summary.turns_to_win.push_back(static_cast<int>(session.turn_log.size()));
    }
  }

  if (!summary.turns_to_win.empty()) {
    std::vector<int> sorted = summary.turns_to_win;
    std::sort(sorted.begin(), sorted.end());
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    summary.mean_turns = total / static_cast<double>(sorted.size());
    const std::size_t mid = sorted.size() / 2;
    summary.median_turns = sorted.size() % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
    summary.min_turns = sorted.front();
    summary.max_turns = sorted.back();
  }
  return summary;
}

std::string format_summary_table(const std::vector<SimulationSummary>& rows) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %8s %8s %8s %8s %6s %6s\n", "policy", "runs", "wins", "mean",
                "median", "min", "max");
  out += line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%-12s %8zu %8zu %8.2f %8.1f %6d %6d\n",
                  std::string(to_string(row.policy)).c_str(), row.runs, row.wins, row.mean_turns,
                  row.median_turns, row.min_turns, row.max_turns);
    out += line;
  }
  return out;
}

}  // namespace procrastimate::proto
