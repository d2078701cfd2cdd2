#pragma once

// Independent reference implementations used by the tests. They are written
// from the rules as stated (explicit id ranges, literal set comparison) and do
// not call into the engine.

#include <set>

#include "procrastimate/domain/cause.hpp"

namespace procrastimate::testing {

inline Cause oracle_cause_of_card(int id) {
  if (id >= 1 && id <= 10) return Cause::SelfEfficacy;
  if (id >= 11 && id <= 20) return Cause::TaskValue;
  if (id >= 21 && id <= 30) return Cause::Impulsiveness;
  return Cause::DistantDelay;  // 31..40
}

inline bool oracle_level1_win(int card_id, Cause label) { return oracle_cause_of_card(card_id) == label; }

inline bool oracle_level2_win(int card_a, int card_b, Cause first, Cause second) {
  const std::set<Cause> played = {oracle_cause_of_card(card_a), oracle_cause_of_card(card_b)};
  const std::set<Cause> wanted = {first, second};
  return played == wanted;
}

// Motivation loop arithmetic, simulated turn by turn.
inline int oracle_turns_to_win(int per_turn_gain, int start = 20) {
  int motivation = start;
  int turns = 0;
  while (!(motivation > 80)) {
    motivation = motivation + per_turn_gain > 100 ? 100 : motivation + per_turn_gain;
    ++turns;
  }
  return turns;
}

}  // namespace procrastimate::testing
