#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "procrastimate/domain/cause.hpp"

namespace procrastimate {

enum class CaseLevel : std::uint8_t { L0, L1, L2 };

std::string_view to_string(CaseLevel level);

// Labels of the old Punishment Handbook, carried by Level-0 cases.
enum class Misconception : std::uint8_t { Incompetence, Irresponsibility, WeakWillpower, Laziness };

std::string_view to_string(Misconception label);
std::optional<Misconception> parse_misconception(std::string_view name);

struct NpcProfile {
  std::string npc_id;
  std::string name;
  std::string basic_info;
  std::string persona_notes;

  bool operator==(const NpcProfile&) const = default;
};

// Unordered pair of causes. Stored normalized (first <= second) so equality
// is set equality. A pair with first == second is representable so that
// validators can report it; see is_distinct().
class CausePair {
 public:
  CausePair() = default;
  CausePair(Cause a, Cause b);

  Cause first() const noexcept { return first_; }
  Cause second() const noexcept { return second_; }
  bool is_distinct() const noexcept { return first_ != second_; }
  bool contains(Cause cause) const noexcept { return first_ == cause || second_ == cause; }

  bool operator==(const CausePair&) const = default;

 private:
  Cause first_ = Cause::SelfEfficacy;
  Cause second_ = Cause::TaskValue;
};

struct Case {
  std::string case_id;
  CaseLevel level = CaseLevel::L0;
  NpcProfile npc;
  std::string narrative;
  std::optional<Misconception> misconception;  // L0 only
  std::optional<std::string> punishment;       // L0 only
  std::optional<Cause> major_cause;            // L0 and L1
  std::optional<CausePair> cause_pair;         // L2 only

  // Human-readable violations of the per-level field rules; empty when valid.
  std::vector<std::string> problems() const;

  bool operator==(const Case&) const = default;
};

}  // namespace procrastimate
