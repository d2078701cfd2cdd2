#include "procrastimate/domain/case.hpp"

#include <algorithm>
#include <array>

namespace procrastimate {

std::string_view to_string(CaseLevel level) {
  switch (level) {
    case CaseLevel::L0: return "L0";
    case CaseLevel::L1: return "L1";
    case CaseLevel::L2: return "L2";
  }
  return "?";
}

namespace {
constexpr std::array<std::string_view, 4> kMisconceptionNames = {
    "Incompetence", "Irresponsibility", "WeakWillpower", "Laziness"};
}

std::string_view to_string(Misconception label) {
  return kMisconceptionNames[static_cast<std::size_t>(label)];
}

std::optional<Misconception> parse_misconception(std::string_view name) {
  for (std::size_t i = 0; i < kMisconceptionNames.size(); ++i) {
    if (kMisconceptionNames[i] == name) return static_cast<Misconception>(i);
  }
  return std::nullopt;
}

CausePair::CausePair(Cause a, Cause b) : first_(std::min(a, b)), second_(std::max(a, b)) {}

std::vector<std::string> Case::problems() const {
  std::vector<std::string> out;
  if (case_id.empty()) out.emplace_back("case_id is empty");
  switch (level) {
    case CaseLevel::L0:
      if (!misconception) out.emplace_back("L0 case needs a misconception label");
      if (!punishment) out.emplace_back("L0 case needs a punishment");
      if (!major_cause) out.emplace_back("L0 case needs a major_cause");
      if (cause_pair) out.emplace_back("L0 case must not carry a cause_pair");
      break;
    case CaseLevel::L1:
      if (misconception || punishment) {
        out.emplace_back("L1 case must not carry misconception or punishment");
      }
      if (!major_cause) out.emplace_back("L1 case needs a major_cause");
      if (cause_pair) out.emplace_back("L1 case must not carry a cause_pair");
      break;
    case CaseLevel::L2:
      if (misconception || punishment) {
        out.emplace_back("L2 case must not carry misconception or punishment");
      }
      if (major_cause) out.emplace_back("L2 case must not carry a major_cause");
      if (!cause_pair) {
        out.emplace_back("L2 case needs a cause_pair");
      } else if (!cause_pair->is_distinct()) {
        out.emplace_back("L2 cause_pair must hold two distinct causes");
      }
      break;
  }
  return out;
}

}  // namespace procrastimate
