#include "procrastimate/domain/cause.hpp"

#include <string>

#include "procrastimate/errors.hpp"

namespace procrastimate {

namespace {

struct CauseNames {
  std::string_view wire;
  std::string_view chapter;
  std::string_view phrase;
};

constexpr std::array<CauseNames, 4> kNames = {{
    {"SelfEfficacy", "Improve Self-efficacy", "self-efficacy"},
    {"TaskValue", "Embrace Task Value", "task value"},
    {"Impulsiveness", "Control Impulsiveness", "impulsiveness"},
    {"DistantDelay", "Adjust Distant Delay", "distant delay"},
}};

}  // namespace

std::string_view to_string(Cause cause) { return kNames[index_of(cause)].wire; }

std::optional<Cause> parse_cause(std::string_view name) {
  for (Cause cause : kAllCauses) {
    if (kNames[index_of(cause)].wire == name) {
      return cause;
    }
  }
  return std::nullopt;
}

Cause cause_from_string(std::string_view name) {
  if (auto cause = parse_cause(name)) {
    return *cause;
  }
  throw DomainError("UNKNOWN_CAUSE", "unknown cause '" + std::string(name) + "'");
}

std::string_view chapter_title(Cause cause) { return kNames[index_of(cause)].chapter; }

std::string_view cause_phrase(Cause cause) { return kNames[index_of(cause)].phrase; }

}  // namespace procrastimate
