#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace procrastimate {

// The four drivers of procrastination. Each one names a handbook chapter.
enum class Cause : std::uint8_t {
  SelfEfficacy = 0,
  TaskValue = 1,
  Impulsiveness = 2,
  DistantDelay = 3,
};

inline constexpr std::array<Cause, 4> kAllCauses = {
    Cause::SelfEfficacy, Cause::TaskValue, Cause::Impulsiveness, Cause::DistantDelay};

constexpr std::size_t index_of(Cause cause) { return static_cast<std::size_t>(cause); }

// Wire name used in JSON documents ("SelfEfficacy", ...).
std::string_view to_string(Cause cause);
std::optional<Cause> parse_cause(std::string_view name);
// Throws DomainError on unknown names.
Cause cause_from_string(std::string_view name);

// "Improve Self-efficacy", "Embrace Task Value", ...
std::string_view chapter_title(Cause cause);
// Lower-case noun phrase for prose: "self-efficacy", "task value", ...
std::string_view cause_phrase(Cause cause);

}  // namespace procrastimate
