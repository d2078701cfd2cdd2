#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "procrastimate/domain/case.hpp"
#include "procrastimate/errors.hpp"
#include "procrastimate/pack/story_pack.hpp"

namespace procrastimate {

enum class ContextCluster : std::uint8_t { DailyRoutines, StudyTasks, HealthAndFitness, SelfImprovement };

std::string_view to_string(ContextCluster cluster);  // "daily routines", ...
std::optional<ContextCluster> parse_context_cluster(std::string_view name);

// A player's own procrastination story, transcribed and labeled offline.
struct PersonalStory {
  std::string story_id;  // becomes the case id; generated when empty
  std::string scenario_text;
  std::set<Cause> inferred_causes;  // 1 or 2 causes
  ContextCluster context_cluster = ContextCluster::StudyTasks;
  std::optional<NpcProfile> npc;

  bool operator==(const PersonalStory&) const = default;
};

class CustomizeError : public Error {
 public:
  using Error::Error;
};

// Converts one story into a Level-2 case. Throws CustomizeError
// (PERSONAL_CAUSES) unless the story names exactly two distinct causes.
Case personal_story_to_case(const PersonalStory& story, std::size_t index);

// Builds the 8 Level-2 cases of one player: the personal stories first, then
// 8 - k pool cases drawn without replacement.
//
// Draw algorithm (stable across platforms): the pool is first filtered, in
// order, dropping entries whose case_id repeats a personal case or an earlier
// pool entry. A std::mt19937_64 seeded with `seed` then drives a partial
// Fisher-Yates shuffle over the filtered indices: for i = 0 .. need-1, swap
// index i with index i + below(n - i), where below(m) rejects raw 64-bit draws
// >= 2^64 - 1 - (2^64 - 1) mod m and returns draw mod m. The first `need`
// indices, in draw order, are the fill cases.
//
// Errors: TOO_MANY_PERSONAL (k > 8), PERSONAL_CAUSES, POOL_SHORTFALL (names the
// number of missing cases), POOL_CASE (a pool entry that is not a valid L2 case).
std::vector<Case> customize_level2(const std::vector<PersonalStory>& personal,
                                   const std::vector<Case>& shared_pool, std::uint64_t seed);

StoryPack customize_pack(const StoryPack& base, const std::vector<PersonalStory>& personal,
                         const std::vector<Case>& shared_pool, std::uint64_t seed);

// JSON array of PersonalStory objects:
// {story_id?, scenario_text, inferred_causes: [cause...], context_cluster, npc?}
std::vector<PersonalStory> parse_personal_stories(std::string_view document);
// JSON array of Level-2 case objects (same shape as the pack's "l2" entries).
std::vector<Case> parse_case_pool(std::string_view document);

}  // namespace procrastimate
