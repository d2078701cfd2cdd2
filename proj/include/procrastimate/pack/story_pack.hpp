#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "procrastimate/domain/case.hpp"
#include "procrastimate/domain/cause.hpp"

namespace procrastimate {

inline constexpr int kPackSchemaVersion = 1;
inline constexpr std::size_t kLevel0CaseCount = 8;
inline constexpr std::size_t kLevel1CasesPerCause = 6;
inline constexpr std::size_t kLevel2CaseCount = 8;
inline constexpr std::size_t kStartingHandSize = 16;

struct ShopListing {
  int card_id = 0;
  int cost_points = 1;

  bool operator==(const ShopListing&) const = default;
};

// Cards mailed with a thank-you letter when a handbook chapter is completed.
struct LetterGrant {
  Cause chapter = Cause::SelfEfficacy;
  std::vector<int> cards;
  std::string template_id = "letter";

  bool operator==(const LetterGrant&) const = default;
};

// A content bundle. The struct can hold invalid content (wrong counts, card
// overlaps) so that validate_pack can report every problem at once; parse_pack
// only returns packs that validate cleanly.
struct StoryPack {
  int schema_version = kPackSchemaVersion;
  std::string pack_id;
  std::string title;
  std::string deck_ref = "bundled";
  std::vector<Case> l0_cases;
  std::array<std::vector<Case>, 4> l1_cases;  // indexed by Cause
  std::vector<Case> l2_cases;
  std::vector<LetterGrant> letters;
  std::vector<int> starting_hand;
  std::vector<ShopListing> shop;

  const std::vector<Case>& l1_chapter(Cause cause) const { return l1_cases[index_of(cause)]; }

  const Case* find_case(const std::string& case_id) const;
  const LetterGrant* letter_for(Cause chapter) const;
  const ShopListing* listing(int card_id) const;
  // Every case of every level, in pack order (L0, L1 by chapter, L2).
  std::vector<const Case*> all_cases() const;

  bool operator==(const StoryPack&) const = default;
};

}  // namespace procrastimate
