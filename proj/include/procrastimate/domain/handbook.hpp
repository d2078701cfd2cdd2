#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "procrastimate/domain/cause.hpp"

namespace procrastimate {

inline constexpr std::size_t kChapterCapacity = 6;

struct HandbookEntry {
  std::string case_id;
  int card_id = 0;

  bool operator==(const HandbookEntry&) const = default;
};

// Management Handbook: one chapter per cause, entries in solve order.
class Handbook {
 public:
  const std::vector<HandbookEntry>& chapter(Cause cause) const { return chapters_[index_of(cause)]; }

  bool is_chapter_complete(Cause cause) const { return chapter(cause).size() == kChapterCapacity; }
  bool is_complete() const;
  std::size_t total_entries() const;
  bool contains_case(const std::string& case_id) const;
  bool contains_card(int card_id) const;
  // Distinct card ids across all chapters; the Level-2 hand.
  std::set<int> card_ids() const;

  // Appends to the chapter. Throws StateError when the chapter is full, the
  // case is already recorded, or the card does not belong to the chapter.
  void append(Cause cause, HandbookEntry entry);

  // Violations of capacity, cause-consistency and case uniqueness.
  std::vector<std::string> problems() const;

  bool operator==(const Handbook&) const = default;

 private:
  std::array<std::vector<HandbookEntry>, 4> chapters_;
};

}  // namespace procrastimate
