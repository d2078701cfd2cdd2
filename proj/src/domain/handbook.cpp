#include "procrastimate/domain/handbook.hpp"

#include "procrastimate/domain/card.hpp"
#include "procrastimate/errors.hpp"

namespace procrastimate {

bool Handbook::is_complete() const {
  for (Cause cause : kAllCauses) {
    if (!is_chapter_complete(cause)) return false;
  }
  return true;
}

std::size_t Handbook::total_entries() const {
  std::size_t total = 0;
  for (const auto& chapter : chapters_) total += chapter.size();
  return total;
}

bool Handbook::contains_case(const std::string& case_id) const {
  for (const auto& chapter : chapters_) {
    for (const auto& entry : chapter) {
      if (entry.case_id == case_id) return true;
    }
  }
  return false;
}

bool Handbook::contains_card(int card_id) const {
  for (const auto& chapter : chapters_) {
    for (const auto& entry : chapter) {
      if (entry.card_id == card_id) return true;
    }
  }
  return false;
}

std::set<int> Handbook::card_ids() const {
  std::set<int> ids;
  for (const auto& chapter : chapters_) {
    for (const auto& entry : chapter) ids.insert(entry.card_id);
  }
  return ids;
}

void Handbook::append(Cause cause, HandbookEntry entry) {
  if (cause_of_card(entry.card_id) != cause) {
    throw StateError("CHAPTER_MISMATCH", "card " + std::to_string(entry.card_id) +
                                             " does not belong to chapter " +
                                             std::string(chapter_title(cause)));
  }
  if (is_chapter_complete(cause)) {
    throw StateError("CHAPTER_FULL",
                     "chapter " + std::string(chapter_title(cause)) + " already has 6 entries");
  }
  if (contains_case(entry.case_id)) {
    throw StateError("ALREADY_SOLVED", "case " + entry.case_id + " is already in the handbook");
  }
  chapters_[index_of(cause)].push_back(std::move(entry));
}

std::vector<std::string> Handbook::problems() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (Cause cause : kAllCauses) {
    const auto& entries = chapter(cause);
    if (entries.size() > kChapterCapacity) {
      out.push_back("chapter " + std::string(to_string(cause)) + " holds more than 6 entries");
    }
    for (const auto& entry : entries) {
      if (!is_valid_card_id(entry.card_id)) {
        out.push_back("handbook card id " + std::to_string(entry.card_id) + " out of range");
      } else if (cause_of_card(entry.card_id) != cause) {
        out.push_back("card " + std::to_string(entry.card_id) + " filed under chapter " +
                      std::string(to_string(cause)));
      }
      if (!seen.insert(entry.case_id).second) {
        out.push_back("case " + entry.case_id + " appears twice in the handbook");
      }
    }
  }
  return out;
}

}  // namespace procrastimate
