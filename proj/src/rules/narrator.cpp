#include "procrastimate/rules/narrator.hpp"

#include <algorithm>

#include "procrastimate/errors.hpp"

namespace procrastimate::rules {

std::string PlainNarrator::letter_text(const LetterRequest& request) {
  std::string text = "Thank you for completing the chapter " +
                     std::string(chapter_title(request.chapter)) + ". Enclosed cards:";
  for (std::size_t i = 0; i < request.cards.size(); ++i) {
    text += (i == 0 ? " " : ", ") + std::to_string(request.cards[i]);
  }
  return text + ".";
}

MergedText PlainNarrator::merged_text(const MergeRequest& request) {
  const int low = std::min(request.card_a, request.card_b);
  const int high = std::max(request.card_a, request.card_b);
  return {"Merged strategy " + std::to_string(low) + "+" + std::to_string(high),
          "Combines card " + std::to_string(low) + " with card " + std::to_string(high) + "."};
}

const std::string& RecordedNarrator::next() {
  if (cursor_ >= recorded_.size()) {
    throw StateError("REPLAY_MISMATCH", "action log entry has fewer recorded texts than requested");
  }
  return recorded_[cursor_++];
}

std::string RecordedNarrator::letter_text(const LetterRequest&) { return next(); }

MergedText RecordedNarrator::merged_text(const MergeRequest&) {
  MergedText out;
  out.title = next();
  out.text = next();
  return out;
}

}  // namespace procrastimate::rules
