#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "procrastimate/domain/case.hpp"
#include "procrastimate/domain/cause.hpp"

namespace procrastimate::rules {

struct LetterRequest {
  Cause chapter = Cause::SelfEfficacy;
  std::vector<int> cards;
  std::string template_id;
  const Case* sender_case = nullptr;  // case whose win completed the chapter, if any
  std::uint64_t seed = 0;
};

struct MergeRequest {
  int card_a = 0;
  int card_b = 0;
  const Case* target_case = nullptr;
  std::uint64_t seed = 0;
};

struct MergedText {
  std::string title;
  std::string text;
};

// Supplies the prose the engine stores in the game state (thank-you letters,
// merged-card text). Adjudication never depends on what it returns.
class Narrator {
 public:
  virtual ~Narrator() = default;
  virtual std::string letter_text(const LetterRequest& request) = 0;
  virtual MergedText merged_text(const MergeRequest& request) = 0;
};

// Minimal deterministic text built from ids only; used when no narrator is wired.
class PlainNarrator final : public Narrator {
 public:
  std::string letter_text(const LetterRequest& request) override;
  MergedText merged_text(const MergeRequest& request) override;
};

// Plays back text captured in an action-log entry, in call order.
class RecordedNarrator final : public Narrator {
 public:
  explicit RecordedNarrator(const std::vector<std::string>& recorded) : recorded_(recorded) {}

  std::string letter_text(const LetterRequest& request) override;
  MergedText merged_text(const MergeRequest& request) override;

 private:
  const std::string& next();

  const std::vector<std::string>& recorded_;
  std::size_t cursor_ = 0;
};

}  // namespace procrastimate::rules
