#pragma once

#include <memory>
#include <string>
#include <vector>

#include "procrastimate/dialogue/prompt.hpp"
#include "procrastimate/dialogue/provider.hpp"
#include "procrastimate/domain/card.hpp"
#include "procrastimate/domain/case.hpp"
#include "procrastimate/rules/engine.hpp"
#include "procrastimate/rules/narrator.hpp"

namespace procrastimate::dialogue {

struct DialogueResponse {
  std::string text;
  rules::Tone tone = rules::Tone::Positive;
  Purpose purpose = Purpose::Feedback;
  std::string provider_id;
  std::int64_t latency_ms = 0;
  bool degraded = false;  // primary provider failed, stub answered
  std::string speaker;    // NPC name or voice label

  bool operator==(const DialogueResponse&) const = default;
};

struct MergedResponse {
  rules::MergedText merged;
  DialogueResponse response;
};

struct DualVoice {
  DialogueResponse motivational;
  DialogueResponse procrastinating;
};

class Dialogue {
 public:
  Dialogue(const Deck& deck, TemplateSet templates, std::shared_ptr<Provider> provider);

  const Provider& provider() const { return *provider_; }
  const Deck& deck() const { return deck_; }
  const TemplateSet& templates() const { return templates_; }

  // Level 0: the player diagnosed `chosen` as the major cause.
  DialogueResponse feedback_level0(const Case& c, Cause chosen, rules::Result result,
                                   std::uint64_t seed) const;

  // Levels 1 and 2. Tone is Critical exactly when result is Lose.
  DialogueResponse generate_feedback(const Case& c, const std::vector<int>& played_cards,
                                     rules::Result result, std::uint64_t seed) const;

  // DomainError EMPTY_GRANT for an empty card list.
  DialogueResponse generate_letter(Cause chapter, const std::vector<int>& cards, const NpcProfile* sender,
                                   std::string_view template_id, std::uint64_t seed) const;

  // Unordered in (card_a, card_b). DomainError IDENTICAL_CARDS when equal.
  MergedResponse generate_merged_text(int card_a, int card_b, const Case& c, std::uint64_t seed) const;

  DualVoice generate_dual_voice(std::string_view story, Cause declared_cause, int card_id, int delta,
                                int motivation, std::uint64_t seed) const;

 private:
  DialogueResponse call(std::string_view template_id, Bindings context, std::uint64_t seed) const;
  std::string titles(const std::vector<int>& cards) const;

  const Deck& deck_;
  TemplateSet templates_;
  std::shared_ptr<Provider> provider_;
  mutable StubProvider stub_;
};

// Feeds dialogue text to the rules engine and keeps the responses it produced
// so callers can surface provider and degraded-mode details.
class DialogueNarrator final : public rules::Narrator {
 public:
  explicit DialogueNarrator(const Dialogue& dialogue) : dialogue_(dialogue) {}

  std::string letter_text(const rules::LetterRequest& request) override;
  rules::MergedText merged_text(const rules::MergeRequest& request) override;

  const std::vector<DialogueResponse>& responses() const { return responses_; }

 private:
  const Dialogue& dialogue_;
  std::vector<DialogueResponse> responses_;
};

}  // namespace procrastimate::dialogue
