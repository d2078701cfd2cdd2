#include "procrastimate/dialogue/dialogue.hpp"

#include <algorithm>
#include <chrono>
#include <optional>

namespace procrastimate::dialogue {

namespace {

std::string case_causes(const Case& c) {
  if (c.cause_pair) {
    return std::string(cause_phrase(c.cause_pair->first())) + " and " +
           std::string(cause_phrase(c.cause_pair->second()));
  }
  return c.major_cause ? std::string(cause_phrase(*c.major_cause)) : std::string("an unknown cause");
}

std::string join_and(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += i + 1 == items.size() ? " and " : ", ";
    out += items[i];
  }
  return out;
}

Bindings npc_bindings(const NpcProfile& npc) {
  return {{"npc_name", npc.name}, {"npc_basic_info", npc.basic_info}, {"npc_persona", npc.persona_notes}};
}

std::optional<rules::MergedText> parse_merged(const std::string& raw) {
  rules::MergedText out;
  bool have_title = false;
  bool have_text = false;
  std::size_t start = 0;
  while (start <= raw.size()) {
    const std::size_t end = std::min(raw.find('\n', start), raw.size());
    const std::string line = raw.substr(start, end - start);
    if (!have_title && line.rfind("TITLE:", 0) == 0) {
      out.title = strip_markup(line.substr(6));
      have_title = !out.title.empty();
    } else if (!have_text && line.rfind("TEXT:", 0) == 0) {
      out.text = strip_markup(raw.substr(start + 5));
      have_text = !out.text.empty();
    }
    start = end + 1;
  }
  if (!have_title || !have_text) return std::nullopt;
  return out;
}

}  // namespace

Dialogue::Dialogue(const Deck& deck, TemplateSet templates, std::shared_ptr<Provider> provider)
    : deck_(deck), templates_(std::move(templates)), provider_(std::move(provider)) {
  if (!provider_) provider_ = std::make_shared<StubProvider>();
}

std::string Dialogue::titles(const std::vector<int>& cards) const {
  std::vector<std::string> names;
  for (const int id : cards) names.push_back(deck_.card(id).title);
  return join_and(names);
}

DialogueResponse Dialogue::call(std::string_view template_id, Bindings context, std::uint64_t seed) const {
  const PromptTemplate& tpl = templates_.get(template_id);
  ProviderRequest request{tpl.template_id, tpl.purpose, std::move(context), {}, seed};
  request.prompt = render_prompt(tpl, request.context);

  DialogueResponse response;
  response.purpose = tpl.purpose;
  const auto started = std::chrono::steady_clock::now();
  try {
    response.text = provider_->complete(request);
    response.provider_id = provider_->id();
  } catch (const std::exception&) {
    if (provider_->id() == stub_.id()) throw;
    response.text = stub_.complete(request);
    response.provider_id = stub_.id();
    response.degraded = true;
  }
  response.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
  return response;
}

DialogueResponse Dialogue::feedback_level0(const Case& c, Cause chosen, rules::Result result,
                                           std::uint64_t seed) const {
  Bindings context = npc_bindings(c.npc);
  context["case_narrative"] = c.narrative;
  context["case_causes"] = case_causes(c);
  context["played"] = "The diagnosis of " + std::string(cause_phrase(chosen));
  context["played_causes"] = std::string(cause_phrase(chosen));
  context["result"] = std::string(rules::to_string(result));
  DialogueResponse response = call("feedback", std::move(context), seed);
  response.tone = rules::tone_for(result);
  response.speaker = c.npc.name;
  return response;
}

DialogueResponse Dialogue::generate_feedback(const Case& c, const std::vector<int>& played_cards,
                                             rules::Result result, std::uint64_t seed) const {
  if (played_cards.empty()) throw DomainError("NO_CARDS", "feedback needs at least one played card");
  std::vector<std::string> played_causes;
  for (const int id : played_cards) {
    const std::string phrase(cause_phrase(cause_of_card(id)));
    if (std::find(played_causes.begin(), played_causes.end(), phrase) == played_causes.end()) {
      played_causes.push_back(phrase);
    }
  }
  Bindings context = npc_bindings(c.npc);
  context["case_narrative"] = c.narrative;
  context["case_causes"] = case_causes(c);
  context["played"] = titles(played_cards);
  context["played_causes"] = join_and(played_causes);
  context["result"] = std::string(rules::to_string(result));
  DialogueResponse response = call("feedback", std::move(context), seed);
  response.tone = rules::tone_for(result);
  response.speaker = c.npc.name;
  return response;
}

DialogueResponse Dialogue::generate_letter(Cause chapter, const std::vector<int>& cards, const NpcProfile* sender,
                                           std::string_view template_id, std::uint64_t seed) const {
  if (cards.empty()) throw DomainError("EMPTY_GRANT", "a letter must grant at least one card");
  static const NpcProfile kStudents{"students", "Your students", "Students you have helped this term",
                                    "grateful and a little shy"};
  const NpcProfile& npc = sender != nullptr ? *sender : kStudents;
  Bindings context = npc_bindings(npc);
  context["chapter_title"] = std::string(chapter_title(chapter));
  std::vector<std::string> names;
  for (const int id : cards) names.push_back("\"" + deck_.card(id).title + "\"");
  context["granted_titles"] = join_and(names);
  const std::string_view id = templates_.contains(template_id) ? template_id : std::string_view("letter");
  DialogueResponse response = call(id, std::move(context), seed);
  response.tone = rules::Tone::Positive;
  response.speaker = npc.name;
  return response;
}

MergedResponse Dialogue::generate_merged_text(int card_a, int card_b, const Case& c, std::uint64_t seed) const {
  if (card_a == card_b) throw DomainError("IDENTICAL_CARDS", "a merge needs two different cards");
  const StrategyCard& low = deck_.card(std::min(card_a, card_b));
  const StrategyCard& high = deck_.card(std::max(card_a, card_b));
  Bindings context{{"case_narrative", c.narrative},
                   {"case_causes", case_causes(c)},
                   {"card_a_title", low.title},
                   {"card_a_explanation", low.explanation},
                   {"card_b_title", high.title},
                   {"card_b_explanation", high.explanation}};

  MergedResponse out;
  out.response = call("merged_card", context, seed);
  auto parsed = parse_merged(out.response.text);
  if (!parsed && !out.response.degraded && provider_->id() != stub_.id()) {
    const PromptTemplate& tpl = templates_.get("merged_card");
    ProviderRequest request{tpl.template_id, tpl.purpose, context, render_prompt(tpl, context), seed};
    out.response.text = stub_.complete(request);
    out.response.provider_id = stub_.id();
    out.response.degraded = true;
    parsed = parse_merged(out.response.text);
  }
  if (!parsed) throw ProviderError("PROVIDER_RESPONSE", "merged card reply lacks TITLE/TEXT lines");
  out.merged = std::move(*parsed);
  out.response.tone = rules::Tone::Positive;
  out.response.speaker = c.npc.name;
  return out;
}

DualVoice Dialogue::generate_dual_voice(std::string_view story, Cause declared_cause, int card_id, int delta,
                                        int motivation, std::uint64_t seed) const {
  Bindings context{{"story", std::string(story)},
                   {"declared_cause", std::string(cause_phrase(declared_cause))},
                   {"card_title", deck_.card(card_id).title},
                   {"delta", std::to_string(delta)},
                   {"motivation", std::to_string(motivation)}};
  DualVoice out;
  out.motivational = call("dual_voice_motivational", context, seed);
  out.motivational.tone = rules::Tone::Positive;
  out.motivational.speaker = "Motivational mind";
  out.procrastinating = call("dual_voice_procrastinating", context, seed);
  out.procrastinating.tone = rules::Tone::Critical;
  out.procrastinating.speaker = "Procrastinating mind";
  return out;
}

std::string DialogueNarrator::letter_text(const rules::LetterRequest& request) {
  const NpcProfile* sender = request.sender_case != nullptr ? &request.sender_case->npc : nullptr;
  responses_.push_back(
      dialogue_.generate_letter(request.chapter, request.cards, sender, request.template_id, request.seed));
  return responses_.back().text;
}

rules::MergedText DialogueNarrator::merged_text(const rules::MergeRequest& request) {
  static const Case kNoCase{};
  const Case& target = request.target_case != nullptr ? *request.target_case : kNoCase;
  auto merged = dialogue_.generate_merged_text(request.card_a, request.card_b, target, request.seed);
  responses_.push_back(merged.response);
  return merged.merged;
}

}  // namespace procrastimate::dialogue
