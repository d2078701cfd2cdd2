#include "procrastimate/service/view.hpp"

namespace procrastimate::service {

using nlohmann::json;

namespace {

json npc_json(const NpcProfile& npc) {
  return {{"npc_id", npc.npc_id}, {"name", npc.name}, {"basic_info", npc.basic_info}, {"persona_notes", npc.persona_notes}};
}

[[noreturn]] void bad_action(const std::string& message) { throw DomainError("BAD_ACTION", message); }

const json& require(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) bad_action(std::string("action needs '") + key + "'");
  return *it;
}

int card_field(const json& doc, const char* key) {
  const json& value = require(doc, key);
  if (!value.is_number_integer()) bad_action(std::string("'") + key + "' must be an integer");
  return value.get<int>();
}

Cause cause_field(const json& doc, const char* key) {
  const json& value = require(doc, key);
  if (!value.is_string()) bad_action(std::string("'") + key + "' must be a cause name");
  const auto cause = parse_cause(value.get<std::string>());
  if (!cause) bad_action("unknown cause '" + value.get<std::string>() + "'");
  return *cause;
}

std::string case_field(const json& doc, const GameState& state, const StoryPack& pack) {
  const auto it = doc.find("case_id");
  if (it != doc.end()) {
    if (!it->is_string()) bad_action("'case_id' must be a string");
    return it->get<std::string>();
  }
  const Case* current = rules::current_case(state, pack);
  return current != nullptr ? current->case_id : std::string();
}

}  // namespace

json case_view(const Case& c, bool solved) {
  json out = {{"case_id", c.case_id},
              {"level", to_string(c.level)},
              {"npc", npc_json(c.npc)},
              {"narrative", c.narrative},
              {"solved", solved}};
  if (c.misconception) out["misconception"] = to_string(*c.misconception);
  if (c.punishment) out["punishment"] = *c.punishment;
  const bool show_cause = c.level == CaseLevel::L1 || solved;
  if (c.major_cause && show_cause) out["major_cause"] = to_string(*c.major_cause);
  if (c.cause_pair && solved) {
    out["cause_pair"] = {to_string(c.cause_pair->first()), to_string(c.cause_pair->second())};
  }
  return out;
}

json dialogue_to_json(const DialogueEntry& e) {
  const auto& r = e.response;
  return {{"seq", e.seq},
          {"case_id", e.case_id},
          {"speaker", r.speaker},
          {"text", r.text},
          {"tone", rules::to_string(r.tone)},
          {"purpose", dialogue::to_string(r.purpose)},
          {"provider_id", r.provider_id},
          {"latency_ms", r.latency_ms},
          {"degraded", r.degraded}};
}

DialogueEntry dialogue_from_json(const json& doc) {
  DialogueEntry e;
  e.seq = doc.at("seq").get<std::uint64_t>();
  e.case_id = doc.at("case_id").get<std::string>();
  auto& r = e.response;
  r.speaker = doc.at("speaker").get<std::string>();
  r.text = doc.at("text").get<std::string>();
  r.tone = doc.at("tone").get<std::string>() == "Critical" ? rules::Tone::Critical : rules::Tone::Positive;
  const std::string purpose = doc.at("purpose").get<std::string>();
  r.purpose = purpose == "dual_voice" ? dialogue::Purpose::DualVoice : dialogue::purpose_for_id(purpose);
  r.provider_id = doc.at("provider_id").get<std::string>();
  r.latency_ms = doc.at("latency_ms").get<std::int64_t>();
  r.degraded = doc.at("degraded").get<bool>();
  return e;
}

json outcome_to_json(const rules::Outcome& o) {
  const auto& d = o.delta;
  json delta = {{"points_awarded", d.points_awarded}, {"cards_gained", d.cards_gained}};
  if (d.handbook_chapter) delta["handbook_chapter"] = to_string(*d.handbook_chapter);
  if (d.level_advanced_to) delta["level_advanced_to"] = to_string(*d.level_advanced_to);
  delta["letters"] = d.letters;
  if (d.merged) {
    delta["merged"] = {{"source_low", d.merged->source_low},
                       {"source_high", d.merged->source_high},
                       {"generated_title", d.merged->generated_title},
                       {"generated_text", d.merged->generated_text}};
  }
  return {{"result", rules::to_string(o.result)}, {"tone", rules::to_string(o.feedback_tone)}, {"delta", delta}};
}

json session_view(const GameState& state, const StoryPack& pack, const std::vector<DialogueEntry>& history) {
  json pending = json::array();
  for (const Case* c : rules::pending_cases(state, pack)) pending.push_back(case_view(*c, false));
  const Case* current = rules::current_case(state, pack);

  json handbook = json::object();
  for (Cause cause : kAllCauses) {
    json entries = json::array();
    for (const auto& e : state.handbook.chapter(cause)) entries.push_back({{"case_id", e.case_id}, {"card_id", e.card_id}});
    handbook[std::string(to_string(cause))] = {{"title", chapter_title(cause)},
                                               {"count", entries.size()},
                                               {"capacity", kChapterCapacity},
                                               {"entries", std::move(entries)}};
  }

  json shop = json::array();
  for (const auto& listing : rules::shop_listings(state, pack)) {
    shop.push_back({{"card_id", listing.card_id},
                    {"cost_points", listing.cost_points},
                    {"affordable", listing.cost_points <= state.points_available()}});
  }

  json letters = json::array();
  for (const auto& l : state.letters_received) {
    letters.push_back({{"milestone", l.milestone},
                       {"granted_cards", l.granted_cards},
                       {"sender_npc_id", l.sender_npc_id},
                       {"text", l.text}});
  }
  json merged = json::array();
  for (const auto& m : state.merged_cards) {
    merged.push_back({{"source_low", m.source_low},
                      {"source_high", m.source_high},
                      {"generated_title", m.generated_title},
                      {"generated_text", m.generated_text},
                      {"case_id", m.case_id}});
  }
  json dialogue = json::array();
  for (const auto& entry : history) dialogue.push_back(dialogue_to_json(entry));

  const auto progress = [](std::size_t solved, std::size_t total) {
    return json{{"solved", solved}, {"total", total}};
  };
  std::size_t l1_total = 0;
  for (Cause cause : kAllCauses) l1_total += pack.l1_chapter(cause).size();

  return {{"session_id", state.session_id},
          {"pack_id", state.pack_id},
          {"level", to_string(state.current_level)},
          {"completed", state.current_level == Level::Completed},
          {"points", {{"earned", state.points_earned}, {"spent", state.points_spent}, {"available", state.points_available()}}},
          {"owned_cards", state.owned_cards},
          {"hand", rules::playable_cards(state)},
          {"current_case", current != nullptr ? case_view(*current, false) : json(nullptr)},
          {"pending_cases", std::move(pending)},
          {"progress",
           {{"L0", progress(state.solved_l0.size(), pack.l0_cases.size())},
            {"L1", progress(state.solved_l1.size(), l1_total)},
            {"L2", progress(state.solved_l2.size(), pack.l2_cases.size())}}},
          {"handbook", std::move(handbook)},
          {"shop", std::move(shop)},
          {"letters", std::move(letters)},
          {"merged_cards", std::move(merged)},
          {"dialogue", std::move(dialogue)},
          {"actions", state.action_log.size()}};
}

json deck_json(const Deck& deck) {
  json out = json::array();
  for (const auto& card : deck.cards()) {
    out.push_back({{"id", card.id},
                   {"title", card.title},
                   {"explanation", card.explanation},
                   {"utility", card.utility},
                   {"cause", to_string(card.cause())}});
  }
  return out;
}

json pack_summary(const StoryPack& pack) {
  std::size_t l1 = 0;
  for (Cause cause : kAllCauses) l1 += pack.l1_chapter(cause).size();
  return {{"pack_id", pack.pack_id},
          {"title", pack.title},
          {"schema_version", pack.schema_version},
          {"cases", {{"L0", pack.l0_cases.size()}, {"L1", l1}, {"L2", pack.l2_cases.size()}}}};
}

rules::Action action_from_json(const json& doc, const GameState& state, const StoryPack& pack) {
  if (!doc.is_object()) bad_action("action must be a JSON object");
  const json& type = require(doc, "type");
  if (!type.is_string()) bad_action("'type' must be a string");
  const std::string kind = type.get<std::string>();
  if (kind == "L0Choice") return rules::L0Choice{case_field(doc, state, pack), cause_field(doc, "cause")};
  if (kind == "PlayCard") return rules::PlayCard{case_field(doc, state, pack), card_field(doc, "card_id")};
  if (kind == "PlayPair") {
    return rules::PlayPair{case_field(doc, state, pack), card_field(doc, "card_a"), card_field(doc, "card_b")};
  }
  if (kind == "BuyCard") return rules::BuyCard{card_field(doc, "card_id")};
  if (kind == "AdvanceCase") {
    const json& id = require(doc, "case_id");
    if (!id.is_string()) bad_action("'case_id' must be a string");
    return rules::AdvanceCase{id.get<std::string>()};
  }
  bad_action("unknown action type '" + kind + "' (L0Choice, PlayCard, PlayPair, BuyCard, AdvanceCase)");
}

json action_to_json(const rules::Action& action) {
  return std::visit(
      [](const auto& a) -> json {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, rules::L0Choice>) {
          return {{"type", "L0Choice"}, {"case_id", a.case_id}, {"cause", to_string(a.cause)}};
        } else if constexpr (std::is_same_v<T, rules::PlayCard>) {
          return {{"type", "PlayCard"}, {"case_id", a.case_id}, {"card_id", a.card_id}};
        } else if constexpr (std::is_same_v<T, rules::PlayPair>) {
          return {{"type", "PlayPair"}, {"case_id", a.case_id}, {"card_a", a.card_a}, {"card_b", a.card_b}};
        } else if constexpr (std::is_same_v<T, rules::BuyCard>) {
          return {{"type", "BuyCard"}, {"card_id", a.card_id}};
        } else if constexpr (std::is_same_v<T, rules::AdvanceCase>) {
          return {{"type", "AdvanceCase"}, {"case_id", a.case_id}};
        } else {
          return {{"type", "GrantLetter"}, {"chapter", to_string(a.chapter)}};
        }
      },
      action);
}

}  // namespace procrastimate::service
