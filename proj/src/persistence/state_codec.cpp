#include "procrastimate/persistence/state_codec.hpp"

#include <charconv>

namespace procrastimate::persist {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw Error("STATE_SCHEMA", path + ": " + message);
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(path + "/" + key, "missing");
  return *it;
}

std::string get_string(const json& obj, const char* key, const std::string& path) {
  const json& value = member(obj, key, path);
  if (!value.is_string()) schema_error(path + "/" + key, "expected a string");
  return value.get<std::string>();
}

std::int64_t get_int(const json& obj, const char* key, const std::string& path) {
  const json& value = member(obj, key, path);
  if (!value.is_number_integer()) schema_error(path + "/" + key, "expected an integer");
  return value.get<std::int64_t>();
}

const json& get_array(const json& obj, const char* key, const std::string& path) {
  const json& value = member(obj, key, path);
  if (!value.is_array()) schema_error(path + "/" + key, "expected an array");
  return value;
}

std::vector<int> int_list(const json& arr, const std::string& path) {
  std::vector<int> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number_integer()) schema_error(path + "/" + std::to_string(i), "expected an integer");
    out.push_back(arr[i].get<int>());
  }
  return out;
}

std::set<std::string> string_set(const json& arr, const std::string& path) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) schema_error(path + "/" + std::to_string(i), "expected a string");
    out.insert(arr[i].get<std::string>());
  }
  return out;
}

Cause cause_value(const json& value, const std::string& path) {
  if (!value.is_string()) schema_error(path, "expected a cause name");
  const auto cause = parse_cause(value.get<std::string>());
  if (!cause) schema_error(path, "unknown cause '" + value.get<std::string>() + "'");
  return *cause;
}

}  // namespace

json action_record_to_json(const ActionRecord& r) {
  json out = {{"seq", r.seq},
              {"timestamp_ms", r.timestamp_ms},
              {"kind", to_string(r.kind)},
              {"case_id", r.case_id},
              {"cards", r.cards},
              {"generated", r.generated}};
  out["cause"] = r.cause ? json(to_string(*r.cause)) : json(nullptr);
  out["win"] = r.win ? json(*r.win) : json(nullptr);
  return out;
}

json state_to_json(const GameState& s) {
  json handbook = json::object();
  for (Cause cause : kAllCauses) {
    json entries = json::array();
    for (const auto& e : s.handbook.chapter(cause)) entries.push_back({{"case_id", e.case_id}, {"card_id", e.card_id}});
    handbook[std::string(to_string(cause))] = std::move(entries);
  }
  json merged = json::array();
  for (const auto& m : s.merged_cards) {
    merged.push_back({{"source_low", m.source_low},
                      {"source_high", m.source_high},
                      {"generated_title", m.generated_title},
                      {"generated_text", m.generated_text},
                      {"case_id", m.case_id}});
  }
  json letters = json::array();
  for (const auto& l : s.letters_received) {
    letters.push_back({{"milestone", l.milestone},
                       {"granted_cards", l.granted_cards},
                       {"sender_npc_id", l.sender_npc_id},
                       {"text", l.text}});
  }
  json log = json::array();
  for (const auto& r : s.action_log) log.push_back(action_record_to_json(r));

  return {{"session_id", s.session_id},
          {"pack_id", s.pack_id},
          {"current_level", to_string(s.current_level)},
          {"solved_l0", s.solved_l0},
          {"solved_l1", s.solved_l1},
          {"solved_l2", s.solved_l2},
          {"owned_cards", s.owned_cards},
          {"points_earned", s.points_earned},
          {"points_spent", s.points_spent},
          {"handbook", std::move(handbook)},
          {"merged_cards", std::move(merged)},
          {"letters_received", std::move(letters)},
          {"rng_seed", std::to_string(s.rng_seed)},
          {"action_log", std::move(log)}};
}

GameState state_from_json(const json& doc) {
  const std::string root;
  GameState s;
  s.session_id = get_string(doc, "session_id", root);
  s.pack_id = get_string(doc, "pack_id", root);
  const auto level = parse_level(get_string(doc, "current_level", root));
  if (!level) schema_error("/current_level", "unknown level");
  s.current_level = *level;
  s.solved_l0 = string_set(get_array(doc, "solved_l0", root), "/solved_l0");
  s.solved_l1 = string_set(get_array(doc, "solved_l1", root), "/solved_l1");
  s.solved_l2 = string_set(get_array(doc, "solved_l2", root), "/solved_l2");
  for (int id : int_list(get_array(doc, "owned_cards", root), "/owned_cards")) s.owned_cards.insert(id);
  s.points_earned = static_cast<int>(get_int(doc, "points_earned", root));
  s.points_spent = static_cast<int>(get_int(doc, "points_spent", root));

  const json& handbook = member(doc, "handbook", root);
  for (Cause cause : kAllCauses) {
    const std::string path = "/handbook/" + std::string(to_string(cause));
    const json& entries = get_array(handbook, std::string(to_string(cause)).c_str(), "/handbook");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string at = path + "/" + std::to_string(i);
      HandbookEntry entry{get_string(entries[i], "case_id", at), static_cast<int>(get_int(entries[i], "card_id", at))};
      try {
        s.handbook.append(cause, std::move(entry));
      } catch (const StateError& e) {
        throw Error("STATE_INVALID", at + ": " + e.what());
      } catch (const DomainError& e) {
        throw Error("STATE_INVALID", at + ": " + e.what());
      }
    }
  }

  const json& merged = get_array(doc, "merged_cards", root);
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const std::string at = "/merged_cards/" + std::to_string(i);
    s.merged_cards.push_back({static_cast<int>(get_int(merged[i], "source_low", at)),
                              static_cast<int>(get_int(merged[i], "source_high", at)),
                              get_string(merged[i], "generated_title", at),
                              get_string(merged[i], "generated_text", at), get_string(merged[i], "case_id", at)});
  }

  const json& letters = get_array(doc, "letters_received", root);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const std::string at = "/letters_received/" + std::to_string(i);
    s.letters_received.push_back({get_string(letters[i], "milestone", at),
                                  int_list(get_array(letters[i], "granted_cards", at), at + "/granted_cards"),
                                  get_string(letters[i], "sender_npc_id", at), get_string(letters[i], "text", at)});
  }

  const std::string seed = get_string(doc, "rng_seed", root);
  const auto [end, ec] = std::from_chars(seed.data(), seed.data() + seed.size(), s.rng_seed);
  if (ec != std::errc() || end != seed.data() + seed.size()) schema_error("/rng_seed", "expected a decimal integer");

  const json& log = get_array(doc, "action_log", root);
  for (std::size_t i = 0; i < log.size(); ++i) {
    const std::string at = "/action_log/" + std::to_string(i);
    const json& item = log[i];
    ActionRecord r;
    r.seq = static_cast<std::uint64_t>(get_int(item, "seq", at));
    r.timestamp_ms = get_int(item, "timestamp_ms", at);
    const auto kind = parse_action_kind(get_string(item, "kind", at));
    if (!kind) schema_error(at + "/kind", "unknown action kind");
    r.kind = *kind;
    r.case_id = get_string(item, "case_id", at);
    r.cards = int_list(get_array(item, "cards", at), at + "/cards");
    const json& cause = member(item, "cause", at);
    if (!cause.is_null()) r.cause = cause_value(cause, at + "/cause");
    const json& win = member(item, "win", at);
    if (!win.is_null()) {
      if (!win.is_boolean()) schema_error(at + "/win", "expected a boolean or null");
      r.win = win.get<bool>();
    }
    const json& generated = get_array(item, "generated", at);
    for (const auto& text : generated) {
      if (!text.is_string()) schema_error(at + "/generated", "expected strings");
      r.generated.push_back(text.get<std::string>());
    }
    s.action_log.push_back(std::move(r));
  }
  return s;
}

}  // namespace procrastimate::persist
