#include "procrastimate/pack/pack_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "procrastimate/domain/card.hpp"
#include "procrastimate/domain/game_state.hpp"
#include "pack_decode.hpp"
#include "procrastimate/util/bundled.hpp"

namespace procrastimate {

using nlohmann::json;

std::string format_diagnostic(const Diagnostic& d) { return d.code + ":" + d.path + ":" + d.message; }

PackError::PackError(std::vector<Diagnostic> diagnostics)
    : Error(diagnostics.empty() ? "PACK_INVALID" : diagnostics.front().code,
            diagnostics.empty() ? "invalid story pack" : format_diagnostic(diagnostics.front())),
      diagnostics_(std::move(diagnostics)) {}

namespace {

const std::set<std::string> kTopLevelFields = {"schema_version", "pack_id",  "title",
                                               "deck_ref",       "l0",       "l1",
                                               "l2",             "letters",  "starting_hand",
                                               "shop"};

json parse_json_document(std::string_view document) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, document.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (document[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream message;
    message << "line " << line << ", column " << column << ": " << e.what();
    throw PackError({{"SYNTAX", "", message.str()}});
  }
}

}  // namespace

StoryPack decode_pack(std::string_view document) {
  const json doc = parse_json_document(document);
  pack_detail::Decoder decoder;
  StoryPack pack;

  if (!doc.is_object()) {
    throw PackError({{"SCHEMA", "", "pack document must be a JSON object"}});
  }
  for (const auto& [key, value] : doc.items()) {
    if (!kTopLevelFields.contains(key)) decoder.fail("/" + key, "unknown top-level field");
  }

  if (const json* v = decoder.field(doc, "", "schema_version")) {
    if (v->is_number_integer()) {
      pack.schema_version = v->get<int>();
    } else {
      decoder.fail("/schema_version", "must be an integer");
    }
  }
  if (auto s = decoder.string_field(doc, "", "pack_id")) pack.pack_id = *s;
  if (auto s = decoder.string_field(doc, "", "title")) pack.title = *s;
  if (doc.contains("deck_ref")) {
    if (auto s = decoder.string_field(doc, "", "deck_ref")) pack.deck_ref = *s;
  }

  if (const json* l0 = decoder.array_field(doc, "", "l0")) {
    for (std::size_t i = 0; i < l0->size(); ++i) {
      if (auto c = decoder.decode_case((*l0)[i], "/l0/" + std::to_string(i), CaseLevel::L0)) {
        pack.l0_cases.push_back(std::move(*c));
      }
    }
  }

  if (const json* l1 = decoder.field(doc, "", "l1")) {
    if (!l1->is_object()) {
      decoder.fail("/l1", "must be an object keyed by cause");
    } else {
      for (const auto& [key, chapter] : l1->items()) {
        const std::string path = "/l1/" + key;
        const auto cause = parse_cause(key);
        if (!cause) {
          decoder.fail(path, "unknown cause '" + key + "'");
          continue;
        }
        if (!chapter.is_array()) {
          decoder.fail(path, "must be an array of cases");
          continue;
        }
        for (std::size_t i = 0; i < chapter.size(); ++i) {
          const std::string case_path = path + "/" + std::to_string(i);
          if (auto c = decoder.decode_case(chapter[i], case_path, CaseLevel::L1)) {
            if (c->major_cause && *c->major_cause != *cause) {
              decoder.fail(case_path + "/major_cause", "differs from the chapter key " + key);
            }
            c->major_cause = *cause;
            pack.l1_cases[index_of(*cause)].push_back(std::move(*c));
          }
        }
      }
    }
  }

  if (const json* l2 = decoder.array_field(doc, "", "l2")) {
    for (std::size_t i = 0; i < l2->size(); ++i) {
      if (auto c = decoder.decode_case((*l2)[i], "/l2/" + std::to_string(i), CaseLevel::L2)) {
        pack.l2_cases.push_back(std::move(*c));
      }
    }
  }

  if (const json* letters = decoder.array_field(doc, "", "letters")) {
    for (std::size_t i = 0; i < letters->size(); ++i) {
      const std::string path = "/letters/" + std::to_string(i);
      const json& entry = (*letters)[i];
      if (!entry.is_object()) {
        decoder.fail(path, "must be an object");
        continue;
      }
      LetterGrant grant;
      bool ok = true;
      if (auto milestone = decoder.string_field(entry, path, "milestone")) {
        if (auto chapter = milestone_chapter(*milestone)) {
          grant.chapter = *chapter;
        } else {
          decoder.fail(path + "/milestone", "expected 'chapter:<Cause>', got '" + *milestone + "'");
          ok = false;
        }
      } else {
        ok = false;
      }
      if (auto cards = decoder.int_array_field(entry, path, "cards")) {
        grant.cards = *cards;
      } else {
        ok = false;
      }
      if (entry.contains("template_id")) {
        if (auto t = decoder.string_field(entry, path, "template_id")) grant.template_id = *t;
      }
      if (ok) pack.letters.push_back(std::move(grant));
    }
  }

  if (auto hand = decoder.int_array_field(doc, "", "starting_hand")) pack.starting_hand = *hand;

  if (const json* shop = decoder.array_field(doc, "", "shop")) {
    for (std::size_t i = 0; i < shop->size(); ++i) {
      const std::string path = "/shop/" + std::to_string(i);
      const json& entry = (*shop)[i];
      if (!entry.is_object()) {
        decoder.fail(path, "must be an object {card_id, cost}");
        continue;
      }
      ShopListing listing;
      const json* id = decoder.field(entry, path, "card_id");
      if (id == nullptr) continue;
      if (!id->is_number_integer()) {
        decoder.fail(path + "/card_id", "must be an integer");
        continue;
      }
      listing.card_id = id->get<int>();
      if (entry.contains("cost")) {
        if (!entry["cost"].is_number_integer()) {
          decoder.fail(path + "/cost", "must be an integer");
          continue;
        }
        listing.cost_points = entry["cost"].get<int>();
      }
      pack.shop.push_back(listing);
    }
  }

  if (!decoder.diagnostics.empty()) throw PackError(std::move(decoder.diagnostics));
  return pack;
}

std::vector<Diagnostic> validate_pack(const StoryPack& pack) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string code, std::string path, std::string message) {
    out.push_back({std::move(code), std::move(path), std::move(message)});
  };

  if (pack.schema_version != kPackSchemaVersion) {
    add("UNSUPPORTED_VERSION", "/schema_version",
        "schema_version " + std::to_string(pack.schema_version) + " is not supported (expected " +
            std::to_string(kPackSchemaVersion) + ")");
  }
  if (pack.pack_id.empty()) add("EMPTY_FIELD", "/pack_id", "pack_id must not be empty");

  if (pack.l0_cases.size() != kLevel0CaseCount) {
    add("L0_COUNT", "/l0",
        "Level 0 needs exactly 8 cases, found " + std::to_string(pack.l0_cases.size()));
  }
  for (Cause cause : kAllCauses) {
    const auto& chapter = pack.l1_chapter(cause);
    if (chapter.size() != kLevel1CasesPerCause) {
      add("CHAPTER_COUNT", "/l1/" + std::string(to_string(cause)),
          "chapter " + std::string(to_string(cause)) + " needs exactly 6 cases, found " +
              std::to_string(chapter.size()));
    }
  }
  if (pack.l2_cases.size() != kLevel2CaseCount) {
    add("L2_COUNT", "/l2",
        "Level 2 needs exactly 8 cases, found " + std::to_string(pack.l2_cases.size()));
  }

  // Per-case field rules.
  auto check_case = [&](const Case& c, CaseLevel expected, const std::string& path) {
    if (c.level != expected) {
      add("CASE_FIELDS", path, "case is tagged " + std::string(to_string(c.level)));
    }
    if (c.level == CaseLevel::L2 && c.cause_pair && !c.cause_pair->is_distinct()) {
      add("DUPLICATE_CAUSE", path + "/cause_pair",
          "cause_pair repeats " + std::string(to_string(c.cause_pair->first())) +
              "; two distinct causes are required");
    }
    for (const auto& problem : c.problems()) {
      if (problem.find("distinct") != std::string::npos) continue;  // reported above
      add("CASE_FIELDS", path, problem);
    }
    if (c.npc.npc_id.empty()) add("CASE_FIELDS", path + "/npc/npc_id", "npc_id must not be empty");
  };
  for (std::size_t i = 0; i < pack.l0_cases.size(); ++i) {
    check_case(pack.l0_cases[i], CaseLevel::L0, "/l0/" + std::to_string(i));
  }
  for (Cause cause : kAllCauses) {
    const auto& chapter = pack.l1_chapter(cause);
    for (std::size_t i = 0; i < chapter.size(); ++i) {
      const std::string path = "/l1/" + std::string(to_string(cause)) + "/" + std::to_string(i);
      check_case(chapter[i], CaseLevel::L1, path);
      if (chapter[i].major_cause && *chapter[i].major_cause != cause) {
        add("CASE_FIELDS", path + "/major_cause", "major_cause differs from its chapter");
      }
    }
  }
  for (std::size_t i = 0; i < pack.l2_cases.size(); ++i) {
    check_case(pack.l2_cases[i], CaseLevel::L2, "/l2/" + std::to_string(i));
  }

  // Identifier uniqueness.
  std::set<std::string> case_ids;
  std::map<std::string, const NpcProfile*> npcs;
  for (const Case* c : pack.all_cases()) {
    if (!case_ids.insert(c->case_id).second) {
      add("DUPLICATE_CASE_ID", "/", "case_id '" + c->case_id + "' is used more than once");
    }
    auto [it, inserted] = npcs.emplace(c->npc.npc_id, &c->npc);
    if (!inserted && !(*it->second == c->npc)) {
      add("NPC_CONFLICT", "/", "npc_id '" + c->npc.npc_id + "' has two different profiles");
    }
  }

  // Card partition: starting hand, letter grants and shop must split 1..40.
  std::map<int, std::vector<std::string>> sources;
  for (std::size_t i = 0; i < pack.starting_hand.size(); ++i) {
    sources[pack.starting_hand[i]].push_back("/starting_hand/" + std::to_string(i));
  }
  std::set<Cause> letter_chapters;
  for (std::size_t i = 0; i < pack.letters.size(); ++i) {
    const auto& grant = pack.letters[i];
    const std::string path = "/letters/" + std::to_string(i);
    if (!letter_chapters.insert(grant.chapter).second) {
      add("LETTER_SCHEDULE", path + "/milestone",
          "milestone " + chapter_milestone(grant.chapter) + " is scheduled twice");
    }
    if (grant.cards.empty()) add("LETTER_SCHEDULE", path + "/cards", "a letter must grant cards");
    for (std::size_t j = 0; j < grant.cards.size(); ++j) {
      sources[grant.cards[j]].push_back(path + "/cards/" + std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < pack.shop.size(); ++i) {
    const std::string path = "/shop/" + std::to_string(i);
    sources[pack.shop[i].card_id].push_back(path + "/card_id");
    if (pack.shop[i].cost_points < 1) {
      add("SHOP_COST", path + "/cost", "shop cost must be a positive integer");
    }
  }
  for (const auto& [id, paths] : sources) {
    if (!is_valid_card_id(id)) {
      add("CARD_RANGE", paths.front(), "card id " + std::to_string(id) + " is outside [1, 40]");
    } else if (paths.size() > 1) {
      std::string joined;
      for (const auto& p : paths) joined += (joined.empty() ? "" : ", ") + p;
      add("CARD_PARTITION", paths[1],
          "card " + std::to_string(id) + " is assigned more than once (" + joined + ")");
    }
  }
  for (int id = 1; id <= kDeckSize; ++id) {
    if (!sources.contains(id)) {
      add("CARD_PARTITION", "/",
          "card " + std::to_string(id) + " is in none of starting_hand, letters, shop");
    }
  }

  if (pack.starting_hand.size() != kStartingHandSize) {
    add("STARTING_HAND_SIZE", "/starting_hand",
        "starting hand needs 16 cards, found " + std::to_string(pack.starting_hand.size()));
  }
  for (Cause cause : kAllCauses) {
    const bool covered = std::any_of(pack.starting_hand.begin(), pack.starting_hand.end(), [&](int id) {
      return is_valid_card_id(id) && cause_of_card(id) == cause;
    });
    if (!covered) {
      add("SOLVABILITY", "/starting_hand",
          "no starting card addresses " + std::string(to_string(cause)) + "; chapter " +
              std::string(chapter_title(cause)) + " cannot be filled before acquisitions");
    }
  }
  return out;
}

StoryPack parse_pack(std::string_view document) {
  StoryPack pack = decode_pack(document);
  auto diagnostics = validate_pack(pack);
  if (!diagnostics.empty()) throw PackError(std::move(diagnostics));
  return pack;
}

StoryPack parse_pack_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PackError({{"IO", path.string(), "cannot read pack file"}});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_pack(buffer.str());
}

json npc_to_json(const NpcProfile& npc) {
  return json{{"npc_id", npc.npc_id},
              {"name", npc.name},
              {"basic_info", npc.basic_info},
              {"persona_notes", npc.persona_notes}};
}

json case_to_json(const Case& c) {
  json out{{"case_id", c.case_id}, {"npc", npc_to_json(c.npc)}, {"narrative", c.narrative}};
  if (c.level == CaseLevel::L0) {
    if (c.misconception) out["misconception"] = to_string(*c.misconception);
    if (c.punishment) out["punishment"] = *c.punishment;
    if (c.major_cause) out["major_cause"] = to_string(*c.major_cause);
  }
  if (c.level == CaseLevel::L2 && c.cause_pair) {
    out["cause_pair"] = {to_string(c.cause_pair->first()), to_string(c.cause_pair->second())};
  }
  return out;
}

json pack_to_json(const StoryPack& pack) {
  json out;
  out["schema_version"] = pack.schema_version;
  out["pack_id"] = pack.pack_id;
  out["title"] = pack.title;
  out["deck_ref"] = pack.deck_ref;
  out["l0"] = json::array();
  for (const auto& c : pack.l0_cases) out["l0"].push_back(case_to_json(c));
  out["l1"] = json::object();
  for (Cause cause : kAllCauses) {
    json chapter = json::array();
    for (const auto& c : pack.l1_chapter(cause)) chapter.push_back(case_to_json(c));
    out["l1"][std::string(to_string(cause))] = std::move(chapter);
  }
  out["l2"] = json::array();
  for (const auto& c : pack.l2_cases) out["l2"].push_back(case_to_json(c));
  out["letters"] = json::array();
  for (const auto& grant : pack.letters) {
    out["letters"].push_back({{"milestone", chapter_milestone(grant.chapter)},
                              {"cards", grant.cards},
                              {"template_id", grant.template_id}});
  }
  out["starting_hand"] = pack.starting_hand;
  out["shop"] = json::array();
  for (const auto& listing : pack.shop) {
    out["shop"].push_back({{"card_id", listing.card_id}, {"cost", listing.cost_points}});
  }
  return out;
}

std::string serialize_pack(const StoryPack& pack) { return pack_to_json(pack).dump(2) + "\n"; }

const StoryPack& reference_pack() {
  static const StoryPack pack = parse_pack(bundled::reference_pack_json());
  return pack;
}

}  // namespace procrastimate
