#include "procrastimate/pack/customize.hpp"

#include <array>
#include <numeric>

#include <nlohmann/json.hpp>

#include "pack_decode.hpp"
#include "procrastimate/util/rng.hpp"

namespace procrastimate {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 4> kClusterNames = {
    "daily routines", "study tasks", "health and fitness", "self-improvement"};

json parse_array_document(std::string_view document, const char* what) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw CustomizeError("SYNTAX", std::string(what) + " is not valid JSON: " + e.what());
  }
  if (!doc.is_array()) throw CustomizeError("SCHEMA", std::string(what) + " must be a JSON array");
  return doc;
}

[[noreturn]] void throw_schema(const std::vector<Diagnostic>& diagnostics) {
  throw CustomizeError("SCHEMA", format_diagnostic(diagnostics.front()));
}

}  // namespace

std::string_view to_string(ContextCluster cluster) {
  return kClusterNames[static_cast<std::size_t>(cluster)];
}

std::optional<ContextCluster> parse_context_cluster(std::string_view name) {
  for (std::size_t i = 0; i < kClusterNames.size(); ++i) {
    if (kClusterNames[i] == name) return static_cast<ContextCluster>(i);
  }
  return std::nullopt;
}

Case personal_story_to_case(const PersonalStory& story, std::size_t index) {
  const std::string case_id =
      story.story_id.empty() ? "personal-" + std::to_string(index + 1) : story.story_id;
  if (story.inferred_causes.size() != 2) {
    throw CustomizeError("PERSONAL_CAUSES",
                         "personal story '" + case_id + "' names " +
                             std::to_string(story.inferred_causes.size()) +
                             " cause(s); a Level-2 case needs exactly two distinct causes");
  }
  Case c;
  c.case_id = case_id;
  c.level = CaseLevel::L2;
  c.narrative = story.scenario_text;
  c.cause_pair = CausePair(*story.inferred_causes.begin(), *story.inferred_causes.rbegin());
  if (story.npc) {
    c.npc = *story.npc;
  } else {
    c.npc.npc_id = "npc-" + case_id;
    c.npc.name = "A fellow student";
    c.npc.basic_info = "Student struggling with " + std::string(to_string(story.context_cluster));
    c.npc.persona_notes = "Based on a story shared in a pre-interview";
  }
  return c;
}

std::vector<Case> customize_level2(const std::vector<PersonalStory>& personal,
                                   const std::vector<Case>& shared_pool, std::uint64_t seed) {
  if (personal.size() > kLevel2CaseCount) {
    throw CustomizeError("TOO_MANY_PERSONAL", "at most 8 personal stories fit into Level 2, got " +
                                                  std::to_string(personal.size()));
  }
  std::vector<Case> out;
  std::set<std::string> used_ids;
  for (std::size_t i = 0; i < personal.size(); ++i) {
    Case c = personal_story_to_case(personal[i], i);
    if (!used_ids.insert(c.case_id).second) {
      throw CustomizeError("DUPLICATE_CASE_ID", "personal story id '" + c.case_id + "' repeats");
    }
    out.push_back(std::move(c));
  }

  std::vector<const Case*> candidates;
  for (const auto& c : shared_pool) {
    if (c.level != CaseLevel::L2 || !c.problems().empty()) {
      throw CustomizeError("POOL_CASE", "pool case '" + c.case_id + "' is not a valid Level-2 case");
    }
    if (used_ids.insert(c.case_id).second) candidates.push_back(&c);
  }

  const std::size_t need = kLevel2CaseCount - out.size();
  if (candidates.size() < need) {
    throw CustomizeError("POOL_SHORTFALL",
                         "shared pool is short by " + std::to_string(need - candidates.size()) +
                             " case(s): need " + std::to_string(need) + ", have " +
                             std::to_string(candidates.size()) + " usable");
  }

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < need; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
    std::swap(order[i], order[j]);
  }
  for (std::size_t i = 0; i < need; ++i) out.push_back(*candidates[order[i]]);
  return out;
}

StoryPack customize_pack(const StoryPack& base, const std::vector<PersonalStory>& personal,
                         const std::vector<Case>& shared_pool, std::uint64_t seed) {
  StoryPack pack = base;
  pack.l2_cases = customize_level2(personal, shared_pool, seed);
  return pack;
}

std::vector<PersonalStory> parse_personal_stories(std::string_view document) {
  const json doc = parse_array_document(document, "personal story file");
  pack_detail::Decoder decoder;
  std::vector<PersonalStory> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string path = "/" + std::to_string(i);
    const json& entry = doc[i];
    if (!entry.is_object()) {
      decoder.fail(path, "must be an object");
      continue;
    }
    PersonalStory story;
    if (entry.contains("story_id")) {
      if (auto s = decoder.string_field(entry, path, "story_id")) story.story_id = *s;
    }
    if (auto s = decoder.string_field(entry, path, "scenario_text")) story.scenario_text = *s;
    if (const json* causes = decoder.array_field(entry, path, "inferred_causes")) {
      for (std::size_t j = 0; j < causes->size(); ++j) {
        if (auto cause = decoder.cause_value((*causes)[j], path + "/inferred_causes/" + std::to_string(j))) {
          story.inferred_causes.insert(*cause);
        }
      }
      if (causes->empty() || causes->size() > 2) {
        decoder.fail(path + "/inferred_causes", "must list one or two causes");
      }
    }
    if (auto s = decoder.string_field(entry, path, "context_cluster")) {
      if (auto cluster = parse_context_cluster(*s)) {
        story.context_cluster = *cluster;
      } else {
        decoder.fail(path + "/context_cluster", "unknown cluster '" + *s + "'");
      }
    }
    if (entry.contains("npc")) story.npc = decoder.decode_npc(entry["npc"], path + "/npc");
    out.push_back(std::move(story));
  }
  if (!decoder.diagnostics.empty()) throw_schema(decoder.diagnostics);
  return out;
}

std::vector<Case> parse_case_pool(std::string_view document) {
  const json doc = parse_array_document(document, "case pool file");
  pack_detail::Decoder decoder;
  std::vector<Case> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (auto c = decoder.decode_case(doc[i], "/" + std::to_string(i), CaseLevel::L2)) {
      out.push_back(std::move(*c));
    }
  }
  if (!decoder.diagnostics.empty()) throw_schema(decoder.diagnostics);
  return out;
}

}  // namespace procrastimate
