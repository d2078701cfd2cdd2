#pragma once

// Shared JSON decoding helpers for pack documents and customization files.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "procrastimate/domain/case.hpp"
#include "procrastimate/pack/pack_io.hpp"

namespace procrastimate::pack_detail {

// Accumulates SCHEMA diagnostics instead of stopping at the first problem.
struct Decoder {
  std::vector<Diagnostic> diagnostics;

  void fail(std::string path, std::string message) {
    diagnostics.push_back({"SCHEMA", std::move(path), std::move(message)});
  }

  const nlohmann::json* field(const nlohmann::json& object, const std::string& path,
                              const char* name) {
    if (!object.is_object() || !object.contains(name)) {
      fail(path + "/" + name, "required field is missing");
      return nullptr;
    }
    return &object.at(name);
  }

  std::optional<std::string> string_field(const nlohmann::json& object, const std::string& path,
                                          const char* name) {
    const nlohmann::json* v = field(object, path, name);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      fail(path + "/" + name, "must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  const nlohmann::json* array_field(const nlohmann::json& object, const std::string& path,
                                    const char* name) {
    const nlohmann::json* v = field(object, path, name);
    if (v != nullptr && !v->is_array()) {
      fail(path + "/" + name, "must be an array");
      return nullptr;
    }
    return v;
  }

  std::optional<std::vector<int>> int_array_field(const nlohmann::json& object,
                                                  const std::string& path, const char* name) {
    const nlohmann::json* v = array_field(object, path, name);
    if (v == nullptr) return std::nullopt;
    std::vector<int> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number_integer()) {
        fail(path + "/" + name + "/" + std::to_string(i), "must be an integer");
        return std::nullopt;
      }
      out.push_back((*v)[i].get<int>());
    }
    return out;
  }

  std::optional<Cause> cause_value(const nlohmann::json& value, const std::string& path) {
    if (!value.is_string()) {
      fail(path, "must be a cause name");
      return std::nullopt;
    }
    auto cause = parse_cause(value.get<std::string>());
    if (!cause) fail(path, "unknown cause '" + value.get<std::string>() + "'");
    return cause;
  }

  std::optional<NpcProfile> decode_npc(const nlohmann::json& value, const std::string& path) {
    if (!value.is_object()) {
      fail(path, "npc must be an object");
      return std::nullopt;
    }
    NpcProfile npc;
    auto id = string_field(value, path, "npc_id");
    auto name = string_field(value, path, "name");
    if (!id || !name) return std::nullopt;
    npc.npc_id = *id;
    npc.name = *name;
    if (value.contains("basic_info")) {
      if (auto s = string_field(value, path, "basic_info")) npc.basic_info = *s;
    }
    if (value.contains("persona_notes")) {
      if (auto s = string_field(value, path, "persona_notes")) npc.persona_notes = *s;
    }
    return npc;
  }

  // Level-specific fields: L0 {misconception, punishment, major_cause},
  // L1 {major_cause?}, L2 {cause_pair}.
  std::optional<Case> decode_case(const nlohmann::json& value, const std::string& path,
                                  CaseLevel level) {
    if (!value.is_object()) {
      fail(path, "case must be an object");
      return std::nullopt;
    }
    const std::size_t before = diagnostics.size();
    Case c;
    c.level = level;
    if (auto s = string_field(value, path, "case_id")) c.case_id = *s;
    if (const nlohmann::json* npc = field(value, path, "npc")) {
      if (auto profile = decode_npc(*npc, path + "/npc")) c.npc = *profile;
    }
    if (auto s = string_field(value, path, "narrative")) c.narrative = *s;

    static const std::vector<std::string> kCommon = {"case_id", "npc", "narrative"};
    std::vector<std::string> allowed = kCommon;
    switch (level) {
      case CaseLevel::L0: {
        allowed.insert(allowed.end(), {"misconception", "punishment", "major_cause"});
        if (auto s = string_field(value, path, "misconception")) {
          c.misconception = parse_misconception(*s);
          if (!c.misconception) fail(path + "/misconception", "unknown label '" + *s + "'");
        }
        if (auto s = string_field(value, path, "punishment")) c.punishment = *s;
        if (const nlohmann::json* v = field(value, path, "major_cause")) {
          c.major_cause = cause_value(*v, path + "/major_cause");
        }
        break;
      }
      case CaseLevel::L1:
        allowed.emplace_back("major_cause");
        if (value.contains("major_cause")) {
          c.major_cause = cause_value(value["major_cause"], path + "/major_cause");
        }
        break;
      case CaseLevel::L2: {
        allowed.emplace_back("cause_pair");
        if (const nlohmann::json* v = field(value, path, "cause_pair")) {
          if (!v->is_array() || v->size() != 2) {
            fail(path + "/cause_pair", "must be an array of exactly two causes");
          } else {
            auto a = cause_value((*v)[0], path + "/cause_pair/0");
            auto b = cause_value((*v)[1], path + "/cause_pair/1");
            if (a && b) c.cause_pair = CausePair(*a, *b);
          }
        }
        break;
      }
    }
    for (const auto& [key, unused] : value.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(path + "/" + key, "field not allowed on a " + std::string(to_string(level)) + " case");
      }
    }
    if (diagnostics.size() != before) return std::nullopt;
    return c;
  }
};

}  // namespace procrastimate::pack_detail
