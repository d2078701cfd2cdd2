#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "procrastimate/errors.hpp"
#include "procrastimate/pack/story_pack.hpp"

namespace procrastimate {

// One validation finding. `path` is a JSON pointer into the pack document
// ("/l1/TaskValue", "/shop/3/card_id", ...).
struct Diagnostic {
  std::string code;
  std::string path;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

// code:path:message, the format printed by `procrastimate validate`.
std::string format_diagnostic(const Diagnostic& d);

class PackError : public Error {
 public:
  explicit PackError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Decodes and validates a pack document. Throws PackError whose diagnostics
// start with SYNTAX (line/column in the message), SCHEMA, or any code
// reported by validate_pack.
StoryPack parse_pack(std::string_view document);
StoryPack parse_pack_file(const std::filesystem::path& path);

// Decoding only: the returned pack may violate count/partition rules.
// Throws PackError for SYNTAX and SCHEMA problems.
StoryPack decode_pack(std::string_view document);

// Ordered diagnostics; empty for a valid pack. Never mutates the pack.
std::vector<Diagnostic> validate_pack(const StoryPack& pack);

// Canonical document. parse_pack(serialize_pack(p)) == p for every valid pack.
nlohmann::json pack_to_json(const StoryPack& pack);
std::string serialize_pack(const StoryPack& pack);

// JSON forms of shared content types, reused by the customization files.
nlohmann::json case_to_json(const Case& c);
nlohmann::json npc_to_json(const NpcProfile& npc);

// The bundled reference pack ("reference").
const StoryPack& reference_pack();

}  // namespace procrastimate
