#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "procrastimate/domain/game_state.hpp"
#include "procrastimate/errors.hpp"
#include "procrastimate/pack/story_pack.hpp"

namespace procrastimate::persist {

inline constexpr int kSaveFormatVersion = 1;

// Codes: SAVE_IO, SAVE_CORRUPT, SAVE_VERSION, SAVE_TAMPER.
class PersistError : public Error {
 public:
  using Error::Error;
};
class IoError : public PersistError {
 public:
  explicit IoError(const std::string& message) : PersistError("SAVE_IO", message) {}
};
class CorruptionError : public PersistError {
 public:
  explicit CorruptionError(const std::string& message) : PersistError("SAVE_CORRUPT", message) {}
};
class VersionError : public PersistError {
 public:
  explicit VersionError(const std::string& message) : PersistError("SAVE_VERSION", message) {}
};
class TamperError : public PersistError {
 public:
  explicit TamperError(const std::string& message) : PersistError("SAVE_TAMPER", message) {}
};

struct SaveMetadata {
  int format_version = kSaveFormatVersion;
  std::string saved_at;  // ISO-8601 UTC
  std::string checksum;  // "sha256:<hex>" over the compact state payload
  std::filesystem::path path;
};

struct SaveOptions {
  std::optional<std::string> saved_at;  // defaults to the wall clock
  // Runs after the temp file is durable and before it replaces the save.
  // Throwing from it stands in for a crash at that point.
  std::function<void(const std::filesystem::path& temp)> after_temp_write;
};

// Temp file + fsync + rename. With keep_backup the replaced file is first
// copied to <dest>.bak. The hook runs between the temp write and the rename.
void write_atomically(const std::filesystem::path& dest, const std::string& bytes, bool keep_backup,
                      const std::function<void(const std::filesystem::path& temp)>& after_temp_write = {});

// Compact canonical JSON of the state; the checksum input.
std::string canonical_payload(const GameState& state);
std::string state_checksum(const GameState& state);

// Atomic: writes <dest>.tmp, fsyncs, copies the previous save to <dest>.bak,
// then renames over <dest>. On failure the previous save is untouched.
SaveMetadata save_state(const GameState& state, const std::filesystem::path& dest,
                        const SaveOptions& options = {});

// Re-validates GameState::problems(); the pack overload also runs the
// pack-aware invariants.
GameState load_state(const std::filesystem::path& source);
GameState load_state(const std::filesystem::path& source, const StoryPack& pack);
SaveMetadata read_metadata(const std::filesystem::path& source);

struct Recovered {
  GameState state;
  bool from_backup = false;
};

// Loads <path>, falling back to <path>.bak when the primary is missing or
// unreadable. Rethrows the primary error when neither loads.
Recovered load_with_backup(const std::filesystem::path& path, const StoryPack* pack = nullptr);

std::filesystem::path backup_path(const std::filesystem::path& save);

// $XDG_DATA_HOME/procrastimate, else $HOME/.local/share/procrastimate.
std::filesystem::path default_save_dir();
std::filesystem::path save_path(const std::filesystem::path& dir, std::string_view session_id);

}  // namespace procrastimate::persist
