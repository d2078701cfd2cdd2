#include "procrastimate/persistence/save_file.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "procrastimate/persistence/state_codec.hpp"
#include "procrastimate/rules/engine.hpp"

namespace procrastimate::persist {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw PersistError("SAVE_IO", "sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

void write_durably(const fs::path& path, const std::string& bytes) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError("cannot create " + path.string() + ": " + std::strerror(errno));
  std::size_t written = 0;
  while (written < bytes.size()) {
    const ssize_t n = ::write(fd, bytes.data() + written, bytes.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string reason = std::strerror(errno);
      ::close(fd);
      throw IoError("cannot write " + path.string() + ": " + reason);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) throw IoError("cannot flush " + path.string());
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Envelope {
  SaveMetadata meta;
  json state;
};

Envelope open_envelope(const fs::path& source) {
  const std::string text = read_all(source);
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw CorruptionError(source.string() + " is not valid JSON");
  const auto version = doc.find("format_version");
  if (version == doc.end() || !version->is_number_integer()) {
    throw CorruptionError(source.string() + " has no format_version");
  }
  if (version->get<int>() != kSaveFormatVersion) {
    throw VersionError("unsupported save format_version " + std::to_string(version->get<int>()) + " (expected " +
                       std::to_string(kSaveFormatVersion) + ")");
  }
  const auto checksum = doc.find("checksum");
  const auto state = doc.find("state");
  const auto saved_at = doc.find("saved_at");
  if (checksum == doc.end() || !checksum->is_string() || state == doc.end() || !state->is_object() ||
      saved_at == doc.end() || !saved_at->is_string()) {
    throw CorruptionError(source.string() + " is missing envelope fields");
  }
  const std::string expected = "sha256:" + sha256_hex(state->dump());
  if (checksum->get<std::string>() != expected) throw CorruptionError(source.string() + " failed its checksum");
  Envelope out;
  out.meta = {kSaveFormatVersion, saved_at->get<std::string>(), expected, source};
  out.state = std::move(*state);
  return out;
}

GameState decode_checked(const fs::path& source, const StoryPack* pack) {
  Envelope envelope = open_envelope(source);
  GameState state;
  try {
    state = state_from_json(envelope.state);
  } catch (const Error& e) {
    throw TamperError(source.string() + ": " + e.what());
  }
  auto problems = pack != nullptr ? rules::check_invariants(state, *pack) : state.problems();
  if (!problems.empty()) throw TamperError(source.string() + ": " + problems.front());
  return state;
}

}  // namespace

void write_atomically(const fs::path& dest, const std::string& bytes, bool keep_backup,
                      const std::function<void(const fs::path&)>& after_temp_write) {
  std::error_code ec;
  if (dest.has_parent_path()) fs::create_directories(dest.parent_path(), ec);
  const fs::path temp = fs::path(dest.string() + ".tmp");
  try {
    write_durably(temp, bytes);
    if (after_temp_write) after_temp_write(temp);
    if (keep_backup && fs::exists(dest, ec)) {
      fs::copy_file(dest, backup_path(dest), fs::copy_options::overwrite_existing, ec);
      if (ec) throw IoError("cannot back up " + dest.string() + ": " + ec.message());
    }
    fs::rename(temp, dest, ec);
    if (ec) throw IoError("cannot replace " + dest.string() + ": " + ec.message());
  } catch (...) {
    std::error_code ignored;
    fs::remove(temp, ignored);
    throw;
  }
}

std::string canonical_payload(const GameState& state) { return state_to_json(state).dump(); }

std::string state_checksum(const GameState& state) { return "sha256:" + sha256_hex(canonical_payload(state)); }

SaveMetadata save_state(const GameState& state, const fs::path& dest, const SaveOptions& options) {
  SaveMetadata meta;
  meta.saved_at = options.saved_at.value_or(now_iso8601());
  meta.checksum = state_checksum(state);
  meta.path = dest;
  const json envelope = {{"format_version", kSaveFormatVersion},
                         {"saved_at", meta.saved_at},
                         {"checksum", meta.checksum},
                         {"state", state_to_json(state)}};

  write_atomically(dest, envelope.dump(2) + "\n", true, options.after_temp_write);
  return meta;
}

GameState load_state(const fs::path& source) { return decode_checked(source, nullptr); }

GameState load_state(const fs::path& source, const StoryPack& pack) { return decode_checked(source, &pack); }

SaveMetadata read_metadata(const fs::path& source) { return open_envelope(source).meta; }

Recovered load_with_backup(const fs::path& path, const StoryPack* pack) {
  try {
    return {decode_checked(path, pack), false};
  } catch (const PersistError&) {
    std::error_code ec;
    if (!fs::exists(backup_path(path), ec)) throw;
    try {
      return {decode_checked(backup_path(path), pack), true};
    } catch (const PersistError&) {
    }
    throw;
  }
}

fs::path backup_path(const fs::path& save) { return fs::path(save.string() + ".bak"); }

fs::path default_save_dir() {
  if (const char* xdg = std::getenv("XDG_DATA_HOME"); xdg != nullptr && *xdg != '\0') {
    return fs::path(xdg) / "procrastimate";
  }
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
    return fs::path(home) / ".local" / "share" / "procrastimate";
  }
  return fs::current_path() / ".procrastimate";
}

fs::path save_path(const fs::path& dir, std::string_view session_id) {
  return dir / (std::string(session_id) + ".save.json");
}

}  // namespace procrastimate::persist
