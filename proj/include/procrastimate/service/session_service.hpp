#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "procrastimate/dialogue/dialogue.hpp"
#include "procrastimate/rules/engine.hpp"
#include "procrastimate/service/pack_registry.hpp"
#include "procrastimate/service/view.hpp"

namespace procrastimate::service {

struct ServiceConfig {
  std::filesystem::path save_dir;
  std::function<std::int64_t()> clock;         // ms since epoch; wall clock when empty
  std::function<std::uint64_t()> seed_source;  // random_device when empty
  std::function<std::string()> id_source;      // 32 random hex digits when empty
  std::size_t history_limit = 200;
};

struct SessionRecord {
  std::string session_id;
  std::string pack_id;
  GameState state;
  std::int64_t created_at = 0;
  std::int64_t last_action_at = 0;
};

struct CreateResult {
  std::string session_id;
  nlohmann::json view;
};

struct SubmitResult {
  nlohmann::json view;
  std::optional<rules::Outcome> outcome;
  std::vector<DialogueEntry> dialogue;
};

// Receives {"type", "view", "outcome", "dialogue"} frames. Called with the
// session lock held, so it must only enqueue.
using EventSink = std::function<void(const nlohmann::json& frame)>;

// In-memory session table backed by one save file per session plus a
// "<id>.session.json" sidecar with timestamps and dialogue history.
class SessionService {
 public:
  SessionService(PackRegistry packs, std::shared_ptr<const dialogue::Dialogue> dialogue, ServiceConfig config);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  CreateResult create_session(const std::string& pack_id, std::optional<std::uint64_t> seed = std::nullopt);

  // Engine errors propagate unchanged (WRONG_LEVEL, CARD_NOT_OWNED, ...). The
  // session is untouched unless the new state was persisted.
  SubmitResult submit_action(const std::string& session_id, const rules::Action& action);
  SubmitResult submit_action_json(const std::string& session_id, const nlohmann::json& body);

  nlohmann::json get_view(const std::string& session_id);
  SessionRecord get_record(const std::string& session_id);
  std::vector<DialogueEntry> get_history(const std::string& session_id);

  // Loads every save in save_dir that is not already in memory. Returns the
  // number of sessions restored; unreadable saves are skipped.
  std::size_t recover();
  std::vector<std::string> session_ids() const;

  std::uint64_t subscribe(const std::string& session_id, EventSink sink);
  void unsubscribe(std::uint64_t token);

  // Re-saves every session; used at shutdown.
  void flush_all();

  const PackRegistry& packs() const { return packs_; }
  const dialogue::Dialogue& dialogue() const { return *dialogue_; }
  const std::filesystem::path& save_dir() const { return config_.save_dir; }

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& session_id);
  std::shared_ptr<Session> load_from_disk(const std::string& session_id);
  void persist(const Session& session, const GameState& state, const std::vector<DialogueEntry>& history,
               std::int64_t last_action_at) const;
  void publish(const std::string& session_id, const nlohmann::json& frame);
  std::int64_t now() const;

  PackRegistry packs_;
  std::shared_ptr<const dialogue::Dialogue> dialogue_;
  ServiceConfig config_;

  mutable std::shared_mutex table_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;

  std::mutex sink_mutex_;
  std::uint64_t next_token_ = 1;
  std::map<std::uint64_t, std::pair<std::string, EventSink>> sinks_;
};

bool is_valid_session_id(const std::string& session_id);

// NPC feedback for an adjudication (L0Choice, PlayCard, PlayPair); nullopt
// for the other actions.
std::optional<dialogue::DialogueResponse> adjudication_feedback(const dialogue::Dialogue& dialogue,
                                                                const StoryPack& pack, const rules::Action& action,
                                                                rules::Result result, std::uint64_t seed);

}  // namespace procrastimate::service
