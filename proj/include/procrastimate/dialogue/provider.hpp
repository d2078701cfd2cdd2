#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "procrastimate/dialogue/prompt.hpp"

namespace procrastimate::dialogue {

struct ProviderRequest {
  std::string template_id;
  Purpose purpose = Purpose::Feedback;
  Bindings context;
  std::string prompt;  // template rendered with context
  std::uint64_t seed = 0;
};

// Codes: PROVIDER_CONFIG, PROVIDER_TIMEOUT, PROVIDER_HTTP, PROVIDER_RESPONSE.
class ProviderError : public Error {
 public:
  using Error::Error;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string id() const = 0;
  // Must be safe to call from several threads at once.
  virtual std::string complete(const ProviderRequest& request) = 0;
};

// Offline generator. Output depends only on (template_id, context, seed).
class StubProvider final : public Provider {
 public:
  std::string id() const override { return "stub"; }
  std::string complete(const ProviderRequest& request) override;
};

struct RemoteConfig {
  std::string url;  // full chat-completions endpoint
  std::string api_key;
  std::string model;
  std::chrono::milliseconds timeout{15000};
  std::size_t max_chars = 600;
};

// Reads PROCRASTIMATE_LLM_URL, PROCRASTIMATE_LLM_KEY and PROCRASTIMATE_LLM_MODEL.
// nullopt when the URL is unset.
std::optional<RemoteConfig> remote_config_from_env();

using LogSink = std::function<void(std::string_view line)>;

class RemoteProvider final : public Provider {
 public:
  explicit RemoteProvider(RemoteConfig config, LogSink log = {});

  std::string id() const override;
  std::string complete(const ProviderRequest& request) override;

 private:
  void log(const std::string& line) const;

  RemoteConfig config_;
  LogSink log_;
};

// "stub" or "remote". Remote without PROCRASTIMATE_LLM_URL is PROVIDER_CONFIG.
std::shared_ptr<Provider> make_provider(std::string_view name, LogSink log = {});

// Drops HTML tags, code fences and markdown emphasis/heading markers, and
// collapses runs of blanks. Line breaks survive.
std::string strip_markup(std::string_view text);

// Cuts at the last space before `max_chars` and appends "...".
std::string cap_length(std::string text, std::size_t max_chars);

std::string redact(std::string text, std::string_view secret);

}  // namespace procrastimate::dialogue
