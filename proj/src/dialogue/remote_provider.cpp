#include "httplib.h"

#include <nlohmann/json.hpp>

#include "procrastimate/dialogue/provider.hpp"

namespace procrastimate::dialogue {

namespace {

constexpr std::string_view kSystemPrompt =
    "You write short in-character dialogue for a text adventure about overcoming procrastination. "
    "Reply in plain text only.";

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ProviderError("PROVIDER_CONFIG", "provider URL needs a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

RemoteProvider::RemoteProvider(RemoteConfig config, LogSink log)
    : config_(std::move(config)), log_(std::move(log)) {
  split_url(config_.url);
}

std::string RemoteProvider::id() const { return "remote:" + config_.model; }

void RemoteProvider::log(const std::string& line) const {
  if (log_) log_(redact(line, config_.api_key));
}

std::string RemoteProvider::complete(const ProviderRequest& request) {
  const Endpoint endpoint = split_url(config_.url);
  const nlohmann::json body = {
      {"model", config_.model},
      {"messages",
       nlohmann::json::array({{{"role", "system"}, {"content", kSystemPrompt}},
                              {{"role", "user"}, {"content", request.prompt}}})},
  };
  const std::string payload = body.dump();

  httplib::Client client(endpoint.origin);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count();
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout).count() % 1000000;
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);

  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  log("llm request POST " + config_.url + " Authorization: Bearer " + config_.api_key + " body=" + payload);
  const auto result = client.Post(endpoint.path, headers, payload, "application/json");
  if (!result) {
    const auto error = result.error();
    log("llm request failed: " + httplib::to_string(error));
    const bool timed_out = error == httplib::Error::ConnectionTimeout || error == httplib::Error::Read;
    throw ProviderError(timed_out ? "PROVIDER_TIMEOUT" : "PROVIDER_HTTP",
                        "provider call failed: " + httplib::to_string(error));
  }
  log("llm response status=" + std::to_string(result->status) + " body=" + result->body);
  if (result->status != 200) {
    throw ProviderError("PROVIDER_HTTP", "provider returned HTTP " + std::to_string(result->status));
  }

  const auto reply = nlohmann::json::parse(result->body, nullptr, false);
  const nlohmann::json* content = nullptr;
  if (reply.is_object() && reply.contains("choices") && reply["choices"].is_array() && !reply["choices"].empty()) {
    const auto& choice = reply["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string()) {
      content = &choice["message"]["content"];
    }
  }
  if (content == nullptr) throw ProviderError("PROVIDER_RESPONSE", "provider reply has no message content");

  std::string text = cap_length(strip_markup(content->get<std::string>()), config_.max_chars);
  if (text.empty()) throw ProviderError("PROVIDER_RESPONSE", "provider reply is empty after cleanup");
  return text;
}

}  // namespace procrastimate::dialogue
