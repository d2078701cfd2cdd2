#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "procrastimate/service/session_service.hpp"

namespace procrastimate::service {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Transport-independent HTTP API:
//   POST /api/sessions                 {"pack_id", "seed"?}       -> 201 {session_id, view}
//   GET  /api/sessions/{id}                                       -> 200 view
//   POST /api/sessions/{id}/actions    action                     -> 200 {view, outcome, dialogue}
//   GET  /api/packs                                               -> 200 [pack summary]
//   GET  /api/deck                                                -> 200 [card]
// Errors are {"error": {"code", "message"}} with 400, 404, 405, 409 or 500.
class ApiRouter {
 public:
  explicit ApiRouter(SessionService& service) : service_(service) {}

  ApiResponse handle(std::string_view method, std::string_view target, std::string_view body);

  // Session id when `target` is /api/sessions/{id}/events.
  static std::optional<std::string> events_session(std::string_view target);

 private:
  SessionService& service_;
};

nlohmann::json error_body(std::string_view code, std::string_view message);

}  // namespace procrastimate::service
