#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include "procrastimate/service/api_router.hpp"
#include "procrastimate/service/session_service.hpp"

namespace procrastimate::service {

struct ServerConfig {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8080;  // 0 picks a free port
};

// Thread-per-connection HTTP/1.1 server for ApiRouter plus the WebSocket
// endpoint /api/sessions/{id}/events. The first frame on a socket is
// {"type": "view", "view"}; each accepted action then pushes an "update".
class HttpServer {
 public:
  HttpServer(SessionService& service, ServerConfig config);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and starts accepting in the background; returns the bound port.
  std::uint16_t start();
  // Closes the listener and every open connection, then waits for them.
  void stop();

  std::uint16_t port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::uint16_t port_ = 0;
};

}  // namespace procrastimate::service
