#include "procrastimate/service/http_server.hpp"

#include <poll.h>

#include <deque>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace procrastimate::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

struct HttpServer::Impl {
  SessionService& service;
  ApiRouter router;
  ServerConfig config;
  asio::io_context io;
  std::unique_ptr<tcp::acceptor> acceptor;
  std::thread accept_thread;
  std::atomic<bool> stopping{false};

  std::mutex mutex;
  std::condition_variable idle;
  std::set<tcp::socket*> open_sockets;
  std::size_t live_connections = 0;

  Impl(SessionService& s, ServerConfig c) : service(s), router(s), config(std::move(c)) {}

  void accept_loop();
  void serve_connection(tcp::socket socket);
  void serve_events(tcp::socket& socket, http::request<http::string_body>& request, const std::string& session_id);
};

namespace {

std::string_view sv(beast::string_view v) { return {v.data(), v.size()}; }

void add_common_headers(http::response<http::string_body>& res) {
  res.set(http::field::server, "procrastimate");
  res.set(http::field::access_control_allow_origin, "*");
  res.set(http::field::access_control_allow_headers, "Content-Type");
  res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
}

bool readable(tcp::socket& socket) {
  pollfd fd{socket.native_handle(), POLLIN, 0};
  return ::poll(&fd, 1, 0) > 0;
}

}  // namespace

void HttpServer::Impl::accept_loop() {
  while (!stopping) {
    beast::error_code ec;
    tcp::socket socket(io);
    acceptor->accept(socket, ec);
    if (ec) {
      if (stopping) break;
      continue;
    }
    {
      std::lock_guard lock(mutex);
      ++live_connections;
    }
    std::thread([this, s = std::move(socket)]() mutable { serve_connection(std::move(s)); }).detach();
  }
}

void HttpServer::Impl::serve_connection(tcp::socket socket) {
  {
    std::lock_guard lock(mutex);
    open_sockets.insert(&socket);
  }
  beast::flat_buffer buffer;
  beast::error_code ec;
  while (!stopping) {
    http::request<http::string_body> request;
    http::read(socket, buffer, request, ec);
    if (ec) break;

    if (websocket::is_upgrade(request)) {
      if (auto id = ApiRouter::events_session(sv(request.target())); id) {
        serve_events(socket, request, *id);
      }
      break;
    }

    http::response<http::string_body> res;
    res.version(request.version());
    res.keep_alive(request.keep_alive());
    add_common_headers(res);
    if (request.method() == http::verb::options) {
      res.result(http::status::no_content);
    } else {
      const auto api = router.handle(sv(request.method_string()), sv(request.target()), request.body());
      res.result(static_cast<http::status>(api.status));
      res.set(http::field::content_type, "application/json");
      res.body() = api.body.dump();
    }
    res.prepare_payload();
    http::write(socket, res, ec);
    if (ec || !res.keep_alive()) break;
  }
  socket.shutdown(tcp::socket::shutdown_both, ec);
  {
    std::lock_guard lock(mutex);
    open_sockets.erase(&socket);
    --live_connections;
  }
  idle.notify_all();
}

void HttpServer::Impl::serve_events(tcp::socket& socket, http::request<http::string_body>& request,
                                    const std::string& session_id) {
  json first;
  try {
    first = {{"type", "view"}, {"view", service.get_view(session_id)}, {"dialogue", json::array()}, {"outcome", nullptr}};
  } catch (const std::exception& e) {
    http::response<http::string_body> res{http::status::not_found, request.version()};
    add_common_headers(res);
    res.set(http::field::content_type, "application/json");
    res.body() = error_body("NOT_FOUND", e.what()).dump();
    res.prepare_payload();
    beast::error_code ec;
    http::write(socket, res, ec);
    return;
  }

  websocket::stream<tcp::socket&> ws(socket);
  beast::error_code ec;
  ws.accept(request, ec);
  if (ec) return;
  ws.text(true);

  std::mutex queue_mutex;
  std::condition_variable ready;
  std::deque<std::string> queue;
  queue.push_back(first.dump());
  const auto token = service.subscribe(session_id, [&](const json& frame) {
    {
      std::lock_guard lock(queue_mutex);
      queue.push_back(frame.dump());
    }
    ready.notify_one();
  });

  while (!stopping) {
    std::deque<std::string> pending;
    {
      std::unique_lock lock(queue_mutex);
      ready.wait_for(lock, std::chrono::milliseconds(100), [&] { return !queue.empty() || stopping; });
      pending.swap(queue);
    }
    for (const auto& frame : pending) {
      ws.write(asio::buffer(frame), ec);
      if (ec) break;
    }
    if (ec) break;
    // Client frames are only read to notice a close; their content is ignored.
    if (readable(socket)) {
      beast::flat_buffer incoming;
      ws.read(incoming, ec);
      if (ec) break;
    }
  }
  service.unsubscribe(token);
  if (!ec && ws.is_open()) ws.close(websocket::close_code::going_away, ec);
}

HttpServer::HttpServer(SessionService& service, ServerConfig config)
    : impl_(std::make_unique<Impl>(service, std::move(config))) {}

HttpServer::~HttpServer() { stop(); }

std::uint16_t HttpServer::start() {
  const auto endpoint = tcp::endpoint(asio::ip::make_address(impl_->config.address), impl_->config.port);
  impl_->acceptor = std::make_unique<tcp::acceptor>(impl_->io);
  impl_->acceptor->open(endpoint.protocol());
  impl_->acceptor->set_option(asio::socket_base::reuse_address(true));
  impl_->acceptor->bind(endpoint);
  impl_->acceptor->listen();
  port_ = impl_->acceptor->local_endpoint().port();
  impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
  return port_;
}

void HttpServer::stop() {
  if (!impl_ || !impl_->acceptor || impl_->stopping.exchange(true)) return;
  beast::error_code ec;
  // Unblocks accept() on Linux; close() alone does not.
  ::shutdown(impl_->acceptor->native_handle(), SHUT_RDWR);
  impl_->acceptor->close(ec);
  if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
  std::unique_lock lock(impl_->mutex);
  for (tcp::socket* socket : impl_->open_sockets) ::shutdown(socket->native_handle(), SHUT_RDWR);
  impl_->idle.wait(lock, [&] { return impl_->live_connections == 0; });
}

}  // namespace procrastimate::service
