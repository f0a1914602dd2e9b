#pragma once

// Network transports for the bus. The TCP endpoint speaks newline-delimited
// JSON, one BusMessage per line in both directions: every connection receives
// all bus traffic plus direct ERROR replies to its own rejected lines. The
// HTTP bridge carries the same lines for browser clients.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "oculus/bus.hpp"

namespace httplib {
class Server;
}

namespace oculus::net {

class TcpServer {
 public:
  /// Binds and starts accepting. Port 0 picks an ephemeral port. Throws
  /// EnvironmentError when the port is taken.
  TcpServer(bus::Bus& bus, std::uint16_t port, const std::string& host = "127.0.0.1");
  ~TcpServer();

  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  void stop();

 private:
  struct Connection;

  void accept_loop(std::stop_token stop);
  void serve(Connection& conn);
  void reap();

  bus::Bus& bus_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::mutex mu_;
  std::vector<std::unique_ptr<Connection>> connections_;
  std::jthread acceptor_;
};

class TcpClient {
 public:
  /// Throws EnvironmentError when nothing listens there.
  TcpClient(const std::string& host, std::uint16_t port);
  ~TcpClient();

  TcpClient(const TcpClient&) = delete;
  TcpClient& operator=(const TcpClient&) = delete;

  void send_line(std::string_view line);
  void send(const bus::BusMessage& msg) { send_line(msg.to_line()); }

  /// Next line, or nullopt on timeout or closed connection.
  std::optional<std::string> receive_line(std::chrono::milliseconds timeout);
  std::optional<bus::BusMessage> receive(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
  std::string buffer_;
};

/// HTTP companion endpoint:
///   POST /publish   body: NDJSON messages; reply: one NDJSON line per input,
///                   {"delivered": n} or the ERROR message
///   GET  /stream    chunked NDJSON of all bus traffic (?max=N to stop after N)
///   GET  /health
class HttpBridge {
 public:
  HttpBridge(bus::Bus& bus, std::uint16_t port, const std::string& host = "127.0.0.1");
  ~HttpBridge();

  HttpBridge(const HttpBridge&) = delete;
  HttpBridge& operator=(const HttpBridge&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  void stop();

 private:
  bus::Bus& bus_;
  std::unique_ptr<httplib::Server> server_;
  std::uint16_t port_ = 0;
  std::thread thread_;
};

}  // namespace oculus::net
