#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "oculus/error.hpp"
#include "oculus/net.hpp"

namespace oculus::net {

namespace {

constexpr std::size_t kMaxLine = 1 << 20;

bool write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

sockaddr_in make_address(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw EnvironmentError("not an IPv4 address: " + host);
  }
  return addr;
}

}  // namespace

struct TcpServer::Connection {
  int fd = -1;
  std::shared_ptr<bus::Mailbox> outbox = std::make_shared<bus::Mailbox>();
  std::string source;  // set by a successful REGISTER
  std::atomic<bool> done{false};
  std::jthread writer;
  std::jthread reader;
};

TcpServer::TcpServer(bus::Bus& bus, std::uint16_t port, const std::string& host) : bus_(bus) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw EnvironmentError(std::string("socket: ") + std::strerror(errno));
  int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr = make_address(host, port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    throw EnvironmentError("cannot listen on " + host + ":" + std::to_string(port) + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  acceptor_ = std::jthread([this](std::stop_token stop) { accept_loop(stop); });
}

TcpServer::~TcpServer() { stop(); }

void TcpServer::stop() {
  if (acceptor_.joinable()) {
    acceptor_.request_stop();
    acceptor_.join();
  }
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  std::vector<std::unique_ptr<Connection>> conns;
  {
    std::lock_guard lock(mu_);
    conns.swap(connections_);
  }
  for (auto& c : conns) {
    ::shutdown(c->fd, SHUT_RDWR);
    c->outbox->close();
    if (c->reader.joinable()) c->reader.join();
    if (c->writer.joinable()) c->writer.join();
    ::close(c->fd);
  }
}

void TcpServer::reap() {
  std::lock_guard lock(mu_);
  std::erase_if(connections_, [](const std::unique_ptr<Connection>& c) {
    if (!c->done) return false;
    c->reader.join();
    c->writer.join();
    ::close(c->fd);
    return true;
  });
}

void TcpServer::accept_loop(std::stop_token stop) {
  while (!stop.stop_requested()) {
    pollfd p{listen_fd_, POLLIN, 0};
    if (::poll(&p, 1, 100) <= 0) {
      reap();
      continue;
    }
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    auto conn = std::make_unique<Connection>();
    conn->fd = fd;
    Connection* c = conn.get();
    bus_.subscribe_all(c->outbox);
    c->writer = std::jthread([c] {
      while (auto msg = c->outbox->pop()) {
        if (!write_all(c->fd, msg->to_line() + "\n")) break;
      }
      ::shutdown(c->fd, SHUT_RDWR);
    });
    c->reader = std::jthread([this, c] { serve(*c); });
    std::lock_guard lock(mu_);
    connections_.push_back(std::move(conn));
  }
}

void TcpServer::serve(Connection& conn) {
  std::string buffer;
  char chunk[4096];
  auto handle_line = [&](std::string_view line) {
    if (line.empty()) return;
    bus::BusMessage msg;
    try {
      msg = bus::BusMessage::from_line(line);
    } catch (const ProtocolError& e) {
      conn.outbox->deliver({bus::MessageType::error, bus::kBusSource, 0, bus_.now_ms(),
                            bus::error_payload(e.what())});
      return;
    }
    if (msg.type != bus::MessageType::register_source && msg.source != conn.source) {
      conn.outbox->deliver({bus::MessageType::error, bus::kBusSource, 0, bus_.now_ms(),
                            bus::error_payload("unregistered source: " + msg.source, &msg)});
      return;
    }
    if (msg.type == bus::MessageType::register_source && !conn.source.empty()) {
      conn.outbox->deliver({bus::MessageType::error, bus::kBusSource, 0, bus_.now_ms(),
                            bus::error_payload("connection already registered as " + conn.source, &msg)});
      return;
    }
    bus::PublishResult r = bus_.publish(msg);
    if (!r.ok()) {
      conn.outbox->deliver(*r.error);
    } else if (msg.type == bus::MessageType::register_source) {
      conn.source = msg.source;
    }
  };
  while (true) {
    const ssize_t n = ::recv(conn.fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (std::size_t nl; (nl = buffer.find('\n', start)) != std::string::npos; start = nl + 1) {
      std::string_view line(buffer.data() + start, nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      handle_line(line);
    }
    buffer.erase(0, start);
    if (buffer.size() > kMaxLine) break;
  }
  bus_.unsubscribe(conn.outbox);
  if (!conn.source.empty()) bus_.unregister_source(conn.source);
  conn.outbox->close();
  conn.done = true;
}

TcpClient::TcpClient(const std::string& host, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw EnvironmentError(std::string("socket: ") + std::strerror(errno));
  sockaddr_in addr = make_address(host, port);
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    const std::string why = std::strerror(errno);
    ::close(fd_);
    throw EnvironmentError("cannot connect to " + host + ":" + std::to_string(port) + ": " + why);
  }
}

TcpClient::~TcpClient() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpClient::send_line(std::string_view line) {
  std::string data(line);
  data += '\n';
  if (!write_all(fd_, data)) throw EnvironmentError("connection closed while sending");
}

std::optional<std::string> TcpClient::receive_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd p{fd_, POLLIN, 0};
    if (::poll(&p, 1, static_cast<int>(left.count())) <= 0) return std::nullopt;
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n <= 0) return std::nullopt;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::optional<bus::BusMessage> TcpClient::receive(std::chrono::milliseconds timeout) {
  auto line = receive_line(timeout);
  if (!line) return std::nullopt;
  return bus::BusMessage::from_line(*line);
}

}  // namespace oculus::net
