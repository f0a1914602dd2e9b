#include <httplib.h>

#include <sstream>

#include "oculus/error.hpp"
#include "oculus/net.hpp"

namespace oculus::net {

HttpBridge::HttpBridge(bus::Bus& bus, std::uint16_t port, const std::string& host)
    : bus_(bus), server_(std::make_unique<httplib::Server>()) {
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"}});

  server_->Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok\n", "text/plain");
  });

  server_->Post("/publish", [this](const httplib::Request& req, httplib::Response& res) {
    std::istringstream body(req.body);
    std::ostringstream reply;
    std::string line;
    while (std::getline(body, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      try {
        bus::PublishResult r = bus_.publish(bus::BusMessage::from_line(line));
        if (r.ok()) {
          reply << nlohmann::json{{"delivered", r.delivered}}.dump() << '\n';
        } else {
          reply << r.error->to_line() << '\n';
        }
      } catch (const ProtocolError& e) {
        bus::BusMessage err{bus::MessageType::error, bus::kBusSource, 0, bus_.now_ms(),
                            bus::error_payload(e.what())};
        reply << err.to_line() << '\n';
      }
    }
    res.set_content(reply.str(), "application/x-ndjson");
  });

  server_->Get("/stream", [this](const httplib::Request& req, httplib::Response& res) {
    auto box = std::make_shared<bus::Mailbox>();
    bus_.subscribe_all(box);
    const long max = req.has_param("max") ? std::stol(req.get_param_value("max")) : -1;
    auto sent = std::make_shared<long>(0);
    res.set_chunked_content_provider(
        "application/x-ndjson",
        [box, max, sent](std::size_t, httplib::DataSink& sink) {
          if (max >= 0 && *sent >= max) {
            sink.done();
            return true;
          }
          auto msg = box->pop_for(std::chrono::milliseconds(200));
          if (!msg) return sink.is_writable();
          const std::string line = msg->to_line() + "\n";
          ++*sent;
          return sink.write(line.data(), line.size());
        },
        [this, box](bool) {
          bus_.unsubscribe(box);
          box->close();
        });
  });

  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw EnvironmentError("cannot bind HTTP bridge on " + host);
    port_ = static_cast<std::uint16_t>(p);
  } else {
    if (!server_->bind_to_port(host, port)) {
      throw EnvironmentError("cannot listen on " + host + ":" + std::to_string(port) +
                             " (HTTP bridge)");
    }
    port_ = port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

HttpBridge::~HttpBridge() { stop(); }

void HttpBridge::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace oculus::net
