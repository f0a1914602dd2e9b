#include <doctest.h>

#include <future>
#include <map>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "oculus/error.hpp"
#include "oculus/net.hpp"
#include "oculus/robot.hpp"

using namespace oculus;
using namespace oculus::bus;
using namespace std::chrono_literals;
using nlohmann::json;

namespace {

BusMessage msg(MessageType t, const std::string& src, std::uint64_t seq, json payload) {
  return {t, src, seq, 0, std::move(payload)};
}

std::map<MessageType, int> collect(net::TcpClient& c, int want, std::chrono::milliseconds timeout = 5s) {
  std::map<MessageType, int> counts;
  int total = 0;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (total < want && std::chrono::steady_clock::now() < deadline) {
    if (auto m = c.receive(200ms)) {
      ++counts[m->type];
      ++total;
    }
  }
  return counts;
}

}  // namespace

TEST_CASE("TCP round trip through five robots") {
  Bus bus;
  Fleet fleet(bus, std::make_shared<const IntentConfig>(IntentConfig::defaults()));
  fleet.start();
  net::TcpServer server(bus, 0);
  REQUIRE(server.port() != 0);
  net::TcpClient client("127.0.0.1", server.port());
  client.send(msg(MessageType::register_source, "ui", 0, json::object()));
  client.send(msg(MessageType::recommendation, "ui", 1, recommendation_payload(RecommendationEvent(6, "b"))));
  const auto counts = collect(client, 12);
  CHECK(counts.at(MessageType::register_source) == 1);
  CHECK(counts.at(MessageType::recommendation) == 1);
  CHECK(counts.at(MessageType::state_update) == 5);
  CHECK(counts.at(MessageType::pose_command) == 5);
  fleet.stop();
}

TEST_CASE("TCP replies to bad lines on the same connection only") {
  Bus bus;
  net::TcpServer server(bus, 0);
  net::TcpClient bad("127.0.0.1", server.port());
  net::TcpClient bystander("127.0.0.1", server.port());
  bad.send_line("{not json");
  auto reply = bad.receive(2s);
  REQUIRE(reply.has_value());
  CHECK(reply->type == MessageType::error);

  bad.send(msg(MessageType::recommendation, "nobody", 1, recommendation_payload(RecommendationEvent(2))));
  reply = bad.receive(2s);
  REQUIRE(reply.has_value());
  CHECK(reply->payload["reason"].get<std::string>().find("unregistered source") != std::string::npos);

  bad.send(msg(MessageType::register_source, "ui", 0, json::object()));
  bad.send(msg(MessageType::recommendation, "ui", 1, json::object()));
  int errors = 0;
  while (auto m = bad.receive(500ms)) {
    if (m->type == MessageType::error) {
      ++errors;
      CHECK(m->payload["reason"] == "missing field: priority");
    }
  }
  CHECK(errors == 1);
  // The bystander sees the registration but none of the rejections.
  while (auto m = bystander.receive(300ms)) CHECK(m->type != MessageType::error);
}

TEST_CASE("a source disconnecting frees its name") {
  Bus bus;
  net::TcpServer server(bus, 0);
  {
    net::TcpClient c("127.0.0.1", server.port());
    c.send(msg(MessageType::register_source, "ui", 0, json::object()));
    c.receive(2s);
    CHECK(bus.is_registered("ui"));
  }
  for (int i = 0; i < 50 && bus.is_registered("ui"); ++i) std::this_thread::sleep_for(50ms);
  CHECK_FALSE(bus.is_registered("ui"));
}

TEST_CASE("a busy port is an environment error") {
  Bus bus;
  net::TcpServer first(bus, 0);
  CHECK_THROWS_AS(net::TcpServer(bus, first.port()), EnvironmentError);
  CHECK_THROWS_AS(net::TcpClient("127.0.0.1", 1), EnvironmentError);
}

TEST_CASE("HTTP bridge publishes and streams NDJSON") {
  Bus bus;
  Fleet fleet(bus, std::make_shared<const IntentConfig>(IntentConfig::defaults()), {2, 800});
  fleet.start();
  net::HttpBridge bridge(bus, 0);
  REQUIRE(bridge.port() != 0);

  httplib::Client http("127.0.0.1", bridge.port());
  http.set_read_timeout(10, 0);
  REQUIRE(http.Get("/health"));

  auto streamed = std::async(std::launch::async, [&] {
    httplib::Client s("127.0.0.1", bridge.port());
    s.set_read_timeout(10, 0);
    auto r = s.Get("/stream?max=6");
    return r ? r->body : std::string();
  });
  std::this_thread::sleep_for(300ms);

  std::ostringstream body;
  body << msg(MessageType::register_source, "browser", 0, json::object()).to_line() << '\n'
       << msg(MessageType::recommendation, "browser", 1, recommendation_payload(RecommendationEvent(6, "b"))).to_line()
       << '\n'
       << msg(MessageType::recommendation, "browser", 2, json::object()).to_line() << '\n';
  auto res = http.Post("/publish", body.str(), "application/x-ndjson");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
  std::istringstream lines(res->body);
  std::vector<json> replies;
  for (std::string l; std::getline(lines, l);) replies.push_back(json::parse(l));
  REQUIRE(replies.size() == 3);
  // Two robots plus the open /stream.
  CHECK(replies[1]["delivered"] == 3);
  CHECK(replies[2]["type"] == "ERROR");

  const std::string stream = streamed.get();
  std::istringstream in(stream);
  std::map<std::string, int> types;
  int n = 0;
  for (std::string l; std::getline(in, l);) {
    if (l.empty()) continue;
    ++types[BusMessage::from_line(l).type == MessageType::state_update ? "state" : "other"];
    ++n;
  }
  CHECK(n == 6);
  CHECK(types["state"] == 2);
  fleet.stop();
  bridge.stop();
}
