#pragma once

// Typed publish/subscribe bus. Publishing validates the envelope and payload,
// then hands the message to every subscriber of its type while holding the bus
// lock, so all subscribers observe one global order (and therefore per-source
// FIFO). Subscribers must not call back into the bus from deliver().

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "oculus/message.hpp"

namespace oculus::bus {

inline constexpr std::uint16_t kDefaultPort = 7451;
inline constexpr const char* kBusSource = "bus";

class Subscriber {
 public:
  virtual ~Subscriber() = default;
  virtual void deliver(const BusMessage& msg) = 0;
};

/// Unbounded FIFO subscriber drained by its owner.
class Mailbox : public Subscriber {
 public:
  void deliver(const BusMessage& msg) override;

  std::optional<BusMessage> try_pop();
  /// Blocks until a message arrives or the mailbox is closed and empty.
  std::optional<BusMessage> pop();
  std::optional<BusMessage> pop_for(std::chrono::milliseconds timeout);
  void close();

  std::size_t size() const;
  std::uint64_t delivered() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<BusMessage> queue_;
  std::uint64_t delivered_ = 0;
  bool closed_ = false;
};

/// Writes every delivered message as one NDJSON line.
class LogSink : public Subscriber {
 public:
  explicit LogSink(std::ostream& out) : out_(out) {}
  void deliver(const BusMessage& msg) override;

 private:
  std::ostream& out_;
};

/// Adapter for a callable.
class CallbackSubscriber : public Subscriber {
 public:
  explicit CallbackSubscriber(std::function<void(const BusMessage&)> fn) : fn_(std::move(fn)) {}
  void deliver(const BusMessage& msg) override { fn_(msg); }

 private:
  std::function<void(const BusMessage&)> fn_;
};

struct PublishResult {
  std::size_t delivered = 0;
  std::optional<BusMessage> error;  // ERROR reply when rejected
  bool ok() const noexcept { return !error; }
};

using Clock = std::function<std::int64_t()>;

/// Wall clock in milliseconds since the epoch.
std::int64_t system_clock_ms();

class Bus {
 public:
  explicit Bus(Clock clock = system_clock_ms);

  Bus(const Bus&) = delete;
  Bus& operator=(const Bus&) = delete;

  void subscribe(MessageType type, std::shared_ptr<Subscriber> sub);
  void subscribe_all(std::shared_ptr<Subscriber> sub);
  void unsubscribe(const std::shared_ptr<Subscriber>& sub);

  /// Receives a copy of every rejection reply (e.g. the session log).
  void subscribe_rejections(std::shared_ptr<Subscriber> sub);

  /// REGISTER messages register their source (rejected if already taken).
  /// Anything else needs a registered source and a seq above the last one
  /// seen from it. Rejections are answered with an ERROR reply from source
  /// "bus"; it goes back to the caller and to rejection subscribers only.
  PublishResult publish(const BusMessage& msg);

  void unregister_source(const std::string& name);
  bool is_registered(const std::string& name) const;

  std::int64_t now_ms() const { return clock_(); }

 private:
  BusMessage reject(const BusMessage& msg, std::string reason);
  std::size_t deliver(const BusMessage& msg);

  Clock clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::uint64_t, std::less<>> last_seq_;
  std::map<MessageType, std::vector<std::shared_ptr<Subscriber>>> subs_;
  std::vector<std::shared_ptr<Subscriber>> rejection_subs_;
  std::uint64_t own_seq_ = 0;
};

/// A named source on the bus: registers on construction (REGISTER, seq 0)
/// and stamps seq and timestamp on everything it publishes.
class Publisher {
 public:
  Publisher(Bus& bus, std::string source, nlohmann::json register_payload = nlohmann::json::object());
  ~Publisher();
  Publisher(const Publisher&) = delete;
  Publisher& operator=(const Publisher&) = delete;

  const std::string& source() const noexcept { return source_; }
  PublishResult publish(MessageType type, nlohmann::json payload);
  Bus& bus() noexcept { return bus_; }

 private:
  Bus& bus_;
  std::string source_;
  std::mutex mu_;
  std::uint64_t seq_ = 0;
};

}  // namespace oculus::bus
