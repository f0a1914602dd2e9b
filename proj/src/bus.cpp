#include "oculus/bus.hpp"

#include <algorithm>

#include "oculus/error.hpp"

namespace oculus::bus {

void Mailbox::deliver(const BusMessage& msg) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    queue_.push_back(msg);
    ++delivered_;
  }
  cv_.notify_one();
}

std::optional<BusMessage> Mailbox::try_pop() {
  std::lock_guard lock(mu_);
  if (queue_.empty()) return std::nullopt;
  BusMessage m = std::move(queue_.front());
  queue_.pop_front();
  return m;
}

std::optional<BusMessage> Mailbox::pop() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return closed_ || !queue_.empty(); });
  if (queue_.empty()) return std::nullopt;
  BusMessage m = std::move(queue_.front());
  queue_.pop_front();
  return m;
}

std::optional<BusMessage> Mailbox::pop_for(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || !queue_.empty(); });
  if (queue_.empty()) return std::nullopt;
  BusMessage m = std::move(queue_.front());
  queue_.pop_front();
  return m;
}

void Mailbox::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::size_t Mailbox::size() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

std::uint64_t Mailbox::delivered() const {
  std::lock_guard lock(mu_);
  return delivered_;
}

void LogSink::deliver(const BusMessage& msg) { out_ << msg.to_line() << '\n' << std::flush; }

std::int64_t system_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

Bus::Bus(Clock clock) : clock_(std::move(clock)) {}

void Bus::subscribe(MessageType type, std::shared_ptr<Subscriber> sub) {
  std::lock_guard lock(mu_);
  subs_[type].push_back(std::move(sub));
}

void Bus::subscribe_all(std::shared_ptr<Subscriber> sub) {
  std::lock_guard lock(mu_);
  for (MessageType t : kAllMessageTypes) subs_[t].push_back(sub);
}

void Bus::subscribe_rejections(std::shared_ptr<Subscriber> sub) {
  std::lock_guard lock(mu_);
  rejection_subs_.push_back(std::move(sub));
}

void Bus::unsubscribe(const std::shared_ptr<Subscriber>& sub) {
  std::lock_guard lock(mu_);
  for (auto& [type, list] : subs_) std::erase(list, sub);
  std::erase(rejection_subs_, sub);
}

void Bus::unregister_source(const std::string& name) {
  std::lock_guard lock(mu_);
  last_seq_.erase(name);
}

bool Bus::is_registered(const std::string& name) const {
  std::lock_guard lock(mu_);
  return last_seq_.contains(name);
}

std::size_t Bus::deliver(const BusMessage& msg) {
  auto it = subs_.find(msg.type);
  if (it == subs_.end()) return 0;
  for (const auto& sub : it->second) sub->deliver(msg);
  return it->second.size();
}

BusMessage Bus::reject(const BusMessage& msg, std::string reason) {
  BusMessage err{MessageType::error, kBusSource, ++own_seq_, clock_(), error_payload(reason, &msg)};
  for (const auto& sub : rejection_subs_) sub->deliver(err);
  return err;
}

PublishResult Bus::publish(const BusMessage& msg) {
  std::lock_guard lock(mu_);
  if (msg.source.empty() || msg.source == kBusSource) {
    return {0, reject(msg, "reserved or empty source name")};
  }
  if (msg.type == MessageType::register_source) {
    if (last_seq_.contains(msg.source)) return {0, reject(msg, "source already registered: " + msg.source)};
    last_seq_.emplace(msg.source, msg.seq);
    return {deliver(msg), std::nullopt};
  }
  auto it = last_seq_.find(msg.source);
  if (it == last_seq_.end()) return {0, reject(msg, "unregistered source: " + msg.source)};
  if (msg.seq <= it->second) {
    return {0, reject(msg, "seq " + std::to_string(msg.seq) + " not above last seq " +
                               std::to_string(it->second))};
  }
  if (auto why = validate_payload(msg.type, msg.payload)) return {0, reject(msg, *why)};
  it->second = msg.seq;
  return {deliver(msg), std::nullopt};
}

Publisher::Publisher(Bus& bus, std::string source, nlohmann::json register_payload)
    : bus_(bus), source_(std::move(source)) {
  BusMessage reg{MessageType::register_source, source_, 0, bus_.now_ms(), std::move(register_payload)};
  PublishResult r = bus_.publish(reg);
  if (!r.ok()) throw ConfigError(r.error->payload.value("reason", std::string("register failed")));
}

Publisher::~Publisher() { bus_.unregister_source(source_); }

PublishResult Publisher::publish(MessageType type, nlohmann::json payload) {
  std::lock_guard lock(mu_);
  BusMessage msg{type, source_, ++seq_, bus_.now_ms(), std::move(payload)};
  return bus_.publish(msg);
}

}  // namespace oculus::bus
