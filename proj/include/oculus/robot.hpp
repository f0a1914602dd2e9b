#pragma once

// Simulated eye robots. Each robot owns its state and consumes its own
// mailbox strictly in order, so its state only ever changes by sequential
// composition of the events it received.

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "oculus/bus.hpp"
#include "oculus/intent.hpp"
#include "oculus/kinematics.hpp"

namespace oculus::bus {

inline constexpr std::int64_t kDefaultMovementMs = 800;
inline constexpr int kDefaultRobotCount = 5;

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;
};

struct RobotInstance {
  int id = 1;
  bool mobile = false;
  Position position;
  MentalityState state;
  std::shared_ptr<const IntentConfig> config;
};

struct RecommendationOutcome {
  StateDelta delta;
  MentalityState state;
  kinematics::ExpressionMovement movement;
};

/// Runs inference into robot.state and emits STATE.UPDATE then
/// POSE.COMMAND through `out`. Inference failures are reported as an ERROR
/// message and leave the state untouched (returns nullopt).
std::optional<RecommendationOutcome> robot_on_recommendation(
    RobotInstance& robot, const RecommendationEvent& ev, Publisher& out,
    std::int64_t movement_ms = kDefaultMovementMs);

std::string robot_source_name(int id);

class Robot {
 public:
  Robot(Bus& bus, RobotInstance instance, std::int64_t movement_ms = kDefaultMovementMs);
  ~Robot();

  Robot(const Robot&) = delete;
  Robot& operator=(const Robot&) = delete;

  int id() const noexcept { return id_; }
  RobotInstance snapshot() const;
  /// Only the mobile robot moves; throws ConfigError otherwise.
  void set_position(Position p);

  /// Drain the mailbox on the calling thread. Do not mix with start().
  std::size_t pump();
  /// Consume the mailbox on a dedicated worker thread.
  void start();
  void stop();
  bool idle() const;

 private:
  void handle(const BusMessage& msg);

  Bus& bus_;
  int id_;
  std::int64_t movement_ms_;
  Publisher out_;
  std::shared_ptr<Mailbox> inbox_;
  mutable std::mutex state_mu_;
  RobotInstance instance_;
  std::mutex consume_mu_;
  std::atomic<std::uint64_t> processed_{0};
  std::jthread worker_;
};

struct FleetOptions {
  int robot_count = kDefaultRobotCount;
  std::int64_t movement_ms = kDefaultMovementMs;
};

/// robot_count robots with ids 1..N; the highest id is the single mobile one.
class Fleet {
 public:
  Fleet(Bus& bus, std::shared_ptr<const IntentConfig> config, FleetOptions options = {});
  ~Fleet();

  std::size_t size() const noexcept { return robots_.size(); }
  Robot& robot(int id);
  std::vector<RobotInstance> snapshot() const;

  void start();
  void stop();
  /// Synchronous mode: process queued events until every mailbox is empty.
  std::size_t pump();
  bool wait_idle(std::chrono::milliseconds timeout) const;

 private:
  std::vector<std::unique_ptr<Robot>> robots_;
};

}  // namespace oculus::bus
