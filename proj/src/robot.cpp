#include "oculus/robot.hpp"

#include "oculus/error.hpp"

namespace oculus::bus {

std::string robot_source_name(int id) { return "robot-" + std::to_string(id); }

std::optional<RecommendationOutcome> robot_on_recommendation(RobotInstance& robot,
                                                             const RecommendationEvent& ev,
                                                             Publisher& out,
                                                             std::int64_t movement_ms) {
  const MentalityState before = robot.state;
  StateDelta delta;
  try {
    delta = compute_delta(before, ev, *robot.config);
  } catch (const std::exception& e) {
    out.publish(MessageType::error, error_payload(std::string("inference failed: ") + e.what()));
    return std::nullopt;
  }
  const MentalityState after = apply_delta(before, delta);
  auto movement = kinematics::movement_between(before, after, movement_ms);
  robot.state = after;
  out.publish(MessageType::state_update, state_update_payload(robot.id, before, after, delta));
  out.publish(MessageType::pose_command, pose_command_payload(robot.id, movement));
  return RecommendationOutcome{delta, after, std::move(movement)};
}

Robot::Robot(Bus& bus, RobotInstance instance, std::int64_t movement_ms)
    : bus_(bus),
      id_(instance.id),
      movement_ms_(movement_ms),
      out_(bus, robot_source_name(instance.id),
           {{"robot_id", instance.id}, {"mobile", instance.mobile}}),
      inbox_(std::make_shared<Mailbox>()),
      instance_(std::move(instance)) {
  if (!instance_.config) throw ConfigError("robot needs an intent config");
  bus_.subscribe(MessageType::recommendation, inbox_);
  bus_.subscribe(MessageType::speech_category, inbox_);
}

Robot::~Robot() {
  stop();
  bus_.unsubscribe(inbox_);
}

RobotInstance Robot::snapshot() const {
  std::lock_guard lock(state_mu_);
  return instance_;
}

void Robot::set_position(Position p) {
  std::lock_guard lock(state_mu_);
  if (!instance_.mobile) throw ConfigError("robot " + std::to_string(id_) + " is stationary");
  instance_.position = p;
}

void Robot::handle(const BusMessage& msg) {
  if (msg.type == MessageType::recommendation) {
    RecommendationEvent ev = read_recommendation(msg);
    RobotInstance work = snapshot();
    if (robot_on_recommendation(work, ev, out_, movement_ms_)) {
      std::lock_guard lock(state_mu_);
      instance_.state = work.state;
    }
  } else if (msg.type == MessageType::speech_category) {
    // Speech categories only move the state when a speech rule base is configured.
    RobotInstance work = snapshot();
    if (!work.config->speech_rulebase()) return;
    const StateDelta d = compute_speech_delta(work.state, read_speech(msg), *work.config);
    const MentalityState after = apply_delta(work.state, d);
    auto movement = kinematics::movement_between(work.state, after, movement_ms_);
    {
      std::lock_guard lock(state_mu_);
      instance_.state = after;
    }
    out_.publish(MessageType::state_update, state_update_payload(id_, work.state, after, d));
    out_.publish(MessageType::pose_command, pose_command_payload(id_, movement));
  }
}

std::size_t Robot::pump() {
  std::lock_guard lock(consume_mu_);
  std::size_t n = 0;
  while (auto msg = inbox_->try_pop()) {
    handle(*msg);
    ++processed_;
    ++n;
  }
  return n;
}

void Robot::start() {
  if (worker_.joinable()) return;
  worker_ = std::jthread([this](std::stop_token stop) {
    while (!stop.stop_requested()) {
      auto msg = inbox_->pop_for(std::chrono::milliseconds(50));
      if (!msg) continue;
      std::lock_guard lock(consume_mu_);
      handle(*msg);
      ++processed_;
    }
  });
}

void Robot::stop() {
  if (!worker_.joinable()) return;
  worker_.request_stop();
  worker_.join();
  worker_ = std::jthread();
}

bool Robot::idle() const { return processed_.load() == inbox_->delivered(); }

Fleet::Fleet(Bus& bus, std::shared_ptr<const IntentConfig> config, FleetOptions options) {
  if (options.robot_count < 1) throw ConfigError("fleet needs at least one robot");
  for (int id = 1; id <= options.robot_count; ++id) {
    RobotInstance inst;
    inst.id = id;
    inst.mobile = id == options.robot_count;
    // Stationary robots sit in a row on the desk; the mobile one starts in front.
    inst.position = inst.mobile ? Position{0.0, 1.0} : Position{0.3 * (id - 1), 0.0};
    inst.config = config;
    robots_.push_back(std::make_unique<Robot>(bus, std::move(inst), options.movement_ms));
  }
}

Fleet::~Fleet() { stop(); }

Robot& Fleet::robot(int id) {
  if (id < 1 || id > static_cast<int>(robots_.size())) {
    throw RangeError("no robot with id " + std::to_string(id));
  }
  return *robots_[static_cast<std::size_t>(id - 1)];
}

std::vector<RobotInstance> Fleet::snapshot() const {
  std::vector<RobotInstance> out;
  for (const auto& r : robots_) out.push_back(r->snapshot());
  return out;
}

void Fleet::start() {
  for (auto& r : robots_) r->start();
}

void Fleet::stop() {
  for (auto& r : robots_) r->stop();
}

std::size_t Fleet::pump() {
  std::size_t total = 0;
  while (true) {
    std::size_t n = 0;
    for (auto& r : robots_) n += r->pump();
    total += n;
    if (n == 0) return total;
  }
}

bool Fleet::wait_idle(std::chrono::milliseconds timeout) const {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (std::chrono::steady_clock::now() < deadline) {
    bool idle = true;
    for (const auto& r : robots_) idle = idle && r->idle();
    if (idle) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  return false;
}

}  // namespace oculus::bus
