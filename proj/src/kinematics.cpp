#include "oculus/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "oculus/error.hpp"
#include "oculus/random.hpp"

namespace oculus::kinematics {

namespace {

bool unit(double v) { return v >= 0.0 && v <= 1.0; }

double lerp(double a, double b, double t) { return a + (b - a) * t; }

}  // namespace

bool EyePose::within_limits() const noexcept {
  return unit(lid_left) && unit(lid_right) && std::abs(yaw_left) <= kYawLimitDeg &&
         std::abs(yaw_right) <= kYawLimitDeg && std::abs(pitch) <= kPitchLimitDeg;
}

ExpressionMovement::ExpressionMovement(std::vector<Keyframe> keyframes)
    : keyframes_(std::move(keyframes)) {
  if (keyframes_.empty()) throw RangeError("movement has no keyframes");
  if (keyframes_.front().time_ms != 0) throw RangeError("movement must start at t = 0");
  for (std::size_t i = 0; i < keyframes_.size(); ++i) {
    if (i > 0 && keyframes_[i].time_ms <= keyframes_[i - 1].time_ms) {
      throw RangeError("keyframe times must strictly increase");
    }
    if (!keyframes_[i].pose.within_limits()) throw RangeError("keyframe pose outside joint limits");
  }
}

EyePose pose_from_state(const MentalityState& s) noexcept {
  const double lid = std::clamp(0.5 + s.arousal() / (2.0 * kStateLimit), 0.0, 1.0);
  const double pitch =
      std::clamp(kPitchLimitDeg * s.pleasure() / kStateLimit, -kPitchLimitDeg, kPitchLimitDeg);
  return EyePose{lid, lid, 0.0, 0.0, pitch};
}

ExpressionMovement movement_between(const MentalityState& from, const MentalityState& to,
                                    std::int64_t duration_ms, double rate_hz) {
  if (duration_ms < kMinMovementMs) {
    throw RangeError("movement duration must be at least 100 ms");
  }
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw RangeError("keyframe rate must be positive");
  const double wanted = std::ceil(static_cast<double>(duration_ms) * rate_hz / 1000.0 - 1e-9);
  const auto intervals = static_cast<std::int64_t>(
      std::clamp(wanted, 2.0, static_cast<double>(duration_ms)));

  std::vector<Keyframe> frames;
  frames.reserve(static_cast<std::size_t>(intervals) + 1);
  for (std::int64_t k = 0; k <= intervals; ++k) {
    // Integer arithmetic keeps the times exact and strictly increasing.
    const std::int64_t t = k * duration_ms / intervals;
    EyePose pose;
    if (k == 0) {
      pose = pose_from_state(from);
    } else if (k == intervals) {
      pose = pose_from_state(to);
    } else {
      const double u = smoothstep(static_cast<double>(t) / static_cast<double>(duration_ms));
      const MentalityState mid(std::clamp(lerp(from.pleasure(), to.pleasure(), u), -kStateLimit, kStateLimit),
                               std::clamp(lerp(from.arousal(), to.arousal(), u), -kStateLimit, kStateLimit),
                               std::clamp(lerp(from.affinity(), to.affinity(), u), -kStateLimit, kStateLimit));
      pose = pose_from_state(mid);
    }
    frames.push_back({t, pose});
  }
  return ExpressionMovement(std::move(frames));
}

double BlinkPolicy::mean_interval_ms(double arousal) const noexcept {
  const double floor = blink_duration_ms / (1.0 - kBlinkJitter);
  return std::max(base_interval_ms - arousal_gain * arousal, floor);
}

std::vector<double> blink_times(const BlinkPolicy& policy, const MentalityState& s,
                                std::int64_t horizon_ms, std::uint64_t seed) {
  if (horizon_ms <= 0) throw RangeError("blink horizon must be positive");
  if (!(policy.blink_duration_ms > 0.0) || !(policy.base_interval_ms > 0.0) ||
      !(policy.arousal_gain >= 0.0)) {
    throw RangeError("blink policy needs positive interval and duration, nonnegative gain");
  }
  Rng rng(seed);
  const double mean = policy.mean_interval_ms(s.arousal());
  std::vector<double> times;
  double t = 0.0;
  while (true) {
    t += mean * (1.0 + rng.uniform(-kBlinkJitter, kBlinkJitter));
    if (t >= static_cast<double>(horizon_ms)) break;
    times.push_back(t);
  }
  return times;
}

void write_csv(std::ostream& os, const ExpressionMovement& movement) {
  os << "time_ms,lid_left,lid_right,yaw_left,yaw_right,pitch\n";
  const auto flags = os.flags();
  const auto precision = os.precision(10);
  for (const Keyframe& k : movement.keyframes()) {
    const EyePose& p = k.pose;
    os << k.time_ms << ',' << p.lid_left << ',' << p.lid_right << ',' << p.yaw_left << ','
       << p.yaw_right << ',' << p.pitch << '\n';
  }
  os.precision(precision);
  os.flags(flags);
}

}  // namespace oculus::kinematics
