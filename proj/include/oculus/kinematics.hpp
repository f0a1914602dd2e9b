#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "oculus/mentality.hpp"

namespace oculus::kinematics {

inline constexpr double kYawLimitDeg = 30.0;
inline constexpr double kPitchLimitDeg = 20.0;

/// 5-DOF eye pose: two lid apertures (0 closed, 1 open), independent left and
/// right yaw, one shared pitch. Angles in degrees.
struct EyePose {
  double lid_left = 0.5;
  double lid_right = 0.5;
  double yaw_left = 0.0;
  double yaw_right = 0.0;
  double pitch = 0.0;

  bool within_limits() const noexcept;
  friend bool operator==(const EyePose&, const EyePose&) = default;
};

struct Keyframe {
  std::int64_t time_ms;
  EyePose pose;
  friend bool operator==(const Keyframe&, const Keyframe&) = default;
};

/// Timed keyframes. Times start at 0 and strictly increase; every pose is
/// within joint limits; duration is the last keyframe time. Throws RangeError.
class ExpressionMovement {
 public:
  explicit ExpressionMovement(std::vector<Keyframe> keyframes);

  const std::vector<Keyframe>& keyframes() const noexcept { return keyframes_; }
  std::int64_t duration_ms() const noexcept { return keyframes_.back().time_ms; }

  friend bool operator==(const ExpressionMovement&, const ExpressionMovement&) = default;

 private:
  std::vector<Keyframe> keyframes_;
};

// Lids open with arousal (-200 closed, +200 open), pitch follows pleasure
// (+200 looks 20 deg up), yaws rest at 0.
EyePose pose_from_state(const MentalityState& s) noexcept;

inline double smoothstep(double t) noexcept { return t * t * (3.0 - 2.0 * t); }

inline constexpr std::int64_t kMinMovementMs = 100;
inline constexpr double kDefaultKeyframeRateHz = 10.0;

/// Smoothstep interpolation in state space, mapped through pose_from_state.
/// Keyframes are evenly spaced at roughly `rate_hz` (at least 3 of them).
/// Throws RangeError when duration_ms < 100 or rate_hz is not positive.
ExpressionMovement movement_between(const MentalityState& from, const MentalityState& to,
                                    std::int64_t duration_ms,
                                    double rate_hz = kDefaultKeyframeRateHz);

struct BlinkPolicy {
  double base_interval_ms = 4000.0;
  double arousal_gain = 8.0;  // ms of interval removed per unit of arousal
  double blink_duration_ms = 150.0;

  /// base - gain * arousal, floored so that jittered intervals (-20%) never
  /// drop below the blink duration.
  double mean_interval_ms(double arousal) const noexcept;
};

inline constexpr double kBlinkJitter = 0.2;

/// Blink onset times in [0, horizon_ms), each interval jittered uniformly by
/// +-20% around the arousal-dependent mean. Deterministic per seed.
std::vector<double> blink_times(const BlinkPolicy& policy, const MentalityState& s,
                                std::int64_t horizon_ms, std::uint64_t seed);

/// time_ms,lid_left,lid_right,yaw_left,yaw_right,pitch
void write_csv(std::ostream& os, const ExpressionMovement& movement);

}  // namespace oculus::kinematics
