#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

namespace oculus {

inline constexpr double kStateLimit = 200.0;
inline constexpr double kDeltaLimit = 50.0;

/// Position in the pleasure-arousal(-affinity) space. Every coordinate lies in
/// [-200, 200]; construction rejects anything else with RangeError.
class MentalityState {
 public:
  constexpr MentalityState() = default;
  MentalityState(double pleasure, double arousal, double affinity = 0.0);

  double pleasure() const noexcept { return pleasure_; }
  double arousal() const noexcept { return arousal_; }
  // Carried through updates; never evolved here.
  double affinity() const noexcept { return affinity_; }

  static bool in_bounds(double v) noexcept { return v >= -kStateLimit && v <= kStateLimit; }

  friend bool operator==(const MentalityState&, const MentalityState&) = default;

 private:
  double pleasure_ = 0.0;
  double arousal_ = 0.0;
  double affinity_ = 0.0;
};

/// Bounded change of state produced by inference, each axis in [-50, 50].
class StateDelta {
 public:
  constexpr StateDelta() = default;
  StateDelta(double pleasure, double arousal);

  double pleasure() const noexcept { return pleasure_; }
  double arousal() const noexcept { return arousal_; }

  static bool in_bounds(double v) noexcept { return v >= -kDeltaLimit && v <= kDeltaLimit; }

  friend bool operator==(const StateDelta&, const StateDelta&) = default;

 private:
  double pleasure_ = 0.0;
  double arousal_ = 0.0;
};

/// Saturating per-axis update; affinity unchanged.
MentalityState apply_delta(const MentalityState& s, const StateDelta& d) noexcept;

inline constexpr std::size_t kGridSize = 20;
inline constexpr std::array<double, 5> kGridPleasure{-200, -100, 0, 100, 200};
inline constexpr std::array<double, 4> kGridArousal{-150, -50, 50, 150};

struct StateGrid {
  std::array<MentalityState, kGridSize> states;
  std::array<std::string, kGridSize> labels;
};

/// The fixed 5 (pleasure) x 4 (arousal) evaluation grid, row-major by pleasure.
const StateGrid& grid_states();

/// Position of `s` in grid_states(), if it is one of the grid states.
std::optional<std::size_t> grid_index(const MentalityState& s) noexcept;

}  // namespace oculus
