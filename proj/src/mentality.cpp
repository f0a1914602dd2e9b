#include "oculus/mentality.hpp"

#include <algorithm>
#include <cmath>

#include "oculus/error.hpp"

namespace oculus {

namespace {

void check_coordinate(double v, const char* axis) {
  if (!MentalityState::in_bounds(v)) {
    throw RangeError(std::string("state coordinate ") + axis + " out of [-200, 200]: " +
                     std::to_string(v));
  }
}

StateGrid build_grid() {
  static constexpr std::array<const char*, 5> kPleasureNames{
      "very-displeased", "displeased", "neutral", "pleased", "very-pleased"};
  static constexpr std::array<const char*, 4> kArousalNames{"sleepy", "calm", "alert", "excited"};
  StateGrid grid;
  std::size_t k = 0;
  for (std::size_t i = 0; i < kGridPleasure.size(); ++i) {
    for (std::size_t j = 0; j < kGridArousal.size(); ++j, ++k) {
      grid.states[k] = MentalityState(kGridPleasure[i], kGridArousal[j]);
      grid.labels[k] = std::string(kPleasureNames[i]) + "/" + kArousalNames[j];
    }
  }
  return grid;
}

}  // namespace

MentalityState::MentalityState(double pleasure, double arousal, double affinity)
    : pleasure_(pleasure), arousal_(arousal), affinity_(affinity) {
  check_coordinate(pleasure, "pleasure");
  check_coordinate(arousal, "arousal");
  check_coordinate(affinity, "affinity");
}

StateDelta::StateDelta(double pleasure, double arousal) : pleasure_(pleasure), arousal_(arousal) {
  if (!in_bounds(pleasure) || !in_bounds(arousal)) {
    throw RangeError("state delta out of [-50, 50]: (" + std::to_string(pleasure) + ", " +
                     std::to_string(arousal) + ")");
  }
}

MentalityState apply_delta(const MentalityState& s, const StateDelta& d) noexcept {
  return MentalityState(std::clamp(s.pleasure() + d.pleasure(), -kStateLimit, kStateLimit),
                        std::clamp(s.arousal() + d.arousal(), -kStateLimit, kStateLimit),
                        s.affinity());
}

const StateGrid& grid_states() {
  static const StateGrid grid = build_grid();
  return grid;
}

std::optional<std::size_t> grid_index(const MentalityState& s) noexcept {
  const auto& states = grid_states().states;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].pleasure() == s.pleasure() && states[k].arousal() == s.arousal()) return k;
  }
  return std::nullopt;
}

}  // namespace oculus
