#include <doctest.h>

#include <set>
#include <utility>

#include "oculus/error.hpp"
#include "oculus/mentality.hpp"
#include "oculus/random.hpp"

using namespace oculus;

TEST_CASE("apply_delta examples") {
  CHECK(apply_delta({0, 0}, {0, 0}) == MentalityState(0, 0));
  CHECK(apply_delta({180, 190}, {50, 50}) == MentalityState(200, 200));
  CHECK(apply_delta({-175, 30}, {-50, 12}) == MentalityState(-200, 42));
}

TEST_CASE("affinity is carried unchanged") {
  const MentalityState s(10, 20, -77);
  CHECK(apply_delta(s, {5, -5}).affinity() == -77);
}

TEST_CASE("out-of-range construction throws") {
  CHECK_THROWS_AS(MentalityState(200.5, 0), RangeError);
  CHECK_THROWS_AS(MentalityState(0, -201), RangeError);
  CHECK_THROWS_AS(MentalityState(0, 0, 300), RangeError);
  CHECK_THROWS_AS(StateDelta(50.01, 0), RangeError);
  CHECK_THROWS_AS(StateDelta(0, -60), RangeError);
  CHECK_NOTHROW(MentalityState(-200, 200));
  CHECK_NOTHROW(StateDelta(-50, 50));
}

TEST_CASE("apply_delta stays in bounds and saturates per axis") {
  Rng rng(2024);
  for (int i = 0; i < 100000; ++i) {
    const MentalityState s(rng.uniform(-200, 200), rng.uniform(-200, 200));
    const StateDelta d(rng.uniform(-50, 50), rng.uniform(-50, 50));
    const MentalityState t = apply_delta(s, d);
    REQUIRE(MentalityState::in_bounds(t.pleasure()));
    REQUIRE(MentalityState::in_bounds(t.arousal()));
    const double raw_pl = s.pleasure() + d.pleasure();
    if (MentalityState::in_bounds(raw_pl)) REQUIRE(t.pleasure() == raw_pl);
    else REQUIRE(t.pleasure() == (raw_pl > 0 ? 200.0 : -200.0));
  }
}

TEST_CASE("grid has 20 distinct in-bounds states") {
  const auto& g = grid_states();
  CHECK(g.states.size() == 20);
  CHECK(g.states[0] == MentalityState(-200, -150));
  CHECK(g.states[1] == MentalityState(-200, -50));
  CHECK(g.states[19] == MentalityState(200, 150));
  std::set<std::pair<double, double>> seen;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const auto& s = g.states[i];
    CHECK(MentalityState::in_bounds(s.pleasure()));
    CHECK(MentalityState::in_bounds(s.arousal()));
    seen.emplace(s.pleasure(), s.arousal());
    labels.insert(g.labels[i]);
    CHECK(grid_index(s) == i);
  }
  CHECK(seen.size() == 20);
  CHECK(labels.size() == 20);
  CHECK_FALSE(grid_index({1, 1}).has_value());
}
