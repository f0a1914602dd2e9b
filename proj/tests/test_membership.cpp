#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oculus/error.hpp"
#include "oculus/membership.hpp"

using namespace oculus::fuzzy;

TEST_CASE("triangular examples") {
  const auto t = MembershipFunction::triangular(0, 10, 20);
  CHECK(t(10) == 1.0);
  CHECK(t(25) == 0.0);
  CHECK(t(5) == doctest::Approx(0.5));
  CHECK(t(15) == doctest::Approx(0.5));
  CHECK(t(0) == 0.0);
  CHECK(t(-3) == 0.0);
}

TEST_CASE("trapezoid and shoulders") {
  const auto z = MembershipFunction::trapezoidal(0, 0.4, 0.6, 1);
  CHECK(z(0.5) == 1.0);
  CHECK(z(0.2) == doctest::Approx(0.5));
  CHECK(z(0.8) == doctest::Approx(0.5));
  const auto l = MembershipFunction::shoulder_left(-50, -25);
  CHECK(l(-50) == 1.0);
  CHECK(l(-60) == 1.0);
  CHECK(l(-37.5) == doctest::Approx(0.5));
  CHECK(l(0) == 0.0);
  const auto r = MembershipFunction::shoulder_right(25, 50);
  CHECK(r(50) == 1.0);
  CHECK(r(37.5) == doctest::Approx(0.5));
  CHECK(r(10) == 0.0);
}

TEST_CASE("vertical edges take value 1 at the breakpoint") {
  const auto t = MembershipFunction::triangular(0, 0, 10);
  CHECK(t(0) == 1.0);
  CHECK(t(5) == doctest::Approx(0.5));
  const auto s = MembershipFunction::shoulder_right(3, 3);
  CHECK(s(3) == 1.0);
  CHECK(s(2.999) == 0.0);
}

TEST_CASE("degrees stay in [0,1] and NaN maps to 0") {
  const auto t = MembershipFunction::triangular(-1, 2, 7);
  for (double x = -10; x <= 10; x += 0.01) {
    const double m = t(x);
    REQUIRE(m >= 0.0);
    REQUIRE(m <= 1.0);
  }
  CHECK(t(std::numeric_limits<double>::quiet_NaN()) == 0.0);
}

TEST_CASE("make validates parameters") {
  const std::vector<double> two{1, 2};
  const std::vector<double> bad{3, 2, 1};
  const std::vector<double> inf{0, std::numeric_limits<double>::infinity(), 2};
  CHECK_THROWS_AS(MembershipFunction::make(Shape::triangular, two), oculus::ConfigError);
  CHECK_THROWS_AS(MembershipFunction::make(Shape::triangular, bad), oculus::ConfigError);
  CHECK_THROWS_AS(MembershipFunction::make(Shape::triangular, inf), oculus::ConfigError);
  CHECK(MembershipFunction::make(Shape::shoulder_left, two) == MembershipFunction::shoulder_left(1, 2));
}

TEST_CASE("shape names round-trip") {
  for (Shape s : {Shape::triangular, Shape::trapezoidal, Shape::shoulder_left, Shape::shoulder_right}) {
    CHECK(parse_shape(to_string(s)) == s);
  }
  CHECK_FALSE(parse_shape("gaussian").has_value());
}
