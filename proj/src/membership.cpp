#include "oculus/membership.hpp"

#include <cmath>
#include <string>

#include "oculus/error.hpp"

namespace oculus::fuzzy {

namespace {

double rising(double x, double a, double b) noexcept {
  if (x >= b) return 1.0;
  if (x <= a) return 0.0;
  return (x - a) / (b - a);
}

double falling(double x, double a, double b) noexcept {
  if (x <= a) return 1.0;
  if (x >= b) return 0.0;
  return (b - x) / (b - a);
}

}  // namespace

std::string_view to_string(Shape shape) noexcept {
  switch (shape) {
    case Shape::triangular: return "triangular";
    case Shape::trapezoidal: return "trapezoidal";
    case Shape::shoulder_left: return "shoulder-left";
    case Shape::shoulder_right: return "shoulder-right";
  }
  return "?";
}

std::optional<Shape> parse_shape(std::string_view name) noexcept {
  if (name == "triangular") return Shape::triangular;
  if (name == "trapezoidal") return Shape::trapezoidal;
  if (name == "shoulder-left") return Shape::shoulder_left;
  if (name == "shoulder-right") return Shape::shoulder_right;
  return std::nullopt;
}

std::size_t param_count(Shape shape) noexcept {
  switch (shape) {
    case Shape::triangular: return 3;
    case Shape::trapezoidal: return 4;
    case Shape::shoulder_left:
    case Shape::shoulder_right: return 2;
  }
  return 0;
}

MembershipFunction MembershipFunction::make(Shape shape, std::span<const double> params) {
  const std::size_t n = param_count(shape);
  if (params.size() != n) {
    throw ConfigError(std::string(to_string(shape)) + " takes " + std::to_string(n) +
                      " parameters, got " + std::to_string(params.size()));
  }
  std::array<double, 4> p{};
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(params[i])) throw ConfigError("membership parameter is not finite");
    if (i > 0 && params[i] < params[i - 1]) {
      throw ConfigError(std::string(to_string(shape)) + " breakpoints must be nondecreasing");
    }
    p[i] = params[i];
  }
  return MembershipFunction(shape, p, n);
}

MembershipFunction MembershipFunction::triangular(double a, double b, double c) {
  const std::array p{a, b, c};
  return make(Shape::triangular, p);
}

MembershipFunction MembershipFunction::trapezoidal(double a, double b, double c, double d) {
  const std::array p{a, b, c, d};
  return make(Shape::trapezoidal, p);
}

MembershipFunction MembershipFunction::shoulder_left(double a, double b) {
  const std::array p{a, b};
  return make(Shape::shoulder_left, p);
}

MembershipFunction MembershipFunction::shoulder_right(double a, double b) {
  const std::array p{a, b};
  return make(Shape::shoulder_right, p);
}

double MembershipFunction::operator()(double x) const noexcept {
  if (std::isnan(x)) return 0.0;
  const auto& p = params_;
  switch (shape_) {
    case Shape::triangular:
      if (x < p[0] || x > p[2]) return 0.0;
      return x <= p[1] ? rising(x, p[0], p[1]) : falling(x, p[1], p[2]);
    case Shape::trapezoidal:
      if (x < p[0] || x > p[3]) return 0.0;
      if (x < p[1]) return rising(x, p[0], p[1]);
      if (x <= p[2]) return 1.0;
      return falling(x, p[2], p[3]);
    case Shape::shoulder_left:
      return falling(x, p[0], p[1]);
    case Shape::shoulder_right:
      return rising(x, p[0], p[1]);
  }
  return 0.0;
}

}  // namespace oculus::fuzzy
