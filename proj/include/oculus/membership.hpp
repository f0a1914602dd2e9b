#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace oculus::fuzzy {

enum class Shape { triangular, trapezoidal, shoulder_left, shoulder_right };

std::string_view to_string(Shape shape) noexcept;
std::optional<Shape> parse_shape(std::string_view name) noexcept;
std::size_t param_count(Shape shape) noexcept;

/// Closed real interval [lo, hi], lo < hi.
struct Universe {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  double width() const noexcept { return hi - lo; }
  friend bool operator==(const Universe&, const Universe&) = default;
};

/// Piecewise-linear membership function with nondecreasing breakpoints.
///
///   triangular(a,b,c)      0 at a, 1 at b, 0 at c
///   trapezoidal(a,b,c,d)   rises a..b, flat 1 on [b,c], falls c..d
///   shoulder_left(a,b)     1 up to a, falls to 0 at b
///   shoulder_right(a,b)    0 up to a, rises to 1 at b
///
/// A vertical edge (equal neighbouring breakpoints) takes the value 1 at the
/// breakpoint itself.
class MembershipFunction {
 public:
  static MembershipFunction triangular(double a, double b, double c);
  static MembershipFunction trapezoidal(double a, double b, double c, double d);
  static MembershipFunction shoulder_left(double a, double b);
  static MembershipFunction shoulder_right(double a, double b);
  // Throws ConfigError unless the parameters fit the shape and never decrease.
  static MembershipFunction make(Shape shape, std::span<const double> params);

  Shape shape() const noexcept { return shape_; }
  std::span<const double> params() const noexcept { return {params_.data(), count_}; }

  /// Degree in [0, 1]. Non-finite x (outside the contract) yields 0.
  double operator()(double x) const noexcept;

  /// Smallest and largest breakpoint.
  double first_breakpoint() const noexcept { return params_[0]; }
  double last_breakpoint() const noexcept { return params_[count_ - 1]; }

  friend bool operator==(const MembershipFunction&, const MembershipFunction&) = default;

 private:
  MembershipFunction(Shape shape, std::array<double, 4> params, std::size_t count) noexcept
      : shape_(shape), params_(params), count_(count) {}

  Shape shape_;
  std::array<double, 4> params_{};
  std::size_t count_;
};

inline double membership(const MembershipFunction& mf, double x) noexcept { return mf(x); }

}  // namespace oculus::fuzzy
