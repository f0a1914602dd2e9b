#include "oculus/kernels.hpp"

#include <algorithm>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace oculus::kernels {

namespace {

inline double aggregate_at(std::span<const Clip> clips, double x) noexcept {
  double v = 0.0;
  for (const Clip& c : clips) v = std::max(v, std::min(c.level, (*c.mf)(x)));
  return v;
}

inline double trapezoid_weight(std::size_t i, std::size_t n) noexcept {
  return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

}  // namespace

bool openmp_available() noexcept {
#if defined(_OPENMP)
  return true;
#else
  return false;
#endif
}

int max_threads() noexcept {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void aggregate_serial(std::span<const Clip> clips, double lo, double step, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = aggregate_at(clips, lo + step * static_cast<double>(i));
  }
}

void aggregate_openmp(std::span<const Clip> clips, double lo, double step, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  double* data = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    data[i] = aggregate_at(clips, lo + step * static_cast<double>(i));
  }
}

void aggregate(Backend backend, std::span<const Clip> clips, double lo, double step,
               std::span<double> out) {
  if (backend == Backend::openmp) {
    aggregate_openmp(clips, lo, step, out);
  } else {
    aggregate_serial(clips, lo, step, out);
  }
}

Moments centroid_moments_serial(std::span<const double> mu) noexcept {
  Moments m;
  const std::size_t n = mu.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double wm = trapezoid_weight(i, n) * mu[i];
    m.moment += static_cast<double>(i) * wm;
    m.mass += wm;
  }
  return m;
}

Moments centroid_moments_openmp(std::span<const double> mu) noexcept {
  const auto n = static_cast<std::ptrdiff_t>(mu.size());
  const double* data = mu.data();
  double moment = 0.0;
  double mass = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : moment, mass)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double wm = trapezoid_weight(static_cast<std::size_t>(i), mu.size()) * data[i];
    moment += static_cast<double>(i) * wm;
    mass += wm;
  }
  return {moment, mass};
}

Moments centroid_moments(Backend backend, std::span<const double> mu) noexcept {
  return backend == Backend::openmp ? centroid_moments_openmp(mu) : centroid_moments_serial(mu);
}

}  // namespace oculus::kernels
