#pragma once

// Data-parallel inner loops of the fuzzy engine. Each kernel has a serial
// reference and an OpenMP variant; the serial one is the ground truth the
// tests hold the parallel one to, and bench/ compares their throughput.

#include <cstddef>
#include <span>

#include "oculus/membership.hpp"

namespace oculus::kernels {

enum class Backend { serial, openmp };

/// True when the OpenMP variants were compiled with OpenMP enabled. When
/// false they still run, single-threaded.
bool openmp_available() noexcept;
int max_threads() noexcept;

/// One clipped consequent set: min(level, mf(x)).
struct Clip {
  const fuzzy::MembershipFunction* mf;
  double level;
};

/// out[i] = max(0, max_k min(clips[k].level, clips[k].mf(lo + i*step))).
void aggregate_serial(std::span<const Clip> clips, double lo, double step, std::span<double> out);
void aggregate_openmp(std::span<const Clip> clips, double lo, double step, std::span<double> out);
void aggregate(Backend backend, std::span<const Clip> clips, double lo, double step,
               std::span<double> out);

/// Trapezoid-weighted sums over sample indices: moment = sum w_i*i*mu_i,
/// mass = sum w_i*mu_i, with w = 1/2 at both ends and 1 elsewhere. The
/// centroid in x is lo + step * moment / mass.
struct Moments {
  double moment = 0.0;
  double mass = 0.0;
};

Moments centroid_moments_serial(std::span<const double> mu) noexcept;
Moments centroid_moments_openmp(std::span<const double> mu) noexcept;
Moments centroid_moments(Backend backend, std::span<const double> mu) noexcept;

}  // namespace oculus::kernels
