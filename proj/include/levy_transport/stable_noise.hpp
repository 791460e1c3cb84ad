#pragma once

#include <span>
#include <vector>

#include "levy_transport/rng.hpp"

namespace levy_transport {

// Driving-noise parameters: index alpha, jump dimension m, constant velocity
// vector sigma with norm theta, and the jump-size cutoff for truncation.
struct NoiseConfig {
  double alpha = 1.5;
  int m = 2;
  std::vector<double> sigma = {0.5, 0.0};
  double theta = 0.5;  // Euclidean norm of sigma
  double jump_cutoff = 1.0;

  static NoiseConfig make(double alpha, std::vector<double> sigma, double jump_cutoff = 1.0);
  void validate() const;
};

// One trajectory of the truncated process: times 0 = t_0 < ... < t_K,
// per-step increments in R^m and exact running sums.
struct LevyPath {
  int m = 1;
  std::vector<double> times;       // K+1 entries
  std::vector<double> increments;  // K*m, step k occupies [k*m, (k+1)*m)
  std::vector<double> cumulative;  // (K+1)*m
  long total_rejects = 0;

  long steps() const { return static_cast<long>(times.size()) - 1; }
  std::span<const double> increment(long k) const { return {increments.data() + k * m, static_cast<std::size_t>(m)}; }
  std::span<const double> cumulative_at(long k) const { return {cumulative.data() + k * m, static_cast<std::size_t>(m)}; }
};

inline constexpr int kDefaultMaxRejects = 1000;

// Totally skewed positive strictly stable variable of index a in (0,1), unit
// scale in the parametrization with Laplace transform E[exp(-l S)] = exp(-l^a).
// Chambers-Mallows-Stuck / Kanter transform of a uniform angle on (0,pi) and a
// unit exponential, evaluated in log space.
double sample_positive_stable(double alpha_half, RngStream& rng);

// Increment of the untruncated isotropic alpha-stable process over time dt:
// a standard m-dimensional Gaussian scaled by sqrt(S) with S a positive
// (alpha/2)-stable draw, then by dt^{1/alpha}. Characteristic function
// exp(-dt (|xi|^2 / 2)^{alpha/2}), i.e. spatial scale 2^{-1/2} in the unit
// parametrization; rotationally invariant, self-similar of index 1/alpha.
void sample_isotropic_stable(const NoiseConfig& cfg, double dt, RngStream& rng,
                             std::span<double> out);
std::vector<double> sample_isotropic_stable(const NoiseConfig& cfg, double dt, RngStream& rng);

// Rejection sampler: redraws until the increment norm is at most
// cfg.jump_cutoff. Returns the number of rejected draws; throws after
// max_rejects consecutive oversized draws.
int sample_truncated_increment(const NoiseConfig& cfg, double dt, RngStream& rng,
                               int max_rejects, std::span<double> out);
std::vector<double> sample_truncated_increment(const NoiseConfig& cfg, double dt, RngStream& rng,
                                               int max_rejects = kDefaultMaxRejects);

// Uniform time grid 0, dt, 2dt, ..., t_max (last step shortened if needed).
std::vector<double> uniform_time_grid(double t_max, double dt);

LevyPath simulate_path(const NoiseConfig& cfg, double t_max, double dt, RngStream& rng,
                       int max_rejects = kDefaultMaxRejects);

}  // namespace levy_transport
