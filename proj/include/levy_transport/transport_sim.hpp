#pragma once

#include <cstdint>
#include <vector>

#include "levy_transport/grid.hpp"
#include "levy_transport/profiles.hpp"
#include "levy_transport/stable_noise.hpp"

namespace levy_transport {

// Pathwise solution by characteristics: u(t,x) = u0(x + sigma . Z_t),
// evaluated analytically at the grid nodes (no interpolation).
struct PathwiseRun {
  std::vector<ScalarField> snapshots;
  std::vector<double> shift;           // sigma . Z_t at each snapshot
  std::vector<bool> support_interior;  // translated support still inside the window
};

PathwiseRun pathwise_solution(const Profile& ic, const NoiseConfig& cfg, const LevyPath& path,
                              const SpaceTimeGrid& grid);

// Riemann-sum L2 norm sqrt(dx * sum values^2).
double l2_norm(const ScalarField& field, double dx);

struct ConservationRow {
  double t = 0.0;
  double l2 = 0.0;
  double rel_drift = 0.0;   // |l2(t) - l2(0)| / l2(0)
  double sup_exact = 0.0;   // sup over the window, via the translate structure
  double max_grid = 0.0;    // max over grid nodes
  double shift = 0.0;
  bool support_interior = true;
};

std::vector<ConservationRow> conservation_report(const PathwiseRun& run, const Profile& ic,
                                                 const SpaceTimeGrid& grid);

struct MeanField {
  ScalarField mean;
  ScalarField std_error;  // pointwise sample std / sqrt(n)
};

struct ProbeSeries {
  double x_probe = 0.0;
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> std_error;
};

struct MonteCarloResult {
  std::vector<MeanField> snapshots;
  std::vector<double> escaped_fraction;  // per snapshot: paths whose support left the window
  ProbeSeries probe;
  long n_samples = 0;
  std::uint64_t master_seed = 0;
  long total_rejects = 0;
};

struct MonteCarloOptions {
  long n_samples = 5000;
  std::uint64_t master_seed = 20260809;
  int workers = 0;  // 0: resolve via env / hardware
  int max_rejects = kDefaultMaxRejects;
  double probe_x = 0.0;
  long series_stride = 10;  // probe series recorded every stride-th time step
  long block_size = 64;     // paths per accumulation block (fixed for determinism)
};

// Monte Carlo mean and pointwise standard error of the pathwise solution.
// Path i always draws from stream (master_seed, i) and block partial sums are
// merged in index order, so the result is bit-identical for any worker count.
MonteCarloResult monte_carlo_mean(const Profile& ic, const NoiseConfig& cfg,
                                  const SpaceTimeGrid& grid, const MonteCarloOptions& opts);

// Time series of the Monte Carlo mean at a probe location. Returns the
// finely resolved accumulated series when the probe matches the one
// configured for the run; otherwise falls back to the snapshot times
// (the probe must be a grid node).
struct DecayPoint {
  double t = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

std::vector<DecayPoint> decay_series(const MonteCarloResult& result, const SpaceTimeGrid& grid,
                                     double x_probe);

}  // namespace levy_transport
