#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levy_transport/csv_io.hpp"
#include "levy_transport/grid.hpp"
#include "levy_transport/stable_noise.hpp"

namespace levy_transport {

// Whole-pipeline configuration. Loaded from a flat "key = value" file
// (# starts a comment) and overridable by command-line flags of the same
// names; serialized verbatim into every output's metadata header.
struct RunConfig {
  // noise
  double alpha = 1.5;
  int m = 2;
  std::vector<double> sigma = {0.5, 0.0};
  double jump_cutoff = 1.0;
  int max_rejects = 1000;
  // grid
  double x_min = -1.0;
  double x_max = 1.0;
  double dx = 1e-3;
  double t_max = 2.0;
  double dt = 1e-4;
  std::vector<double> snapshot_times = {0.0, 0.5, 1.0, 1.5, 2.0};
  // initial condition
  std::string ic_name = "bump";
  double ic_param = 0.1;
  // Monte Carlo
  long n_samples = 5000;
  std::uint64_t seed = 20260809;
  int workers = 0;
  double probe_x = 0.0;
  long series_stride = 10;
  // deterministic evolution
  double pde_pad = 1.0;
  double pde_safety = 0.5;
  double pde_dt = 0.0;  // 0: from the stability estimate
  // operator quadrature
  double quad_core_radius = 1e-6;
  int quad_nodes = 16;
  // analysis
  double fit_lo = 0.5;
  double fit_hi = 2.0;
  std::string fit_mode = "free";  // "free" or "fixed"
  int replicates = 0;             // > 0 enables the bootstrap interval
  double tail_lo = 0.5;
  double tail_hi = 1.0;
  // validation
  double compare_allowance_frac = 0.05;  // fraction of max u0 in the sup check
  // output
  std::string out_dir = "out";

  void validate() const;
  NoiseConfig noise() const;
  SpaceTimeGrid grid() const;
  Metadata metadata(const std::string& command) const;

  static RunConfig from_file(const std::string& path);
  // Applies one "key = value" override; throws on unknown keys.
  void apply(const std::string& key, const std::string& value);
};

std::vector<double> parse_double_list(const std::string& text);

}  // namespace levy_transport
