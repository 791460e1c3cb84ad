#pragma once

#include <optional>
#include <vector>

namespace levy_transport {

// Uniform space grid on [x_min, x_max] plus the simulation time grid and the
// times at which fields are recorded.
struct SpaceTimeGrid {
  double x_min = -1.0;
  double x_max = 1.0;
  double dx = 1e-3;
  double t_max = 2.0;
  double dt = 1e-4;
  std::vector<double> snapshot_times = {0.0, 0.5, 1.0, 1.5, 2.0};

  void validate() const;
  long n_nodes() const;
  double x(long i) const { return x_min + i * dx; }
  std::vector<double> x_nodes() const;
  // Index of a grid node, or nullopt if x is not a node (within tolerance).
  std::optional<long> node_index(double x) const;
};

// Field values on the space grid at one instant.
struct ScalarField {
  double time = 0.0;
  std::vector<double> values;
};

}  // namespace levy_transport
