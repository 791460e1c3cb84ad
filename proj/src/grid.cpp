#include "levy_transport/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace levy_transport {

void SpaceTimeGrid::validate() const {
  if (!(x_min < x_max)) throw std::invalid_argument("SpaceTimeGrid: x_min must be < x_max");
  if (!(dx > 0.0)) throw std::invalid_argument("SpaceTimeGrid: dx must be > 0");
  if (!(dt > 0.0 && dt <= t_max))
    throw std::invalid_argument("SpaceTimeGrid: need 0 < dt <= t_max");
  const double span = (x_max - x_min) / dx;
  if (std::abs(span - std::round(span)) > 1e-8 * span)
    throw std::invalid_argument("SpaceTimeGrid: dx must divide x_max - x_min");
  for (double t : snapshot_times)
    if (t < 0.0 || t > t_max + 1e-12)
      throw std::invalid_argument("SpaceTimeGrid: snapshot time outside [0, t_max]");
}

long SpaceTimeGrid::n_nodes() const {
  return static_cast<long>(std::round((x_max - x_min) / dx)) + 1;
}

std::vector<double> SpaceTimeGrid::x_nodes() const {
  std::vector<double> xs(n_nodes());
  for (long i = 0; i < n_nodes(); ++i) xs[i] = x(i);
  return xs;
}

std::optional<long> SpaceTimeGrid::node_index(double x_query) const {
  const long i = static_cast<long>(std::round((x_query - x_min) / dx));
  if (i < 0 || i >= n_nodes()) return std::nullopt;
  if (std::abs(x(i) - x_query) > 1e-9 * std::max(1.0, std::abs(x_query)) + 1e-12)
    return std::nullopt;
  return i;
}

}  // namespace levy_transport
