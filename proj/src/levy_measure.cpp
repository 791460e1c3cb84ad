#include "levy_transport/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "levy_transport/quadrature.hpp"
#include "levy_transport/stats.hpp"

namespace levy_transport {

void MeasureParams::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("MeasureParams: alpha must lie in (0,2), got " +
                                std::to_string(alpha));
  if (m < 1) throw std::invalid_argument("MeasureParams: m must be >= 1");
}

double surface_area(int k) {
  if (k < 0) throw std::invalid_argument("surface_area: k must be >= 0");
  const double half = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {

// Radial integrand in the bounded variable s, with r = s/(1-s). The mapped
// integrand behaves like (1-s)^alpha near s = 1; evaluate that limit as 0 to
// keep deep adaptive bisection away from inf * 0.
double radial_integrand(double s, int m, double alpha) {
  if (s <= 0.0) return (m == 2) ? 1.0 : 0.0;
  if (s >= 1.0) return 0.0;
  const double r = s / (1.0 - s);
  if (r > 1e100) return 0.0;
  const double jac = 1.0 / ((1.0 - s) * (1.0 - s));
  return std::pow(r, m - 2) * std::pow(1.0 + r * r, -0.5 * (m + alpha)) * jac;
}

}  // namespace

double radial_tail_integral(const MeasureParams& p, double abs_tol) {
  p.validate();
  if (p.m < 2) throw std::invalid_argument("radial_tail_integral: requires m >= 2");
  const int m = p.m;
  const double alpha = p.alpha;
  return integrate_adaptive([m, alpha](double s) { return radial_integrand(s, m, alpha); },
                            0.0, 1.0, abs_tol);
}

double c_constant(const MeasureParams& p) {
  if (p.m < 2) throw std::invalid_argument("c_constant: degenerate for m = 1");
  return surface_area(p.m - 2) * radial_tail_integral(p);
}

double c_weight(double y, const MeasureParams& p, double abs_tol) {
  p.validate();
  if (p.m < 2) throw std::invalid_argument("c_weight: requires m >= 2");
  const double ay = std::abs(y);
  if (ay == 0.0)
    throw std::invalid_argument("c_weight: y = 0 has an infinite upper limit; "
                                "use radial_tail_integral for the y -> 0 value");
  if (ay >= 1.0) return 0.0;
  const double upper_r = std::sqrt(1.0 - ay * ay) / ay;
  const double upper_s = upper_r / (1.0 + upper_r);
  const int m = p.m;
  const double alpha = p.alpha;
  return integrate_adaptive([m, alpha](double s) { return radial_integrand(s, m, alpha); },
                            0.0, upper_s, abs_tol);
}

WeightTable build_weight_table(const MeasureParams& p, std::span<const double> y_nodes,
                               double abs_tol) {
  p.validate();
  WeightTable table;
  table.m = p.m;
  table.alpha = p.alpha;
  table.tolerance = abs_tol;
  table.c_zero = radial_tail_integral(p, abs_tol);
  table.y_nodes.assign(y_nodes.begin(), y_nodes.end());
  table.c_values.reserve(y_nodes.size());
  for (double y : y_nodes) {
    if (std::abs(y) >= 1.0 || y == 0.0)
      throw std::invalid_argument("build_weight_table: nodes must lie in (-1,1) \\ {0}");
    table.c_values.push_back(c_weight(y, p, abs_tol));
  }
  return table;
}

double cosine_kernel_integral(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("cosine_kernel_integral: alpha must lie in (0,2)");
  if (alpha == 1.0) return std::numbers::pi;
  return 2.0 * std::tgamma(2.0 - alpha) * std::cos(0.5 * std::numbers::pi * alpha) /
         (alpha * (1.0 - alpha));
}

double sampler_generator_rate(const MeasureParams& p) {
  p.validate();
  const double radial = (p.m == 1) ? 1.0 : radial_tail_integral(p);
  // 2^{-alpha/2}: the sampler's spatial scale 2^{-1/2} enters the jump
  // density through its alpha-th power.
  return std::pow(2.0, -0.5 * p.alpha) / (radial * cosine_kernel_integral(p.alpha));
}

namespace {

// Density (unnormalized) of the first coordinate under the annulus-restricted
// measure: f(y) = |S^{m-2}| int s^{m-2} (y^2+s^2)^{-(m+alpha)/2} ds over
// { s >= 0 : r_min^2 <= y^2 + s^2 <= 1 }. For m = 1 the projection is the
// identity and f(y) = |y|^{-1-alpha} on the annulus.
double projected_density(double y, const MeasureParams& p, double r_min) {
  const double ay = std::abs(y);
  if (ay >= 1.0) return 0.0;
  if (p.m == 1) return (ay >= r_min) ? std::pow(ay, -1.0 - p.alpha) : 0.0;
  const double s_hi = std::sqrt(1.0 - ay * ay);
  const double s_lo = (ay >= r_min) ? 0.0 : std::sqrt(r_min * r_min - ay * ay);
  if (!(s_hi > s_lo)) return 0.0;
  const int m = p.m;
  const double alpha = p.alpha;
  const auto& rule = gauss_legendre_rule(16);
  // A few panels suffice: the integrand is smooth inside the slab.
  const int n_panels = 8;
  double sum = 0.0;
  for (int k = 0; k < n_panels; ++k) {
    const double a = s_lo + (s_hi - s_lo) * k / n_panels;
    const double b = s_lo + (s_hi - s_lo) * (k + 1) / n_panels;
    sum += integrate_gl(
        [y, m, alpha](double s) {
          return std::pow(s, m - 2) * std::pow(y * y + s * s, -0.5 * (m + alpha));
        },
        a, b, rule);
  }
  return surface_area(m - 2) * sum;
}

}  // namespace

ProjectionReport validate_projection(const MeasureParams& p, double r_min, long n_samples,
                                     RngStream& rng, int n_bins) {
  p.validate();
  if (!(r_min > 0.0 && r_min < 1.0))
    throw std::invalid_argument("validate_projection: r_min must lie in (0,1)");
  if (n_samples < 10000)
    throw std::invalid_argument("validate_projection: need at least 10^4 samples");
  if (n_bins < 40) throw std::invalid_argument("validate_projection: need at least 40 bins");

  // Tabulate the projected density and its CDF on [0,1] (it is even in y).
  const int grid_n = 8192;
  std::vector<double> ys(grid_n + 1), dens(grid_n + 1), cum(grid_n + 1, 0.0);
  for (int i = 0; i <= grid_n; ++i) {
    ys[i] = static_cast<double>(i) / grid_n;
    dens[i] = projected_density(ys[i], p, r_min);
  }
  for (int i = 1; i <= grid_n; ++i)
    cum[i] = cum[i - 1] + 0.5 * (dens[i - 1] + dens[i]) * (ys[i] - ys[i - 1]);

  const double half_mass = cum[grid_n];
  const double total_mass = 2.0 * half_mass;
  const double analytic_mass =
      surface_area(p.m - 1) * (std::pow(r_min, -p.alpha) - 1.0) / p.alpha;
  const double mass_rel_err = std::abs(total_mass - analytic_mass) / analytic_mass;

  // Equal-probability bin edges from the numeric CDF. Signed CDF:
  // G(y) = half_mass + sign(y) * C(|y|) over [-1,1], total 2*half_mass.
  auto inv_half_cdf = [&](double target) {
    auto it = std::lower_bound(cum.begin(), cum.end(), target);
    if (it == cum.begin()) return ys.front();
    if (it == cum.end()) return ys.back();
    const std::size_t i = static_cast<std::size_t>(it - cum.begin());
    const double c0 = cum[i - 1], c1 = cum[i];
    const double w = (c1 > c0) ? (target - c0) / (c1 - c0) : 0.0;
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
  };
  std::vector<double> edges(n_bins + 1);
  edges.front() = -1.0;
  edges.back() = 1.0;
  for (int k = 1; k < n_bins; ++k) {
    const double mu = total_mass * k / n_bins;
    edges[k] = (mu < half_mass) ? -inv_half_cdf(half_mass - mu) : inv_half_cdf(mu - half_mass);
  }
  auto signed_cdf = [&](double y) {
    const double c = (std::abs(y) >= 1.0)
                         ? half_mass
                         : [&] {
                             const double ay = std::abs(y);
                             const double pos = ay * grid_n;
                             const std::size_t i = std::min<std::size_t>(
                                 static_cast<std::size_t>(pos), grid_n - 1);
                             const double w = pos - i;
                             return cum[i] + w * (cum[i + 1] - cum[i]);
                           }();
    return (y >= 0.0) ? half_mass + c : half_mass - c;
  };

  // Sample: radius by inverse CDF of r^{-1-alpha} on [r_min,1], uniform direction.
  const double a = p.alpha;
  const double rmin_pow = std::pow(r_min, -a);
  std::vector<long> counts(n_bins, 0);
  double mean_acc = 0.0, sq_acc = 0.0;
  std::vector<double> g(p.m);
  for (long s = 0; s < n_samples; ++s) {
    const double u = rng.uniform01();
    const double r = std::pow(rmin_pow - u * (rmin_pow - 1.0), -1.0 / a);
    double y1;
    if (p.m == 1) {
      y1 = (rng.uniform01() < 0.5) ? -r : r;
    } else {
      double norm_sq = 0.0;
      for (int j = 0; j < p.m; ++j) {
        g[j] = rng.gaussian();
        norm_sq += g[j] * g[j];
      }
      y1 = r * g[0] / std::sqrt(norm_sq);
    }
    mean_acc += y1;
    sq_acc += y1 * y1;
    const auto it = std::upper_bound(edges.begin(), edges.end(), y1);
    int bin = static_cast<int>(it - edges.begin()) - 1;
    bin = std::clamp(bin, 0, n_bins - 1);
    ++counts[bin];
  }

  double chi2 = 0.0;
  for (int k = 0; k < n_bins; ++k) {
    const double expected =
        n_samples * (signed_cdf(edges[k + 1]) - signed_cdf(edges[k])) / total_mass;
    const double diff = counts[k] - expected;
    chi2 += diff * diff / expected;
  }

  ProjectionReport report;
  report.chi_square = chi2;
  report.dof = n_bins - 1;
  report.p_value = chi_square_pvalue(chi2, n_bins - 1);
  report.n_bins = n_bins;
  report.n_samples = n_samples;
  report.sample_mean = mean_acc / n_samples;
  const double var = std::max(0.0, (sq_acc - n_samples * report.sample_mean * report.sample_mean) /
                                       (n_samples - 1));
  report.mean_stderr = std::sqrt(var / n_samples);
  report.mass_check_rel_err = mass_rel_err;
  return report;
}

}  // namespace levy_transport
