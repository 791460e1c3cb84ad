#pragma once

#include <span>
#include <vector>

#include "levy_transport/rng.hpp"

namespace levy_transport {

// Parameters of the rotationally invariant jump measure |z|^{-m-alpha} dz
// on R^m, restricted to the closed unit ball when truncation is in play.
struct MeasureParams {
  double alpha = 1.5;  // stability index, in (0,2)
  int m = 2;           // jump dimension

  void validate() const;
};

// Surface area of the unit sphere S^k in R^{k+1}: 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double surface_area(int k);

// Radial integral  I(m,alpha) = int_0^inf (1+r^2)^{-(m+alpha)/2} r^{m-2} dr,
// for m >= 2, computed adaptively after mapping to a bounded domain.
// Equals (1/2) B((m-1)/2, (alpha+1)/2).
double radial_tail_integral(const MeasureParams& p, double abs_tol = 1e-11);

// Full projection constant |S^{m-2}| * I(m,alpha), m >= 2.
double c_constant(const MeasureParams& p);

// Projection weight without the surface-area factor:
//   c(y,m,alpha) = int_0^{sqrt(1-y^2)/|y|} (1+r^2)^{-(m+alpha)/2} r^{m-2} dr
// for 0 < |y| <= 1, and 0 for |y| > 1. Depends on |y| only. m >= 2.
double c_weight(double y, const MeasureParams& p, double abs_tol = 1e-11);

struct WeightTable {
  std::vector<double> y_nodes;
  std::vector<double> c_values;
  int m = 0;
  double alpha = 0.0;
  double tolerance = 1e-11;
  double c_zero = 0.0;  // limit value as |y| -> 0 (the full radial integral)
};

WeightTable build_weight_table(const MeasureParams& p, std::span<const double> y_nodes,
                               double abs_tol = 1e-11);

// Integral  J(alpha) = int_R (1 - cos y) |y|^{-1-alpha} dy, alpha in (0,2).
// Closed form 2 Gamma(2-alpha) cos(pi alpha / 2) / (alpha (1-alpha)); pi at alpha = 1.
double cosine_kernel_integral(double alpha);

// Rate lambda(m,alpha) such that the sampler's isotropic alpha-stable process
// (characteristic function exp(-t (|xi|^2/2)^{alpha/2}), i.e. spatial scale
// 2^{-1/2}) has jump measure lambda * |S^{m-2}| * |z|^{-m-alpha} dz (for
// m = 1 the surface factor is dropped and the projection is the identity).
// Equals 2^{-alpha/2} / (I(m,alpha) * J(alpha)). Used to match the
// deterministic evolution to the sampler.
double sampler_generator_rate(const MeasureParams& p);

struct ProjectionReport {
  double chi_square = 0.0;
  int dof = 0;
  double p_value = 0.0;
  int n_bins = 0;
  long n_samples = 0;
  double sample_mean = 0.0;   // mean of the projected coordinate
  double mean_stderr = 0.0;
  double mass_check_rel_err = 0.0;  // numeric vs closed-form annulus mass
};

// Samples the normalized restriction of |z|^{-m-alpha} dz to the annulus
// r_min <= |z| <= 1 (inverse-CDF radius, uniform direction), projects onto
// the first coordinate and tests the empirical law against the projected
// density obtained by nested quadrature of the same restricted measure.
ProjectionReport validate_projection(const MeasureParams& p, double r_min, long n_samples,
                                     RngStream& rng, int n_bins = 48);

}  // namespace levy_transport
