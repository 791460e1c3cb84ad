#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levy_transport/transport_sim.hpp"

namespace levy_transport {

enum class FitMode { free_exponent, fixed_exponent };

// Power-law model value ~ beta * t^exponent fitted by least squares in
// log-log coordinates; residual_error is the log-space RMS over the window.
struct DecayFit {
  double beta = 0.0;
  double exponent = 0.0;
  double residual_error = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  FitMode mode = FitMode::free_exponent;
  long n_points = 0;

  double value_at(double t) const;
};

DecayFit fit_power_law(std::span<const DecayPoint> series, double t_lo, double t_hi,
                       FitMode mode, double fixed_exponent_value = 0.0);

struct LogLogTable {
  std::vector<double> t, log_t, log_value, log_fit;
  // Tail rows: per-point absolute log-space residuals over [tail_lo, tail_hi].
  double tail_lo = 0.5;
  double tail_hi = 1.0;
  std::vector<double> tail_t, tail_abs_residual;
  double tail_residual_min = 0.0;
  double tail_residual_max = 0.0;
  double tail_residual_rms = 0.0;
};

LogLogTable loglog_export(std::span<const DecayPoint> series, const DecayFit& fit,
                          double tail_lo = 0.5, double tail_hi = 1.0);

struct ExponentInterval {
  double lo = 0.0;
  double hi = 0.0;
  double point = 0.0;  // mean of the per-replicate exponents
  int n_replicates = 0;
};

// Percentile bootstrap 95% interval for the fitted exponent across
// independent replicate series (at least 8).
ExponentInterval bootstrap_exponent_ci(const std::vector<std::vector<DecayPoint>>& replicates,
                                       double t_lo, double t_hi, FitMode mode,
                                       std::uint64_t seed = 1, int n_resamples = 2000);

}  // namespace levy_transport
