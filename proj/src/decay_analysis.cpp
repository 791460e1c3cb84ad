#include "levy_transport/decay_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levy_transport/rng.hpp"

namespace levy_transport {

double DecayFit::value_at(double t) const { return beta * std::pow(t, exponent); }

DecayFit fit_power_law(std::span<const DecayPoint> series, double t_lo, double t_hi,
                       FitMode mode, double fixed_exponent_value) {
  if (!(t_lo > 0.0 && t_hi > t_lo))
    throw std::invalid_argument("fit_power_law: need 0 < t_lo < t_hi");
  std::vector<double> lt, lv;
  for (const auto& p : series) {
    if (p.t < t_lo - 1e-12 || p.t > t_hi + 1e-12) continue;
    if (!(p.value > 0.0))
      throw std::invalid_argument("fit_power_law: nonpositive value inside the fit window");
    lt.push_back(std::log(p.t));
    lv.push_back(std::log(p.value));
  }
  const long n = static_cast<long>(lt.size());
  if (n < 20) throw std::invalid_argument("fit_power_law: fewer than 20 points in the window");

  double mean_t = 0.0, mean_v = 0.0;
  for (long i = 0; i < n; ++i) {
    mean_t += lt[i];
    mean_v += lv[i];
  }
  mean_t /= n;
  mean_v /= n;

  DecayFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.mode = mode;
  fit.n_points = n;
  if (mode == FitMode::free_exponent) {
    double cov = 0.0, var = 0.0;
    for (long i = 0; i < n; ++i) {
      cov += (lt[i] - mean_t) * (lv[i] - mean_v);
      var += (lt[i] - mean_t) * (lt[i] - mean_t);
    }
    if (var == 0.0) throw std::invalid_argument("fit_power_law: degenerate time window");
    fit.exponent = cov / var;
    fit.beta = std::exp(mean_v - fit.exponent * mean_t);
  } else {
    fit.exponent = fixed_exponent_value;
    fit.beta = std::exp(mean_v - fit.exponent * mean_t);
  }
  double rss = 0.0;
  const double log_beta_hat = std::log(fit.beta);
  for (long i = 0; i < n; ++i) {
    const double r = lv[i] - (log_beta_hat + fit.exponent * lt[i]);
    rss += r * r;
  }
  fit.residual_error = std::sqrt(rss / n);
  return fit;
}

LogLogTable loglog_export(std::span<const DecayPoint> series, const DecayFit& fit,
                          double tail_lo, double tail_hi) {
  LogLogTable table;
  table.tail_lo = tail_lo;
  table.tail_hi = tail_hi;
  double tail_sq = 0.0;
  bool first_tail = true;
  for (const auto& p : series) {
    if (!(p.t > 0.0)) continue;
    if (!(p.value > 0.0))
      throw std::invalid_argument("loglog_export: nonpositive value at t > 0");
    const double lt = std::log(p.t);
    const double lv = std::log(p.value);
    const double lf = std::log(fit.beta) + fit.exponent * lt;
    table.t.push_back(p.t);
    table.log_t.push_back(lt);
    table.log_value.push_back(lv);
    table.log_fit.push_back(lf);
    if (p.t >= tail_lo - 1e-12 && p.t <= tail_hi + 1e-12) {
      const double r = std::abs(lv - lf);
      table.tail_t.push_back(p.t);
      table.tail_abs_residual.push_back(r);
      tail_sq += r * r;
      if (first_tail) {
        table.tail_residual_min = table.tail_residual_max = r;
        first_tail = false;
      } else {
        table.tail_residual_min = std::min(table.tail_residual_min, r);
        table.tail_residual_max = std::max(table.tail_residual_max, r);
      }
    }
  }
  if (!table.tail_t.empty())
    table.tail_residual_rms = std::sqrt(tail_sq / table.tail_t.size());
  return table;
}

ExponentInterval bootstrap_exponent_ci(const std::vector<std::vector<DecayPoint>>& replicates,
                                       double t_lo, double t_hi, FitMode mode,
                                       std::uint64_t seed, int n_resamples) {
  const int n_rep = static_cast<int>(replicates.size());
  if (n_rep < 8) throw std::invalid_argument("bootstrap_exponent_ci: need at least 8 replicates");

  std::vector<double> exponents(n_rep);
  for (int r = 0; r < n_rep; ++r)
    exponents[r] = fit_power_law(replicates[r], t_lo, t_hi, mode).exponent;

  ExponentInterval interval;
  interval.n_replicates = n_rep;
  for (double e : exponents) interval.point += e;
  interval.point /= n_rep;

  RngStream rng(seed, 0);
  std::vector<double> means(n_resamples);
  for (int b = 0; b < n_resamples; ++b) {
    double sum = 0.0;
    for (int r = 0; r < n_rep; ++r) {
      const int pick = std::min(n_rep - 1, static_cast<int>(rng.uniform01() * n_rep));
      sum += exponents[pick];
    }
    means[b] = sum / n_rep;
  }
  std::sort(means.begin(), means.end());
  auto percentile = [&](double q) {
    const double pos = q * (n_resamples - 1);
    const int i = static_cast<int>(pos);
    const double w = pos - i;
    return (i + 1 < n_resamples) ? means[i] + w * (means[i + 1] - means[i]) : means.back();
  };
  interval.lo = percentile(0.025);
  interval.hi = percentile(0.975);
  return interval;
}

}  // namespace levy_transport
