#include "levy_transport/stable_noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace levy_transport {

NoiseConfig NoiseConfig::make(double alpha, std::vector<double> sigma, double jump_cutoff) {
  NoiseConfig cfg;
  cfg.alpha = alpha;
  cfg.m = static_cast<int>(sigma.size());
  cfg.sigma = std::move(sigma);
  double norm_sq = 0.0;
  for (double s : cfg.sigma) norm_sq += s * s;
  cfg.theta = std::sqrt(norm_sq);
  cfg.jump_cutoff = jump_cutoff;
  cfg.validate();
  return cfg;
}

void NoiseConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("NoiseConfig: alpha must lie in (0,2), got " +
                                std::to_string(alpha));
  if (m < 1) throw std::invalid_argument("NoiseConfig: m must be >= 1");
  if (static_cast<int>(sigma.size()) != m)
    throw std::invalid_argument("NoiseConfig: sigma must have m components");
  if (!(jump_cutoff > 0.0)) throw std::invalid_argument("NoiseConfig: jump_cutoff must be > 0");
  double norm_sq = 0.0;
  for (double s : sigma) norm_sq += s * s;
  if (std::abs(theta - std::sqrt(norm_sq)) > 1e-12 * (1.0 + std::sqrt(norm_sq)))
    throw std::invalid_argument("NoiseConfig: theta does not equal |sigma|");
}

double sample_positive_stable(double alpha_half, RngStream& rng) {
  if (!(alpha_half > 0.0 && alpha_half < 1.0))
    throw std::invalid_argument("sample_positive_stable: index must lie in (0,1), got " +
                                std::to_string(alpha_half));
  const double a = alpha_half;
  const double u = std::numbers::pi * rng.uniform01();
  const double w = rng.exponential();
  // log A(u) with A the Zolotarev function; sin arguments stay in (0,pi).
  const double log_a_part = a * std::log(std::sin(a * u)) +
                            (1.0 - a) * std::log(std::sin((1.0 - a) * u)) -
                            std::log(std::sin(u));
  const double log_s = log_a_part / a - ((1.0 - a) / a) * std::log(w);
  return std::exp(log_s);
}

void sample_isotropic_stable(const NoiseConfig& cfg, double dt, RngStream& rng,
                             std::span<double> out) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_isotropic_stable: dt must be > 0");
  const double s = sample_positive_stable(0.5 * cfg.alpha, rng);
  const double scale = std::pow(dt, 1.0 / cfg.alpha) * std::sqrt(s);
  for (int j = 0; j < cfg.m; ++j) out[j] = scale * rng.gaussian();
}

std::vector<double> sample_isotropic_stable(const NoiseConfig& cfg, double dt, RngStream& rng) {
  std::vector<double> out(cfg.m);
  sample_isotropic_stable(cfg, dt, rng, out);
  return out;
}

int sample_truncated_increment(const NoiseConfig& cfg, double dt, RngStream& rng,
                               int max_rejects, std::span<double> out) {
  if (max_rejects < 1) throw std::invalid_argument("sample_truncated_increment: max_rejects < 1");
  for (int attempt = 0; attempt < max_rejects; ++attempt) {
    sample_isotropic_stable(cfg, dt, rng, out);
    double norm_sq = 0.0;
    for (int j = 0; j < cfg.m; ++j) norm_sq += out[j] * out[j];
    if (norm_sq <= cfg.jump_cutoff * cfg.jump_cutoff) return attempt;
  }
  throw std::runtime_error(
      "sample_truncated_increment: " + std::to_string(max_rejects) +
      " consecutive draws exceeded the cutoff (dt = " + std::to_string(dt) +
      " is too large for the rejection scheme)");
}

std::vector<double> sample_truncated_increment(const NoiseConfig& cfg, double dt, RngStream& rng,
                                               int max_rejects) {
  std::vector<double> out(cfg.m);
  sample_truncated_increment(cfg, dt, rng, max_rejects, out);
  return out;
}

std::vector<double> uniform_time_grid(double t_max, double dt) {
  if (!(dt > 0.0 && dt <= t_max))
    throw std::invalid_argument("uniform_time_grid: need 0 < dt <= t_max");
  const long n_full = static_cast<long>(std::floor(t_max / dt + 1e-9));
  std::vector<double> times;
  times.reserve(n_full + 2);
  for (long k = 0; k <= n_full; ++k) times.push_back(k * dt);
  // Snap the final point onto t_max, appending a shortened step if the grid
  // does not divide evenly.
  if (std::abs(times.back() - t_max) <= 1e-9 * t_max)
    times.back() = t_max;
  else
    times.push_back(t_max);
  return times;
}

LevyPath simulate_path(const NoiseConfig& cfg, double t_max, double dt, RngStream& rng,
                       int max_rejects) {
  cfg.validate();
  LevyPath path;
  path.m = cfg.m;
  path.times = uniform_time_grid(t_max, dt);
  const long steps = path.steps();
  path.increments.assign(steps * cfg.m, 0.0);
  path.cumulative.assign((steps + 1) * cfg.m, 0.0);
  for (long k = 0; k < steps; ++k) {
    const double step_dt = path.times[k + 1] - path.times[k];
    std::span<double> inc{path.increments.data() + k * cfg.m, static_cast<std::size_t>(cfg.m)};
    path.total_rejects += sample_truncated_increment(cfg, step_dt, rng, max_rejects, inc);
    for (int j = 0; j < cfg.m; ++j)
      path.cumulative[(k + 1) * cfg.m + j] = path.cumulative[k * cfg.m + j] + inc[j];
  }
  return path;
}

}  // namespace levy_transport
