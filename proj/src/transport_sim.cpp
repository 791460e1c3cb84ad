#include "levy_transport/transport_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "levy_transport/worker_pool.hpp"

namespace levy_transport {

namespace {

// Index of time t on the uniform step grid, or -1.
long step_index(const std::vector<double>& times, double t) {
  if (times.size() < 2) return -1;
  const double dt = times[1] - times[0];
  const long k = static_cast<long>(std::round(t / dt));
  if (k < 0 || k >= static_cast<long>(times.size())) return -1;
  if (std::abs(times[k] - t) > 1e-9 * std::max(1.0, t)) return -1;
  return k;
}

double dot(std::span<const double> a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) s += a[j] * b[j];
  return s;
}

bool shift_keeps_support_interior(double shift, double support_radius,
                                  const SpaceTimeGrid& grid) {
  // supp u(t,.) = [-R - shift, R - shift]
  return (-support_radius - shift >= grid.x_min) && (support_radius - shift <= grid.x_max);
}

}  // namespace

PathwiseRun pathwise_solution(const Profile& ic, const NoiseConfig& cfg, const LevyPath& path,
                              const SpaceTimeGrid& grid) {
  grid.validate();
  if (path.times.empty() || path.times.back() < grid.snapshot_times.back() - 1e-9)
    throw std::invalid_argument("pathwise_solution: path does not cover the snapshot range");
  PathwiseRun run;
  const long n = grid.n_nodes();
  for (double t : grid.snapshot_times) {
    const long k = step_index(path.times, t);
    if (k < 0)
      throw std::invalid_argument("pathwise_solution: snapshot time " + std::to_string(t) +
                                  " is not on the path time grid");
    const double shift = dot(path.cumulative_at(k), cfg.sigma);
    ScalarField field;
    field.time = t;
    field.values.resize(n);
    for (long i = 0; i < n; ++i) field.values[i] = ic.value(grid.x(i) + shift);
    run.snapshots.push_back(std::move(field));
    run.shift.push_back(shift);
    run.support_interior.push_back(
        shift_keeps_support_interior(shift, ic.support_radius(), grid));
  }
  return run;
}

double l2_norm(const ScalarField& field, double dx) {
  double sum = 0.0;
  for (double v : field.values) sum += v * v;
  return std::sqrt(dx * sum);
}

std::vector<ConservationRow> conservation_report(const PathwiseRun& run, const Profile& ic,
                                                 const SpaceTimeGrid& grid) {
  std::vector<ConservationRow> rows;
  if (run.snapshots.empty()) return rows;
  const double l2_initial = l2_norm(run.snapshots.front(), grid.dx);
  const double peak = ic.value(0.0);
  for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
    ConservationRow row;
    row.t = run.snapshots[s].time;
    row.l2 = l2_norm(run.snapshots[s], grid.dx);
    row.rel_drift = (l2_initial > 0.0) ? std::abs(row.l2 - l2_initial) / l2_initial : 0.0;
    row.max_grid = *std::max_element(run.snapshots[s].values.begin(),
                                     run.snapshots[s].values.end());
    row.shift = run.shift[s];
    row.support_interior = run.support_interior[s];
    // The field is an exact translate; while the peak location -shift stays
    // inside the window the sup over the window equals the peak of u0.
    const double peak_pos = -run.shift[s];
    row.sup_exact = (peak_pos >= grid.x_min && peak_pos <= grid.x_max) ? peak : row.max_grid;
    rows.push_back(row);
  }
  return rows;
}

namespace {

// Welford moments over the nonzero observations only; zero observations are
// counted implicitly through the total sample size at finalization. Keeps the
// per-path update O(support width) and makes constant inputs come out with
// exactly zero variance.
struct Moments {
  long n = 0;      // nonzero observations
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / n;
    m2 += delta * (v - mean);
  }
  void merge(const Moments& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double delta = other.mean - mean;
    const long total = n + other.n;
    mean += delta * other.n / total;
    m2 += other.m2 + delta * delta * (static_cast<double>(n) * other.n / total);
    n = total;
  }
  // Mean and standard error over n_total samples, the remaining
  // n_total - n of which are zero.
  void finalize(long n_total, double& out_mean, double& out_se) const {
    const double nt = static_cast<double>(n_total);
    out_mean = (n == 0) ? 0.0 : mean * (static_cast<double>(n) / nt);
    const double shift = mean - out_mean;
    const double ss =
        m2 + n * shift * shift + (nt - n) * out_mean * out_mean;
    const double var = (n_total > 1) ? std::max(0.0, ss / (nt - 1.0)) : 0.0;
    out_se = std::sqrt(var / nt);
  }
};

struct BlockAccumulator {
  long count = 0;
  long rejects = 0;
  std::vector<std::vector<Moments>> snap;  // per snapshot, per node
  std::vector<long> escaped;
  std::vector<Moments> probe;
};

}  // namespace

MonteCarloResult monte_carlo_mean(const Profile& ic, const NoiseConfig& cfg,
                                  const SpaceTimeGrid& grid, const MonteCarloOptions& opts) {
  cfg.validate();
  grid.validate();
  if (opts.n_samples < 2) throw std::invalid_argument("monte_carlo_mean: need n_samples >= 2");
  if (opts.series_stride < 1 || opts.block_size < 1)
    throw std::invalid_argument("monte_carlo_mean: bad stride or block size");
  if (!grid.node_index(opts.probe_x))
    throw std::invalid_argument("monte_carlo_mean: probe_x is not a grid node");

  const std::vector<double> times = uniform_time_grid(grid.t_max, grid.dt);
  const long n_steps = static_cast<long>(times.size()) - 1;

  // Snapshot step indices.
  std::vector<long> snap_at(times.size(), -1);
  for (std::size_t s = 0; s < grid.snapshot_times.size(); ++s) {
    const long k = step_index(times, grid.snapshot_times[s]);
    if (k < 0)
      throw std::invalid_argument("monte_carlo_mean: snapshot time " +
                                  std::to_string(grid.snapshot_times[s]) +
                                  " is not on the time grid");
    snap_at[k] = static_cast<long>(s);
  }

  // Probe series step indices: every stride-th step, starting at t = 0.
  std::vector<long> probe_slot(times.size(), -1);
  std::vector<double> probe_times;
  for (long k = 0; k <= n_steps; k += opts.series_stride) {
    probe_slot[k] = static_cast<long>(probe_times.size());
    probe_times.push_back(times[k]);
  }

  const long n_nodes = grid.n_nodes();
  const long n_snaps = static_cast<long>(grid.snapshot_times.size());
  const long n_probe = static_cast<long>(probe_times.size());
  const double support = ic.support_radius();

  const long n_blocks = (opts.n_samples + opts.block_size - 1) / opts.block_size;
  std::vector<BlockAccumulator> blocks(n_blocks);

  parallel_blocks(n_blocks, opts.workers, [&](long b) {
    BlockAccumulator& acc = blocks[b];
    acc.snap.assign(n_snaps, std::vector<Moments>(n_nodes));
    acc.escaped.assign(n_snaps, 0);
    acc.probe.assign(n_probe, Moments{});

    std::vector<double> z(cfg.m, 0.0), inc(cfg.m, 0.0);
    const long path_lo = b * opts.block_size;
    const long path_hi = std::min(opts.n_samples, path_lo + opts.block_size);
    for (long p = path_lo; p < path_hi; ++p) {
      RngStream rng(opts.master_seed, static_cast<std::uint64_t>(p));
      std::fill(z.begin(), z.end(), 0.0);
      ++acc.count;
      for (long k = 0; k <= n_steps; ++k) {
        if (k > 0) {
          const double step_dt = times[k] - times[k - 1];
          acc.rejects += sample_truncated_increment(cfg, step_dt, rng, opts.max_rejects, inc);
          for (int j = 0; j < cfg.m; ++j) z[j] += inc[j];
        }
        const bool want_snap = snap_at[k] >= 0;
        const bool want_probe = probe_slot[k] >= 0;
        if (!want_snap && !want_probe) continue;
        double shift = 0.0;
        for (int j = 0; j < cfg.m; ++j) shift += cfg.sigma[j] * z[j];
        if (want_snap) {
          const long s = snap_at[k];
          // Only nodes inside the translated support contribute.
          const long i_lo = std::max<long>(
              0, static_cast<long>(std::ceil((-support - shift - grid.x_min) / grid.dx)));
          const long i_hi = std::min<long>(
              n_nodes - 1,
              static_cast<long>(std::floor((support - shift - grid.x_min) / grid.dx)));
          auto& snap = acc.snap[s];
          for (long i = i_lo; i <= i_hi; ++i) snap[i].add(ic.value(grid.x(i) + shift));
          if (!shift_keeps_support_interior(shift, support, grid)) ++acc.escaped[s];
        }
        if (want_probe) {
          const double xs = opts.probe_x + shift;
          if (std::abs(xs) <= support) acc.probe[probe_slot[k]].add(ic.value(xs));
        }
      }
    }
  });

  // Ordered merge: the reduction sequence is fixed by the block layout, not
  // by the worker schedule.
  MonteCarloResult result;
  result.n_samples = opts.n_samples;
  result.master_seed = opts.master_seed;

  result.snapshots.resize(n_snaps);
  result.escaped_fraction.assign(n_snaps, 0.0);
  for (long s = 0; s < n_snaps; ++s) {
    MeanField& mf = result.snapshots[s];
    mf.mean.time = mf.std_error.time = grid.snapshot_times[s];
    mf.mean.values.assign(n_nodes, 0.0);
    mf.std_error.values.assign(n_nodes, 0.0);
    std::vector<Moments> merged(n_nodes);
    long escaped = 0;
    for (const auto& acc : blocks) {
      for (long i = 0; i < n_nodes; ++i) merged[i].merge(acc.snap[s][i]);
      escaped += acc.escaped[s];
    }
    for (long i = 0; i < n_nodes; ++i)
      merged[i].finalize(opts.n_samples, mf.mean.values[i], mf.std_error.values[i]);
    result.escaped_fraction[s] = static_cast<double>(escaped) / opts.n_samples;
  }

  result.probe.x_probe = opts.probe_x;
  result.probe.times = probe_times;
  result.probe.mean.assign(n_probe, 0.0);
  result.probe.std_error.assign(n_probe, 0.0);
  {
    std::vector<Moments> merged(n_probe);
    for (const auto& acc : blocks) {
      for (long k = 0; k < n_probe; ++k) merged[k].merge(acc.probe[k]);
      result.total_rejects += acc.rejects;
    }
    for (long k = 0; k < n_probe; ++k)
      merged[k].finalize(opts.n_samples, result.probe.mean[k], result.probe.std_error[k]);
  }
  return result;
}

std::vector<DecayPoint> decay_series(const MonteCarloResult& result, const SpaceTimeGrid& grid,
                                     double x_probe) {
  std::vector<DecayPoint> series;
  if (std::abs(x_probe - result.probe.x_probe) <= 1e-12) {
    series.reserve(result.probe.times.size());
    for (std::size_t k = 0; k < result.probe.times.size(); ++k)
      series.push_back({result.probe.times[k], result.probe.mean[k], result.probe.std_error[k]});
    return series;
  }
  const auto idx = grid.node_index(x_probe);
  if (!idx)
    throw std::invalid_argument("decay_series: probe location is not a grid node");
  for (const auto& mf : result.snapshots)
    series.push_back({mf.mean.time, mf.mean.values[*idx], mf.std_error.values[*idx]});
  return series;
}

}  // namespace levy_transport
