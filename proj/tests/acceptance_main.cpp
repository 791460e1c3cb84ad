// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. The expensive paper-scale Monte Carlo run is shared by the
// dissipation, cross-validation and decay-exponent checks.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "levy_transport/csv_io.hpp"
#include "levy_transport/decay_analysis.hpp"
#include "levy_transport/levy_measure.hpp"
#include "levy_transport/nonlocal_operator.hpp"
#include "levy_transport/profiles.hpp"
#include "levy_transport/stable_noise.hpp"
#include "levy_transport/stats.hpp"
#include "levy_transport/transport_sim.hpp"
#include "levy_transport/worker_pool.hpp"

namespace lt = levy_transport;

namespace {

int failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("criterion %d [%s]: %s  (%s; %.1f s)\n", criterion, name.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) { return lt::format_double(v); }

// Shared paper-scale configuration: alpha = 1.5, m = 2, theta = 0.5,
// dt = 1e-4 on [0,2], 5000 samples. Fields are recorded on a dx = 4e-3 grid
// (the Monte Carlo evaluation is grid-exact, so the field grid only selects
// evaluation nodes).
struct PaperRun {
  lt::SpaceTimeGrid grid;
  lt::NoiseConfig noise;
  lt::MonteCarloResult mc;
  lt::EvolutionResult pde;
};

PaperRun run_paper_scale(long n_samples, int workers) {
  PaperRun run;
  run.grid.x_min = -1.0;
  run.grid.x_max = 1.0;
  run.grid.dx = 4e-3;
  run.grid.t_max = 2.0;
  run.grid.dt = 1e-4;
  run.grid.snapshot_times = {0.0, 0.5, 1.0, 1.5, 2.0};
  run.noise = lt::NoiseConfig::make(1.5, {0.5, 0.0});

  lt::MonteCarloOptions opts;
  opts.n_samples = n_samples;
  opts.master_seed = 20260809;
  opts.workers = workers;
  opts.probe_x = 0.0;
  opts.series_stride = 10;
  run.mc = lt::monte_carlo_mean(lt::default_initial_condition(), run.noise, run.grid, opts);

  const lt::MeasureParams params{run.noise.alpha, run.noise.m};
  const lt::OperatorSpec spec = lt::make_truncated_operator(
      params, run.noise.theta, lt::QuadratureSpec{}, lt::sampler_generator_rate(params));
  lt::EvolutionConfig ev;
  ev.grid = run.grid;
  ev.pad = 1.0;
  ev.workers = workers;
  run.pde = lt::evolve(spec, lt::default_initial_condition(), ev);
  return run;
}

void criterion_1_beta_identity() {
  Timer timer;
  double worst = 0.0;
  for (int m : {2, 3, 5, 10}) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      const double radial = lt::radial_tail_integral(lt::MeasureParams{alpha, m});
      const double exact = 0.5 * lt::beta_function(0.5 * (m - 1), 0.5 * (alpha + 1));
      worst = std::max(worst, std::abs(radial - exact));
    }
  }
  const double t = timer.seconds();
  report(1, "projection constant vs Beta identity", worst <= 1e-8 && t < 1.0,
         "worst |err| = " + fmt(worst) + ", tol 1e-8, runtime < 1 s", t);
}

void criterion_2_projection() {
  Timer timer;
  lt::RngStream rng_a(101, 0), rng_b(102, 0);
  const auto a = lt::validate_projection(lt::MeasureParams{1.5, 2}, 0.1, 100000, rng_a);
  const auto b = lt::validate_projection(lt::MeasureParams{0.5, 5}, 0.2, 100000, rng_b);
  const double t = timer.seconds();
  const bool pass = a.p_value > 1e-3 && b.p_value > 1e-3 && t < 30.0;
  report(2, "projected-measure chi-square", pass,
         "p(m=2,a=1.5) = " + fmt(a.p_value) + ", p(m=5,a=0.5) = " + fmt(b.p_value) +
             ", need > 0.001",
         t);
}

void criterion_3_pathwise_conservation() {
  Timer timer;
  lt::SpaceTimeGrid grid;  // paper resolution: dx = 1e-3, dt = 1e-4, [0,2]
  const lt::NoiseConfig noise = lt::NoiseConfig::make(1.5, {0.5, 0.0});
  lt::RngStream rng(20260809, 0);
  const lt::LevyPath path = lt::simulate_path(noise, grid.t_max, grid.dt, rng);
  const lt::PathwiseRun run =
      lt::pathwise_solution(lt::default_initial_condition(), noise, path, grid);
  const auto rows = lt::conservation_report(run, lt::default_initial_condition(), grid);
  double worst_drift = 0.0;
  bool sup_preserved = true;
  int interior = 0;
  const double peak = lt::eval_initial(0.0);
  for (const auto& row : rows) {
    if (!row.support_interior) continue;
    ++interior;
    worst_drift = std::max(worst_drift, row.rel_drift);
    sup_preserved = sup_preserved && (row.sup_exact == peak);
  }
  const double t = timer.seconds();
  const bool pass = interior >= 1 && worst_drift <= 1e-10 && sup_preserved && t < 60.0;
  report(3, "pathwise conservation", pass,
         "worst rel L2 drift = " + fmt(worst_drift) + " over " + std::to_string(interior) +
             " interior snapshots, sup exactly preserved = " + (sup_preserved ? "yes" : "no"),
         t);
}

// Decreasing mean at x = 0 across the snapshot chain starting at t = 0.5;
// with margin_se > 0 every drop must additionally exceed margin_se pooled
// standard errors.
bool decreasing_at_origin(const lt::MonteCarloResult& mc, const lt::SpaceTimeGrid& grid,
                          double margin_se, std::string& detail) {
  const auto idx = grid.node_index(0.0);
  std::ostringstream os;
  bool pass = true;
  const auto& snaps = mc.snapshots;
  for (std::size_t s = 1; s < snaps.size(); ++s) {
    if (snaps[s - 1].mean.time == 0.0) continue;
    const double u0 = snaps[s - 1].mean.values[*idx];
    const double u1 = snaps[s].mean.values[*idx];
    const double se0 = snaps[s - 1].std_error.values[*idx];
    const double se1 = snaps[s].std_error.values[*idx];
    const double pooled = std::sqrt(se0 * se0 + se1 * se1);
    if (u0 - u1 <= margin_se * pooled) pass = false;
    os << " t" << snaps[s - 1].mean.time << "->" << snaps[s].mean.time << ": drop = "
       << fmt(u0 - u1);
    if (margin_se > 0.0) os << ", " << margin_se << "se = " << fmt(margin_se * pooled);
    os << ";";
  }
  detail = os.str();
  return pass;
}

void criterion_4_dissipation(const PaperRun& paper, int workers) {
  Timer timer;
  // Full paper resolution: each drop beyond two pooled standard errors.
  std::string detail_full;
  const bool full_pass = decreasing_at_origin(paper.mc, paper.grid, 2.0, detail_full);

  // Reduced preset (dt = 1e-3, n = 1000): same ordering, under a minute.
  Timer reduced_timer;
  lt::SpaceTimeGrid grid = paper.grid;
  grid.dt = 1e-3;
  lt::MonteCarloOptions opts;
  opts.n_samples = 1000;
  opts.master_seed = 20260809;
  opts.workers = workers;
  const auto reduced =
      lt::monte_carlo_mean(lt::default_initial_condition(), paper.noise, grid, opts);
  std::string detail_reduced;
  const bool reduced_pass = decreasing_at_origin(reduced, grid, 0.0, detail_reduced);
  const double reduced_t = reduced_timer.seconds();

  report(4, "averaged dissipation ordering", full_pass && reduced_pass && reduced_t < 60.0,
         "full(2se):" + detail_full + " reduced(ordering, <1min):" + detail_reduced,
         timer.seconds());
}

void criterion_5_cross_validation(const PaperRun& paper) {
  Timer timer;
  const double allowance = 0.05 * lt::eval_initial(0.0);
  const auto report_cmp =
      lt::compare_mc_pde(paper.mc.snapshots, paper.pde.snapshots, paper.grid.dx, allowance);
  bool pass = true;
  std::ostringstream os;
  os << "allowance = " << fmt(allowance) << ";";
  for (const auto& row : report_cmp.rows) {
    if (row.t != 0.5 && row.t != 1.0) continue;
    const bool row_pass = row.sup_discrepancy <= std::max(3.0 * row.pooled_stderr, allowance);
    pass = pass && row_pass;
    os << " t=" << row.t << ": sup = " << fmt(row.sup_discrepancy)
       << ", 3se = " << fmt(3.0 * row.pooled_stderr) << ";";
  }
  report(5, "MC mean vs deterministic evolution", pass, os.str(), timer.seconds());
}

void criterion_6_decay_exponent(const PaperRun& paper) {
  Timer timer;
  const auto series = lt::decay_series(paper.mc, paper.grid, 0.0);
  const auto fit = lt::fit_power_law(series, 0.5, 2.0, lt::FitMode::free_exponent);
  const auto table = lt::loglog_export(series, fit, 0.5, 1.0);
  const double target = -2.0 / 3.0;
  const bool pass = std::abs(fit.exponent - target) <= 0.15;
  report(6, "decay exponent", pass,
         "exponent = " + fmt(fit.exponent) + " vs -2/3 +- 0.15; log-RMS residual = " +
             fmt(fit.residual_error) + " (reported value 0.003 is informational), tail range [" +
             fmt(table.tail_residual_min) + ", " + fmt(table.tail_residual_max) + "]",
         timer.seconds());
}

void criterion_7_operator_identity() {
  Timer timer;
  const auto result = lt::operator_consistency_check(1.5, 1.0);
  report(7, "operator identity at theta = 1", result.max_abs_discrepancy <= 1e-6,
         "max discrepancy = " + fmt(result.max_abs_discrepancy) + ", tol 1e-6",
         timer.seconds());
}

void criterion_8_kernel_compensation() {
  Timer timer;
  const lt::AffineProfile affine(0.3, -1.2);
  double worst = 0.0;
  std::vector<lt::OperatorSpec> specs;
  specs.push_back(lt::make_truncated_operator(lt::MeasureParams{1.5, 2}, 0.5));
  specs.push_back(lt::make_truncated_operator(lt::MeasureParams{0.75, 5}, 1.0));
  specs.push_back(lt::make_truncated_operator(lt::MeasureParams{1.5, 1}, 0.5));
  lt::OperatorSpec full;
  full.kind = lt::OperatorKind::full_line;
  full.theta = 0.7;
  full.alpha = 1.5;
  full.m = 1;
  specs.push_back(full);
  full.alpha = 0.75;
  specs.push_back(full);
  lt::OperatorSpec frac;
  frac.kind = lt::OperatorKind::fractional_laplacian;
  frac.alpha = 1.5;
  frac.m = 1;
  specs.push_back(frac);
  for (const auto& spec : specs)
    for (double x : {-0.7, 0.0, 0.9})
      worst = std::max(worst, std::abs(lt::apply_operator(spec, affine, x)));
  report(8, "kernel compensation on affine inputs", worst <= 1e-12,
         "worst |value| = " + fmt(worst) + ", tol 1e-12", timer.seconds());
}

std::string read_payload(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_9_determinism() {
  Timer timer;
  const char* cli = std::getenv("LEVY_TRANSPORT_CLI");
  if (!cli) {
    report(9, "bit-identical CSVs across worker counts", false,
           "LEVY_TRANSPORT_CLI not set; run through ctest", timer.seconds());
    return;
  }
  const auto base = std::filesystem::temp_directory_path() / "levy_transport_acceptance";
  std::filesystem::remove_all(base);
  const std::string common =
      " simulate-mc --n-samples 150 --dt 0.01 --dx 0.02 --t-max 1"
      " --snapshot-times 0,0.5,1 --series-stride 5 --seed 7777";
  const std::string out1 = (base / "w1").string();
  const std::string out3 = (base / "w3").string();
  const int rc1 = std::system((std::string(cli) + common + " --workers 1 --out " + out1 +
                               " > /dev/null").c_str());
  const int rc3 = std::system((std::string(cli) + common + " --workers 3 --out " + out3 +
                               " > /dev/null").c_str());
  bool pass = rc1 == 0 && rc3 == 0;
  std::string detail = "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc3);
  if (pass) {
    for (const char* name : {"mc_snapshots.csv", "mc_decay_series.csv"}) {
      const std::string a = read_payload(out1 + "/" + name);
      const std::string b = read_payload(out3 + "/" + name);
      if (a.empty() || a != b) {
        pass = false;
        detail += std::string("; mismatch in ") + name;
      }
    }
    if (pass) detail += "; payloads byte-identical";
  }
  std::filesystem::remove_all(base);
  report(9, "bit-identical CSVs across worker counts", pass, detail, timer.seconds());
}

}  // namespace

int main() {
  const int workers = lt::resolve_worker_count(0);
  long n_samples = 5000;
  if (const char* env = std::getenv("LEVY_TRANSPORT_ACCEPT_N")) {
    n_samples = std::atol(env);
    std::printf("NOTE: LEVY_TRANSPORT_ACCEPT_N=%ld overrides the paper-scale sample count; "
                "criteria 4-6 are indicative only in this mode\n",
                n_samples);
  }

  criterion_1_beta_identity();
  criterion_2_projection();
  criterion_3_pathwise_conservation();

  Timer shared_timer;
  std::printf("running the shared paper-scale Monte Carlo + evolution (n = %ld, %d workers)\n",
              n_samples, workers);
  std::fflush(stdout);
  const PaperRun paper = run_paper_scale(n_samples, workers);
  std::printf("shared run done in %.1f s\n", shared_timer.seconds());

  criterion_4_dissipation(paper, workers);
  criterion_5_cross_validation(paper);
  criterion_6_decay_exponent(paper);
  criterion_7_operator_identity();
  criterion_8_kernel_compensation();
  criterion_9_determinism();

  if (failures == 0) {
    std::printf("acceptance: all criteria PASS\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", failures);
  return 1;
}
