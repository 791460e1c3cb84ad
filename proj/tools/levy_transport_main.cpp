#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levy_transport/csv_io.hpp"
#include "levy_transport/decay_analysis.hpp"
#include "levy_transport/levy_measure.hpp"
#include "levy_transport/nonlocal_operator.hpp"
#include "levy_transport/profiles.hpp"
#include "levy_transport/run_config.hpp"
#include "levy_transport/stats.hpp"
#include "levy_transport/transport_sim.hpp"
#include "levy_transport/worker_pool.hpp"

namespace lt = levy_transport;

namespace {

// Exit codes: 0 success, 1 operational error, 2 a scientific check failed.
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kCheckFailed = 2;

struct Overrides {
  std::optional<std::string> config, preset, out, sigma, fit_window, snapshot_times, fit_mode, ic;
  std::optional<double> alpha, dt, dx, t_max, probe_x, jump_cutoff, pde_pad, pde_dt, ic_param;
  std::optional<long> n_samples, series_stride;
  std::optional<std::uint64_t> seed;
  std::optional<int> m, workers, replicates, quad_nodes;
  std::optional<std::string> mc_csv, pde_csv, series_csv;
};

void add_common_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config, "flat key = value configuration file");
  cmd->add_option("--preset", ov.preset, "parameter preset: paper (default) or reduced");
  cmd->add_option("--seed", ov.seed, "master seed for all random streams");
  cmd->add_option("--workers", ov.workers,
                  "worker threads (0: LEVY_TRANSPORT_WORKERS or hardware)");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--alpha", ov.alpha, "stability index in (0,2)");
  cmd->add_option("--m", ov.m, "jump dimension");
  cmd->add_option("--sigma", ov.sigma, "velocity vector, comma separated");
  cmd->add_option("--jump-cutoff", ov.jump_cutoff, "jump truncation radius");
  cmd->add_option("--dt", ov.dt, "time step of the noise grid");
  cmd->add_option("--dx", ov.dx, "space step");
  cmd->add_option("--t-max", ov.t_max, "final time");
  cmd->add_option("--snapshot-times", ov.snapshot_times, "comma separated snapshot times");
  cmd->add_option("--n-samples", ov.n_samples, "Monte Carlo sample count");
  cmd->add_option("--probe-x", ov.probe_x, "probe location for the decay series");
  cmd->add_option("--series-stride", ov.series_stride, "probe series stride in time steps");
  cmd->add_option("--fit-window", ov.fit_window, "fit window 'lo,hi'");
  cmd->add_option("--fit-mode", ov.fit_mode, "fit mode: free or fixed");
  cmd->add_option("--replicates", ov.replicates, "independent replicates for the bootstrap CI");
  cmd->add_option("--pde-pad", ov.pde_pad, "window extension for the deterministic evolution");
  cmd->add_option("--pde-dt", ov.pde_dt, "evolution step cap (0: stability estimate)");
  cmd->add_option("--quad-nodes", ov.quad_nodes, "quadrature nodes per panel");
  cmd->add_option("--ic", ov.ic, "initial condition name (bump, gaussian)");
  cmd->add_option("--ic-param", ov.ic_param, "initial condition parameter (radius/width)");
}

lt::RunConfig resolve_config(const Overrides& ov, const lt::RunConfig& base) {
  lt::RunConfig cfg = base;
  if (ov.config) {
    std::ifstream in(*ov.config);
    if (!in) throw std::runtime_error("cannot open config file: " + *ov.config);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const auto first = line.find_first_not_of(" \t\r\n");
      if (first == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error(*ov.config + ":" + std::to_string(line_no) +
                                 ": expected 'key = value'");
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
      };
      cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }
  if (ov.preset) {
    if (*ov.preset == "reduced") {
      cfg.dt = 1e-3;
      cfg.n_samples = 1000;
    } else if (*ov.preset != "paper") {
      throw std::runtime_error("unknown preset '" + *ov.preset + "'");
    }
  }
  if (ov.alpha) cfg.alpha = *ov.alpha;
  if (ov.m) cfg.m = *ov.m;
  if (ov.sigma) {
    cfg.sigma = lt::parse_double_list(*ov.sigma);
    cfg.m = static_cast<int>(cfg.sigma.size());
  }
  if (ov.jump_cutoff) cfg.jump_cutoff = *ov.jump_cutoff;
  if (ov.dt) cfg.dt = *ov.dt;
  if (ov.dx) cfg.dx = *ov.dx;
  if (ov.t_max) cfg.t_max = *ov.t_max;
  if (ov.snapshot_times) cfg.snapshot_times = lt::parse_double_list(*ov.snapshot_times);
  if (ov.n_samples) cfg.n_samples = *ov.n_samples;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.workers) cfg.workers = *ov.workers;
  if (ov.probe_x) cfg.probe_x = *ov.probe_x;
  if (ov.series_stride) cfg.series_stride = *ov.series_stride;
  if (ov.fit_window) {
    const auto w = lt::parse_double_list(*ov.fit_window);
    if (w.size() != 2) throw std::runtime_error("--fit-window needs 'lo,hi'");
    cfg.fit_lo = w[0];
    cfg.fit_hi = w[1];
  }
  if (ov.fit_mode) cfg.fit_mode = *ov.fit_mode;
  if (ov.replicates) cfg.replicates = *ov.replicates;
  if (ov.pde_pad) cfg.pde_pad = *ov.pde_pad;
  if (ov.pde_dt) cfg.pde_dt = *ov.pde_dt;
  if (ov.quad_nodes) cfg.quad_nodes = *ov.quad_nodes;
  if (ov.ic) cfg.ic_name = *ov.ic;
  if (ov.ic_param) cfg.ic_param = *ov.ic_param;
  if (ov.out) cfg.out_dir = *ov.out;
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  return cfg;
}

std::string out_path(const lt::RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::vector<lt::MeanField> with_zero_stderr(const std::vector<lt::ScalarField>& fields) {
  std::vector<lt::MeanField> out;
  for (const auto& f : fields) {
    lt::MeanField mf;
    mf.mean = f;
    mf.std_error.time = f.time;
    mf.std_error.values.assign(f.values.size(), 0.0);
    out.push_back(std::move(mf));
  }
  return out;
}

lt::OperatorSpec truncated_operator_from(const lt::RunConfig& cfg) {
  const lt::MeasureParams params{cfg.alpha, cfg.m};
  lt::QuadratureSpec quad;
  quad.nodes_per_panel = cfg.quad_nodes;
  quad.core_radius = cfg.quad_core_radius;
  return lt::make_truncated_operator(params, cfg.noise().theta, quad,
                                     lt::sampler_generator_rate(params));
}

lt::EvolutionResult run_pde(const lt::RunConfig& cfg, const lt::Profile& ic,
                            lt::EvolutionResult* out_result = nullptr) {
  const lt::OperatorSpec spec = truncated_operator_from(cfg);
  lt::EvolutionConfig ev;
  ev.grid = cfg.grid();
  ev.dt_target = cfg.pde_dt;
  ev.safety = cfg.pde_safety;
  ev.pad = cfg.pde_pad;
  ev.workers = cfg.workers;
  lt::EvolutionResult result = lt::evolve(spec, ic, ev);
  if (out_result) *out_result = result;
  return result;
}

lt::MonteCarloResult run_mc(const lt::RunConfig& cfg, const lt::Profile& ic) {
  lt::MonteCarloOptions opts;
  opts.n_samples = cfg.n_samples;
  opts.master_seed = cfg.seed;
  opts.workers = cfg.workers;
  opts.max_rejects = cfg.max_rejects;
  opts.probe_x = cfg.probe_x;
  opts.series_stride = cfg.series_stride;
  return lt::monte_carlo_mean(ic, cfg.noise(), cfg.grid(), opts);
}

int cmd_simulate_path(const lt::RunConfig& cfg) {
  const auto ic = lt::make_initial_condition(cfg.ic_name, cfg.ic_param);
  lt::RngStream rng(cfg.seed, 0);
  const lt::LevyPath path =
      lt::simulate_path(cfg.noise(), cfg.t_max, cfg.dt, rng, cfg.max_rejects);
  const lt::PathwiseRun run = lt::pathwise_solution(*ic, cfg.noise(), path, cfg.grid());
  const auto rows = lt::conservation_report(run, *ic, cfg.grid());

  lt::Metadata meta = cfg.metadata("simulate-path");
  meta.set("total_rejects", path.total_rejects);
  lt::write_snapshots_csv(out_path(cfg, "pathwise_snapshots.csv"), meta,
                          cfg.grid().x_nodes(), with_zero_stderr(run.snapshots));
  lt::write_conservation_csv(out_path(cfg, "pathwise_conservation.csv"), meta, rows);

  std::cout << "pathwise run: " << run.snapshots.size() << " snapshots, "
            << path.steps() << " steps\n";
  for (const auto& row : rows)
    std::cout << "  t = " << lt::format_double(row.t)
              << "  l2 = " << lt::format_double(row.l2)
              << "  rel_drift = " << lt::format_double(row.rel_drift)
              << (row.support_interior ? "" : "  [support left the window]") << "\n";
  return kOk;
}

int cmd_simulate_mc(const lt::RunConfig& cfg) {
  const auto ic = lt::make_initial_condition(cfg.ic_name, cfg.ic_param);
  const lt::MonteCarloResult result = run_mc(cfg, *ic);

  lt::Metadata meta = cfg.metadata("simulate-mc");
  meta.set("total_rejects", result.total_rejects);
  for (std::size_t s = 0; s < result.escaped_fraction.size(); ++s)
    meta.set("escaped_fraction_t" + lt::format_double(cfg.snapshot_times[s]),
             result.escaped_fraction[s]);
  lt::write_snapshots_csv(out_path(cfg, "mc_snapshots.csv"), meta, cfg.grid().x_nodes(),
                          result.snapshots);
  const auto series = lt::decay_series(result, cfg.grid(), cfg.probe_x);
  lt::write_series_csv(out_path(cfg, "mc_decay_series.csv"), meta, series);

  std::cout << "monte carlo: n = " << result.n_samples << ", seed = " << result.master_seed
            << ", rejected draws = " << result.total_rejects << "\n";
  for (const auto& mf : result.snapshots) {
    double peak = 0.0;
    for (double v : mf.mean.values) peak = std::max(peak, v);
    std::cout << "  t = " << lt::format_double(mf.mean.time)
              << "  max mean = " << lt::format_double(peak) << "\n";
  }
  return kOk;
}

int cmd_evolve_pde(const lt::RunConfig& cfg) {
  const auto ic = lt::make_initial_condition(cfg.ic_name, cfg.ic_param);
  const lt::EvolutionResult result = run_pde(cfg, *ic);

  lt::Metadata meta = cfg.metadata("evolve-pde");
  meta.set("pde_dt_used", result.dt_used);
  meta.set("pde_stability_rate", result.stability_rate);
  meta.set("pde_steps", result.steps);
  meta.set("generator_rate", lt::sampler_generator_rate(lt::MeasureParams{cfg.alpha, cfg.m}));
  lt::write_snapshots_csv(out_path(cfg, "pde_snapshots.csv"), meta, cfg.grid().x_nodes(),
                          with_zero_stderr(result.snapshots));

  std::cout << "evolution: " << result.steps << " steps, dt = "
            << lt::format_double(result.dt_used)
            << ", worst-mode rate = " << lt::format_double(result.stability_rate) << "\n";
  for (const auto& f : result.snapshots) {
    double peak = 0.0;
    for (double v : f.values) peak = std::max(peak, v);
    std::cout << "  t = " << lt::format_double(f.time)
              << "  max = " << lt::format_double(peak) << "\n";
  }
  return kOk;
}

int cmd_validate(const lt::RunConfig& cfg, const Overrides& ov) {
  bool all_pass = true;
  lt::Metadata meta = cfg.metadata("validate");

  // Projection constant against the closed Beta-function form.
  {
    std::ofstream out(out_path(cfg, "validate_beta_identity.csv"));
    lt::write_metadata(out, meta);
    out << "m,alpha,radial_integral,beta_half,abs_err,pass\n";
    double worst = 0.0;
    for (int m : {2, 3, 5, 10}) {
      for (double alpha : {0.5, 1.0, 1.5}) {
        const lt::MeasureParams p{alpha, m};
        const double radial = lt::radial_tail_integral(p);
        const double exact = 0.5 * lt::beta_function(0.5 * (m - 1), 0.5 * (alpha + 1));
        const double err = std::abs(radial - exact);
        worst = std::max(worst, err);
        out << m << ',' << lt::format_double(alpha) << ',' << lt::format_double(radial) << ','
            << lt::format_double(exact) << ',' << lt::format_double(err) << ','
            << (err <= 1e-8 ? 1 : 0) << "\n";
      }
    }
    const bool pass = worst <= 1e-8;
    all_pass = all_pass && pass;
    std::cout << (pass ? "[pass]" : "[FAIL]")
              << " projection constant vs Beta identity, worst |err| = "
              << lt::format_double(worst) << "\n";
  }

  // Projected-measure sampling against the quadrature density.
  {
    std::ofstream out(out_path(cfg, "validate_projection.csv"));
    lt::write_metadata(out, meta);
    out << "m,alpha,r_min,n_samples,chi_square,dof,p_value,pass\n";
    const struct {
      int m;
      double alpha;
      double r_min;
    } cases[] = {{2, 1.5, 0.1}, {5, 0.5, 0.2}};
    int case_idx = 0;
    for (const auto& c : cases) {
      lt::RngStream rng(cfg.seed, 1000 + case_idx++);
      const auto report =
          lt::validate_projection(lt::MeasureParams{c.alpha, c.m}, c.r_min, 100000, rng);
      const bool pass = report.p_value > 1e-3;
      all_pass = all_pass && pass;
      out << c.m << ',' << lt::format_double(c.alpha) << ',' << lt::format_double(c.r_min)
          << ',' << report.n_samples << ',' << lt::format_double(report.chi_square) << ','
          << report.dof << ',' << lt::format_double(report.p_value) << ',' << (pass ? 1 : 0)
          << "\n";
      std::cout << (pass ? "[pass]" : "[FAIL]") << " projected-measure chi-square (m = "
                << c.m << ", alpha = " << lt::format_double(c.alpha)
                << "): p = " << lt::format_double(report.p_value) << "\n";
    }
  }

  // Operator identity at theta = 1 and the documented gap at theta = 0.5.
  {
    const auto report = lt::operator_consistency_check(1.5, 1.0);
    const bool pass = report.max_abs_discrepancy <= 1e-6;
    all_pass = all_pass && pass;
    const auto gap = lt::operator_consistency_check(1.5, 0.5);
    std::ofstream out(out_path(cfg, "validate_operator_identity.csv"));
    lt::write_metadata(out, meta);
    out << "theta,alpha,max_abs_discrepancy,pass\n";
    out << "1," << lt::format_double(report.alpha) << ','
        << lt::format_double(report.max_abs_discrepancy) << ',' << (pass ? 1 : 0) << "\n";
    out << "0.5," << lt::format_double(gap.alpha) << ','
        << lt::format_double(gap.max_abs_discrepancy) << ",-\n";
    std::cout << (pass ? "[pass]" : "[FAIL]")
              << " operator identity at theta = 1: max discrepancy = "
              << lt::format_double(report.max_abs_discrepancy)
              << " (theta = 0.5 gap = " << lt::format_double(gap.max_abs_discrepancy) << ")\n";
  }

  // Monte Carlo mean against the deterministic evolution.
  {
    const auto ic = lt::make_initial_condition(cfg.ic_name, cfg.ic_param);
    std::vector<lt::MeanField> mc_fields;
    std::vector<lt::ScalarField> pde_fields;
    if (ov.mc_csv && ov.pde_csv) {
      mc_fields = lt::read_snapshots_csv(*ov.mc_csv).fields;
      for (auto& mf : lt::read_snapshots_csv(*ov.pde_csv).fields)
        pde_fields.push_back(std::move(mf.mean));
    } else {
      mc_fields = run_mc(cfg, *ic).snapshots;
      pde_fields = run_pde(cfg, *ic).snapshots;
    }
    const double allowance = cfg.compare_allowance_frac * ic->value(0.0);
    const auto report = lt::compare_mc_pde(mc_fields, pde_fields, cfg.dx, allowance);
    lt::write_comparison_csv(out_path(cfg, "validate_mc_vs_pde.csv"), meta, report);
    all_pass = all_pass && report.all_pass;
    std::cout << (report.all_pass ? "[pass]" : "[FAIL]")
              << " Monte Carlo mean vs deterministic evolution (allowance = "
              << lt::format_double(allowance) << ")\n";
    for (const auto& row : report.rows)
      std::cout << "    t = " << lt::format_double(row.t)
                << "  sup = " << lt::format_double(row.sup_discrepancy)
                << "  l2 = " << lt::format_double(row.l2_discrepancy)
                << "  pooled_se = " << lt::format_double(row.pooled_stderr)
                << (row.pass ? "" : "  [FAIL]") << "\n";
  }

  std::cout << (all_pass ? "validation passed" : "validation FAILED") << "\n";
  return all_pass ? kOk : kCheckFailed;
}

int cmd_fit_decay(const lt::RunConfig& cfg, const Overrides& ov) {
  const auto ic = lt::make_initial_condition(cfg.ic_name, cfg.ic_param);
  lt::Metadata meta = cfg.metadata("fit-decay");

  std::vector<lt::DecayPoint> series;
  if (ov.series_csv) {
    series = lt::read_series_csv(*ov.series_csv);
  } else {
    const auto result = run_mc(cfg, *ic);
    series = lt::decay_series(result, cfg.grid(), cfg.probe_x);
    lt::write_series_csv(out_path(cfg, "mc_decay_series.csv"), meta, series);
  }

  const lt::FitMode mode =
      (cfg.fit_mode == "fixed") ? lt::FitMode::fixed_exponent : lt::FitMode::free_exponent;
  const lt::DecayFit fit =
      lt::fit_power_law(series, cfg.fit_lo, cfg.fit_hi, mode, -1.0 / cfg.alpha);
  const lt::LogLogTable table = lt::loglog_export(series, fit, cfg.tail_lo, cfg.tail_hi);

  lt::write_fit_report_csv(out_path(cfg, "decay_fit.csv"), meta, fit);
  lt::write_loglog_csv(out_path(cfg, "decay_loglog.csv"), meta, table);
  lt::write_gnuplot_script(out_path(cfg, "decay_plots.gp"), "mc_decay_series.csv", fit);
  std::cout << lt::fit_summary_text(fit, table);
  std::cout << "  reference exponent -1/alpha = " << lt::format_double(-1.0 / cfg.alpha) << "\n";

  if (cfg.replicates > 0) {
    std::vector<std::vector<lt::DecayPoint>> replicate_series;
    for (int r = 0; r < cfg.replicates; ++r) {
      lt::RunConfig rep = cfg;
      rep.seed = cfg.seed + (r + 1) * 0x9e3779b97f4a7c15ULL;
      const auto result = run_mc(rep, *ic);
      replicate_series.push_back(lt::decay_series(result, cfg.grid(), cfg.probe_x));
    }
    const auto ci = lt::bootstrap_exponent_ci(replicate_series, cfg.fit_lo, cfg.fit_hi, mode,
                                              cfg.seed);
    std::ofstream out(out_path(cfg, "decay_bootstrap.csv"));
    lt::write_metadata(out, meta);
    out << "n_replicates,point,lo_95,hi_95\n";
    out << ci.n_replicates << ',' << lt::format_double(ci.point) << ','
        << lt::format_double(ci.lo) << ',' << lt::format_double(ci.hi) << "\n";
    std::cout << "  bootstrap 95% exponent interval over " << ci.n_replicates
              << " replicates: [" << lt::format_double(ci.lo) << ", "
              << lt::format_double(ci.hi) << "]\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport noise simulator: pathwise and averaged solutions of a scalar "
               "transport equation driven by a truncated isotropic alpha-stable process, "
               "the matching nonlocal diffusion equation, and decay analysis"};
  app.require_subcommand(1);

  Overrides ov;
  CLI::App* sim_path = app.add_subcommand("simulate-path",
                                          "one pathwise run with a conservation report");
  CLI::App* sim_mc = app.add_subcommand("simulate-mc",
                                        "Monte Carlo mean/stderr fields and decay series");
  CLI::App* evolve = app.add_subcommand("evolve-pde",
                                        "explicit evolution of the averaged equation");
  CLI::App* validate = app.add_subcommand("validate",
                                          "projection, operator and MC-vs-PDE checks");
  CLI::App* fit = app.add_subcommand("fit-decay", "power-law fit of the decay series");
  for (CLI::App* cmd : {sim_path, sim_mc, evolve, validate, fit}) add_common_options(cmd, ov);
  validate->add_option("--mc", ov.mc_csv, "reuse mc_snapshots.csv instead of recomputing");
  validate->add_option("--pde", ov.pde_csv, "reuse pde_snapshots.csv instead of recomputing");
  fit->add_option("--series", ov.series_csv, "fit an existing decay series CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    lt::RunConfig base;
    if (app.got_subcommand(validate)) base.dx = 4e-3;  // MC fields are grid-exact; see README
    const lt::RunConfig cfg = resolve_config(ov, base);
    if (app.got_subcommand(sim_path)) return cmd_simulate_path(cfg);
    if (app.got_subcommand(sim_mc)) return cmd_simulate_mc(cfg);
    if (app.got_subcommand(evolve)) return cmd_evolve_pde(cfg);
    if (app.got_subcommand(validate)) return cmd_validate(cfg, ov);
    if (app.got_subcommand(fit)) return cmd_fit_decay(cfg, ov);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
