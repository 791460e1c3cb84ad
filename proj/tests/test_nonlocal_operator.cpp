#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <functional>
#include <vector>

#include "levy_transport/nonlocal_operator.hpp"
#include "levy_transport/profiles.hpp"
#include "levy_transport/stats.hpp"

using namespace levy_transport;

namespace {

OperatorSpec full_line_spec(double theta, double alpha) {
  OperatorSpec spec;
  spec.kind = OperatorKind::full_line;
  spec.theta = theta;
  spec.alpha = alpha;
  spec.m = 1;
  return spec;
}

OperatorSpec fractional_spec(double alpha) {
  OperatorSpec spec;
  spec.kind = OperatorKind::fractional_laplacian;
  spec.theta = 1.0;
  spec.alpha = alpha;
  spec.m = 1;
  return spec;
}

}  // namespace

TEST_CASE("compensated kernels annihilate affine functions") {
  const AffineProfile affine(0.3, -1.2);
  const AffineProfile constant(0.7, 0.0);
  std::vector<OperatorSpec> specs;
  specs.push_back(make_truncated_operator(MeasureParams{1.5, 2}, 0.5));
  specs.push_back(make_truncated_operator(MeasureParams{0.75, 3}, 0.9));
  specs.push_back(full_line_spec(0.7, 1.5));
  specs.push_back(full_line_spec(0.7, 0.75));
  specs.push_back(fractional_spec(1.5));
  for (const auto& spec : specs) {
    for (double x : {-0.4, 0.0, 1.1}) {
      CHECK(std::abs(apply_operator(spec, affine, x)) <= 1e-12);
      CHECK(std::abs(apply_operator(spec, constant, x)) <= 1e-12);
    }
  }
}

TEST_CASE("truncated operator on x^2 is a positive constant") {
  const MeasureParams params{1.5, 2};
  const double theta = 0.5;
  const OperatorSpec spec = make_truncated_operator(params, theta);
  const QuadraticProfile square;
  const double at0 = apply_operator(spec, square, 0.0);
  const double at07 = apply_operator(spec, square, 0.7);
  CHECK(at0 > 0.0);
  CHECK(at0 == doctest::Approx(at07).epsilon(1e-8));

  // Oracle: theta^2 * 2 int_0^1 c(y) y^{1-alpha} dy. Swapping the order of
  // integration collapses the weight integral to a Beta function:
  //   int_0^1 c(y) y^{1-alpha} dy = B((m-1)/2, 3/2) / (2 (2-alpha)).
  const double oracle = theta * theta * 2.0 *
                        beta_function(0.5 * (params.m - 1), 1.5) /
                        (2.0 * (2.0 - params.alpha));
  CHECK(at0 == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("diffusion flattens the maximum of the bump") {
  const OperatorSpec spec = make_truncated_operator(MeasureParams{1.5, 2}, 0.5);
  const BumpProfile& bump = default_initial_condition();
  const double at_peak = apply_operator(spec, bump, 0.0);
  CHECK(at_peak < 0.0);

  // Independent dense-grid second-difference quadrature (trapezoid in
  // log-spaced y), as a rough magnitude check.
  const MeasureParams params{1.5, 2};
  double dense = 0.0;
  const int n = 4000;
  double y_prev = 1e-8;
  auto integrand = [&](double y) {
    return c_weight(y, params) * std::pow(y, -2.5) *
           (bump.value(0.5 * y) + bump.value(-0.5 * y) - 2.0 * bump.value(0.0));
  };
  double f_prev = integrand(y_prev);
  for (int i = 1; i <= n; ++i) {
    const double y = std::pow(10.0, -8.0 + 8.0 * i / n);
    const double f = integrand(y);
    dense += 0.5 * (f + f_prev) * (y - y_prev);
    y_prev = y;
    f_prev = f;
  }
  CHECK(at_peak == doctest::Approx(dense).epsilon(2e-3));
}

TEST_CASE("full-line and fractional quadratures agree at theta = 1") {
  for (double alpha : {1.25, 1.5}) {
    const auto report = operator_consistency_check(alpha, 1.0);
    CHECK(report.max_abs_discrepancy <= 1e-6);
  }
  // Scaling breaks the identity: the gap is genuine.
  const auto gap = operator_consistency_check(1.5, 0.5);
  CHECK(gap.max_abs_discrepancy > 1e-3);
}

TEST_CASE("translation equivariance on grid functions") {
  SpaceTimeGrid grid;
  grid.dx = 2e-3;
  grid.t_max = 1.0;
  grid.dt = 1e-2;
  const long n = grid.n_nodes();
  const BumpProfile& bump = default_initial_condition();
  const long shift_nodes = 50;  // h = 0.1
  std::vector<double> base(n), shifted(n, 0.0);
  for (long i = 0; i < n; ++i) base[i] = bump.value(grid.x(i));
  for (long i = shift_nodes; i < n; ++i) shifted[i] = base[i - shift_nodes];
  const GridFunction f(grid.x_min, grid.dx, base);
  const GridFunction f_h(grid.x_min, grid.dx, shifted);
  const OperatorSpec spec = make_truncated_operator(MeasureParams{1.5, 2}, 0.5);
  const double h = shift_nodes * grid.dx;
  for (double x : {0.0, 0.1, 0.2}) {
    const double lhs = apply_operator(spec, f_h, x + h);
    const double rhs = apply_operator(spec, f, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("stencil reproduces the direct evaluation on grid functions") {
  SpaceTimeGrid grid;
  grid.dx = 4e-3;
  const long n = grid.n_nodes();
  const BumpProfile& bump = default_initial_condition();
  std::vector<double> values(n);
  for (long i = 0; i < n; ++i) values[i] = bump.value(grid.x(i));
  const GridFunction f(grid.x_min, grid.dx, values);
  const OperatorSpec spec = make_truncated_operator(MeasureParams{1.5, 2}, 0.5);
  const OperatorStencil st = build_stencil(spec, grid.dx, 1.0);
  std::vector<double> lu(n);
  apply_stencil(st, values, lu, 1);
  for (long i : {n / 2, n / 2 + 13, n / 2 - 40, n / 4}) {
    CHECK(lu[i] == doctest::Approx(apply_operator(spec, f, grid.x(i))).epsilon(1e-8));
  }
}

TEST_CASE("quadrature refinement changes results below tolerance") {
  const BumpProfile& bump = default_initial_condition();
  const GaussianProfile gauss(0.6);
  OperatorSpec coarse = make_truncated_operator(MeasureParams{1.5, 2}, 0.5);
  QuadratureSpec finer_quad;
  finer_quad.nodes_per_panel = 32;
  finer_quad.core_radius = 5e-7;
  OperatorSpec fine = make_truncated_operator(MeasureParams{1.5, 2}, 0.5, finer_quad);
  for (const Profile* f : {static_cast<const Profile*>(&bump),
                           static_cast<const Profile*>(&gauss)}) {
    for (double x : {0.0, 0.05, 0.3, 0.9}) {
      const double a = apply_operator(coarse, *f, x);
      const double b = apply_operator(fine, *f, x);
      CHECK(std::abs(a - b) <= 1e-6);
    }
  }
  // Same refinement check for the full-line kinds.
  OperatorSpec full_coarse = full_line_spec(1.0, 1.5);
  OperatorSpec full_fine = full_coarse;
  full_fine.quad = finer_quad;
  for (double x : {0.0, 0.4}) {
    CHECK(std::abs(apply_operator(full_coarse, gauss, x) -
                   apply_operator(full_fine, gauss, x)) <= 1e-6);
  }
}

TEST_CASE("evolution: zero velocity field stays constant") {
  SpaceTimeGrid grid;
  grid.dx = 0.01;
  grid.t_max = 0.5;
  grid.dt = 0.01;
  grid.snapshot_times = {0.0, 0.25, 0.5};
  OperatorSpec spec = make_truncated_operator(MeasureParams{1.5, 2}, 0.0);
  EvolutionConfig cfg;
  cfg.grid = grid;
  const EvolutionResult result = evolve(spec, default_initial_condition(), cfg);
  REQUIRE(result.snapshots.size() == 3);
  for (const auto& field : result.snapshots)
    CHECK(field.values == result.snapshots.front().values);
  CHECK(result.stability_rate == 0.0);
}

TEST_CASE("evolution: dissipation, symmetry, stability metadata") {
  SpaceTimeGrid grid;
  grid.dx = 4e-3;
  grid.t_max = 0.2;
  grid.dt = 0.01;
  grid.snapshot_times = {0.0, 0.1, 0.2};
  OperatorSpec spec = make_truncated_operator(MeasureParams{1.5, 2}, 0.5);
  EvolutionConfig cfg;
  cfg.grid = grid;
  cfg.pad = 0.5;
  const EvolutionResult result = evolve(spec, default_initial_condition(), cfg);
  REQUIRE(result.snapshots.size() == 3);
  CHECK(result.stability_rate > 0.0);
  CHECK(result.dt_used <= 0.5 / result.stability_rate + 1e-15);
  CHECK(result.steps >= 2);

  const long n = grid.n_nodes();
  const long mid = n / 2;
  // Decreasing peak value.
  CHECK(result.snapshots[0].values[mid] > result.snapshots[1].values[mid]);
  CHECK(result.snapshots[1].values[mid] > result.snapshots[2].values[mid]);
  // Even initial data stays even.
  double asym = 0.0;
  for (long i = 0; i < n; ++i)
    asym = std::max(asym,
                    std::abs(result.snapshots[2].values[i] - result.snapshots[2].values[n - 1 - i]));
  CHECK(asym <= 1e-10);
}

TEST_CASE("evolution conserves mass up to boundary flux") {
  // Scheme-level property: the stencil annihilates constants, so the column
  // sums vanish and interior mass is exact.
  const OperatorSpec spec = make_truncated_operator(MeasureParams{1.5, 2}, 0.5);
  const OperatorStencil st = build_stencil(spec, 4e-3, 1.0);
  double column_sum = 0.0, magnitude = 0.0;
  for (double c : st.coeff) {
    column_sum += c;
    magnitude += std::abs(c);
  }
  CHECK(std::abs(column_sum) <= 1e-10 * magnitude);

  // Physical check: over a short horizon, with the operator rate matched to
  // the sampler and a generous pad, no appreciable mass reaches the window
  // edge and the recorded mass stays put.
  SpaceTimeGrid grid;
  grid.dx = 4e-3;
  grid.t_max = 0.01;
  grid.dt = 0.01;
  grid.snapshot_times = {0.0, 0.01};
  const OperatorSpec matched = make_truncated_operator(
      MeasureParams{1.5, 2}, 0.5, QuadratureSpec{}, sampler_generator_rate(MeasureParams{1.5, 2}));
  EvolutionConfig cfg;
  cfg.grid = grid;
  cfg.pad = 1.0;
  const EvolutionResult result = evolve(matched, default_initial_condition(), cfg);
  auto mass = [&](const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * grid.dx;
  };
  const double m0 = mass(result.snapshots[0]);
  const double m1 = mass(result.snapshots[1]);
  CHECK(std::abs(m1 - m0) / m0 <= 1e-6);
}

TEST_CASE("evolution aborts with a stability diagnostic when forced unstable") {
  SpaceTimeGrid grid;
  grid.dx = 0.01;
  grid.t_max = 0.5;
  grid.dt = 0.01;
  grid.snapshot_times = {0.0, 0.5};
  OperatorSpec spec = make_truncated_operator(MeasureParams{1.5, 2}, 0.5);
  EvolutionConfig cfg;
  cfg.grid = grid;
  cfg.safety = 80.0;  // deliberately past the stability bound
  CHECK_THROWS_WITH_AS(evolve(spec, default_initial_condition(), cfg),
                       doctest::Contains("unstable"), std::runtime_error);
}

TEST_CASE("mc-vs-pde comparison bookkeeping") {
  // Identical fields compare with zero discrepancy.
  std::vector<MeanField> mc(2);
  std::vector<ScalarField> pde(2);
  for (int s = 0; s < 2; ++s) {
    mc[s].mean.time = pde[s].time = 0.5 * s;
    mc[s].mean.values = {0.1, 0.2, 0.3};
    mc[s].std_error.time = 0.5 * s;
    mc[s].std_error.values = {0.01, 0.01, 0.01};
    pde[s].values = {0.1, 0.2, 0.3};
  }
  const auto report = compare_mc_pde(mc, pde, 0.1, 0.05);
  CHECK(report.all_pass);
  CHECK(report.rows[0].sup_discrepancy == 0.0);
  CHECK(report.rows[1].l2_discrepancy == 0.0);

  std::vector<ScalarField> wrong = pde;
  wrong[1].values.pop_back();
  CHECK_THROWS_AS(compare_mc_pde(mc, wrong, 0.1, 0.05), std::invalid_argument);
  std::vector<ScalarField> bad_time = pde;
  bad_time[1].time = 0.75;
  CHECK_THROWS_AS(compare_mc_pde(mc, bad_time, 0.1, 0.05), std::invalid_argument);
}

TEST_CASE("operator input validation and error naming") {
  OperatorSpec spec = make_truncated_operator(MeasureParams{1.5, 2}, 0.5);
  OperatorSpec bad = spec;
  bad.alpha = 2.5;
  CHECK_THROWS_AS(apply_operator(bad, default_initial_condition(), 0.0),
                  std::invalid_argument);
  OperatorSpec mismatched = spec;
  mismatched.m = 3;  // table still carries m = 2
  CHECK_THROWS_AS(apply_operator(mismatched, default_initial_condition(), 0.0),
                  std::invalid_argument);
  // theta = 0 short-circuits to zero.
  OperatorSpec still = make_truncated_operator(MeasureParams{1.5, 2}, 0.0);
  CHECK(apply_operator(still, default_initial_condition(), 0.0) == 0.0);
}
