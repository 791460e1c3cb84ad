#pragma once

#include <optional>
#include <span>
#include <vector>

#include "levy_transport/grid.hpp"
#include "levy_transport/levy_measure.hpp"
#include "levy_transport/profiles.hpp"
#include "levy_transport/transport_sim.hpp"

namespace levy_transport {

// The three compensated singular-kernel operators:
//   full_line:             int_R  (f(x+theta y) - f(x) - f'(x) theta y) |y|^{-1-a} dy
//   truncated:             int_{-1}^{1} c(y) (f(x+theta y) - f(x) - f'(x) theta y) |y|^{-1-a} dy
//   fractional_laplacian:  int_R  (f(x+y) - f(x) - f'(x) y 1_{(-1,1)}(y)) |y|^{-1-a} dy
// where c(y) is the projection weight of the truncated jump measure
// (identically 1 for jump dimension m = 1).
enum class OperatorKind { full_line, truncated, fractional_laplacian };

struct QuadratureSpec {
  int nodes_per_panel = 16;
  // Taylor-regularized core: on |y| <= core_radius the integrand is replaced
  // by (1/2) f''(x) theta^2 y^2 w(0) |y|^{-1-a}, integrated in closed form.
  double core_radius = 1e-6;
  double panel_ratio = 2.0;
};

struct OperatorSpec {
  OperatorKind kind = OperatorKind::truncated;
  double theta = 0.5;
  double alpha = 1.5;
  int m = 2;
  // Overall kernel multiplier; sampler_generator_rate(m, alpha) matches the
  // evolution to the unit-scale stable sampler.
  double rate = 1.0;
  QuadratureSpec quad;
  std::optional<WeightTable> weight_table;  // truncated kind with m >= 2

  void validate() const;
};

// Truncated operator with the weight table precomputed on the quadrature
// nodes the evaluator will use.
OperatorSpec make_truncated_operator(const MeasureParams& params, double theta,
                                     const QuadratureSpec& quad = {}, double rate = 1.0);

// Positive quadrature nodes (y, weight) covering (core_radius, 1]; weights
// include the panel map and the cos substitution taming the y -> 1 endpoint.
struct QuadNode {
  double y = 0.0;
  double w = 0.0;
};
std::vector<QuadNode> inner_quadrature_nodes(const QuadratureSpec& quad);

double apply_operator(const OperatorSpec& spec, const Profile& f, double x);

// Grid field adapter: cubic interpolation of the values, centered
// finite-difference first and second derivatives, zero extension outside.
class GridFunction final : public Profile {
 public:
  GridFunction(double x0, double dx, std::span<const double> values);
  GridFunction(const SpaceTimeGrid& grid, const ScalarField& field);

  double value(double x) const override;
  double slope(double x) const override;
  double curvature(double x) const override;
  double support_radius() const override;

 private:
  double interpolate(const std::vector<double>& data, double x) const;
  double x0_, dx_;
  std::vector<double> values_, d1_, d2_;
};

// Discrete translation-invariant form of the operator on a uniform grid with
// zero extension: (L u)_i = sum_j coeff[radius + j] u_{i+j}. Exactly the
// linear map apply_operator induces on grid functions.
struct OperatorStencil {
  long radius = 0;
  std::vector<double> coeff;
  double dx = 0.0;
};

OperatorStencil build_stencil(const OperatorSpec& spec, double dx, double window_half_width);
void apply_stencil(const OperatorStencil& st, std::span<const double> u, std::span<double> out,
                   int workers = 1);

struct EvolutionConfig {
  SpaceTimeGrid grid;
  double dt_target = 0.0;  // 0: derived from the stability estimate
  double safety = 0.5;     // dt = safety / |L applied to the worst grid mode|
  double pad = 1.0;        // window extension (same dx) before zero extension
  double blowup_factor = 10.0;
  int workers = 0;
};

struct EvolutionResult {
  std::vector<ScalarField> snapshots;
  double dt_used = 0.0;
  double stability_rate = 0.0;  // |L| on the alternating grid mode
  long steps = 0;
  long pad_nodes = 0;
};

// Explicit forward-Euler time stepping of d_t U = L U from the given initial
// profile; snapshots are returned on the configured (unpadded) grid.
EvolutionResult evolve(const OperatorSpec& spec, const Profile& ic, const EvolutionConfig& cfg);

struct ConsistencyReport {
  double max_abs_discrepancy = 0.0;
  int n_probes = 0;
  double theta = 1.0;
  double alpha = 1.5;
};

// Evaluates full_line (with the given theta) and fractional_laplacian on a
// battery of smooth test functions at probe points and reports the largest
// discrepancy. The two agree analytically when theta = 1 and alpha > 1.
ConsistencyReport operator_consistency_check(double alpha, double theta = 1.0,
                                             const QuadratureSpec& quad = {});

struct ComparisonRow {
  double t = 0.0;
  double sup_discrepancy = 0.0;
  double l2_discrepancy = 0.0;
  double pooled_stderr = 0.0;  // max over nodes of the MC standard error
  bool pass = false;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  bool all_pass = true;
  double abs_allowance = 0.0;
};

// Per-snapshot discrepancy between the Monte Carlo mean and the deterministic
// evolution on the same grid. A row passes when
// sup_discrepancy <= max(3 * pooled_stderr, abs_allowance).
ComparisonReport compare_mc_pde(const std::vector<MeanField>& mc,
                                const std::vector<ScalarField>& pde, double dx,
                                double abs_allowance);

}  // namespace levy_transport
