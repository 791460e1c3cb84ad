#include "levy_transport/nonlocal_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "levy_transport/quadrature.hpp"
#include "levy_transport/worker_pool.hpp"

namespace levy_transport {

void OperatorSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("OperatorSpec: alpha must lie in (0,2)");
  if (!(theta >= 0.0)) throw std::invalid_argument("OperatorSpec: theta must be >= 0");
  if (m < 1) throw std::invalid_argument("OperatorSpec: m must be >= 1");
  if (!(rate > 0.0)) throw std::invalid_argument("OperatorSpec: rate must be > 0");
  if (!(quad.core_radius > 0.0 && quad.core_radius < 0.5))
    throw std::invalid_argument("OperatorSpec: core_radius must lie in (0, 0.5)");
  if (quad.nodes_per_panel < 4)
    throw std::invalid_argument("OperatorSpec: nodes_per_panel must be >= 4");
  if (weight_table) {
    if (weight_table->m != m || std::abs(weight_table->alpha - alpha) > 1e-12)
      throw std::invalid_argument("OperatorSpec: weight table (m, alpha) mismatch");
  }
}

std::vector<QuadNode> inner_quadrature_nodes(const QuadratureSpec& quad) {
  const auto edges = geometric_edges(quad.core_radius, 1.0, quad.panel_ratio);
  const auto& rule = gauss_legendre_rule(quad.nodes_per_panel);
  std::vector<QuadNode> nodes;
  // Integrate in phi with y = sin(phi): the weight's square-root behavior at
  // y = 1 becomes smooth. Geometric panels refine toward the kernel
  // singularity; wide top panels are subdivided so sharply featured inputs
  // stay resolved.
  constexpr double kMaxPanelPhi = 0.05;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double phi_a = std::asin(edges[p]);
    const double phi_b = std::asin(edges[p + 1]);
    const int n_sub = std::max(1, static_cast<int>(std::ceil((phi_b - phi_a) / kMaxPanelPhi)));
    for (int sub = 0; sub < n_sub; ++sub) {
      const double a = phi_a + (phi_b - phi_a) * sub / n_sub;
      const double b = phi_a + (phi_b - phi_a) * (sub + 1) / n_sub;
      const double mid = 0.5 * (a + b);
      const double half = 0.5 * (b - a);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double phi = mid + half * rule.nodes[i];
        nodes.push_back({std::sin(phi), rule.weights[i] * half * std::cos(phi)});
      }
    }
  }
  return nodes;
}

namespace {

bool table_matches(const WeightTable& table, const std::vector<QuadNode>& nodes) {
  if (table.y_nodes.size() != nodes.size()) return false;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (std::abs(table.y_nodes[i] - nodes[i].y) > 1e-12) return false;
  return true;
}

// Projection weight at the quadrature nodes: 1 for every kind except the
// truncated operator with m >= 2.
std::vector<double> inner_weight_values(const OperatorSpec& spec,
                                        const std::vector<QuadNode>& nodes) {
  if (spec.kind != OperatorKind::truncated || spec.m == 1)
    return std::vector<double>(nodes.size(), 1.0);
  if (spec.weight_table && table_matches(*spec.weight_table, nodes))
    return spec.weight_table->c_values;
  const MeasureParams params{spec.alpha, spec.m};
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = c_weight(nodes[i].y, params);
  return values;
}

double weight_at_zero(const OperatorSpec& spec) {
  if (spec.kind != OperatorKind::truncated || spec.m == 1) return 1.0;
  if (spec.weight_table) return spec.weight_table->c_zero;
  return radial_tail_integral(MeasureParams{spec.alpha, spec.m});
}

void require_finite(double v, const char* region, double x) {
  if (!std::isfinite(v))
    throw std::runtime_error(std::string("apply_operator: non-finite value in the ") + region +
                             " at x = " + std::to_string(x));
}

// Symmetric second difference with a cancellation guard: a result below the
// rounding floor of its operands is exact zero up to machine noise, and the
// singular kernel would otherwise amplify that noise (affine inputs must come
// out as exact zeros).
double second_difference(const Profile& f, double x, double h, double fx) {
  const double vp = f.value(x + h);
  const double vm = f.value(x - h);
  const double pair = (vp - fx) + (vm - fx);
  const double floor_ = 8.0 * 2.220446049250313e-16 *
                        (std::abs(vp) + std::abs(vm) + 2.0 * std::abs(fx));
  return (std::abs(pair) <= floor_) ? 0.0 : pair;
}

constexpr int kOuterPanels = 16;

}  // namespace

OperatorSpec make_truncated_operator(const MeasureParams& params, double theta,
                                     const QuadratureSpec& quad, double rate) {
  params.validate();
  OperatorSpec spec;
  spec.kind = OperatorKind::truncated;
  spec.theta = theta;
  spec.alpha = params.alpha;
  spec.m = params.m;
  spec.rate = rate;
  spec.quad = quad;
  if (params.m >= 2) {
    const auto nodes = inner_quadrature_nodes(quad);
    std::vector<double> ys(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) ys[i] = nodes[i].y;
    spec.weight_table = build_weight_table(params, ys);
  }
  spec.validate();
  return spec;
}

double apply_operator(const OperatorSpec& spec, const Profile& f, double x) {
  spec.validate();
  const double alpha = spec.alpha;
  const double shift = (spec.kind == OperatorKind::fractional_laplacian) ? 1.0 : spec.theta;
  if (shift == 0.0) return 0.0;

  const auto nodes = inner_quadrature_nodes(spec.quad);
  const auto weights = inner_weight_values(spec, nodes);
  const double fx = f.value(x);

  const double delta = spec.quad.core_radius;
  double inner = f.curvature(x) * shift * shift * weight_at_zero(spec) *
                 std::pow(delta, 2.0 - alpha) / (2.0 - alpha);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double y = nodes[i].y;
    inner += nodes[i].w * weights[i] * std::pow(y, -1.0 - alpha) *
             second_difference(f, x, shift * y, fx);
  }
  require_finite(inner, "inner region |y| <= 1", x);

  double outer = 0.0;
  if (spec.kind != OperatorKind::truncated) {
    const double support = f.support_radius();
    const auto& rule = gauss_legendre_rule(spec.quad.nodes_per_panel);
    if (std::isfinite(support)) {
      if (spec.kind == OperatorKind::full_line) {
        // Symmetric pairs: the drift part cancels, f vanishes beyond big_y.
        const double big_y = std::max(2.0, (support + std::abs(x)) / shift + 1.0);
        const auto edges = geometric_edges(1.0, big_y, spec.quad.panel_ratio);
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
          const double mid = 0.5 * (edges[p] + edges[p + 1]);
          const double half = 0.5 * (edges[p + 1] - edges[p]);
          for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double y = mid + half * rule.nodes[i];
            outer += rule.weights[i] * half * std::pow(y, -1.0 - alpha) *
                     second_difference(f, x, shift * y, fx);
          }
        }
        outer += -2.0 * fx * std::pow(big_y, -alpha) / alpha;
      } else {
        // No drift compensation outside (-1,1); the -f(x) part integrates in
        // closed form, the shifted parts side by side on the same panels.
        outer += -2.0 * fx / alpha;
        const double big_y = support + std::abs(x) + 1.0;
        if (big_y > 1.0) {
          const auto edges = geometric_edges(1.0, big_y, spec.quad.panel_ratio);
          for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
            const double mid = 0.5 * (edges[p] + edges[p + 1]);
            const double half = 0.5 * (edges[p + 1] - edges[p]);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
              const double y = mid + half * rule.nodes[i];
              outer += rule.weights[i] * half * std::pow(y, -1.0 - alpha) *
                       (f.value(x + y) + f.value(x - y));
            }
          }
        }
      }
    } else {
      // Non-decaying input: symmetric principal-value evaluation through
      // y = 1/s. Exact for affine inputs, where the pair vanishes.
      for (int p = 0; p < kOuterPanels; ++p) {
        const double a = static_cast<double>(p) / kOuterPanels;
        const double b = static_cast<double>(p + 1) / kOuterPanels;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double s = mid + half * rule.nodes[i];
          outer += rule.weights[i] * half * std::pow(s, alpha - 1.0) *
                   second_difference(f, x, shift / s, fx) * std::pow(shift, -alpha);
        }
      }
    }
    require_finite(outer, "outer region |y| > 1", x);
  }
  return spec.rate * (inner + outer);
}

GridFunction::GridFunction(double x0, double dx, std::span<const double> values)
    : x0_(x0), dx_(dx), values_(values.begin(), values.end()) {
  if (!(dx > 0.0) || values_.size() < 4)
    throw std::invalid_argument("GridFunction: need dx > 0 and at least 4 nodes");
  const long n = static_cast<long>(values_.size());
  d1_.assign(n, 0.0);
  d2_.assign(n, 0.0);
  auto at = [&](long i) { return (i < 0 || i >= n) ? 0.0 : values_[i]; };
  for (long i = 0; i < n; ++i) {
    d1_[i] = (at(i + 1) - at(i - 1)) / (2.0 * dx_);
    d2_[i] = (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (dx_ * dx_);
  }
}

GridFunction::GridFunction(const SpaceTimeGrid& grid, const ScalarField& field)
    : GridFunction(grid.x_min, grid.dx, field.values) {}

namespace {

// Quartic Lagrange weights on the symmetric node set {-2,...,2} around the
// nearest grid point, psi in [-1/2, 1/2]. The symmetric stencil keeps the
// response of the highest grid mode even in the offset, so the sub-grid part
// of the singular kernel cannot inflate the stiffness of the discrete
// operator (an asymmetric cubic stencil has a linear Nyquist droop there).
inline void interp_weights(double psi, double w[5]) {
  const double a = psi + 2.0, b = psi + 1.0, c = psi, d = psi - 1.0, e = psi - 2.0;
  w[0] = b * c * d * e / 24.0;
  w[1] = -a * c * d * e / 6.0;
  w[2] = a * b * d * e / 4.0;
  w[3] = -a * b * c * e / 6.0;
  w[4] = a * b * c * d / 24.0;
}

}  // namespace

double GridFunction::interpolate(const std::vector<double>& data, double x) const {
  const long n = static_cast<long>(data.size());
  const double u = (x - x0_) / dx_;
  if (u < -2.0 || u > static_cast<double>(n) + 1.0) return 0.0;
  const long base = static_cast<long>(std::floor(u + 0.5));
  const double psi = u - base;
  double w[5];
  interp_weights(psi, w);
  double sum = 0.0;
  for (int l = 0; l < 5; ++l) {
    const long i = base - 2 + l;
    if (i >= 0 && i < n) sum += w[l] * data[i];
  }
  return sum;
}

double GridFunction::value(double x) const { return interpolate(values_, x); }
double GridFunction::slope(double x) const { return interpolate(d1_, x); }
double GridFunction::curvature(double x) const { return interpolate(d2_, x); }

double GridFunction::support_radius() const {
  const double x_end = x0_ + dx_ * (values_.size() - 1);
  return std::max(std::abs(x0_), std::abs(x_end)) + 2.0 * dx_;
}

OperatorStencil build_stencil(const OperatorSpec& spec, double dx, double window_half_width) {
  spec.validate();
  if (!(dx > 0.0)) throw std::invalid_argument("build_stencil: dx must be > 0");
  const double alpha = spec.alpha;
  const double shift = (spec.kind == OperatorKind::fractional_laplacian) ? 1.0 : spec.theta;

  OperatorStencil st;
  st.dx = dx;
  if (shift == 0.0) {
    st.radius = 1;
    st.coeff.assign(3, 0.0);
    return st;
  }

  double max_offset = shift / dx;  // inner reach in node units
  double big_y = 0.0;
  if (spec.kind == OperatorKind::full_line) {
    big_y = std::max(2.0, 2.0 * window_half_width / shift + 1.0);
    max_offset = shift * big_y / dx;
  } else if (spec.kind == OperatorKind::fractional_laplacian) {
    max_offset = (2.0 * window_half_width + 1.0) / dx;
  }
  st.radius = static_cast<long>(std::ceil(max_offset)) + 3;
  st.coeff.assign(2 * st.radius + 1, 0.0);

  auto add_point = [&](double offset_units, double weight) {
    const long base = static_cast<long>(std::floor(offset_units + 0.5));
    const double psi = offset_units - base;
    double w[5];
    interp_weights(psi, w);
    for (int l = 0; l < 5; ++l) st.coeff[st.radius + base - 2 + l] += weight * w[l];
  };

  // Taylor core as a centered second difference.
  const double delta = spec.quad.core_radius;
  const double core = spec.rate * shift * shift * weight_at_zero(spec) *
                      std::pow(delta, 2.0 - alpha) / (2.0 - alpha);
  st.coeff[st.radius - 1] += core / (dx * dx);
  st.coeff[st.radius] += -2.0 * core / (dx * dx);
  st.coeff[st.radius + 1] += core / (dx * dx);

  const auto nodes = inner_quadrature_nodes(spec.quad);
  const auto weights = inner_weight_values(spec, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double k = spec.rate * nodes[i].w * weights[i] * std::pow(nodes[i].y, -1.0 - alpha);
    const double off = shift * nodes[i].y / dx;
    add_point(off, k);
    add_point(-off, k);
    st.coeff[st.radius] += -2.0 * k;
  }

  if (spec.kind == OperatorKind::full_line) {
    const auto& rule = gauss_legendre_rule(spec.quad.nodes_per_panel);
    const auto edges = geometric_edges(1.0, big_y, spec.quad.panel_ratio);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      const double mid = 0.5 * (edges[p] + edges[p + 1]);
      const double half = 0.5 * (edges[p + 1] - edges[p]);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double y = mid + half * rule.nodes[i];
        const double k = spec.rate * rule.weights[i] * half * std::pow(y, -1.0 - alpha);
        add_point(shift * y / dx, k);
        add_point(-shift * y / dx, k);
        st.coeff[st.radius] += -2.0 * k;
      }
    }
    st.coeff[st.radius] += spec.rate * -2.0 * std::pow(big_y, -alpha) / alpha;
  } else if (spec.kind == OperatorKind::fractional_laplacian) {
    const auto& rule = gauss_legendre_rule(spec.quad.nodes_per_panel);
    st.coeff[st.radius] += spec.rate * -2.0 / alpha;
    const double big_y = 2.0 * window_half_width + 1.0;
    const auto edges = geometric_edges(1.0, big_y, spec.quad.panel_ratio);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      const double mid = 0.5 * (edges[p] + edges[p + 1]);
      const double half = 0.5 * (edges[p + 1] - edges[p]);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double y = mid + half * rule.nodes[i];
        const double k = spec.rate * rule.weights[i] * half * std::pow(y, -1.0 - alpha);
        add_point(y / dx, k);
        add_point(-y / dx, k);
      }
    }
  }
  return st;
}

void apply_stencil(const OperatorStencil& st, std::span<const double> u, std::span<double> out,
                   int workers) {
  const long n = static_cast<long>(u.size());
  if (static_cast<long>(out.size()) != n)
    throw std::invalid_argument("apply_stencil: size mismatch");
  const long r = st.radius;
  const double* c = st.coeff.data() + r;
  auto rows = [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      const long j_lo = std::max(-r, -i);
      const long j_hi = std::min(r, n - 1 - i);
      double sum = 0.0;
      const double* ui = u.data() + i;
      for (long j = j_lo; j <= j_hi; ++j) sum += c[j] * ui[j];
      out[i] = sum;
    }
  };
  // Thread spawns cost more than small applications; stay serial below a
  // work threshold.
  workers = resolve_worker_count(workers);
  if (workers <= 1 || n * (2 * r + 1) < 4'000'000) {
    rows(0, n);
    return;
  }
  const long rows_per_block = (n + workers - 1) / workers;
  const long n_blocks = (n + rows_per_block - 1) / rows_per_block;
  parallel_blocks(n_blocks, workers, [&](long b) {
    rows(b * rows_per_block, std::min(n, (b + 1) * rows_per_block));
  });
}

EvolutionResult evolve(const OperatorSpec& spec, const Profile& ic, const EvolutionConfig& cfg) {
  spec.validate();
  cfg.grid.validate();
  if (!(cfg.pad >= 0.0)) throw std::invalid_argument("evolve: pad must be >= 0");
  if (!std::is_sorted(cfg.grid.snapshot_times.begin(), cfg.grid.snapshot_times.end()))
    throw std::invalid_argument("evolve: snapshot times must be ascending");

  const double dx = cfg.grid.dx;
  const long pad_nodes = static_cast<long>(std::round(cfg.pad / dx));
  const long n_in = cfg.grid.n_nodes();
  const long n = n_in + 2 * pad_nodes;
  const double x0 = cfg.grid.x_min - pad_nodes * dx;
  const double x_end = x0 + (n - 1) * dx;
  const double window_half_width = std::max(std::abs(x0), std::abs(x_end));

  const OperatorStencil st = build_stencil(spec, dx, window_half_width);

  std::vector<double> u(n), lu(n);
  for (long i = 0; i < n; ++i) u[i] = ic.value(x0 + i * dx);
  double u0_max = 0.0;
  for (double v : u) u0_max = std::max(u0_max, std::abs(v));

  // Worst grid mode: the stencil applied to (-1)^i.
  double alternating = 0.0;
  for (long j = -st.radius; j <= st.radius; ++j)
    alternating += st.coeff[st.radius + j] * ((j % 2 == 0) ? 1.0 : -1.0);
  const double stability_rate = std::abs(alternating);

  EvolutionResult result;
  result.stability_rate = stability_rate;
  result.pad_nodes = pad_nodes;

  double dt_cap = 0.0;
  if (stability_rate > 0.0) {
    dt_cap = cfg.safety / stability_rate;
    if (cfg.dt_target > 0.0) dt_cap = std::min(dt_cap, cfg.dt_target);
  }
  result.dt_used = dt_cap;

  auto record = [&](double t) {
    ScalarField field;
    field.time = t;
    field.values.assign(u.begin() + pad_nodes, u.begin() + pad_nodes + n_in);
    result.snapshots.push_back(std::move(field));
  };

  const int workers = resolve_worker_count(cfg.workers);
  double t_now = 0.0;
  for (double target : cfg.grid.snapshot_times) {
    if (target <= t_now + 1e-12) {
      record(target);
      continue;
    }
    if (dt_cap <= 0.0) {  // operator vanishes, the field is constant in time
      t_now = target;
      record(target);
      continue;
    }
    const long n_steps = static_cast<long>(std::ceil((target - t_now) / dt_cap - 1e-12));
    const double h = (target - t_now) / n_steps;
    for (long s = 0; s < n_steps; ++s) {
      apply_stencil(st, u, lu, workers);
      for (long i = 0; i < n; ++i) u[i] += h * lu[i];
      ++result.steps;
      if (result.steps % 128 == 0 || s + 1 == n_steps) {
        double u_max = 0.0;
        for (double v : u) u_max = std::max(u_max, std::abs(v));
        if (u0_max > 0.0 && u_max > cfg.blowup_factor * u0_max)
          throw std::runtime_error(
              "evolve: |U| exceeded " + std::to_string(cfg.blowup_factor) +
              " * max|u0| at t = " + std::to_string(t_now + (s + 1) * h) +
              " (dt = " + std::to_string(h) +
              ", worst-mode rate = " + std::to_string(stability_rate) +
              "); the explicit scheme is unstable at this step size");
      }
    }
    t_now = target;
    record(target);
  }
  return result;
}

ConsistencyReport operator_consistency_check(double alpha, double theta,
                                             const QuadratureSpec& quad) {
  OperatorSpec full;
  full.kind = OperatorKind::full_line;
  full.theta = theta;
  full.alpha = alpha;
  full.m = 1;
  full.quad = quad;

  OperatorSpec frac = full;
  frac.kind = OperatorKind::fractional_laplacian;

  const GaussianProfile gauss(0.6);
  const BumpProfile bump(0.1);
  const SineGaussianProfile wave(3.0, 1.0);
  const Profile* battery[] = {&gauss, &bump, &wave};

  ConsistencyReport report;
  report.theta = theta;
  report.alpha = alpha;
  const int n_probes = 50;
  report.n_probes = n_probes;
  for (const Profile* f : battery) {
    for (int i = 0; i < n_probes; ++i) {
      const double x = -1.2 + 2.4 * i / (n_probes - 1);
      const double d = std::abs(apply_operator(full, *f, x) - apply_operator(frac, *f, x));
      report.max_abs_discrepancy = std::max(report.max_abs_discrepancy, d);
    }
  }
  return report;
}

ComparisonReport compare_mc_pde(const std::vector<MeanField>& mc,
                                const std::vector<ScalarField>& pde, double dx,
                                double abs_allowance) {
  if (mc.size() != pde.size())
    throw std::invalid_argument("compare_mc_pde: snapshot count mismatch");
  ComparisonReport report;
  report.abs_allowance = abs_allowance;
  for (std::size_t s = 0; s < mc.size(); ++s) {
    if (std::abs(mc[s].mean.time - pde[s].time) > 1e-9)
      throw std::invalid_argument("compare_mc_pde: snapshot time mismatch");
    if (mc[s].mean.values.size() != pde[s].values.size())
      throw std::invalid_argument("compare_mc_pde: grid mismatch");
    ComparisonRow row;
    row.t = pde[s].time;
    double sq = 0.0;
    for (std::size_t i = 0; i < pde[s].values.size(); ++i) {
      const double d = mc[s].mean.values[i] - pde[s].values[i];
      row.sup_discrepancy = std::max(row.sup_discrepancy, std::abs(d));
      sq += d * d;
      row.pooled_stderr = std::max(row.pooled_stderr, mc[s].std_error.values[i]);
    }
    row.l2_discrepancy = std::sqrt(dx * sq);
    row.pass = row.sup_discrepancy <= std::max(3.0 * row.pooled_stderr, abs_allowance);
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace levy_transport
