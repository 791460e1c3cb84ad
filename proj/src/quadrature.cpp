#include "levy_transport/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace levy_transport {

namespace {

GaussLegendreRule make_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double panel(const std::function<double(double)>& f, double a, double b,
             const GaussLegendreRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                int depth, const GaussLegendreRule& coarse, const GaussLegendreRule& fine) {
  const double i1 = panel(f, a, b, coarse);
  const double i2 = panel(f, a, b, fine);
  const double err = std::abs(i2 - i1);
  if (err <= tol || depth >= 52) {
    if (depth >= 52 && err > 1e3 * tol)
      throw std::runtime_error("integrate_adaptive: no convergence on subinterval");
    return i2;
  }
  const double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * tol, depth + 1, coarse, fine) +
         adaptive(f, mid, b, 0.5 * tol, depth + 1, coarse, fine);
}

}  // namespace

const GaussLegendreRule& gauss_legendre_rule(int n) {
  static std::map<int, GaussLegendreRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    const GaussLegendreRule& rule) {
  return panel(f, a, b, rule);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol) {
  if (!(b > a)) return 0.0;
  return adaptive(f, a, b, abs_tol, 0, gauss_legendre_rule(16), gauss_legendre_rule(32));
}

std::vector<double> geometric_edges(double lo, double hi, double ratio) {
  if (!(lo > 0.0 && hi > lo && ratio > 1.0))
    throw std::invalid_argument("geometric_edges: need 0 < lo < hi, ratio > 1");
  std::vector<double> edges{lo};
  double e = lo;
  while (e * ratio < hi) {
    e *= ratio;
    edges.push_back(e);
  }
  edges.push_back(hi);
  return edges;
}

}  // namespace levy_transport
