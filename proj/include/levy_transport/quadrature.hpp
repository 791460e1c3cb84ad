#pragma once

#include <functional>
#include <vector>

namespace levy_transport {

// Gauss-Legendre rule on [-1,1]. Nodes/weights are generated by Newton
// iteration on the Legendre recurrence and cached per order.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre_rule(int n);

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    const GaussLegendreRule& rule);

// Adaptive bisection driven by a GL(16)/GL(32) error estimate, to an
// absolute tolerance. Throws on non-convergence.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol);

// Panel edges lo, lo*ratio, lo*ratio^2, ..., capped at hi.
std::vector<double> geometric_edges(double lo, double hi, double ratio = 2.0);

}  // namespace levy_transport
