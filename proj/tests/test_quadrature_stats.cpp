#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levy_transport/quadrature.hpp"
#include "levy_transport/stats.hpp"

using namespace levy_transport;

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {8, 16, 32}) {
    const auto& rule = gauss_legendre_rule(n);
    double w_sum = 0.0;
    for (double w : rule.weights) w_sum += w;
    CHECK(w_sum == doctest::Approx(2.0).epsilon(1e-14));
    // Degree 2n-1 monomial on [0,1].
    const int k = 2 * n - 1;
    const double got = integrate_gl([k](double x) { return std::pow(x, k); }, 0.0, 1.0, rule);
    CHECK(got == doctest::Approx(1.0 / (k + 1)).epsilon(1e-12));
  }
}

TEST_CASE("adaptive integration on smooth references") {
  const double e1 = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
  CHECK(std::abs(e1 - (std::numbers::e - 1.0)) < 1e-11);
  const double s = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                      std::numbers::pi, 1e-12);
  CHECK(std::abs(s - 2.0) < 1e-11);
}

TEST_CASE("geometric edges cover the interval") {
  const auto edges = geometric_edges(1e-3, 1.0, 2.0);
  CHECK(edges.front() == 1e-3);
  CHECK(edges.back() == 1.0);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) CHECK(edges[i] < edges[i + 1]);
}

TEST_CASE("incomplete gamma against closed forms") {
  // dof = 2: upper tail is exp(-x/2).
  for (double x : {0.5, 1.0, 3.0, 10.0})
    CHECK(chi_square_pvalue(x, 2) == doctest::Approx(std::exp(-0.5 * x)).epsilon(1e-12));
  // dof = 1: upper tail is erfc(sqrt(x/2)).
  for (double x : {0.5, 1.0, 4.0})
    CHECK(chi_square_pvalue(x, 1) ==
          doctest::Approx(std::erfc(std::sqrt(0.5 * x))).epsilon(1e-10));
  CHECK(regularized_gamma_p(1.5, 0.0) == 0.0);
  CHECK(regularized_gamma_q(1.5, 0.0) == 1.0);
  CHECK(regularized_gamma_p(2.5, 100.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("beta function identity") {
  CHECK(beta_function(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(beta_function(0.5, 0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("two-sample KS behaviour") {
  std::vector<double> a, b, c;
  for (int i = 0; i < 2000; ++i) {
    a.push_back(std::sin(i * 0.7219) * 10.0);
    b.push_back(std::sin((i + 10000) * 0.7219) * 10.0);  // same law, different draws
    c.push_back(100.0 + i);                              // disjoint support
  }
  const auto same = two_sample_ks(a, b);
  CHECK(same.p_value > 0.01);
  const auto diff = two_sample_ks(a, c);
  CHECK(diff.statistic == doctest::Approx(1.0));
  CHECK(diff.p_value < 1e-10);
}
