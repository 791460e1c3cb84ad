#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <vector>

#include "levy_transport/levy_measure.hpp"
#include "levy_transport/quadrature.hpp"
#include "levy_transport/stats.hpp"

using namespace levy_transport;

namespace {

// Independent Simpson rule on a fixed fine grid.
double simpson(const std::function<double(double)>& f, double a, double b, int n_intervals) {
  if (n_intervals % 2) ++n_intervals;
  const double h = (b - a) / n_intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < n_intervals; ++i) sum += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("unit sphere surface areas") {
  CHECK(surface_area(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(surface_area(1) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(surface_area(2) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("radial integral matches the Beta-function closed form") {
  for (int m : {2, 3, 5, 10}) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      const double radial = radial_tail_integral(MeasureParams{alpha, m});
      const double exact = 0.5 * beta_function(0.5 * (m - 1), 0.5 * (alpha + 1));
      CHECK(std::abs(radial - exact) <= 1e-8);
      CHECK(radial > 0.0);
      CHECK(std::isfinite(radial));
    }
  }
  // m=3, alpha=1: (1/2) B(1,1) = 1/2, so the full constant is |S^1| / 2 = pi.
  CHECK(c_constant(MeasureParams{1.0, 3}) == doctest::Approx(std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("projection weight basics") {
  const MeasureParams p{1.5, 2};
  CHECK(c_weight(1.0, p) == 0.0);
  CHECK(c_weight(-1.0, p) == 0.0);
  CHECK(c_weight(1.7, p) == 0.0);
  for (double y : {0.1, 0.35, 0.8, 0.999}) CHECK(c_weight(y, p) == c_weight(-y, p));
  CHECK_THROWS_AS(c_weight(0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(c_weight(0.5, MeasureParams{1.5, 1}), std::invalid_argument);
  CHECK_THROWS_AS(c_constant(MeasureParams{1.5, 1}), std::invalid_argument);
  CHECK_THROWS_AS(radial_tail_integral(MeasureParams{2.5, 2}), std::invalid_argument);
}

TEST_CASE("projection weight against an independent Simpson evaluation") {
  // y = 0.5, m = 2, alpha = 1.5: integral of (1+r^2)^{-1.75} up to sqrt(3).
  const double got = c_weight(0.5, MeasureParams{1.5, 2});
  const double want = simpson([](double r) { return std::pow(1.0 + r * r, -1.75); }, 0.0,
                              std::sqrt(3.0), 200000);
  CHECK(std::abs(got - want) <= 1e-8);
}

TEST_CASE("weight table: symmetry, monotonicity, bounds, boundary decay, zero limit") {
  const MeasureParams p{1.5, 2};
  std::vector<double> nodes;
  for (int i = 1; i <= 40; ++i) nodes.push_back(i / 40.5);
  nodes.push_back(0.999);
  const WeightTable table = build_weight_table(p, nodes);
  const double radial = radial_tail_integral(p);
  CHECK(table.c_zero == doctest::Approx(radial).epsilon(1e-12));
  for (std::size_t i = 1; i < table.c_values.size(); ++i)
    CHECK(table.c_values[i] <= table.c_values[i - 1] + 1e-14);
  for (double c : table.c_values) {
    CHECK(c >= 0.0);
    CHECK(c <= radial);
  }
  // Boundary decay: c(y) vanishes like the slab width (1-y^2)^{(m-1)/2}, so
  // the approach to zero is a square root for m = 2 and faster for m >= 3.
  CHECK(table.c_values.back() ==
        doctest::Approx(std::sqrt(1.0 - 0.999 * 0.999) / 0.999).epsilon(2e-3));
  for (int m : {3, 5, 10})
    CHECK(c_weight(0.999, MeasureParams{1.5, m}) <=
          1e-2 * radial_tail_integral(MeasureParams{1.5, m}));
  // y -> 0 limit.
  CHECK(std::abs(c_weight(1e-4, p) - radial) <= 1e-4);
  // symmetric node set gives a symmetric table
  const WeightTable neg = build_weight_table(p, std::vector<double>{-0.3, 0.3});
  CHECK(neg.c_values[0] == neg.c_values[1]);
}

TEST_CASE("cosine kernel integral against a chunked quadrature oracle") {
  // 1 - cos(y) evaluated as 2 sin^2(y/2) to avoid subtraction noise near 0.
  auto versine = [](double y) {
    const double s = std::sin(0.5 * y);
    return 2.0 * s * s;
  };
  for (double alpha : {0.5, 1.0, 1.5}) {
    // Head [0,1] after y = u^4 (smooth integrand for alpha < 1.75).
    const double head = integrate_adaptive(
        [alpha, &versine](double u) {
          if (u <= 0.0) return 0.0;
          const double y = u * u * u * u;
          return 4.0 * versine(y) * std::pow(u, -1.0 - 4.0 * alpha);
        },
        0.0, 1.0, 1e-11);
    // Body [1, 2 pi k] in whole oscillation periods.
    const double big_y = 2.0 * std::numbers::pi * 478;
    double body = 0.0;
    double lo = 1.0;
    while (lo < big_y - 1e-9) {
      const double hi = std::min(big_y, lo + 2.0 * std::numbers::pi);
      body += integrate_adaptive(
          [alpha, &versine](double y) { return versine(y) * std::pow(y, -1.0 - alpha); }, lo,
          hi, 1e-12);
      lo = hi;
    }
    // Tail: at y = 2 pi k the sine boundary term vanishes and
    // |int_Y^inf cos(y) y^{-1-alpha} dy| <= Y^{-1-alpha}.
    const double tail = std::pow(big_y, -alpha) / alpha;
    const double oracle = 2.0 * (head + body + tail);
    CHECK(cosine_kernel_integral(alpha) == doctest::Approx(oracle).epsilon(1e-7));
  }
  CHECK(cosine_kernel_integral(1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("sampler generator rate composition") {
  const MeasureParams p{1.5, 2};
  const double scale_pow = std::pow(2.0, -0.75);  // 2^{-alpha/2}
  CHECK(sampler_generator_rate(p) ==
        doctest::Approx(scale_pow / (radial_tail_integral(p) * cosine_kernel_integral(1.5)))
            .epsilon(1e-12));
  const MeasureParams p1{1.5, 1};
  CHECK(sampler_generator_rate(p1) ==
        doctest::Approx(scale_pow / cosine_kernel_integral(1.5)).epsilon(1e-12));
}

TEST_CASE("projected-measure sampling matches the quadrature density") {
  {
    RngStream rng(777, 0);
    const auto report = validate_projection(MeasureParams{1.5, 2}, 0.1, 100000, rng);
    CHECK(report.p_value > 1e-3);
    CHECK(report.mass_check_rel_err < 1e-4);
    CHECK(std::abs(report.sample_mean) <= 3.0 * report.mean_stderr);
    CHECK(report.n_bins >= 40);
  }
  {
    RngStream rng(778, 0);
    const auto report = validate_projection(MeasureParams{0.5, 5}, 0.2, 100000, rng);
    CHECK(report.p_value > 1e-3);
    CHECK(report.mass_check_rel_err < 1e-4);
  }
  RngStream rng(779, 0);
  CHECK_THROWS_AS(validate_projection(MeasureParams{1.5, 2}, 0.1, 5000, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_projection(MeasureParams{1.5, 2}, 1.5, 100000, rng),
                  std::invalid_argument);
}
