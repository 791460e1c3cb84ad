#pragma once

#include <vector>

namespace levy_transport {

double log_beta(double a, double b);
double beta_function(double a, double b);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_pvalue(double statistic, int dof);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// Two-sample Kolmogorov-Smirnov test with the usual asymptotic p-value.
KsResult two_sample_ks(std::vector<double> a, std::vector<double> b);

}  // namespace levy_transport
