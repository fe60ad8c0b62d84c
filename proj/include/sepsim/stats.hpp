#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace sepsim {

// Regularized upper incomplete gamma Q(a, x) (series / Lentz continued
// fraction, as in the classic numerical recipes).
double gamma_q(double a, double x);

// Survival function of the chi-square law with df degrees of freedom.
double chi_square_sf(double stat, double df);

struct ChiSquareResult {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  int bins = 0;
};

// Goodness of fit of integer counts against expected probabilities.
// Cells whose expected count falls below min_expected are pooled into
// one remainder bin.
ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& counts,
                               const Eigen::VectorXd& probs,
                               double min_expected = 5.0);

// Total variation distance between an empirical count vector and a law.
double total_variation(const std::vector<std::int64_t>& counts,
                       const Eigen::VectorXd& probs);

// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sepsim
