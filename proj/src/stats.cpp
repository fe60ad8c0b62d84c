#include "sepsim/stats.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "sepsim/common.hpp"

namespace sepsim {

namespace {

// Lower regularized gamma P(a, x) by its power series; x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by modified Lentz continued fraction;
// x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw UsageError("gamma_q needs a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_sf(double stat, double df) {
  if (stat <= 0.0) return 1.0;
  return gamma_q(df / 2.0, stat / 2.0);
}

ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& counts,
                               const Eigen::VectorXd& probs,
                               double min_expected) {
  if (static_cast<Eigen::Index>(counts.size()) != probs.size())
    throw UsageError("counts and probabilities differ in length");
  const double n = static_cast<double>(
      std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));

  double stat = 0.0;
  int bins = 0;
  double pooled_expected = 0.0;
  double pooled_observed = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double expected = n * probs[i];
    if (expected < min_expected) {
      pooled_expected += expected;
      pooled_observed += static_cast<double>(counts[static_cast<std::size_t>(i)]);
      continue;
    }
    const double diff = static_cast<double>(counts[static_cast<std::size_t>(i)]) -
                        expected;
    stat += diff * diff / expected;
    ++bins;
  }
  if (pooled_expected > 0.0) {
    const double diff = pooled_observed - pooled_expected;
    stat += diff * diff / pooled_expected;
    ++bins;
  }

  ChiSquareResult result;
  result.statistic = stat;
  result.bins = bins;
  result.df = std::max(1.0, static_cast<double>(bins - 1));
  result.p_value = chi_square_sf(stat, result.df);
  return result;
}

double total_variation(const std::vector<std::int64_t>& counts,
                       const Eigen::VectorXd& probs) {
  if (static_cast<Eigen::Index>(counts.size()) != probs.size())
    throw UsageError("counts and probabilities differ in length");
  const double n = static_cast<double>(
      std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
  double tv = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    tv += std::abs(static_cast<double>(counts[static_cast<std::size_t>(i)]) / n -
                   probs[i]);
  return tv / 2.0;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw UsageError("slope fit needs two samples of equal length");
  const double n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sepsim
