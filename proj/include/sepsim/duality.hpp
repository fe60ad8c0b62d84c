#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "sepsim/environment.hpp"
#include "sepsim/stirring.hpp"

namespace sepsim {

// pi[eta](f) = sum_x f(x) eta(x): the density field tested against f.
double empirical_integral(const Configuration& eta, const Eigen::VectorXd& f);

// Both sides of the density-field duality identity
//   (L pi(f))(eta) = sum_x eta(x) (Ltilde f)(x),
// computed by independent routes: the left through the assembled stirring
// generator, the right by the defining site sums.  Window <= 20 sites.
std::pair<double, double> check_duality_identity(const RateField& field,
                                                 const Eigen::VectorXd& f,
                                                 const Configuration& eta);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double oracle = 0.0;
  std::int64_t replicas = 0;
};

// Monte Carlo mean occupancy at x after time t under the stirring
// construction, against the single-particle oracle (P_t sigma)(x).
McEstimate self_duality_mc(const RateField& field, const Configuration& sigma,
                           int x, double t, std::int64_t replicas,
                           std::uint64_t seed);

struct DynkinResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::int64_t replicas = 0;
};

// Sample mean of M_t = pi_t(f) - pi_0(f) - int_0^t sum_x eta_s(x)
// (Ltilde f)(x) ds over seeded stirring runs.  quadrature_step == 0 means
// event-exact integration (the integrand is constant between events);
// a positive step uses left-endpoint quadrature and must divide t.
DynkinResult dynkin_check(const RateField& field, const Configuration& sigma,
                          const Eigen::VectorXd& f, double t,
                          std::int64_t replicas, double quadrature_step,
                          std::uint64_t seed);

}  // namespace sepsim
