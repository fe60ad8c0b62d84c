#include <doctest.h>

#include <cmath>

#include "sepsim/common.hpp"
#include "sepsim/duality.hpp"
#include "sepsim/exact_oracle.hpp"
#include "sepsim/rng.hpp"
#include "test_support.hpp"

using namespace sepsim;
using sepsim::testing::chain_field;

namespace {

Configuration bits(std::initializer_list<int> occ) {
  Configuration sigma(static_cast<int>(occ.size()));
  int i = 0;
  for (int b : occ) sigma.occ[static_cast<std::size_t>(i++)] =
      static_cast<std::uint8_t>(b);
  return sigma;
}

}  // namespace

TEST_CASE("empirical integrals") {
  Eigen::VectorXd f(3);
  f << 1.0, 5.0, 2.0;
  CHECK(empirical_integral(bits({0, 0, 0}), f) == 0.0);
  CHECK(empirical_integral(bits({1, 0, 1}), f) == 3.0);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  CHECK(empirical_integral(bits({1, 0, 1}), ones) == 2.0);
}

TEST_CASE("duality identity: degenerate inputs vanish on both sides") {
  const RateField field = testing::random_symmetric_field(5, 2);
  SUBCASE("constant f conserves the weighted particle count") {
    const Eigen::VectorXd f = Eigen::VectorXd::Constant(5, 2.5);
    const auto [lhs, rhs] = check_duality_identity(field, f, bits({1, 0, 1, 1, 0}));
    CHECK(std::abs(lhs) <= 1e-12);
    CHECK(std::abs(rhs) <= 1e-12);
  }
  SUBCASE("the full configuration kills the antisymmetric double sum") {
    rng::Stream g(3);
    Eigen::VectorXd f(5);
    for (int i = 0; i < 5; ++i) f[i] = rng::uniform(g, -1.0, 1.0);
    const auto [lhs, rhs] = check_duality_identity(field, f, bits({1, 1, 1, 1, 1}));
    CHECK(std::abs(lhs) <= 1e-12);
    CHECK(std::abs(rhs) <= 1e-12);
  }
}

TEST_CASE("duality identity holds to near machine precision") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RateField field = testing::random_symmetric_field(5, seed);
    rng::Stream g(rng::split(seed, 1));
    Eigen::VectorXd f(5);
    for (int i = 0; i < 5; ++i) f[i] = rng::uniform(g, -2.0, 2.0);
    Configuration eta(5);
    for (auto& b : eta.occ) b = rng::uniform01(g) < 0.5 ? 1 : 0;
    const auto [lhs, rhs] = check_duality_identity(field, f, eta);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("self-duality: constant profiles are reproduced exactly") {
  const RateField field = chain_field(4, 1.0);
  const McEstimate full =
      self_duality_mc(field, bits({1, 1, 1, 1}), 1, 0.8, 200, 5);
  CHECK(full.estimate == 1.0);
  CHECK(full.oracle == doctest::Approx(1.0).epsilon(1e-10));
  const McEstimate empty =
      self_duality_mc(field, bits({0, 0, 0, 0}), 2, 0.8, 200, 5);
  CHECK(empty.estimate == 0.0);
  CHECK(empty.oracle == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("two-site self-duality matches the closed form") {
  const RateField field = chain_field(2, 1.0);
  const double t = 0.5 * std::log(2.0);
  const McEstimate mc = self_duality_mc(field, bits({1, 0}), 0, t, 20000, 11);
  CHECK(mc.oracle == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::abs(mc.estimate - mc.oracle) < 4.0 * mc.stderr_);
}

TEST_CASE("dynkin functional: degenerate cases are exactly zero") {
  const RateField field = chain_field(5, 1.0);
  SUBCASE("constant f") {
    const Eigen::VectorXd f = Eigen::VectorXd::Constant(5, 1.7);
    const DynkinResult r =
        dynkin_check(field, bits({1, 0, 1, 0, 1}), f, 1.0, 100, 0.0, 3);
    CHECK(r.mean == 0.0);
    CHECK(r.stderr_ == 0.0);
  }
  SUBCASE("all-zero field") {
    const RateField zero = chain_field(5, 0.0);
    Eigen::VectorXd f(5);
    f << 1, -1, 2, 0, 1;
    const DynkinResult r =
        dynkin_check(zero, bits({1, 0, 1, 0, 1}), f, 1.0, 100, 0.0, 3);
    CHECK(r.mean == 0.0);
  }
}

TEST_CASE("event-exact martingale mean is within monte carlo error of zero") {
  const RateField field = chain_field(10, 1.0);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(10);
  f[5] = 1.0;
  const DynkinResult r =
      dynkin_check(field, bits({1, 1, 1, 1, 1, 0, 0, 0, 0, 0}), f, 1.0, 20000,
                   0.0, 17);
  CHECK(std::abs(r.mean) <= 4.0 * r.stderr_);
}

TEST_CASE("grid quadrature converges to the event-exact integral") {
  const RateField field = chain_field(6, 1.0);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(6);
  f[3] = 1.0;
  const Configuration sigma = bits({1, 1, 1, 0, 0, 0});
  const std::int64_t reps = 2000;
  const std::uint64_t seed = 23;
  const DynkinResult exact = dynkin_check(field, sigma, f, 1.0, reps, 0.0, seed);
  const DynkinResult h1 = dynkin_check(field, sigma, f, 1.0, reps, 0.25, seed);
  const DynkinResult h2 = dynkin_check(field, sigma, f, 1.0, reps, 0.125, seed);
  // identical seeds: the differences are pure quadrature bias
  const double bias1 = std::abs(h1.mean - exact.mean);
  const double bias2 = std::abs(h2.mean - exact.mean);
  CHECK(bias2 < bias1);
  CHECK(bias2 < 0.75 * bias1 + 1e-12);
}

TEST_CASE("quadrature step must divide the horizon") {
  const RateField field = chain_field(3, 1.0);
  const Eigen::VectorXd f = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(
      dynkin_check(field, bits({1, 0, 0}), f, 1.0, 10, 0.3, 1), UsageError);
}
