#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "cluster_oracle.hpp"
#include "sepsim/common.hpp"
#include "sepsim/percolation.hpp"
#include "sepsim/rng.hpp"
#include "sepsim/stats.hpp"
#include "test_support.hpp"

using namespace sepsim;
using sepsim::testing::chain_field;
using sepsim::testing::complete_symmetric_field;
using sepsim::testing::enumerate_origin_law;
using sepsim::testing::origin_law_tv;

namespace {

RateField complete_field(int n, double rate) {
  return complete_symmetric_field(n, rate);
}

double tv_against(const std::map<int, double>& law, const ClusterStats& stats) {
  return origin_law_tv(law, stats);
}

}  // namespace

TEST_CASE("zero window width gives an edgeless graph") {
  const RateField field = complete_field(4, 3.0);
  const WindowGraph g = sample_percolation_graph(field, 0.0, 1);
  CHECK(g.edges.empty());
}

TEST_CASE("an enormous rate opens its edge essentially always") {
  RateField field = chain_field(3, 0.0);
  field.set_rate(0, 1, 1e9);
  field.set_rate(1, 0, 1e9);
  int open = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed)
    open += sample_percolation_graph(field, 1.0, seed).edges.size();
  CHECK(open == 1000);
}

TEST_CASE("unit rate at t0 = ln 2 opens with probability one half") {
  const RateField field = chain_field(2, 1.0);
  const double t0 = std::log(2.0);
  int open = 0;
  const int reps = 20000;
  for (int seed = 0; seed < reps; ++seed)
    open += static_cast<int>(
        !sample_percolation_graph(field, t0, static_cast<std::uint64_t>(seed))
             .edges.empty());
  const double p = static_cast<double>(open) / reps;
  CHECK(std::abs(p - 0.5) < 4.0 * std::sqrt(0.25 / reps));
}

TEST_CASE("edge sets grow monotonically with t0 under one seed") {
  const RateField field = complete_field(6, 0.4);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const WindowGraph small = sample_percolation_graph(field, 0.3, seed);
    const WindowGraph large = sample_percolation_graph(field, 1.1, seed);
    for (const auto& e : small.edges)
      CHECK(std::find(large.edges.begin(), large.edges.end(), e) !=
            large.edges.end());
    // hence the origin cluster cannot shrink
    DisjointSets ds(6);
    for (auto [x, y] : small.edges) ds.unite(x, y);
    DisjointSets dl(6);
    for (auto [x, y] : large.edges) dl.unite(x, y);
    CHECK(dl.component_size(0) >= ds.component_size(0));
  }
}

TEST_CASE("edge indicators are independent across pairs") {
  // three-pair field: the 8 joint outcomes against the product law
  RateField field = complete_field(3, 1.0);
  const double t0 = 0.7;
  const double p = -std::expm1(-t0);
  const int reps = 100000;
  std::vector<std::int64_t> counts(8, 0);
  const auto pairs = field.undirected_pairs();
  for (int seed = 0; seed < reps; ++seed) {
    const WindowGraph g =
        sample_percolation_graph(field, t0, static_cast<std::uint64_t>(seed));
    int mask = 0;
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (std::find(g.edges.begin(), g.edges.end(), pairs[e]) != g.edges.end())
        mask |= 1 << e;
    ++counts[static_cast<std::size_t>(mask)];
  }
  Eigen::VectorXd probs(8);
  for (int mask = 0; mask < 8; ++mask) {
    double w = 1.0;
    for (int e = 0; e < 3; ++e) w *= (mask & (1 << e)) ? p : 1.0 - p;
    probs[mask] = w;
  }
  const ChiSquareResult chi = chi_square_gof(counts, probs);
  CHECK(chi.p_value > 1e-3);
}

TEST_CASE("three-site complete graph at one half: frozen cluster law") {
  const RateField field = complete_field(3, 1.0);
  const double t0 = std::log(2.0);  // every edge open with probability 1/2
  const auto law = enumerate_origin_law(field, t0, 0);
  CHECK(law.at(1) == doctest::Approx(0.25));
  CHECK(law.at(2) == doctest::Approx(0.25));
  CHECK(law.at(3) == doctest::Approx(0.5));

  const ClusterStats stats = cluster_stats(field, t0, 0, 20000, 99);
  CHECK(tv_against(law, stats) < 0.02);
}

TEST_CASE("five-site random-rate law matches exhaustive enumeration") {
  RateField field = complete_field(5, 0.0);
  rng::Stream g(17);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      const double c = rng::uniform(g, 0.1, 1.2);
      field.set_rate(i, j, c);
      field.set_rate(j, i, c);
    }
  const auto law = enumerate_origin_law(field, 0.8, 0);
  const ClusterStats stats = cluster_stats(field, 0.8, 0, 30000, 5);
  CHECK(tv_against(law, stats) < 0.02);
}

TEST_CASE("interior chain site is isolated with probability (1-p)^2") {
  // open probability 0.3 per chain edge
  const double t0 = -std::log(0.7);
  const RateField field = chain_field(41, 1.0);
  const ClusterStats stats = cluster_stats(field, t0, 20, 50000, 4);
  const auto pmf = stats.origin_size_pmf();
  const double observed = pmf.count(1) ? pmf.at(1) : 0.0;
  CHECK(std::abs(observed - 0.49) <
        4.0 * std::sqrt(0.49 * 0.51 / 50000.0));
}

TEST_CASE("all-zero field: every origin cluster is a singleton") {
  const RateField field = chain_field(5, 0.0);
  const ClusterStats stats = cluster_stats(field, 2.0, 2, 200, 1);
  CHECK(stats.origin_size_pmf().at(1) == 1.0);
}

TEST_CASE("scan recommends the largest workable window width") {
  SUBCASE("an all-zero field accepts the whole grid") {
    const RateField field = chain_field(8, 0.0);
    const ScanResult scan = scan_t0(field, {0.5, 1.0, 2.0}, 2, 500, 7);
    REQUIRE(scan.recommended_t0.has_value());
    CHECK(*scan.recommended_t0 == 2.0);
    for (const ScanRow& row : scan.rows) CHECK(row.p_exceed == 0.0);
  }
  SUBCASE("one enormous rate keeps the exceedance honest") {
    RateField field = chain_field(6, 0.0);
    field.set_rate(2, 3, 1e9);
    field.set_rate(3, 2, 1e9);
    const ScanResult scan = scan_t0(field, {0.25, 0.5, 1.0}, 1, 400, 7);
    CHECK_FALSE(scan.recommended_t0.has_value());
    for (const ScanRow& row : scan.rows) CHECK(row.p_exceed == 1.0);
  }
}

TEST_CASE("domination certificates") {
  SUBCASE("any field dominates itself") {
    const RateField field = testing::random_symmetric_field(6, 8);
    const auto result = verify_domination(
        field, [&](const Site& a, const Site& b) {
          return field.rate(a.index, b.index);
        });
    CHECK(result.dominated);
  }
  SUBCASE("a constant field above the bound lists every violation") {
    const RateField field = chain_field(4, 3.0);
    const auto result =
        verify_domination(field, [](const Site&, const Site&) { return 2.0; });
    CHECK_FALSE(result.dominated);
    CHECK(result.violations.size() == 6);  // both directions of three edges
    CHECK(result.violations.front().rate == 3.0);
    CHECK(result.violations.front().bound == 2.0);
  }
}
