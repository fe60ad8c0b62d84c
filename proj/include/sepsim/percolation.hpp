#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "sepsim/environment.hpp"
#include "sepsim/graph.hpp"

namespace sepsim {

// Empirical law of the origin's cluster size and of the largest component.
struct ClusterStats {
  std::map<int, std::int64_t> origin_size_counts;
  std::map<int, std::int64_t> max_size_counts;
  std::int64_t replicas = 0;

  std::map<int, double> origin_size_pmf() const;
  double mean_origin_size() const;
  double stderr_origin_size() const;
};

// Static percolation picture of one Harris window: each unordered pair
// {x,y} of the (symmetric) field opens independently with probability
// 1 - exp(-c(x,y) t0).  The per-pair uniform depends only on (seed, pair),
// so samples at different t0 under one seed are coupled monotonically.
WindowGraph sample_percolation_graph(const RateField& field, double t0,
                                     std::uint64_t seed);

ClusterStats cluster_stats(const RateField& field, double t0, int origin,
                           std::int64_t replicas, std::uint64_t seed);

struct ScanRow {
  double t0 = 0.0;
  std::int64_t replicas = 0;
  double mean_cluster = 0.0;   // mean origin-cluster size
  double p_exceed = 0.0;       // P(max component > size_threshold)
  double stderr_exceed = 0.0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::optional<double> recommended_t0;  // absent: no subcritical grid point
  int size_threshold = 0;
  double target = 0.0;
};

// For each grid t0, estimates the chance that some component exceeds the
// size threshold; recommends the largest t0 whose estimate is below
// `target`.  Finding none is a report, not an error.
ScanResult scan_t0(const RateField& field, const std::vector<double>& t0_grid,
                   int size_threshold, std::int64_t replicas,
                   std::uint64_t seed, int origin = 0, double target = 1e-3);

struct DominationResult {
  bool dominated = true;
  struct Violation {
    int x, y;
    double rate, bound;
  };
  std::vector<Violation> violations;
};

// Checks c(x,y) <= bound(x,y) for every stored pair of the (symmetric)
// field; a certificate for transferring subcriticality from the bound.
DominationResult verify_domination(
    const RateField& field,
    const std::function<double(const Site&, const Site&)>& bound);

}  // namespace sepsim
