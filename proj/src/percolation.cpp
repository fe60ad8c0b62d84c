#include "sepsim/percolation.hpp"

#include <algorithm>
#include <cmath>

#include "sepsim/common.hpp"
#include "sepsim/rng.hpp"

namespace sepsim {

std::map<int, double> ClusterStats::origin_size_pmf() const {
  std::map<int, double> pmf;
  for (const auto& [size, count] : origin_size_counts)
    pmf[size] = static_cast<double>(count) / static_cast<double>(replicas);
  return pmf;
}

double ClusterStats::mean_origin_size() const {
  double total = 0.0;
  for (const auto& [size, count] : origin_size_counts)
    total += static_cast<double>(size) * static_cast<double>(count);
  return total / static_cast<double>(replicas);
}

double ClusterStats::stderr_origin_size() const {
  const double mean = mean_origin_size();
  double ss = 0.0;
  for (const auto& [size, count] : origin_size_counts)
    ss += static_cast<double>(count) * (size - mean) * (size - mean);
  const auto n = static_cast<double>(replicas);
  return std::sqrt(ss / (n - 1.0) / n);
}

namespace {

std::uint64_t pair_id(int x, int y, int site_count) {
  return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(site_count) +
         static_cast<std::uint64_t>(y);
}

}  // namespace

WindowGraph sample_percolation_graph(const RateField& field, double t0,
                                     std::uint64_t seed) {
  if (!field.symmetric)
    throw UsageError("percolation sampling needs a symmetric field");
  if (!(t0 >= 0.0)) throw UsageError("t0 must be >= 0");

  WindowGraph graph;
  graph.site_count = field.size();
  graph.window_width = t0;
  for (auto [x, y] : field.undirected_pairs()) {
    const double open_prob = -std::expm1(-field.rate(x, y) * t0);
    rng::Stream g(rng::split(seed, pair_id(x, y, field.size())));
    if (rng::uniform01(g) < open_prob) graph.edges.push_back({x, y});
  }
  return graph;
}

ClusterStats cluster_stats(const RateField& field, double t0, int origin,
                           std::int64_t replicas, std::uint64_t seed) {
  if (replicas < 1) throw UsageError("replicas must be >= 1");
  if (origin < 0 || origin >= field.size())
    throw UsageError("origin out of range");

  ClusterStats stats;
  stats.replicas = replicas;
  for (std::int64_t rep = 0; rep < replicas; ++rep) {
    const WindowGraph graph = sample_percolation_graph(
        field, t0, rng::split(seed, static_cast<std::uint64_t>(rep)));
    DisjointSets dsu(graph.site_count);
    for (auto [x, y] : graph.edges) dsu.unite(x, y);
    int max_size = 1;
    for (int site = 0; site < graph.site_count; ++site)
      max_size = std::max(max_size, dsu.component_size(site));
    ++stats.origin_size_counts[dsu.component_size(origin)];
    ++stats.max_size_counts[max_size];
  }
  return stats;
}

ScanResult scan_t0(const RateField& field, const std::vector<double>& t0_grid,
                   int size_threshold, std::int64_t replicas,
                   std::uint64_t seed, int origin, double target) {
  if (t0_grid.empty()) throw UsageError("t0 grid must be nonempty");
  if (!std::is_sorted(t0_grid.begin(), t0_grid.end()))
    throw UsageError("t0 grid must be sorted");

  ScanResult result;
  result.size_threshold = size_threshold;
  result.target = target;
  for (double t0 : t0_grid) {
    const ClusterStats stats = cluster_stats(field, t0, origin, replicas, seed);
    ScanRow row;
    row.t0 = t0;
    row.replicas = replicas;
    row.mean_cluster = stats.mean_origin_size();
    std::int64_t exceed = 0;
    for (const auto& [size, count] : stats.max_size_counts)
      if (size > size_threshold) exceed += count;
    row.p_exceed =
        static_cast<double>(exceed) / static_cast<double>(replicas);
    row.stderr_exceed = std::sqrt(row.p_exceed * (1.0 - row.p_exceed) /
                                  static_cast<double>(replicas));
    result.rows.push_back(row);
    if (row.p_exceed < target) result.recommended_t0 = t0;
  }
  return result;
}

DominationResult verify_domination(
    const RateField& field,
    const std::function<double(const Site&, const Site&)>& bound) {
  DominationResult result;
  for (const auto& [key, c] : field.rates()) {
    const Site& sx = field.sites[static_cast<std::size_t>(key.first)];
    const Site& sy = field.sites[static_cast<std::size_t>(key.second)];
    const double b = bound(sx, sy);
    if (c > b) {
      result.dominated = false;
      result.violations.push_back({key.first, key.second, c, b});
    }
  }
  return result;
}

}  // namespace sepsim
