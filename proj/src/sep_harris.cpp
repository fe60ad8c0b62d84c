#include "sepsim/sep_harris.hpp"

#include <algorithm>
#include <set>

#include "sepsim/common.hpp"

namespace sepsim {

std::vector<std::vector<int>> ComponentPartition::members() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(count));
  for (int site = 0; site < static_cast<int>(component_of.size()); ++site)
    out[static_cast<std::size_t>(component_of[static_cast<std::size_t>(site)])]
        .push_back(site);
  return out;
}

ComponentPartition components(const WindowGraph& graph) {
  DisjointSets dsu(graph.site_count);
  for (auto [x, y] : graph.edges) dsu.unite(x, y);

  ComponentPartition part;
  part.component_of.assign(static_cast<std::size_t>(graph.site_count), -1);
  for (int site = 0; site < graph.site_count; ++site) {
    const int root = dsu.find(site);
    if (part.component_of[static_cast<std::size_t>(root)] < 0) {
      part.component_of[static_cast<std::size_t>(root)] = part.count++;
      part.sizes.push_back(0);
    }
    part.component_of[static_cast<std::size_t>(site)] =
        part.component_of[static_cast<std::size_t>(root)];
    ++part.sizes[static_cast<std::size_t>(
        part.component_of[static_cast<std::size_t>(site)])];
  }
  return part;
}

namespace {

// Edges with a merged-clock ring in (lo, hi]; no horizon check.
WindowGraph window_graph_between(const EventLog& log, double lo, double hi,
                                 int r, double t0) {
  WindowGraph graph;
  graph.site_count = log.site_count;
  graph.window_index = r;
  graph.window_width = t0;
  std::set<std::pair<int, int>> seen;
  for (const auto& [key, times] : log.edges) {
    auto it = std::upper_bound(times.begin(), times.end(), lo);
    if (it == times.end() || *it > hi) continue;
    const auto canonical = key.first < key.second
                               ? key
                               : std::make_pair(key.second, key.first);
    seen.insert(canonical);
  }
  graph.edges.assign(seen.begin(), seen.end());
  return graph;
}

}  // namespace

WindowGraph build_window_graph(const EventLog& log, int r, double t0) {
  if (!(t0 > 0.0)) throw UsageError("window width must be > 0");
  if (r < 0) throw UsageError("window index must be >= 0");
  const double lo = static_cast<double>(r) * t0;
  const double hi = static_cast<double>(r + 1) * t0;
  if (hi > log.horizon) throw UsageError("window extends beyond the horizon");
  return window_graph_between(log, lo, hi, r, t0);
}

void replay_component(const EventLog& log, Configuration& eta,
                      const std::vector<int>& sites, double lo, double hi) {
  if (!log.directed)
    throw UsageError("component replay needs a directed log");
  struct Move {
    double time;
    int from, to;
  };
  std::vector<Move> moves;
  for (int x : sites) {
    for (const SiteEvent& e : log.site_events(x)) {
      if (!e.outgoing) continue;  // each directed event listed at its source
      if (e.time <= lo || e.time > hi) continue;
      if (!std::binary_search(sites.begin(), sites.end(), e.partner)) continue;
      moves.push_back({e.time, x, e.partner});
    }
  }
  std::sort(moves.begin(), moves.end(),
            [](const Move& a, const Move& b) { return a.time < b.time; });
  for (const Move& m : moves) {
    auto& src = eta.occ[static_cast<std::size_t>(m.from)];
    auto& dst = eta.occ[static_cast<std::size_t>(m.to)];
    if (src == 1 && dst == 0) {
      src = 0;
      dst = 1;
    }
  }
}

Configuration evolve_sep(const EventLog& log, const Configuration& sigma,
                         double t, double t0, std::size_t component_cap) {
  if (!log.directed)
    throw UsageError("the Harris construction needs a directed log");
  if (sigma.size() != log.site_count)
    throw UsageError("configuration window does not match the log");
  if (t < 0.0 || t > log.horizon)
    throw UsageError("time must lie in [0, horizon]");
  if (!(t0 > 0.0)) throw UsageError("window width must be > 0");

  Configuration eta = sigma;
  for (int r = 0; static_cast<double>(r) * t0 < t; ++r) {
    const double lo = static_cast<double>(r) * t0;
    const double hi = static_cast<double>(r + 1) * t0;
    // The final window keeps the decomposition of the full interval but
    // replays only events up to t.
    const WindowGraph graph = window_graph_between(log, lo, hi, r, t0);
    const ComponentPartition part = components(graph);
    for (int size : part.sizes)
      if (static_cast<std::size_t>(size) > component_cap)
        throw ComponentBlowupError(r, static_cast<std::size_t>(size));
    for (const std::vector<int>& comp : part.members()) {
      if (comp.size() < 2) continue;
      replay_component(log, eta, comp, lo, std::min(hi, t));
    }
  }
  return eta;
}

Configuration replay_global(const EventLog& log, const Configuration& sigma,
                            double t) {
  if (!log.directed)
    throw UsageError("the Harris construction needs a directed log");
  if (sigma.size() != log.site_count)
    throw UsageError("configuration window does not match the log");
  std::vector<int> everything(static_cast<std::size_t>(log.site_count));
  for (int i = 0; i < log.site_count; ++i)
    everything[static_cast<std::size_t>(i)] = i;
  Configuration eta = sigma;
  replay_component(log, eta, everything, 0.0, t);
  return eta;
}

std::vector<int> dependency_set(const EventLog& log, int x, int r, double t0) {
  if (x < 0 || x >= log.site_count) throw UsageError("site out of range");
  if (r < 0) throw UsageError("window index must be >= 0");
  if (static_cast<double>(r + 1) * t0 > log.horizon)
    throw UsageError("window extends beyond the horizon");

  std::vector<int> current{x};
  for (int j = 0; j <= r; ++j) {
    const int level = r - j;
    const WindowGraph graph = window_graph_between(
        log, static_cast<double>(level) * t0,
        static_cast<double>(level + 1) * t0, level, t0);
    const ComponentPartition part = components(graph);
    std::set<int> grown;
    for (int y : current) {
      const int comp = part.component_of[static_cast<std::size_t>(y)];
      for (int site = 0; site < log.site_count; ++site)
        if (part.component_of[static_cast<std::size_t>(site)] == comp)
          grown.insert(site);
    }
    current.assign(grown.begin(), grown.end());
  }
  return current;
}

}  // namespace sepsim
