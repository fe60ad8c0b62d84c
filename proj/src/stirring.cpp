#include "sepsim/stirring.hpp"

#include <algorithm>
#include <numeric>

#include "sepsim/common.hpp"

namespace sepsim {

int Configuration::count() const {
  return static_cast<int>(std::accumulate(occ.begin(), occ.end(), 0));
}

Configuration swap_sites(const Configuration& eta, int x, int y) {
  if (x == y) throw UsageError("swap requires two distinct sites");
  Configuration out = eta;
  std::swap(out.occ[static_cast<std::size_t>(x)],
            out.occ[static_cast<std::size_t>(y)]);
  return out;
}

namespace {

// Index of the last event of `events` with time <= t (or < t when
// `strict`), -1 when none.
std::ptrdiff_t last_event_before(const std::vector<SiteEvent>& events,
                                 double t, bool strict) {
  auto cmp = [](const SiteEvent& e, double v) { return e.time < v; };
  auto it = strict ? std::lower_bound(events.begin(), events.end(), t, cmp)
                   : std::upper_bound(events.begin(), events.end(), t,
                                      [](double v, const SiteEvent& e) {
                                        return v < e.time;
                                      });
  return static_cast<std::ptrdiff_t>(it - events.begin()) - 1;
}

}  // namespace

TraceResult trace_back(const EventLog& log, int x, double t,
                       std::size_t step_cap, bool record_visited) {
  if (x < 0 || x >= log.site_count) throw UsageError("site out of range");
  if (t < 0.0 || t > log.horizon)
    throw UsageError("trace time must lie in [0, horizon]");
  if (step_cap == 0) step_cap = 10 * log.total_events() + 10;

  TraceResult result;
  if (record_visited) result.visited.push_back(x);

  int here = x;
  double cutoff = t;
  bool strict = false;  // first step looks in [0, t], later ones in [0, t_k)
  while (true) {
    const auto& events = log.site_events(here);
    const std::ptrdiff_t i = last_event_before(events, cutoff, strict);
    if (i < 0) {
      result.terminal = here;
      return result;
    }
    if (result.steps == step_cap) {
      result.terminal = kExplosion;
      return result;
    }
    here = events[static_cast<std::size_t>(i)].partner;
    cutoff = events[static_cast<std::size_t>(i)].time;
    strict = true;
    ++result.steps;
    if (record_visited) result.visited.push_back(here);
  }
}

Configuration evolve_ssep(const EventLog& log, const Configuration& sigma,
                          double t) {
  if (log.directed)
    throw UsageError("the stirring construction needs an undirected log");
  if (sigma.size() != log.site_count)
    throw UsageError("configuration window does not match the log");
  Configuration eta(log.site_count);
  for (int x = 0; x < log.site_count; ++x) {
    const TraceResult r = trace_back(log, x, t);
    if (r.terminal == kExplosion) throw ExplosionError(x);
    eta.occ[static_cast<std::size_t>(x)] =
        sigma.occ[static_cast<std::size_t>(r.terminal)];
  }
  return eta;
}

std::vector<int> stirring_permutation(const EventLog& log, double t) {
  std::vector<int> perm(static_cast<std::size_t>(log.site_count));
  for (int x = 0; x < log.site_count; ++x) {
    const TraceResult r = trace_back(log, x, t);
    if (r.terminal == kExplosion) throw ExplosionError(x);
    perm[static_cast<std::size_t>(x)] = r.terminal;
  }
  return perm;
}

std::vector<Configuration> sample_path_ssep(const EventLog& log,
                                            const Configuration& sigma,
                                            const std::vector<double>& grid) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw UsageError("grid must be sorted");
  std::vector<Configuration> path;
  path.reserve(grid.size());
  for (double t : grid) path.push_back(evolve_ssep(log, sigma, t));
  return path;
}

Configuration stir_forward(const EventLog& log, const Configuration& sigma,
                           double t) {
  if (log.directed)
    throw UsageError("the stirring construction needs an undirected log");
  if (sigma.size() != log.site_count)
    throw UsageError("configuration window does not match the log");

  struct Swap {
    double time;
    int a, b;
  };
  std::vector<Swap> swaps;
  for (const auto& [key, times] : log.edges)
    for (double s : times)
      if (s <= t) swaps.push_back({s, key.first, key.second});
  std::sort(swaps.begin(), swaps.end(),
            [](const Swap& u, const Swap& v) { return u.time < v.time; });

  Configuration eta = sigma;
  for (const Swap& s : swaps)
    std::swap(eta.occ[static_cast<std::size_t>(s.a)],
              eta.occ[static_cast<std::size_t>(s.b)]);
  return eta;
}

}  // namespace sepsim
