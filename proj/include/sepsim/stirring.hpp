#pragma once

#include <cstddef>
#include <vector>

#include "sepsim/clocks.hpp"

namespace sepsim {

// Occupancies over the window, one bit per site.
struct Configuration {
  std::vector<std::uint8_t> occ;

  explicit Configuration(int sites = 0) : occ(static_cast<std::size_t>(sites), 0) {}
  int size() const { return static_cast<int>(occ.size()); }
  int count() const;
  bool operator==(const Configuration& other) const { return occ == other.occ; }
};

// Exchange the occupancies at x and y.
Configuration swap_sites(const Configuration& eta, int x, int y);

inline constexpr int kExplosion = -1;

struct TraceResult {
  int terminal = kExplosion;     // site, or kExplosion when the cap was hit
  std::size_t steps = 0;
  std::vector<int> visited;      // x, x1, x2, ... (only when requested)
};

// Backward trace from (x, t): repeatedly hop through the most recent
// earlier event at the current site; the first step looks in [0, t], each
// later step strictly before the previous event time.  A zero step_cap
// means 10 * total_events + 10, which a valid finite log can never reach.
TraceResult trace_back(const EventLog& log, int x, double t,
                       std::size_t step_cap = 0, bool record_visited = false);

// eta_t(x) = sigma(trace_back(x, t)); requires an undirected log.
Configuration evolve_ssep(const EventLog& log, const Configuration& sigma,
                          double t);

// x -> trace terminal, for every window site; a bijection on valid logs.
std::vector<int> stirring_permutation(const EventLog& log, double t);

// Configurations at each grid time (grid sorted, within [0, horizon]).
std::vector<Configuration> sample_path_ssep(const EventLog& log,
                                            const Configuration& sigma,
                                            const std::vector<double>& grid);

// Forward replay: swap at every event time <= t in chronological order.
// Pathwise identical to evolve_ssep; used where whole paths are needed.
Configuration stir_forward(const EventLog& log, const Configuration& sigma,
                           double t);

}  // namespace sepsim
