#pragma once

#include <cstddef>

#include "sepsim/clocks.hpp"
#include "sepsim/graph.hpp"
#include "sepsim/stirring.hpp"

namespace sepsim {

// Graph of the edges whose merged (symmetrized) clock rang in the window
// (r t0, (r+1) t0].  Requires (r+1) t0 <= horizon.
WindowGraph build_window_graph(const EventLog& log, int r, double t0);

// Replays the events of `sites` (a component) with times in (lo, hi] onto
// `eta`, chronologically, moving a particle across a ringing ordered pair
// only when the source is occupied and the target empty.
void replay_component(const EventLog& log, Configuration& eta,
                      const std::vector<int>& sites, double lo, double hi);

// Harris forward construction: windows of width t0, finite components
// replayed independently inside each window, stopping mid-window at t.
// Requires a directed log.  Any component larger than component_cap
// throws ComponentBlowupError with the window index and size.
Configuration evolve_sep(const EventLog& log, const Configuration& sigma,
                         double t, double t0,
                         std::size_t component_cap = 10'000);

// Whole-window chronological replay ignoring the component decomposition;
// valid on finite windows and used as the reference path.
Configuration replay_global(const EventLog& log, const Configuration& sigma,
                            double t);

// Dependency set B(r, x): the sites whose initial occupancies can reach x
// within r+1 windows, built by chaining components of the window graphs
// r, r-1, ..., 0.  Sorted.
std::vector<int> dependency_set(const EventLog& log, int x, int r, double t0);

}  // namespace sepsim
