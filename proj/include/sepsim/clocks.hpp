#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "sepsim/environment.hpp"

namespace sepsim {

struct TimeInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool closed_lower = true;
  bool closed_upper = true;

  bool contains(double t) const {
    if (t < lower || t > upper) return false;
    if (t == lower && !closed_lower) return false;
    if (t == upper && !closed_upper) return false;
    return true;
  }
};

// One entry of a site's merged clock: the partner of the ringing edge and,
// for directed logs, whether this site is the source.
struct SiteEvent {
  double time = 0.0;
  int partner = -1;
  bool outgoing = true;
};

// Poisson jump times on (0, horizon], one sorted sequence per edge.
// Undirected logs (driving the stirring construction) key edges by the
// canonical pair x < y; directed logs key ordered pairs (source, target).
//
// Invariants maintained by every constructor and transformer:
//   - each per-edge sequence is strictly increasing;
//   - jump times are distinct across edges (float collisions are resolved
//     by bumping the event of the higher-ranked edge one ulp up);
//   - the per-site merged index agrees with the per-edge sequences.
class EventLog {
public:
  double horizon = 0.0;
  bool directed = false;
  int site_count = 0;
  std::map<std::pair<int, int>, std::vector<double>> edges;

  const std::vector<SiteEvent>& site_events(int x) const { return by_site_[x]; }

  void rebuild_site_index();
  std::size_t total_events() const;

  bool operator==(const EventLog& other) const {
    return horizon == other.horizon && directed == other.directed &&
           site_count == other.site_count && edges == other.edges;
  }

  // Provenance used by time_shift / time_reverse so that composing shifts
  // and reversing twice reproduce times bit-exactly (one float subtraction
  // applied to the base times, never two).
  std::shared_ptr<const EventLog> base;
  double shift_from_base = 0.0;
  bool reverse_of_base = false;

private:
  std::vector<std::vector<SiteEvent>> by_site_;
};

// Independent Poisson clocks per edge with the field's rates; undirected
// edges for symmetric fields, ordered pairs otherwise.  Per-edge streams
// are split from the seed by the edge's rank, so the log is reproducible
// regardless of sampling order.
EventLog sample_event_log(const RateField& field, double horizon,
                          std::uint64_t seed);

// Merged jump times of site x lying in the window, with partners.
std::vector<SiteEvent> site_events(const EventLog& log, int x,
                                   const TimeInterval& window);

// Jump times {s - t : s > t}, horizon - t.
EventLog time_shift(const EventLog& log, double t);

// Jump times {horizon - s}; reversing a reversed log restores the
// original exactly.
EventLog time_reverse(const EventLog& log);

// Checks every invariant listed above; throws UsageError on violation.
void validate_log(const EventLog& log);

// Plain text: header "horizon site_count directed event_count", then one
// line per event "time x y orientation" (orientation 1 when the log is
// directed and x is the source, else 0).
void save_log(const EventLog& log, std::ostream& out);
EventLog load_log(std::istream& in);

}  // namespace sepsim
