#include "sepsim/clocks.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "sepsim/common.hpp"
#include "sepsim/rng.hpp"

namespace sepsim {

namespace {

struct FlatEvent {
  double time;
  std::uint64_t edge_rank;  // breaks global ordering ties deterministically
  std::size_t edge_slot;
};

// Sorts all events globally by (time, edge_rank) and bumps any collision
// one ulp up; events pushed past the horizon are dropped.  Keeps per-edge
// sequences strictly increasing and globally distinct.
void enforce_distinct(std::vector<FlatEvent>& all, double horizon,
                      std::vector<std::vector<double>>& per_edge) {
  std::sort(all.begin(), all.end(), [](const FlatEvent& a, const FlatEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.edge_rank < b.edge_rank;
  });
  double prev = 0.0;
  bool have_prev = false;
  for (const FlatEvent& e : all) {
    double t = e.time;
    if (have_prev && t <= prev)
      t = std::nextafter(prev, std::numeric_limits<double>::infinity());
    if (t > horizon) continue;
    per_edge[e.edge_slot].push_back(t);
    prev = t;
    have_prev = true;
  }
}

std::uint64_t edge_rank(const std::pair<int, int>& key, int site_count) {
  return static_cast<std::uint64_t>(key.first) *
             static_cast<std::uint64_t>(site_count) +
         static_cast<std::uint64_t>(key.second);
}

// Rebuilds a log from raw (possibly colliding, unsorted) per-edge times.
EventLog assemble(double horizon, bool directed, int site_count,
                  std::vector<std::pair<std::pair<int, int>,
                                        std::vector<double>>>&& raw) {
  EventLog log;
  log.horizon = horizon;
  log.directed = directed;
  log.site_count = site_count;

  std::vector<FlatEvent> all;
  std::vector<std::vector<double>> cleaned(raw.size());
  for (std::size_t slot = 0; slot < raw.size(); ++slot) {
    const std::uint64_t rank = edge_rank(raw[slot].first, site_count);
    for (double t : raw[slot].second)
      if (t > 0.0) all.push_back({t, rank, slot});
  }
  enforce_distinct(all, horizon, cleaned);
  for (std::size_t slot = 0; slot < raw.size(); ++slot)
    if (!cleaned[slot].empty())
      log.edges[raw[slot].first] = std::move(cleaned[slot]);
  log.rebuild_site_index();
  return log;
}

}  // namespace

void EventLog::rebuild_site_index() {
  by_site_.assign(static_cast<std::size_t>(site_count), {});
  for (const auto& [key, times] : edges) {
    auto [a, b] = key;
    for (double t : times) {
      by_site_[static_cast<std::size_t>(a)].push_back({t, b, true});
      by_site_[static_cast<std::size_t>(b)].push_back({t, a, !directed});
    }
  }
  for (auto& events : by_site_)
    std::sort(events.begin(), events.end(),
              [](const SiteEvent& x, const SiteEvent& y) { return x.time < y.time; });
}

std::size_t EventLog::total_events() const {
  std::size_t n = 0;
  for (const auto& [key, times] : edges) n += times.size();
  return n;
}

EventLog sample_event_log(const RateField& field, double horizon,
                          std::uint64_t seed) {
  if (!(horizon > 0.0)) throw UsageError("horizon must be > 0");
  const int n = field.size();

  std::vector<std::pair<std::pair<int, int>, std::vector<double>>> raw;
  auto sample_edge = [&](std::pair<int, int> key, double rate) {
    if (rate <= 0.0) return;
    rng::Stream g(rng::split(seed, edge_rank(key, n)));
    std::vector<double> times;
    double t = 0.0;
    for (;;) {
      t += rng::exponential(g, rate);
      if (t > horizon) break;
      times.push_back(t);
    }
    if (!times.empty()) raw.push_back({key, std::move(times)});
  };

  if (field.symmetric) {
    for (auto [x, y] : field.undirected_pairs())
      sample_edge({x, y}, field.rate(x, y));
  } else {
    for (const auto& [key, c] : field.rates()) sample_edge(key, c);
  }
  return assemble(horizon, !field.symmetric, n, std::move(raw));
}

std::vector<SiteEvent> site_events(const EventLog& log, int x,
                                   const TimeInterval& window) {
  if (x < 0 || x >= log.site_count) throw UsageError("site out of range");
  if (window.lower < 0.0 || window.upper > log.horizon)
    throw UsageError("window not contained in [0, horizon]");
  std::vector<SiteEvent> out;
  for (const SiteEvent& e : log.site_events(x))
    if (window.contains(e.time)) out.push_back(e);
  return out;
}

EventLog time_shift(const EventLog& log, double t) {
  if (t < 0.0 || t > log.horizon)
    throw UsageError("shift must lie in [0, horizon]");
  if (t == 0.0) return log;

  // Compose with an earlier shift so times come from one subtraction.
  const EventLog& src = (log.base && !log.reverse_of_base) ? *log.base : log;
  const double offset =
      (log.base && !log.reverse_of_base) ? log.shift_from_base + t : t;

  std::vector<std::pair<std::pair<int, int>, std::vector<double>>> raw;
  for (const auto& [key, times] : src.edges) {
    std::vector<double> shifted;
    for (double s : times)
      if (s > offset) shifted.push_back(s - offset);
    if (!shifted.empty()) raw.push_back({key, std::move(shifted)});
  }
  EventLog out = assemble(src.horizon - offset, log.directed, log.site_count,
                          std::move(raw));
  out.base = std::make_shared<EventLog>(src);
  out.shift_from_base = offset;
  return out;
}

EventLog time_reverse(const EventLog& log) {
  if (log.base && log.reverse_of_base && log.base->horizon == log.horizon) {
    EventLog out = *log.base;
    return out;
  }
  std::vector<std::pair<std::pair<int, int>, std::vector<double>>> raw;
  for (const auto& [key, times] : log.edges) {
    std::vector<double> rev;
    for (auto it = times.rbegin(); it != times.rend(); ++it) {
      const double s = log.horizon - *it;
      if (s > 0.0) rev.push_back(s);
    }
    if (!rev.empty()) raw.push_back({key, std::move(rev)});
  }
  EventLog out =
      assemble(log.horizon, log.directed, log.site_count, std::move(raw));
  out.base = std::make_shared<EventLog>(log);
  out.reverse_of_base = true;
  return out;
}

void validate_log(const EventLog& log) {
  if (log.horizon < 0.0) throw UsageError("log: negative horizon");
  std::vector<double> all;
  for (const auto& [key, times] : log.edges) {
    auto [a, b] = key;
    if (a == b) throw UsageError("log: loop edge");
    if (a < 0 || b < 0 || a >= log.site_count || b >= log.site_count)
      throw UsageError("log: edge endpoint out of range");
    if (!log.directed && a >= b)
      throw UsageError("log: undirected edge key not canonical");
    double prev = 0.0;
    for (double t : times) {
      if (!(t > prev)) throw UsageError("log: per-edge times not increasing");
      if (t > log.horizon) throw UsageError("log: time beyond horizon");
      prev = t;
      all.push_back(t);
    }
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw UsageError("log: coinciding times across edges");

  // site index must be rebuildable to the same content
  EventLog copy = log;
  copy.rebuild_site_index();
  for (int x = 0; x < log.site_count; ++x) {
    const auto& a = log.site_events(x);
    const auto& b = copy.site_events(x);
    if (a.size() != b.size()) throw UsageError("log: stale site index");
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].time != b[i].time || a[i].partner != b[i].partner ||
          a[i].outgoing != b[i].outgoing)
        throw UsageError("log: stale site index");
  }
}

void save_log(const EventLog& log, std::ostream& out) {
  out << g17(log.horizon) << ' ' << log.site_count << ' '
      << (log.directed ? 1 : 0) << ' ' << log.total_events() << '\n';
  for (const auto& [key, times] : log.edges)
    for (double t : times)
      out << g17(t) << ' ' << key.first << ' ' << key.second << ' '
          << (log.directed ? 1 : 0) << '\n';
}

EventLog load_log(std::istream& in) {
  double horizon = 0.0;
  int site_count = 0;
  int directed = 0;
  std::size_t count = 0;
  if (!(in >> horizon >> site_count >> directed >> count))
    throw ConfigError("event log: bad header");
  std::map<std::pair<int, int>, std::vector<double>> edges;
  for (std::size_t i = 0; i < count; ++i) {
    double t = 0.0;
    int x = 0;
    int y = 0;
    int orient = 0;
    if (!(in >> t >> x >> y >> orient))
      throw ConfigError("event log: truncated event list");
    edges[{x, y}].push_back(t);
  }
  std::vector<std::pair<std::pair<int, int>, std::vector<double>>> raw(
      edges.begin(), edges.end());
  return assemble(horizon, directed != 0, site_count, std::move(raw));
}

}  // namespace sepsim
