#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sepsim/clocks.hpp"
#include "sepsim/common.hpp"
#include "sepsim/rng.hpp"
#include "sepsim/stats.hpp"
#include "test_support.hpp"

using namespace sepsim;
using sepsim::testing::chain_field;
using sepsim::testing::make_log;

TEST_CASE("zero-rate edges produce no events") {
  RateField field = chain_field(3, 0.0);
  field.set_rate(0, 1, 1.0);
  field.set_rate(1, 0, 1.0);
  const EventLog log = sample_event_log(field, 2.0, 1);
  CHECK(log.edges.count({1, 2}) == 0);
  validate_log(log);
}

TEST_CASE("per-edge counts are poisson with mean rate times horizon") {
  const RateField field = chain_field(2, 2.0);
  const int reps = 10000;
  double total = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const EventLog log = sample_event_log(field, 3.0,
                                          static_cast<std::uint64_t>(rep));
    total += static_cast<double>(log.total_events());
  }
  const double mean = total / reps;
  const double se = std::sqrt(6.0 / reps);
  CHECK(std::abs(mean - 6.0) < 3.0 * se);
}

TEST_CASE("sampling is deterministic in (field, horizon, seed)") {
  const RateField field = chain_field(6, 1.3);
  const EventLog a = sample_event_log(field, 2.0, 42);
  const EventLog b = sample_event_log(field, 2.0, 42);
  CHECK(a == b);
}

TEST_CASE("path-regularity invariants hold for samples and transforms") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RateField field = testing::random_symmetric_field(8, seed);
    const EventLog log = sample_event_log(field, 1.5, seed);
    validate_log(log);
    validate_log(time_shift(log, 0.4));
    validate_log(time_reverse(log));
  }
}

TEST_CASE("site_events filters the merged index by window") {
  const EventLog log =
      make_log(1.0, 2, false, {{{0, 1}, {0.5}}});
  SUBCASE("single jump inside a closed window") {
    const auto events = site_events(log, 0, {0.0, 1.0, true, true});
    REQUIRE(events.size() == 1);
    CHECK(events[0].time == 0.5);
    CHECK(events[0].partner == 1);
  }
  SUBCASE("window after the jump") {
    CHECK(site_events(log, 0, {0.6, 1.0, true, true}).empty());
  }
  SUBCASE("empty log") {
    const EventLog none = make_log(1.0, 2, false, {});
    CHECK(site_events(none, 0, {0.0, 1.0, true, true}).empty());
  }
}

TEST_CASE("time shift: boundary cases and event arithmetic") {
  const EventLog log = make_log(2.0, 2, false, {{{0, 1}, {0.3, 1.2}}});
  SUBCASE("zero shift is the identity") {
    CHECK(time_shift(log, 0.0) == log);
  }
  SUBCASE("events before the shift drop, the rest move") {
    const EventLog shifted = time_shift(log, 1.0);
    CHECK(shifted.horizon == 1.0);
    const auto& times = shifted.edges.at({0, 1});
    REQUIRE(times.size() == 1);
    CHECK(times[0] == doctest::Approx(0.2).epsilon(1e-14));
  }
  SUBCASE("shifting by the horizon empties the log") {
    const EventLog shifted = time_shift(log, 2.0);
    CHECK(shifted.horizon == 0.0);
    CHECK(shifted.total_events() == 0);
  }
}

TEST_CASE("shift composition is exact") {
  const RateField field = testing::random_symmetric_field(6, 77);
  const EventLog log = sample_event_log(field, 3.0, 77);
  const double s = 0.37;
  const double t = 0.81;
  const EventLog two_steps = time_shift(time_shift(log, s), t);
  const EventLog one_step = time_shift(log, s + t);
  CHECK(two_steps == one_step);
}

TEST_CASE("time reversal: mapped times, involution, empty log") {
  const EventLog log = make_log(2.0, 2, false, {{{0, 1}, {0.3, 1.2}}});
  SUBCASE("times map to horizon minus time") {
    const EventLog rev = time_reverse(log);
    const auto& times = rev.edges.at({0, 1});
    REQUIRE(times.size() == 2);
    CHECK(times[0] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(times[1] == doctest::Approx(1.7).epsilon(1e-14));
  }
  SUBCASE("reversing twice restores the original exactly") {
    CHECK(time_reverse(time_reverse(log)) == log);
    const RateField field = testing::random_symmetric_field(7, 5);
    const EventLog sampled = sample_event_log(field, 1.0, 5);
    CHECK(time_reverse(time_reverse(sampled)) == sampled);
  }
  SUBCASE("empty log reverses to an empty log") {
    const EventLog none = make_log(1.0, 2, false, {});
    CHECK(time_reverse(none).total_events() == 0);
  }
}

TEST_CASE("reversed logs keep the poisson count law") {
  const double rate = 1.7;
  const double horizon = 2.0;
  const RateField field = chain_field(2, rate);
  const int seeds = 10000;
  std::vector<std::int64_t> counts(30, 0);
  for (int seed = 0; seed < seeds; ++seed) {
    const EventLog rev = time_reverse(
        sample_event_log(field, horizon, static_cast<std::uint64_t>(seed)));
    const auto n = std::min<std::size_t>(rev.total_events(), counts.size() - 1);
    ++counts[n];
  }
  const double mean = rate * horizon;
  Eigen::VectorXd probs(30);
  double w = std::exp(-mean);
  double cum = 0.0;
  for (int k = 0; k < 29; ++k) {
    probs[k] = w;
    cum += w;
    w *= mean / (k + 1);
  }
  probs[29] = 1.0 - cum;  // tail bucket
  const ChiSquareResult chi = chi_square_gof(counts, probs);
  CHECK(chi.p_value > 1e-3);
}

TEST_CASE("reversal keeps times admissible path by path") {
  const RateField field = chain_field(2, 1.7);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const EventLog log = sample_event_log(field, 2.0, seed);
    const EventLog rev = time_reverse(log);
    CHECK(rev.total_events() == log.total_events());
    validate_log(rev);
  }
}

TEST_CASE("event log text round-trips") {
  const RateField field = testing::random_directed_field(5, 13);
  const EventLog log = sample_event_log(field, 1.2, 13);
  std::stringstream buffer;
  save_log(log, buffer);
  const EventLog back = load_log(buffer);
  CHECK(back == log);
}

TEST_CASE("usage errors: bad windows and shifts") {
  const EventLog log = make_log(1.0, 2, false, {{{0, 1}, {0.5}}});
  CHECK_THROWS_AS(site_events(log, 0, {0.0, 2.0, true, true}), UsageError);
  CHECK_THROWS_AS(time_shift(log, 1.5), UsageError);
  CHECK_THROWS_AS(time_shift(log, -0.1), UsageError);
}

TEST_CASE("colliding hand-made times are separated by the tie rule") {
  EventLog log;
  log.horizon = 1.0;
  log.directed = false;
  log.site_count = 4;
  // two distinct edges ringing at the same float time
  log.edges[{0, 1}] = {0.5};
  log.edges[{2, 3}] = {0.5};
  log.rebuild_site_index();
  std::stringstream buffer;
  save_log(log, buffer);
  const EventLog cleaned = load_log(buffer);  // import re-enforces the rule
  validate_log(cleaned);
  CHECK(cleaned.total_events() == 2);
  const double t01 = cleaned.edges.at({0, 1})[0];
  const double t23 = cleaned.edges.at({2, 3})[0];
  CHECK(t01 == 0.5);
  CHECK(t23 == std::nextafter(0.5, 1.0));
}
