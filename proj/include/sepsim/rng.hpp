#pragma once

#include <cmath>
#include <cstdint>

namespace sepsim::rng {

// splitmix64 finalizer (Steele, Lea, Flood; public domain reference code).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based stream split: the seed of stream `k` of `master` depends
// only on the pair (master, k), never on sampling order.  Nested splits
// give independent per-replica / per-edge substreams.
inline std::uint64_t split(std::uint64_t master, std::uint64_t stream) {
  return mix64(master ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

// Minimal splitmix64 generator.  Output sequence is fixed by the seed
// alone, so sampled data is bit-reproducible across platforms (the
// standard <random> distributions are not).
class Stream {
public:
  using result_type = std::uint64_t;
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

inline Stream stream(std::uint64_t master, std::uint64_t id) {
  return Stream(split(master, id));
}

// Uniform on [0,1), 53-bit resolution.
inline double uniform01(Stream& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform on (0,1]; safe argument for log().
inline double uniform01_pos(Stream& g) {
  return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;
}

inline double uniform(Stream& g, double a, double b) {
  return a + (b - a) * uniform01(g);
}

// Exponential waiting time, mean 1/rate (inverse CDF).
inline double exponential(Stream& g, double rate) {
  return -std::log(uniform01_pos(g)) / rate;
}

// Pareto with tail P(X > u) = (scale/u)^alpha for u >= scale.
inline double pareto(Stream& g, double alpha, double scale) {
  return scale * std::pow(uniform01_pos(g), -1.0 / alpha);
}

// Exact Poisson count via unit-rate exponential arrivals in [0, mean].
inline long poisson(Stream& g, double mean) {
  long n = 0;
  double acc = 0.0;
  for (;;) {
    acc += -std::log(uniform01_pos(g));
    if (acc > mean) return n;
    ++n;
  }
}

}  // namespace sepsim::rng
