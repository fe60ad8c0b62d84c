#include "sepsim/duality.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sepsim/clocks.hpp"
#include "sepsim/common.hpp"
#include "sepsim/exact_oracle.hpp"
#include "sepsim/rng.hpp"

namespace sepsim {

double empirical_integral(const Configuration& eta, const Eigen::VectorXd& f) {
  if (f.size() != eta.size())
    throw UsageError("site function length does not match the window");
  double total = 0.0;
  for (int x = 0; x < eta.size(); ++x)
    if (eta.occ[static_cast<std::size_t>(x)]) total += f[x];
  return total;
}

std::pair<double, double> check_duality_identity(const RateField& field,
                                                 const Eigen::VectorXd& f,
                                                 const Configuration& eta) {
  if (!field.symmetric)
    throw UsageError("the duality identity is stated for symmetric fields");
  const GeneratorMatrix L = build_generator_stirring(field);
  Eigen::VectorXd pi_f(L.states());
  for (StateIndex s = 0; s < L.states(); ++s)
    pi_f[s] = empirical_integral(configuration_of(s, field.size()), f);
  const double lhs = apply_generator(L, pi_f, state_of(eta));

  const Eigen::VectorXd lf = tilde_L(field, f);
  double rhs = 0.0;
  for (int x = 0; x < field.size(); ++x)
    if (eta.occ[static_cast<std::size_t>(x)]) rhs += lf[x];
  return {lhs, rhs};
}

McEstimate self_duality_mc(const RateField& field, const Configuration& sigma,
                           int x, double t, std::int64_t replicas,
                           std::uint64_t seed) {
  if (replicas < 1) throw UsageError("replicas must be >= 1");
  if (x < 0 || x >= field.size()) throw UsageError("site out of range");

  std::int64_t hits = 0;
  for (std::int64_t rep = 0; rep < replicas; ++rep) {
    const EventLog log = sample_event_log(
        field, t, rng::split(seed, static_cast<std::uint64_t>(rep)));
    const TraceResult trace = trace_back(log, x, t);
    if (trace.terminal == kExplosion) throw ExplosionError(x);
    hits += sigma.occ[static_cast<std::size_t>(trace.terminal)];
  }

  McEstimate out;
  out.replicas = replicas;
  out.estimate = static_cast<double>(hits) / static_cast<double>(replicas);
  out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) /
                          static_cast<double>(replicas));
  Eigen::VectorXd sigma_vec(field.size());
  for (int y = 0; y < field.size(); ++y)
    sigma_vec[y] = sigma.occ[static_cast<std::size_t>(y)];
  out.oracle = (rw_semigroup(field, t) * sigma_vec)(x);
  return out;
}

DynkinResult dynkin_check(const RateField& field, const Configuration& sigma,
                          const Eigen::VectorXd& f, double t,
                          std::int64_t replicas, double quadrature_step,
                          std::uint64_t seed) {
  if (replicas < 1) throw UsageError("replicas must be >= 1");
  if (!(t > 0.0)) throw UsageError("t must be > 0");
  if (quadrature_step < 0.0) throw UsageError("quadrature step must be >= 0");
  if (quadrature_step > 0.0) {
    const double ratio = t / quadrature_step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
      throw UsageError("quadrature step must divide t");
  }
  if (!field.symmetric)
    throw UsageError("the Dynkin check runs on the stirring construction");

  const Eigen::VectorXd lf = tilde_L(field, f);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t rep = 0; rep < replicas; ++rep) {
    const EventLog log = sample_event_log(
        field, t, rng::split(seed, static_cast<std::uint64_t>(rep)));

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
    double pi = empirical_integral(eta, f);
    const double pi0 = pi;
    double gamma = 0.0;  // sum_x eta(x) (Ltilde f)(x), kept incrementally
    for (int y = 0; y < field.size(); ++y)
      if (eta.occ[static_cast<std::size_t>(y)]) gamma += lf[y];

    double integral = 0.0;
    double m_t = 0.0;
    if (quadrature_step == 0.0) {
      double prev = 0.0;
      for (const Swap& s : swaps) {
        integral += gamma * (s.time - prev);
        prev = s.time;
        auto& oa = eta.occ[static_cast<std::size_t>(s.a)];
        auto& ob = eta.occ[static_cast<std::size_t>(s.b)];
        if (oa != ob) {
          const double sign = oa ? 1.0 : -1.0;  // +1 when the particle moves a -> b
          pi += sign * (f[s.b] - f[s.a]);
          gamma += sign * (lf[s.b] - lf[s.a]);
        }
        std::swap(oa, ob);
      }
      integral += gamma * (t - prev);
      m_t = pi - pi0 - integral;
    } else {
      const auto steps = static_cast<long>(std::round(t / quadrature_step));
      std::size_t next_swap = 0;
      for (long k = 0; k < steps; ++k) {
        integral += gamma * quadrature_step;  // left endpoint
        const double upto = (k + 1 == steps)
                                ? t
                                : quadrature_step * static_cast<double>(k + 1);
        while (next_swap < swaps.size() && swaps[next_swap].time <= upto) {
          const Swap& s = swaps[next_swap++];
          auto& oa = eta.occ[static_cast<std::size_t>(s.a)];
          auto& ob = eta.occ[static_cast<std::size_t>(s.b)];
          if (oa != ob) {
            const double sign = oa ? 1.0 : -1.0;
            pi += sign * (f[s.b] - f[s.a]);
            gamma += sign * (lf[s.b] - lf[s.a]);
          }
          std::swap(oa, ob);
        }
      }
      m_t = pi - pi0 - integral;
    }
    sum += m_t;
    sum_sq += m_t * m_t;
  }

  DynkinResult out;
  out.replicas = replicas;
  out.mean = sum / static_cast<double>(replicas);
  const double var =
      (sum_sq - sum * sum / static_cast<double>(replicas)) /
      static_cast<double>(replicas - 1);
  out.stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(replicas));
  return out;
}

}  // namespace sepsim
