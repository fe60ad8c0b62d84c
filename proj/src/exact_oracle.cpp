#include "sepsim/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

#include "sepsim/common.hpp"

namespace sepsim {

StateIndex state_of(const Configuration& eta) {
  if (eta.size() > 20) throw CapacityError("state packing is limited to 20 sites");
  StateIndex s = 0;
  for (int i = 0; i < eta.size(); ++i)
    if (eta.occ[static_cast<std::size_t>(i)]) s |= (1u << i);
  return s;
}

Configuration configuration_of(StateIndex state, int sites) {
  Configuration eta(sites);
  for (int i = 0; i < sites; ++i)
    eta.occ[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((state >> i) & 1u);
  return eta;
}

namespace {

void check_window(const RateField& field, int limit, const char* what) {
  if (field.size() > limit)
    throw CapacityError(std::string(what) + " is limited to " +
                        std::to_string(limit) + " sites");
}

// Assembles the sparse generator from per-state transition lists.  Both
// generator builders route through here with identically ordered input,
// so algebraically equal constructions come out bit-equal.
GeneratorMatrix assemble_generator(
    int sites,
    const std::function<void(StateIndex,
                             std::vector<std::pair<StateIndex, double>>&)>&
        transitions_of) {
  const Eigen::Index n_states = Eigen::Index(1) << sites;
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<std::pair<StateIndex, double>> row;
  for (StateIndex s = 0; s < n_states; ++s) {
    row.clear();
    transitions_of(s, row);
    std::sort(row.begin(), row.end());
    double out_rate = 0.0;
    std::size_t i = 0;
    while (i < row.size()) {
      StateIndex target = row[i].first;
      double total = 0.0;
      for (; i < row.size() && row[i].first == target; ++i) total += row[i].second;
      triplets.emplace_back(s, target, total);
      out_rate += total;
    }
    if (out_rate != 0.0) triplets.emplace_back(s, s, -out_rate);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> mat(n_states, n_states);
  mat.setFromTriplets(triplets.begin(), triplets.end());
  return GeneratorMatrix(sites, std::move(mat));
}

// Poisson-weighted power sum: R = sum_k w_k(m) P^k with tail mass < tol.
Eigen::MatrixXd poisson_power_sum(const Eigen::MatrixXd& P, double m,
                                  double tol) {
  const Eigen::Index n = P.rows();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(n, n);
  double weight = std::exp(-m);
  double cum = 0.0;
  const long kmax = static_cast<long>(m + 12.0 * std::sqrt(m + 1.0) + 40.0);
  for (long k = 0; k <= kmax; ++k) {
    if (k > 0) {
      power = power * P;
      weight *= m / static_cast<double>(k);
    }
    result += weight * power;
    cum += weight;
    if (1.0 - cum < tol) break;
  }
  result /= cum;  // push the truncated tail back onto the rows
  return result;
}

// e^{tG} for a dense generator; splits t so each chunk has uniformization
// rate below 32 (keeps the Poisson weights well inside double range).
Eigen::MatrixXd dense_expm(const Eigen::MatrixXd& G, double t, double tol) {
  if (!(t >= 0.0)) throw UsageError("time must be >= 0");
  if (!(tol > 0.0)) throw UsageError("tolerance must be > 0");
  const Eigen::Index n = G.rows();
  double lambda = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    lambda = std::max(lambda, std::abs(G(i, i)));
  if (lambda * t == 0.0) return Eigen::MatrixXd::Identity(n, n);

  const long chunks =
      std::max(1L, static_cast<long>(std::ceil(lambda * t / 32.0)));
  const double dt = t / static_cast<double>(chunks);
  Eigen::MatrixXd P =
      Eigen::MatrixXd::Identity(n, n) + G * (1.0 / lambda);
  Eigen::MatrixXd step = poisson_power_sum(P, lambda * dt, tol / chunks);
  Eigen::MatrixXd result = step;
  for (long c = 1; c < chunks; ++c) result = result * step;
  return result;
}

}  // namespace

GeneratorMatrix build_generator_sep(const RateField& field) {
  check_window(field, 20, "the exclusion generator");
  const auto& rates = field.rates();
  return assemble_generator(
      field.size(),
      [&](StateIndex s, std::vector<std::pair<StateIndex, double>>& row) {
        for (const auto& [key, c] : rates) {
          auto [x, y] = key;
          if (((s >> x) & 1u) && !((s >> y) & 1u))
            row.push_back({swap_bits(s, x, y), c});
        }
      });
}

GeneratorMatrix build_generator_stirring(const RateField& field) {
  check_window(field, 20, "the stirring generator");
  if (!field.symmetric)
    throw UsageError("the stirring generator needs a symmetric field");
  const auto pairs = field.undirected_pairs();
  std::vector<std::pair<std::pair<int, int>, double>> weighted;
  weighted.reserve(pairs.size());
  for (auto [x, y] : pairs) weighted.push_back({{x, y}, field.rate(x, y)});
  return assemble_generator(
      field.size(),
      [&](StateIndex s, std::vector<std::pair<StateIndex, double>>& row) {
        for (const auto& [key, c] : weighted) {
          auto [x, y] = key;
          if (((s >> x) & 1u) != ((s >> y) & 1u))
            row.push_back({swap_bits(s, x, y), c});
        }
      });
}

Eigen::MatrixXd transition_matrix(const GeneratorMatrix& L, double t,
                                  double tol) {
  if (L.sites() > 12)
    throw CapacityError("dense e^{tL} is limited to 12 sites");
  return dense_expm(Eigen::MatrixXd(L.matrix()), t, tol);
}

DistributionVector evolve_distribution(const GeneratorMatrix& L,
                                       const DistributionVector& mu0, double t,
                                       double tol) {
  if (!(t >= 0.0)) throw UsageError("time must be >= 0");
  if (!(tol > 0.0)) throw UsageError("tolerance must be > 0");
  if (mu0.size() != L.states())
    throw UsageError("distribution length does not match the state space");

  double lambda = 0.0;
  for (Eigen::Index i = 0; i < L.states(); ++i)
    lambda = std::max(lambda, std::abs(L.entry(static_cast<StateIndex>(i),
                                               static_cast<StateIndex>(i))));
  if (lambda * t == 0.0) return mu0;

  const auto& mat = L.matrix();
  const long chunks =
      std::max(1L, static_cast<long>(std::ceil(lambda * t / 32.0)));
  const double dt = t / static_cast<double>(chunks);
  const double m = lambda * dt;
  const long kmax = static_cast<long>(m + 12.0 * std::sqrt(m + 1.0) + 40.0);

  Eigen::RowVectorXd mu = mu0.transpose();
  for (long c = 0; c < chunks; ++c) {
    Eigen::RowVectorXd term = mu;
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(mu.size());
    double weight = std::exp(-m);
    double cum = 0.0;
    for (long k = 0; k <= kmax; ++k) {
      if (k > 0) {
        const Eigen::RowVectorXd flow = term * mat;
        term += flow * (1.0 / lambda);  // term <- term (I + L/lambda)
        weight *= m / static_cast<double>(k);
      }
      acc += weight * term;
      cum += weight;
      if (1.0 - cum < tol / chunks) break;
    }
    mu = acc / cum;
  }
  return mu.transpose();
}

Eigen::MatrixXd rw_semigroup(const RateField& field, double t, double tol) {
  const int n = field.size();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [key, c] : field.rates()) {
    G(key.first, key.second) += c;
    G(key.first, key.first) -= c;
  }
  return dense_expm(G, t, tol);
}

Eigen::VectorXd tilde_L(const RateField& field, const Eigen::VectorXd& f) {
  if (f.size() != field.size())
    throw UsageError("site function length does not match the window");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
  for (const auto& [key, c] : field.rates())
    out[key.first] += c * (f[key.second] - f[key.first]);
  return out;
}

double apply_generator(const GeneratorMatrix& L, const Eigen::VectorXd& F,
                       StateIndex eta) {
  if (F.size() != L.states())
    throw UsageError("state function length does not match the state space");
  double result = 0.0;
  for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
           L.matrix(), eta);
       it; ++it)
    result += it.value() * F[it.col()];
  return result;
}

SectorGenerator build_generator_sep_sector(const RateField& field,
                                           int particles) {
  check_window(field, 20, "the sector generator");
  const int n = field.size();
  if (particles < 0 || particles > n)
    throw UsageError("particle number out of range");

  SectorGenerator sector;
  const StateIndex n_states = StateIndex(1) << n;
  std::vector<Eigen::Index> position(n_states, -1);
  for (StateIndex s = 0; s < n_states; ++s) {
    if (std::popcount(s) == particles) {
      position[s] = static_cast<Eigen::Index>(sector.states.size());
      sector.states.push_back(s);
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index row = 0; row < static_cast<Eigen::Index>(sector.states.size());
       ++row) {
    const StateIndex s = sector.states[static_cast<std::size_t>(row)];
    std::vector<std::pair<Eigen::Index, double>> entries;
    for (const auto& [key, c] : field.rates()) {
      auto [x, y] = key;
      if (((s >> x) & 1u) && !((s >> y) & 1u))
        entries.push_back({position[swap_bits(s, x, y)], c});
    }
    // same accumulation order as the full assembly, so the restriction
    // reproduces its entries bit for bit
    std::sort(entries.begin(), entries.end());
    double out_rate = 0.0;
    for (const auto& [col, c] : entries) {
      triplets.emplace_back(row, col, c);
      out_rate += c;
    }
    if (out_rate != 0.0) triplets.emplace_back(row, row, -out_rate);
  }
  const auto dim = static_cast<Eigen::Index>(sector.states.size());
  sector.matrix.resize(dim, dim);
  sector.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sector;
}

}  // namespace sepsim
