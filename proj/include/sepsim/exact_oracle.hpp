#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "sepsim/environment.hpp"
#include "sepsim/stirring.hpp"

namespace sepsim {

// A configuration on <= 20 sites packed as a bitmask (site i <-> bit i).
using StateIndex = std::uint32_t;

StateIndex state_of(const Configuration& eta);
Configuration configuration_of(StateIndex state, int sites);

// Swap the occupancies at x and y inside a packed state.
inline StateIndex swap_bits(StateIndex state, int x, int y) {
  const StateIndex bx = (state >> x) & 1u;
  const StateIndex by = (state >> y) & 1u;
  if (bx == by) return state;
  return state ^ ((1u << x) | (1u << y));
}

// Exact Markov generator on {0,1}^sites: off-diagonals are nonnegative
// jump rates, each diagonal balances its row.
class GeneratorMatrix {
public:
  GeneratorMatrix(int sites, Eigen::SparseMatrix<double, Eigen::RowMajor> mat)
      : sites_(sites), mat_(std::move(mat)) {}

  int sites() const { return sites_; }
  Eigen::Index states() const { return mat_.rows(); }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix() const {
    return mat_;
  }
  double entry(StateIndex from, StateIndex to) const {
    return mat_.coeff(from, to);
  }

private:
  int sites_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> mat_;
};

// Probability weights over packed states.
using DistributionVector = Eigen::VectorXd;

// Exclusion generator: state -> swapped state at rate c(x,y) when x is
// occupied and y empty, accumulated over ordered pairs.
GeneratorMatrix build_generator_sep(const RateField& field);

// Stirring generator: unordered pairs, swap at rate c(x,y) whenever the
// occupancies differ.  Requires a symmetric field.
GeneratorMatrix build_generator_stirring(const RateField& field);

// e^{tL} by uniformization (positivity- and row-sum-preserving); the
// dense result is gated at 12 sites.
Eigen::MatrixXd transition_matrix(const GeneratorMatrix& L, double t,
                                  double tol = 1e-12);

// mu^T e^{tL} for a start distribution; works on any window the sparse
// generator fits.
DistributionVector evolve_distribution(const GeneratorMatrix& L,
                                       const DistributionVector& mu0, double t,
                                       double tol = 1e-12);

// Single-particle semigroup P_t over sites (off-diagonal c(x,y), diagonal
// -c_x, exponentiated by uniformization).
Eigen::MatrixXd rw_semigroup(const RateField& field, double t,
                             double tol = 1e-12);

// Discrete Laplacian: (Lf)(x) = sum_y c(x,y) (f(y) - f(x)).
Eigen::VectorXd tilde_L(const RateField& field, const Eigen::VectorXd& f);

// (L F)(eta) from the assembled matrix.
double apply_generator(const GeneratorMatrix& L, const Eigen::VectorXd& F,
                       StateIndex eta);

// Restriction of the exclusion generator to the states with a fixed
// particle number (an exact invariant subspace); reaches 20-site windows.
struct SectorGenerator {
  std::vector<StateIndex> states;            // sector members, increasing
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
};
SectorGenerator build_generator_sep_sector(const RateField& field,
                                           int particles);

}  // namespace sepsim
