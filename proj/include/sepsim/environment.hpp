#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace sepsim {

// A site of the finite window: contiguous index plus a position in R^d.
// Mott environments attach an energy mark.
struct Site {
  int index = 0;
  Eigen::VectorXd pos;
  double mark = 0.0;
  bool has_mark = false;
};

// Finite window with directed jump rates c(x,y) >= 0, x != y.  Rates for
// x == y are identically zero and never stored; absent pairs read as 0.
// `symmetric` means exact bit equality c(x,y) == c(y,x) for all pairs
// (symmetric constructors assign one draw to both directions).
class RateField {
public:
  std::vector<Site> sites;
  int dimension = 1;
  bool symmetric = false;

  int size() const { return static_cast<int>(sites.size()); }

  double rate(int x, int y) const {
    auto it = rates_.find({x, y});
    return it == rates_.end() ? 0.0 : it->second;
  }

  // c_x, the total rate out of x.
  double row_sum(int x) const;

  void set_rate(int x, int y, double c);

  const std::map<std::pair<int, int>, double>& rates() const { return rates_; }

  // Canonical unordered pairs {x,y}, x < y, with either direction nonzero.
  std::vector<std::pair<int, int>> undirected_pairs() const;

  bool exchange_symmetric() const;

  bool operator==(const RateField& other) const;

private:
  std::map<std::pair<int, int>, double> rates_;
};

enum class EnvKind { LatticeConstant, LatticeIid, PppKernel, Mott };

struct EnvironmentSpec {
  EnvKind kind = EnvKind::LatticeConstant;
  int dimension = 1;
  int radius = 1;          // lattice window: Z^d intersected with [-radius, radius]^d
  double box_side = 10.0;  // point-process window: [0, box_side]^d
  double rate = 1.0;       // lattice-constant edge rate
  double pareto_alpha = 0.5;
  double pareto_scale = 1.0;
  double intensity = 1.0;  // Poisson point process intensity
  double mark_bound = 1.0; // Mott marks are uniform on [-A, A]
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError on out-of-range parameters
};

// Nearest-neighbor field on Z^d in the window.  lattice-iid draws one
// Pareto value per undirected edge, keyed by the edge's coordinates so
// that windows of different radii share draws under the same seed.
RateField build_lattice_env(const EnvironmentSpec& spec);

// Homogeneous Poisson point process in the box; c(x,y) = kernel(|x-y|)
// for every ordered pair.  Throws UsageError when zero points land.
RateField build_ppp_env(const EnvironmentSpec& spec,
                        const std::function<double(double)>& kernel);

// Marked Poisson point process with rates exp(-|x-y| - max(Ey - Ex, 0)).
RateField build_mott_env(const EnvironmentSpec& spec);

// The hop rate above as a plain function of distance and the two marks.
double mott_rate(double distance, double mark_from, double mark_to);

struct C1Report {
  std::vector<double> totals;  // c_x per site
  std::vector<int> flagged;    // sites with c_x > warn_threshold
  double warn_threshold = 0.0;
};

// Row sums c_x; finite by construction on a window, asserted anyway.
C1Report check_c1(const RateField& field,
                  double warn_threshold = std::numeric_limits<double>::infinity());

// sup_x sum_y max{c(x,y), c(y,x)} over the window: the classical
// uniform-rate condition, reported so its failure can be demonstrated.
double check_liggett(const RateField& field);

// Symmetrized field c^s(x,y) = c(x,y) + c(y,x).
RateField symmetrize(const RateField& field);

// Plain-text table: "header: site_count dimension", one line per site
// (index, coordinates, optional mark), one line per nonzero directed
// rate (x, y, rate).  17 significant digits throughout.
void save_field(const RateField& field, std::ostream& out);
RateField load_field(std::istream& in);

}  // namespace sepsim
