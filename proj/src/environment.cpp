#include "sepsim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sepsim/common.hpp"
#include "sepsim/rng.hpp"

namespace sepsim {

double RateField::row_sum(int x) const {
  double total = 0.0;
  auto it = rates_.lower_bound({x, std::numeric_limits<int>::min()});
  for (; it != rates_.end() && it->first.first == x; ++it) total += it->second;
  return total;
}

void RateField::set_rate(int x, int y, double c) {
  if (x == y) throw UsageError("rate on a loop (x == y) is identically zero");
  if (!(c >= 0.0) || !std::isfinite(c))
    throw UsageError("rates must be finite and nonnegative");
  if (c == 0.0) {
    rates_.erase({x, y});
    return;
  }
  rates_[{x, y}] = c;
}

std::vector<std::pair<int, int>> RateField::undirected_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& [key, c] : rates_) {
    auto [x, y] = key;
    if (x < y) {
      out.push_back(key);
    } else if (rates_.find({y, x}) == rates_.end()) {
      out.push_back({y, x});  // only the (x>y) direction is present
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool RateField::exchange_symmetric() const {
  for (const auto& [key, c] : rates_)
    if (rate(key.second, key.first) != c) return false;
  return true;
}

bool RateField::operator==(const RateField& other) const {
  if (dimension != other.dimension || symmetric != other.symmetric ||
      sites.size() != other.sites.size() || rates_ != other.rates_)
    return false;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const Site& a = sites[i];
    const Site& b = other.sites[i];
    if (a.index != b.index || a.has_mark != b.has_mark || a.mark != b.mark ||
        a.pos != b.pos)
      return false;
  }
  return true;
}

void EnvironmentSpec::validate() const {
  if (dimension < 1) throw ConfigError("dimension must be >= 1");
  switch (kind) {
    case EnvKind::LatticeConstant:
      if (radius < 1) throw ConfigError("radius must be >= 1");
      if (!(rate >= 0.0) || !std::isfinite(rate))
        throw ConfigError("rate must be finite and nonnegative");
      break;
    case EnvKind::LatticeIid:
      if (radius < 1) throw ConfigError("radius must be >= 1");
      if (!(pareto_alpha > 0.0)) throw ConfigError("pareto shape must be > 0");
      if (!(pareto_scale > 0.0)) throw ConfigError("pareto scale must be > 0");
      break;
    case EnvKind::PppKernel:
      if (!(intensity > 0.0)) throw ConfigError("intensity must be > 0");
      if (!(box_side > 0.0)) throw ConfigError("box side must be > 0");
      break;
    case EnvKind::Mott:
      if (!(intensity > 0.0)) throw ConfigError("intensity must be > 0");
      if (!(box_side > 0.0)) throw ConfigError("box side must be > 0");
      if (!(mark_bound >= 0.0)) throw ConfigError("mark bound must be >= 0");
      break;
  }
}

namespace {

// Stable 64-bit key of a lattice coordinate vector.
std::uint64_t coord_hash(const Eigen::VectorXd& pos) {
  std::uint64_t h = 0x51B0A12893F3CD01ULL;
  for (int k = 0; k < pos.size(); ++k) {
    auto c = static_cast<std::int64_t>(std::llround(pos[k]));
    h = rng::mix64(h ^ static_cast<std::uint64_t>(c + 0x400000000LL));
  }
  return h;
}

// Order-free key of an undirected lattice edge, stable across windows.
std::uint64_t edge_hash(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  std::uint64_t ha = coord_hash(a);
  std::uint64_t hb = coord_hash(b);
  if (ha > hb) std::swap(ha, hb);
  return rng::mix64(ha ^ rng::mix64(hb));
}

std::vector<Site> lattice_window(int dimension, int radius) {
  const int side = 2 * radius + 1;
  long count = 1;
  for (int k = 0; k < dimension; ++k) {
    count *= side;
    if (count > 4'000'000) throw ConfigError("lattice window too large");
  }
  std::vector<Site> sites(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    Eigen::VectorXd pos(dimension);
    long rem = i;
    for (int k = dimension - 1; k >= 0; --k) {
      pos[k] = static_cast<double>(rem % side - radius);
      rem /= side;
    }
    sites[i].index = static_cast<int>(i);
    sites[i].pos = std::move(pos);
  }
  return sites;
}

std::vector<Site> sample_ppp_sites(const EnvironmentSpec& spec) {
  rng::Stream g = rng::stream(spec.seed, 0);
  const double volume = std::pow(spec.box_side, spec.dimension);
  const long n = rng::poisson(g, spec.intensity * volume);
  if (n == 0) throw UsageError("point process sampled zero points");
  std::vector<Site> sites(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    Eigen::VectorXd pos(spec.dimension);
    for (int k = 0; k < spec.dimension; ++k)
      pos[k] = rng::uniform(g, 0.0, spec.box_side);
    sites[i].index = static_cast<int>(i);
    sites[i].pos = std::move(pos);
  }
  return sites;
}

}  // namespace

RateField build_lattice_env(const EnvironmentSpec& spec) {
  spec.validate();
  if (spec.kind != EnvKind::LatticeConstant && spec.kind != EnvKind::LatticeIid)
    throw UsageError("build_lattice_env expects a lattice kind");

  RateField field;
  field.dimension = spec.dimension;
  field.symmetric = true;
  field.sites = lattice_window(spec.dimension, spec.radius);

  const int side = 2 * spec.radius + 1;
  // Strides of the lexicographic enumeration: +e_k neighbor of site i.
  std::vector<long> stride(spec.dimension, 1);
  for (int k = spec.dimension - 2; k >= 0; --k)
    stride[k] = stride[k + 1] * side;

  for (const Site& s : field.sites) {
    for (int k = 0; k < spec.dimension; ++k) {
      if (s.pos[k] >= spec.radius) continue;  // no +e_k neighbor in window
      const int j = static_cast<int>(s.index + stride[k]);
      double c = spec.rate;
      if (spec.kind == EnvKind::LatticeIid) {
        rng::Stream g(rng::split(spec.seed,
                                 edge_hash(s.pos, field.sites[j].pos)));
        c = rng::pareto(g, spec.pareto_alpha, spec.pareto_scale);
      }
      field.set_rate(s.index, j, c);
      field.set_rate(j, s.index, c);
    }
  }
  return field;
}

RateField build_ppp_env(const EnvironmentSpec& spec,
                        const std::function<double(double)>& kernel) {
  spec.validate();
  if (spec.kind != EnvKind::PppKernel)
    throw UsageError("build_ppp_env expects kind ppp-kernel");

  RateField field;
  field.dimension = spec.dimension;
  field.symmetric = true;
  field.sites = sample_ppp_sites(spec);
  const int n = field.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double c = kernel((field.sites[i].pos - field.sites[j].pos).norm());
      if (!(c >= 0.0) || !std::isfinite(c))
        throw UsageError("kernel returned a negative or non-finite rate");
      field.set_rate(i, j, c);
      field.set_rate(j, i, c);
    }
  }
  return field;
}

double mott_rate(double distance, double mark_from, double mark_to) {
  return std::exp(-distance - std::max(mark_to - mark_from, 0.0));
}

RateField build_mott_env(const EnvironmentSpec& spec) {
  spec.validate();
  if (spec.kind != EnvKind::Mott)
    throw UsageError("build_mott_env expects kind mott");

  RateField field;
  field.dimension = spec.dimension;
  field.sites = sample_ppp_sites(spec);
  rng::Stream marks = rng::stream(spec.seed, 1);
  for (Site& s : field.sites) {
    s.mark = rng::uniform(marks, -spec.mark_bound, spec.mark_bound);
    s.has_mark = true;
  }
  const int n = field.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dist = (field.sites[i].pos - field.sites[j].pos).norm();
      field.set_rate(i, j, mott_rate(dist, field.sites[i].mark,
                                     field.sites[j].mark));
    }
  }
  field.symmetric = field.exchange_symmetric();
  return field;
}

C1Report check_c1(const RateField& field, double warn_threshold) {
  C1Report report;
  report.warn_threshold = warn_threshold;
  report.totals.resize(field.sites.size(), 0.0);
  for (const auto& [key, c] : field.rates())
    report.totals[static_cast<std::size_t>(key.first)] += c;
  for (std::size_t x = 0; x < report.totals.size(); ++x) {
    if (!std::isfinite(report.totals[x]))
      throw UsageError("row sum not finite at site " + std::to_string(x));
    if (report.totals[x] > warn_threshold)
      report.flagged.push_back(static_cast<int>(x));
  }
  return report;
}

double check_liggett(const RateField& field) {
  std::vector<double> row(field.sites.size(), 0.0);
  for (const auto& [key, c] : field.rates()) {
    auto [x, y] = key;
    const double rev = field.rate(y, x);
    row[static_cast<std::size_t>(x)] += std::max(c, rev);
    // a pair stored in one direction only still contributes to row y
    if (rev == 0.0) row[static_cast<std::size_t>(y)] += c;
  }
  double sup = 0.0;
  for (double v : row) sup = std::max(sup, v);
  return sup;
}

RateField symmetrize(const RateField& field) {
  RateField out;
  out.sites = field.sites;
  out.dimension = field.dimension;
  out.symmetric = true;
  for (auto [x, y] : field.undirected_pairs()) {
    const double cs = field.rate(x, y) + field.rate(y, x);
    out.set_rate(x, y, cs);
    out.set_rate(y, x, cs);
  }
  return out;
}

void save_field(const RateField& field, std::ostream& out) {
  out << field.size() << ' ' << field.dimension << '\n';
  for (const Site& s : field.sites) {
    out << s.index;
    for (int k = 0; k < s.pos.size(); ++k) out << ' ' << g17(s.pos[k]);
    if (s.has_mark) out << ' ' << g17(s.mark);
    out << '\n';
  }
  for (const auto& [key, c] : field.rates())
    out << key.first << ' ' << key.second << ' ' << g17(c) << '\n';
}

RateField load_field(std::istream& in) {
  RateField field;
  int count = 0;
  if (!(in >> count >> field.dimension) || count < 0)
    throw ConfigError("field table: bad header");
  field.sites.resize(static_cast<std::size_t>(count));
  std::string line;
  std::getline(in, line);
  for (int i = 0; i < count; ++i) {
    if (!std::getline(in, line))
      throw ConfigError("field table: truncated site list");
    std::istringstream ls(line);
    Site& s = field.sites[static_cast<std::size_t>(i)];
    ls >> s.index;
    s.pos.resize(field.dimension);
    for (int k = 0; k < field.dimension; ++k) ls >> s.pos[k];
    if (!ls) throw ConfigError("field table: bad site line " + std::to_string(i));
    if (ls >> s.mark) s.has_mark = true;
    if (s.index != i) throw ConfigError("field table: site indices must be 0..n-1");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int x = 0;
    int y = 0;
    double c = 0.0;
    if (!(ls >> x >> y >> c))
      throw ConfigError("field table: bad rate line '" + line + "'");
    if (x < 0 || x >= count || y < 0 || y >= count)
      throw ConfigError("field table: rate endpoint out of range");
    field.set_rate(x, y, c);
  }
  field.symmetric = field.exchange_symmetric();
  return field;
}

}  // namespace sepsim
