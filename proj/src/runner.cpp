#include "sepsim/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>

#include "sepsim/clocks.hpp"
#include "sepsim/common.hpp"
#include "sepsim/duality.hpp"
#include "sepsim/exact_oracle.hpp"
#include "sepsim/parallel.hpp"
#include "sepsim/percolation.hpp"
#include "sepsim/rng.hpp"
#include "sepsim/sep_harris.hpp"
#include "sepsim/stats.hpp"
#include "sepsim/stirring.hpp"

namespace sepsim {

namespace {

using nlohmann::json;

std::function<double(double)> make_kernel(const RunConfig& cfg) {
  const double amp = cfg.kernel_amp;
  if (cfg.kernel == "exp") return [amp](double r) { return amp * std::exp(-r); };
  if (cfg.kernel == "const") return [amp](double) { return amp; };
  if (cfg.kernel == "zero") return [](double) { return 0.0; };
  throw ConfigError("unknown kernel '" + cfg.kernel + "'");
}

Configuration make_sigma(const std::string& spec, int n) {
  Configuration sigma(n);
  if (spec == "empty") return sigma;
  if (spec == "full") {
    std::fill(sigma.occ.begin(), sigma.occ.end(), 1);
    return sigma;
  }
  if (spec == "step") {
    for (int i = 0; i < n / 2 + n % 2; ++i) sigma.occ[static_cast<std::size_t>(i)] = 1;
    return sigma;
  }
  if (spec == "alternating") {
    for (int i = 0; i < n; i += 2) sigma.occ[static_cast<std::size_t>(i)] = 1;
    return sigma;
  }
  if (spec.rfind("bits:", 0) == 0) {
    const std::string bits = spec.substr(5);
    if (static_cast<int>(bits.size()) != n)
      throw ConfigError("sigma bit string length does not match the window");
    for (int i = 0; i < n; ++i) {
      if (bits[static_cast<std::size_t>(i)] != '0' &&
          bits[static_cast<std::size_t>(i)] != '1')
        throw ConfigError("sigma bit string must be 0/1");
      sigma.occ[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(bits[static_cast<std::size_t>(i)] - '0');
    }
    return sigma;
  }
  throw ConfigError("unknown sigma spec '" + spec + "'");
}

Eigen::VectorXd make_f(const RunConfig& cfg, int n) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  if (cfg.f_entries.empty()) {
    f[std::min(std::max(cfg.site, 0), n - 1)] = 1.0;
    return f;
  }
  for (auto [site, value] : cfg.f_entries) {
    if (site < 0 || site >= n)
      throw ConfigError("site function entry out of the window");
    f[site] = value;
  }
  return f;
}

class Report {
public:
  Report(const RunConfig& cfg)
      : cfg_(cfg), dir_(cfg.out_dir), start_(std::chrono::steady_clock::now()) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream open_csv(const std::string& name, const std::string& header) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + (dir_ / name).string());
    out << header << '\n';
    outputs_.push_back(name);
    return out;
  }

  void set(const std::string& key, json value) { summary_[key] = std::move(value); }

  // exit code: 0 when every recorded check passed
  int finish(bool pass) {
    json manifest;
    manifest["command"] = cfg_.command;
    manifest["seed"] = cfg_.seed;
    manifest["seed_derivation"] =
        "replica r uses split(seed, r); nested per-edge streams split again";
    json echo;
    for (const auto& [key, value] : cfg_.raw) echo[key] = value.first;
    manifest["config"] = echo;
    manifest["version"] = "0.1.0";
    manifest["threads"] = cfg_.threads;
    manifest["outputs"] = outputs_;
    manifest["summary"] = summary_;
    manifest["pass"] = pass;
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
    return pass ? 0 : 1;
  }

private:
  const RunConfig& cfg_;
  std::filesystem::path dir_;
  std::vector<std::string> outputs_;
  json summary_;
  std::chrono::steady_clock::time_point start_;
};

// Per-site occupancy counts at time t over seeded replicas, merged over
// fixed blocks so the result is independent of the thread count.
std::vector<std::int64_t> occupancy_counts(const RateField& field,
                                           const Configuration& sigma,
                                           double t, bool use_sep, double t0,
                                           std::size_t component_cap,
                                           const RunConfig& cfg) {
  const int n = field.size();
  const auto blocks = replica_block_count(cfg.replicas);
  std::vector<std::vector<std::int64_t>> per_block(
      blocks, std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
  std::mutex error_mutex;
  std::exception_ptr error;

  for_each_replica_block(
      cfg.replicas, cfg.threads,
      [&](std::int64_t first, std::int64_t last, std::size_t block) {
        try {
          for (std::int64_t rep = first; rep < last; ++rep) {
            const EventLog log = sample_event_log(
                field, t, rng::split(cfg.seed, static_cast<std::uint64_t>(rep)));
            const Configuration eta =
                use_sep ? evolve_sep(log, sigma, t, t0, component_cap)
                        : evolve_ssep(log, sigma, t);
            for (int x = 0; x < n; ++x)
              per_block[block][static_cast<std::size_t>(x)] +=
                  eta.occ[static_cast<std::size_t>(x)];
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
  if (error) std::rethrow_exception(error);

  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
  for (const auto& block : per_block)
    for (int x = 0; x < n; ++x)
      counts[static_cast<std::size_t>(x)] += block[static_cast<std::size_t>(x)];
  return counts;
}

double pick_t0(const RateField& field, const RunConfig& cfg, Report& report) {
  if (cfg.t0 > 0.0) return cfg.t0;
  const RateField sym = field.symmetric ? field : symmetrize(field);
  const int threshold =
      cfg.scan_threshold > 0 ? cfg.scan_threshold : std::max(1, field.size() / 4);
  const ScanResult scan =
      scan_t0(sym, cfg.scan_grid, threshold, 2000,
              rng::split(cfg.seed, 0xA110C8ULL), 0, cfg.scan_target);
  if (!scan.recommended_t0)
    throw ConfigError("no subcritical t0 on the scan grid; set run.t0");
  report.set("t0_from_scan", *scan.recommended_t0);
  return *scan.recommended_t0;
}

int cmd_env(const RunConfig& cfg) {
  Report report(cfg);
  const RateField field = build_environment(cfg);
  {
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "field.txt",
                      std::ios::binary);
    save_field(field, out);
  }
  const C1Report c1 = check_c1(field);
  auto csv = report.open_csv("diagnostics.csv", "site,c_x");
  for (std::size_t x = 0; x < c1.totals.size(); ++x)
    csv << x << ',' << g17(c1.totals[x]) << '\n';
  report.set("sites", field.size());
  report.set("symmetric", field.symmetric);
  report.set("liggett", check_liggett(field));
  report.set("max_c_x",
             *std::max_element(c1.totals.begin(), c1.totals.end()));
  return report.finish(true);
}

int cmd_simulate(const RunConfig& cfg) {
  Report report(cfg);
  const RateField field = build_environment(cfg);
  const bool use_sep = cfg.process == "sep";
  if (!use_sep && !field.symmetric)
    throw ConfigError("process ssep needs a symmetric environment");
  const double t = cfg.t < 0.0 ? cfg.horizon : cfg.t;
  const double t0 = use_sep ? pick_t0(field, cfg, report) : 0.0;
  const Configuration sigma = make_sigma(cfg.sigma_spec, field.size());

  const auto counts =
      occupancy_counts(field, sigma, t, use_sep, t0, cfg.component_cap, cfg);

  auto csv = report.open_csv(
      "occupancy.csv", "site,estimate,stderr,replicas,first_replica,last_replica");
  for (int x = 0; x < field.size(); ++x) {
    const double p = static_cast<double>(counts[static_cast<std::size_t>(x)]) /
                     static_cast<double>(cfg.replicas);
    const double se =
        std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.replicas));
    csv << x << ',' << g17(p) << ',' << g17(se) << ',' << cfg.replicas << ",0,"
        << (cfg.replicas - 1) << '\n';
  }
  report.set("t", t);
  report.set("process", cfg.process);
  if (use_sep) report.set("t0", t0);
  return report.finish(true);
}

int cmd_oracle_compare(const RunConfig& cfg) {
  Report report(cfg);
  const RateField field = build_environment(cfg);
  if (field.size() > 12)
    throw ConfigError("oracle-compare is limited to 12 sites");
  const bool use_sep = cfg.process == "sep";
  if (!use_sep && !field.symmetric)
    throw ConfigError("process ssep needs a symmetric environment");
  const double t = cfg.t < 0.0 ? cfg.horizon : cfg.t;
  const double t0 = use_sep ? (cfg.t0 > 0.0 ? cfg.t0 : t) : 0.0;
  const Configuration sigma = make_sigma(cfg.sigma_spec, field.size());

  const GeneratorMatrix L =
      use_sep ? build_generator_sep(field) : build_generator_stirring(field);
  DistributionVector mu0 = DistributionVector::Zero(L.states());
  mu0[state_of(sigma)] = 1.0;
  const DistributionVector law = evolve_distribution(L, mu0, t, cfg.tolerance);

  const auto n_states = static_cast<std::size_t>(L.states());
  const auto blocks = replica_block_count(cfg.replicas);
  std::vector<std::vector<std::int64_t>> per_block(
      blocks, std::vector<std::int64_t>(n_states, 0));
  std::mutex error_mutex;
  std::exception_ptr error;
  for_each_replica_block(
      cfg.replicas, cfg.threads,
      [&](std::int64_t first, std::int64_t last, std::size_t block) {
        try {
          for (std::int64_t rep = first; rep < last; ++rep) {
            const EventLog log = sample_event_log(
                field, t, rng::split(cfg.seed, static_cast<std::uint64_t>(rep)));
            const Configuration eta =
                use_sep ? evolve_sep(log, sigma, t, t0, cfg.component_cap)
                        : evolve_ssep(log, sigma, t);
            ++per_block[block][state_of(eta)];
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
  if (error) std::rethrow_exception(error);

  std::vector<std::int64_t> counts(n_states, 0);
  for (const auto& block : per_block)
    for (std::size_t s = 0; s < n_states; ++s) counts[s] += block[s];

  auto csv = report.open_csv(
      "law.csv", "state,count,empirical,exact,first_replica,last_replica");
  for (std::size_t s = 0; s < n_states; ++s) {
    csv << s << ',' << counts[s] << ','
        << g17(static_cast<double>(counts[s]) /
               static_cast<double>(cfg.replicas))
        << ',' << g17(law[static_cast<Eigen::Index>(s)]) << ",0,"
        << (cfg.replicas - 1) << '\n';
  }

  const double tv = total_variation(counts, law);
  const ChiSquareResult chi = chi_square_gof(counts, law);
  report.set("tv", tv);
  report.set("chi_square", chi.statistic);
  report.set("chi_square_df", chi.df);
  report.set("chi_square_p", chi.p_value);
  report.set("t", t);
  const bool pass = tv < 0.01 && chi.p_value > cfg.significance;
  return report.finish(pass);
}

int cmd_duality(const RunConfig& cfg) {
  Report report(cfg);
  const RateField raw = build_environment(cfg);
  const RateField field = raw.symmetric ? raw : symmetrize(raw);
  if (!raw.symmetric) report.set("symmetrized_input", true);
  const double t = cfg.t < 0.0 ? cfg.horizon : cfg.t;
  const Configuration sigma = make_sigma(cfg.sigma_spec, field.size());
  const Eigen::VectorXd f = make_f(cfg, field.size());

  bool pass = true;

  if (field.size() <= 20) {
    const auto [lhs, rhs] = check_duality_identity(field, f, sigma);
    const double err = std::abs(lhs - rhs);
    auto csv = report.open_csv("identity.csv", "lhs,rhs,abs_err");
    csv << g17(lhs) << ',' << g17(rhs) << ',' << g17(err) << '\n';
    if (err > cfg.tolerance * std::max(1.0, std::abs(lhs))) pass = false;
  }

  const McEstimate self =
      self_duality_mc(field, sigma, cfg.site, t, cfg.replicas,
                      rng::split(cfg.seed, 1));
  const double z_self = self.stderr_ > 0.0
                            ? (self.estimate - self.oracle) / self.stderr_
                            : 0.0;
  if (self.stderr_ == 0.0 && self.estimate != self.oracle) pass = false;
  {
    auto csv = report.open_csv(
        "self_duality.csv",
        "estimate,stderr,oracle,z,replicas,first_replica,last_replica");
    csv << g17(self.estimate) << ',' << g17(self.stderr_) << ','
        << g17(self.oracle) << ',' << g17(z_self) << ',' << cfg.replicas
        << ",0," << (cfg.replicas - 1) << '\n';
  }
  if (std::abs(z_self) > 4.0) pass = false;

  // the gate always uses the event-exact integral; a positive h is
  // reported alongside it so quadrature convergence can be inspected
  const DynkinResult exact = dynkin_check(field, sigma, f, t, cfg.replicas,
                                          0.0, rng::split(cfg.seed, 2));
  const double z_dynkin =
      exact.stderr_ > 0.0 ? exact.mean / exact.stderr_ : 0.0;
  {
    auto csv = report.open_csv(
        "dynkin.csv", "h,mean,stderr,z,replicas,first_replica,last_replica");
    csv << "0," << g17(exact.mean) << ',' << g17(exact.stderr_) << ','
        << g17(z_dynkin) << ',' << cfg.replicas << ",0," << (cfg.replicas - 1)
        << '\n';
    if (cfg.dynkin_h > 0.0) {
      const DynkinResult grid = dynkin_check(field, sigma, f, t, cfg.replicas,
                                             cfg.dynkin_h, rng::split(cfg.seed, 2));
      csv << g17(cfg.dynkin_h) << ',' << g17(grid.mean) << ','
          << g17(grid.stderr_) << ','
          << g17(grid.stderr_ > 0.0 ? grid.mean / grid.stderr_ : 0.0) << ','
          << cfg.replicas << ",0," << (cfg.replicas - 1) << '\n';
    }
  }
  if (exact.stderr_ > 0.0 && std::abs(z_dynkin) > 3.0) pass = false;
  if (exact.stderr_ == 0.0 && exact.mean != 0.0) pass = false;

  report.set("self_duality_z", z_self);
  report.set("dynkin_z", z_dynkin);
  return report.finish(pass);
}

int cmd_percolation_scan(const RunConfig& cfg) {
  Report report(cfg);
  const RateField raw = build_environment(cfg);
  const RateField field = raw.symmetric ? raw : symmetrize(raw);
  const int threshold = cfg.scan_threshold > 0
                            ? cfg.scan_threshold
                            : std::max(1, field.size() / 4);
  if (cfg.scan_threshold <= 0)
    report.set("threshold_note",
               "size threshold defaulted to window/4; exceedance is a "
               "finite-window proxy and feels the boundary");

  const ScanResult scan = scan_t0(field, cfg.scan_grid, threshold,
                                  cfg.replicas, cfg.seed, 0, cfg.scan_target);
  auto csv =
      report.open_csv("scan.csv", "t0,replicas,mean_cluster,p_exceed,stderr");
  for (const ScanRow& row : scan.rows)
    csv << g17(row.t0) << ',' << row.replicas << ',' << g17(row.mean_cluster)
        << ',' << g17(row.p_exceed) << ',' << g17(row.stderr_exceed) << '\n';
  report.set("size_threshold", threshold);
  if (scan.recommended_t0) {
    report.set("recommended_t0", *scan.recommended_t0);
    return report.finish(true);
  }
  report.set("recommended_t0", nullptr);
  report.set("failure", "NoSubcriticalT0: no grid point met the target");
  return report.finish(false);
}

int cmd_generator_check(const RunConfig& cfg) {
  Report report(cfg);
  const std::int64_t rounds = std::max<std::int64_t>(cfg.replicas, 1);
  auto csv = report.open_csv("generator_check.csv",
                             "round,sites,max_abs_entry_diff,identity_abs_err");
  bool pass = true;
  for (std::int64_t round = 0; round < rounds; ++round) {
    rng::Stream g(rng::split(cfg.seed, static_cast<std::uint64_t>(round)));
    const int n = 3 + static_cast<int>(g() % 4);  // 3..6 sites
    RateField field;
    field.symmetric = true;
    field.sites.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      field.sites[static_cast<std::size_t>(i)].index = i;
      field.sites[static_cast<std::size_t>(i)].pos = Eigen::VectorXd::Zero(1);
      field.sites[static_cast<std::size_t>(i)].pos[0] = i;
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (rng::uniform01(g) < 0.2) continue;  // keep some pairs silent
        const double c = rng::uniform(g, 0.05, 2.0);
        field.set_rate(i, j, c);
        field.set_rate(j, i, c);
      }

    const GeneratorMatrix sep = build_generator_sep(field);
    const GeneratorMatrix stir = build_generator_stirring(field);
    double max_diff = 0.0;
    for (StateIndex s = 0; s < sep.states(); ++s)
      for (StateIndex u = 0; u < sep.states(); ++u)
        max_diff = std::max(max_diff, std::abs(sep.entry(s, u) - stir.entry(s, u)));

    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = rng::uniform(g, -1.0, 1.0);
    Configuration eta(n);
    for (int i = 0; i < n; ++i)
      eta.occ[static_cast<std::size_t>(i)] = rng::uniform01(g) < 0.5 ? 1 : 0;
    const auto [lhs, rhs] = check_duality_identity(field, f, eta);
    const double err = std::abs(lhs - rhs);

    csv << round << ',' << n << ',' << g17(max_diff) << ',' << g17(err) << '\n';
    if (max_diff != 0.0) pass = false;
    if (err > cfg.tolerance * std::max(1.0, std::abs(lhs))) pass = false;
  }
  report.set("rounds", rounds);
  return report.finish(pass);
}

}  // namespace

RateField build_environment(const RunConfig& cfg) {
  if (!cfg.field_file.empty()) {
    std::ifstream in(cfg.field_file);
    if (!in) throw ConfigError(cfg.field_file + ": cannot open field table");
    return load_field(in);
  }
  switch (cfg.env.kind) {
    case EnvKind::LatticeConstant:
    case EnvKind::LatticeIid:
      return build_lattice_env(cfg.env);
    case EnvKind::PppKernel:
      return build_ppp_env(cfg.env, make_kernel(cfg));
    case EnvKind::Mott:
      return build_mott_env(cfg.env);
  }
  throw ConfigError("unreachable environment kind");
}

int run(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.command == "env") return cmd_env(cfg);
  if (cfg.command == "simulate") return cmd_simulate(cfg);
  if (cfg.command == "oracle-compare") return cmd_oracle_compare(cfg);
  if (cfg.command == "duality") return cmd_duality(cfg);
  if (cfg.command == "percolation-scan") return cmd_percolation_scan(cfg);
  if (cfg.command == "generator-check") return cmd_generator_check(cfg);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

}  // namespace sepsim
