#include "sepsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sepsim/common.hpp"

namespace sepsim {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& message) {
  throw ConfigError(path + ":" + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& path, int line, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) fail(path, line, "bad number '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    fail(path, line, "bad number '" + v + "'");
  }
}

long long parse_int(const std::string& path, int line, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) fail(path, line, "bad integer '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    fail(path, line, "bad integer '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& path, int line,
                        const std::string& v) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) fail(path, line, "bad seed '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    fail(path, line, "bad seed '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& path, int line,
                               const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(path, line, item));
  }
  if (out.empty()) fail(path, line, "empty list");
  return out;
}

std::vector<std::pair<int, double>> parse_site_values(const std::string& path,
                                                      int line,
                                                      const std::string& v) {
  std::vector<std::pair<int, double>> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      fail(path, line, "site function entries look like site:value");
    out.push_back({static_cast<int>(parse_int(path, line, item.substr(0, colon))),
                   parse_double(path, line, item.substr(colon + 1))});
  }
  if (out.empty()) fail(path, line, "empty site function");
  return out;
}

EnvKind parse_kind(const std::string& path, int line, const std::string& v) {
  if (v == "lattice-constant") return EnvKind::LatticeConstant;
  if (v == "lattice-iid") return EnvKind::LatticeIid;
  if (v == "ppp-kernel") return EnvKind::PppKernel;
  if (v == "mott") return EnvKind::Mott;
  fail(path, line, "unknown environment kind '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& path) {
  RunConfig cfg;
  cfg.source_path = path;

  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(path, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(path, lineno, "expected key = value");
    const std::string key =
        (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) fail(path, lineno, "empty value for '" + key + "'");
    if (cfg.raw.count(key)) fail(path, lineno, "duplicate key '" + key + "'");
    cfg.raw[key] = {value, lineno};

    if (key == "command") cfg.command = value;
    else if (key == "env.kind") cfg.env.kind = parse_kind(path, lineno, value);
    else if (key == "env.dimension")
      cfg.env.dimension = static_cast<int>(parse_int(path, lineno, value));
    else if (key == "env.radius")
      cfg.env.radius = static_cast<int>(parse_int(path, lineno, value));
    else if (key == "env.box") cfg.env.box_side = parse_double(path, lineno, value);
    else if (key == "env.rate") cfg.env.rate = parse_double(path, lineno, value);
    else if (key == "env.alpha")
      cfg.env.pareto_alpha = parse_double(path, lineno, value);
    else if (key == "env.scale")
      cfg.env.pareto_scale = parse_double(path, lineno, value);
    else if (key == "env.intensity")
      cfg.env.intensity = parse_double(path, lineno, value);
    else if (key == "env.mark_bound")
      cfg.env.mark_bound = parse_double(path, lineno, value);
    else if (key == "env.seed") cfg.env.seed = parse_u64(path, lineno, value);
    else if (key == "env.field_file") cfg.field_file = value;
    else if (key == "env.kernel") cfg.kernel = value;
    else if (key == "env.kernel_amp")
      cfg.kernel_amp = parse_double(path, lineno, value);
    else if (key == "run.process") cfg.process = value;
    else if (key == "run.horizon")
      cfg.horizon = parse_double(path, lineno, value);
    else if (key == "run.t") cfg.t = parse_double(path, lineno, value);
    else if (key == "run.t0") cfg.t0 = parse_double(path, lineno, value);
    else if (key == "run.replicas")
      cfg.replicas = parse_int(path, lineno, value);
    else if (key == "run.seed") {
      cfg.seed = parse_u64(path, lineno, value);
      cfg.seed_set = true;
    } else if (key == "run.component_cap")
      cfg.component_cap =
          static_cast<std::size_t>(parse_int(path, lineno, value));
    else if (key == "run.sigma") cfg.sigma_spec = value;
    else if (key == "run.site")
      cfg.site = static_cast<int>(parse_int(path, lineno, value));
    else if (key == "run.f")
      cfg.f_entries = parse_site_values(path, lineno, value);
    else if (key == "run.h") cfg.dynkin_h = parse_double(path, lineno, value);
    else if (key == "scan.grid") cfg.scan_grid = parse_list(path, lineno, value);
    else if (key == "scan.threshold")
      cfg.scan_threshold = static_cast<int>(parse_int(path, lineno, value));
    else if (key == "scan.target")
      cfg.scan_target = parse_double(path, lineno, value);
    else if (key == "check.tolerance")
      cfg.tolerance = parse_double(path, lineno, value);
    else if (key == "check.significance")
      cfg.significance = parse_double(path, lineno, value);
    else if (key == "output.dir") cfg.out_dir = value;
    else fail(path, lineno, "unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

void RunConfig::validate() const {
  auto where = [&](const std::string& key) {
    auto it = raw.find(key);
    const int line = it == raw.end() ? 0 : it->second.second;
    return source_path + ":" + std::to_string(line) + ": ";
  };

  static const std::vector<std::string> commands = {
      "env",     "simulate",         "oracle-compare",
      "duality", "percolation-scan", "generator-check"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw ConfigError(where("command") + "unknown command '" + command + "'");

  if (field_file.empty()) env.validate();

  if (!seed_set)
    throw ConfigError(source_path + ":0: run.seed is mandatory (no wall-clock default)");
  if (process != "ssep" && process != "sep")
    throw ConfigError(where("run.process") + "process must be ssep or sep");
  if (!(horizon > 0.0))
    throw ConfigError(where("run.horizon") + "horizon must be > 0");
  if (t >= 0.0 && t > horizon)
    throw ConfigError(where("run.t") + "t must lie in [0, horizon]");
  if (command != "env" && command != "generator-check" && replicas < 1)
    throw ConfigError(where("run.replicas") + "replicas must be >= 1");
  if (t0 < 0.0) throw ConfigError(where("run.t0") + "t0 must be >= 0");
  if (dynkin_h < 0.0) throw ConfigError(where("run.h") + "h must be >= 0");
  if (!(scan_target > 0.0))
    throw ConfigError(where("scan.target") + "target must be > 0");
  if (!(tolerance > 0.0))
    throw ConfigError(where("check.tolerance") + "tolerance must be > 0");
  if (!(significance > 0.0 && significance < 1.0))
    throw ConfigError(where("check.significance") +
                      "significance must be in (0, 1)");
  if (threads < 1)
    throw ConfigError(source_path + ":0: threads must be >= 1");
}

}  // namespace sepsim
