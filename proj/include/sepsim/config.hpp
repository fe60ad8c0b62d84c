#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sepsim/environment.hpp"

namespace sepsim {

// One parsed run: a command plus the sections of the key-value config.
// See README for the file format.
struct RunConfig {
  std::string command;

  EnvironmentSpec env;
  std::string field_file;       // when set, load the rate table instead
  std::string kernel = "exp";   // ppp-kernel shape: exp | const | zero
  double kernel_amp = 1.0;

  std::string process = "ssep";  // ssep | sep
  double horizon = 1.0;
  double t = -1.0;               // observation time; -1 = horizon
  double t0 = 0.0;               // sep window width; 0 = take the scan's pick
  std::int64_t replicas = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t component_cap = 10'000;
  std::string sigma_spec = "step";
  int site = 0;
  std::vector<std::pair<int, double>> f_entries;  // inline site function
  double dynkin_h = 0.0;                          // 0 = event-exact

  std::vector<double> scan_grid{0.125, 0.25, 0.5, 1.0, 2.0};
  int scan_threshold = 0;  // 0 = window size / 4
  double scan_target = 1e-3;

  double tolerance = 1e-12;
  double significance = 1e-3;

  std::string out_dir = ".";
  int threads = 1;

  // raw key -> (value, line), echoed into the manifest and used for
  // line-precise validation messages
  std::map<std::string, std::pair<std::string, int>> raw;
  std::string source_path;

  // Throws ConfigError with "path:line:" prefixes.
  void validate() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& path);

}  // namespace sepsim
