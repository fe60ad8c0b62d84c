#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "sepsim/common.hpp"
#include "sepsim/config.hpp"
#include "sepsim/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"graphical-construction simulator for exclusion processes"};

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  int threads = 1;

  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory (default: config value)");
  auto* seed_opt =
      app.add_option("--seed", seed_override, "master seed override");
  app.add_option("--threads", threads, "worker threads for replicas");

  try {
    app.parse(argc, argv);
    seed_given = seed_opt->count() > 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    sepsim::RunConfig cfg = sepsim::parse_config(config_path);
    if (seed_given) {
      cfg.seed = seed_override;
      cfg.seed_set = true;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.threads = threads;
    const int code = sepsim::run(cfg);
    if (code != 0)
      std::cerr << "sepsim: a check failed; see manifest.json\n";
    return code;
  } catch (const sepsim::ConfigError& e) {
    std::cerr << "sepsim: " << e.what() << '\n';
    return 2;
  } catch (const sepsim::UsageError& e) {
    std::cerr << "sepsim: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sepsim: " << e.what() << '\n';
    return 1;
  }
}
