#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "drift/active.hpp"
#include "drift/config.hpp"
#include "drift/halfspace_drift.hpp"
#include "drift/harness.hpp"

using namespace drift;

namespace {

ExperimentConfig load_with_seed(const std::string& path, std::int64_t seed) {
  ExperimentConfig cfg = load_config_file(path);
  if (seed >= 0) {
    cfg.seeds = {static_cast<std::uint64_t>(seed)};
    validate_config(cfg);
  }
  return cfg;
}

int cmd_run(const std::string& path, std::int64_t seed) {
  ExperimentConfig cfg = load_with_seed(path, seed);
  ExperimentResult res = run_experiment(cfg);
  std::cout << "config digest " << cfg.digest() << ", " << cfg.seeds.size()
            << " seed(s), horizon " << cfg.horizon << "\n";
  std::cout << "config_digest,seed,mistakes,queries,final_rate,mean_error\n";
  for (const SummaryRow& row : res.summary) row.write_csv_row(std::cout);
  for (const std::string& p : res.trace_paths)
    std::cout << "wrote " << p << "\n";
  std::cout << "wrote " << res.summary_path << "\n";
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& axis,
              const std::string& values_csv, bool plot, std::int64_t seed) {
  ExperimentConfig cfg = load_with_seed(path, seed);
  std::vector<double> values;
  std::stringstream ss(values_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    values.push_back(std::stod(tok));
  }
  SweepResult res = sweep(cfg, axis, values, plot);
  std::cout << "swept " << axis << " over " << values.size() << " value(s) x "
            << cfg.seeds.size() << " seed(s)\n";
  std::cout << "wrote " << res.csv_path << "\n";
  if (!res.plot_path.empty()) std::cout << "wrote " << res.plot_path << "\n";
  return 0;
}

int cmd_oracle(const std::string& suite) {
  return oracle_check(suite, std::cout) ? 0 : 1;
}

int cmd_schedule(const std::string& path) {
  ExperimentConfig cfg = load_config_file(path);
  std::cout << "config digest " << cfg.digest() << "\n";

  std::cout << "\n# halfspace pipeline schedule\n";
  try {
    AblSchedule sched = AblSchedule::derive(cfg.abl_config());
    std::cout << sched.dump();
  } catch (const std::exception& e) {
    std::cout << "not derivable with this config: " << e.what() << "\n";
  }

  std::cout << "\n# active batch layout\n";
  try {
    ActiveConfig a;
    a.d = cfg.d;
    a.Delta = cfg.delta;
    a.c1 = cfg.c1;
    std::uint64_t M = a.batch_length();
    int K = 0;
    while ((2ull << (K + 1)) <= M) ++K;
    std::cout << "M=" << M << "\nepochs=" << (K + 1) << "\n";
    for (int k = 0; k <= K; ++k)
      std::cout << "tk_" << k << "=" << format_double(threshold_tk(k, cfg.d, cfg.delta))
                << "\n";
  } catch (const std::exception& e) {
    std::cout << "not derivable with this config: " << e.what() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"drifting-concept learning experiments"};
  app.require_subcommand(1);

  std::string config_path, axis, values_csv, suite;
  std::int64_t seed = -1;
  bool plot = false;

  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--seed", seed, "override the config's seed list");

  CLI::App* sw = app.add_subcommand("sweep", "sweep one numeric config key");
  sw->add_option("config", config_path, "template config file")->required();
  sw->add_option("--axis", axis, "dotted key, e.g. environment.delta")
      ->required();
  sw->add_option("--values", values_csv, "comma-separated numbers")
      ->required();
  sw->add_flag("--plot", plot, "also emit an SVG plot");
  sw->add_option("--seed", seed, "override the config's seed list");

  CLI::App* orc = app.add_subcommand("oracle", "run reference cross-checks");
  orc->add_option("suite", suite,
                  "one of: window, hinge, geometry, theta, all")
      ->required();

  CLI::App* sch =
      app.add_subcommand("schedule", "print derived schedule quantities");
  sch->add_option("config", config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) return cmd_run(config_path, seed);
    if (app.got_subcommand(sw))
      return cmd_sweep(config_path, axis, values_csv, plot, seed);
    if (app.got_subcommand(orc)) return cmd_oracle(suite);
    if (app.got_subcommand(sch)) return cmd_schedule(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
