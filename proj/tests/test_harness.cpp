#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "drift/config.hpp"
#include "drift/harness.hpp"

using namespace drift;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ExperimentConfig small_threshold_cfg(const std::string& outdir) {
  ExperimentConfig cfg;
  cfg.learner = LearnerKind::adaptive;
  cfg.horizon = 300;
  cfg.seeds = {1, 2};
  cfg.outdir = outdir;
  cfg.env = EnvKind::drifting_threshold;
  cfg.d = 1;
  cfg.delta = 0.01;
  validate_config(cfg);
  return cfg;
}

struct ParsedTrace {
  std::uint64_t mistakes = 0, queries = 0, rows = 0;
  std::uint64_t tail_mistakes = 0, tail_rows = 0;
  double err_sum = 0.0;
};

ParsedTrace reread_trace(const std::string& path, std::uint64_t tail_from) {
  std::ifstream f(path);
  std::string line;
  REQUIRE(std::getline(f, line));
  REQUIRE(line == "t,mistake,queried,exact_error,cum_mistakes,cum_queries");
  ParsedTrace out;
  while (std::getline(f, line)) {
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    REQUIRE(cols.size() == 6);
    std::uint64_t t = std::stoull(cols[0]);
    int mistake = std::stoi(cols[1]);
    int queried = std::stoi(cols[2]);
    out.rows++;
    out.mistakes += mistake;
    out.queries += queried;
    out.err_sum += std::stod(cols[3]);
    if (t >= tail_from) {
      out.tail_rows++;
      out.tail_mistakes += mistake;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("run_experiment writes deterministic, recomputable artifacts") {
  fs::path dir = fs::path("harness_out") / "det";
  fs::remove_all("harness_out");
  ExperimentConfig cfg = small_threshold_cfg(dir.string());

  ExperimentResult first = run_experiment(cfg);
  REQUIRE(first.trace_paths.size() == 2);
  REQUIRE(first.summary.size() == 2);

  std::vector<std::string> bytes;
  for (const std::string& p : first.trace_paths) bytes.push_back(slurp(p));
  std::string summary_bytes = slurp(first.summary_path);

  // byte-identical on rerun
  ExperimentResult second = run_experiment(cfg);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    CHECK(bytes[i] == slurp(second.trace_paths[i]));
  CHECK(summary_bytes == slurp(second.summary_path));

  // summary rows recompute from the written traces
  std::uint64_t tail = cfg.horizon / 10;
  for (std::size_t i = 0; i < first.summary.size(); ++i) {
    const SummaryRow& s = first.summary[i];
    ParsedTrace tr =
        reread_trace(first.trace_paths[i], cfg.horizon - tail + 1);
    CHECK(tr.rows == cfg.horizon);
    CHECK(tr.mistakes == s.mistakes);
    CHECK(tr.queries == s.queries);
    CHECK(tr.tail_rows == tail);
    CHECK(double(tr.tail_mistakes) / double(tail) ==
          doctest::Approx(s.final_rate).epsilon(1e-12));
    CHECK(tr.err_sum / double(tr.rows) ==
          doctest::Approx(s.mean_error).epsilon(1e-9));
    CHECK(s.config_digest == cfg.digest());
  }

  // summary file layout
  std::istringstream ss(summary_bytes);
  std::string line;
  REQUIRE(std::getline(ss, line));
  CHECK(line == "config_digest,seed,mistakes,queries,final_rate,mean_error");
  int rows = 0;
  while (std::getline(ss, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);

  fs::remove_all("harness_out");
}

TEST_CASE("seed fan-out gives identical results serial and parallel") {
  ExperimentConfig cfg = small_threshold_cfg("");
  cfg.seeds = {1, 2, 3, 4};
  ExperimentResult ser = run_experiment(cfg, false, Exec::serial);
  ExperimentResult par = run_experiment(cfg, false, Exec::openmp);
  REQUIRE(ser.traces.size() == par.traces.size());
  for (std::size_t i = 0; i < ser.traces.size(); ++i) {
    REQUIRE(ser.traces[i].rows.size() == par.traces[i].rows.size());
    for (std::size_t j = 0; j < ser.traces[i].rows.size(); ++j) {
      CHECK(ser.traces[i].rows[j].mistake == par.traces[i].rows[j].mistake);
      CHECK(ser.traces[i].rows[j].exact_error ==
            par.traces[i].rows[j].exact_error);
    }
    CHECK(ser.summary[i].mistakes == par.summary[i].mistakes);
  }
  CHECK(ser.trace_paths.empty());  // no files without write_files
}

TEST_CASE("unwritable output directory fails up front") {
  ExperimentConfig cfg = small_threshold_cfg("/proc/definitely/not/writable");
  CHECK_THROWS_AS((void)run_experiment(cfg), std::runtime_error);
}

TEST_CASE("sweep emits the cross product and matches solo runs") {
  fs::path dir = fs::path("harness_out") / "sweep";
  fs::remove_all("harness_out");
  ExperimentConfig base = small_threshold_cfg(dir.string());
  base.horizon = 200;
  base.seeds = {1, 2, 3};

  std::vector<double> values{0.05, 0.1};
  SweepResult no_plot = sweep(base, "environment.delta", values, false);
  REQUIRE(no_plot.points.size() == 6);
  CHECK(no_plot.plot_path.empty());
  CHECK(fs::exists(no_plot.csv_path));

  // grouped by axis value, seeds in config order
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(no_plot.points[i].value == 0.05);
    CHECK(no_plot.points[i + 3].value == 0.1);
    CHECK(no_plot.points[i].seed == base.seeds[i]);
  }

  // rerun one cell individually and compare
  ExperimentConfig solo = base;
  apply_numeric(solo, "environment.delta", 0.1);
  solo.seeds = {2};
  ExperimentResult ref = run_experiment(solo, false);
  const SweepPoint& cell = no_plot.points[4];
  CHECK(cell.seed == 2);
  CHECK(cell.mistakes == ref.summary[0].mistakes);
  CHECK(cell.mistake_rate ==
        doctest::Approx(double(ref.summary[0].mistakes) / 200.0));

  // plot appears exactly when asked for
  SweepResult with_plot = sweep(base, "environment.delta", values, true);
  REQUIRE(!with_plot.plot_path.empty());
  CHECK(fs::exists(with_plot.plot_path));
  std::string svg = slurp(with_plot.plot_path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("environment.delta") != std::string::npos);

  CHECK_THROWS_AS((void)sweep(base, "environment.delta", {}, false),
                  ValidationError);
  CHECK_THROWS_AS((void)sweep(base, "experiment.learner", values, false),
                  ValidationError);
  fs::remove_all("harness_out");
}

TEST_CASE("oracle dispatcher runs suites and rejects unknown names") {
  std::ostringstream sink;
  CHECK(oracle_check("window", sink));
  CHECK(sink.str().find("mismatches 0") != std::string::npos);
  CHECK_THROWS_AS((void)oracle_check("nope", sink), std::invalid_argument);
}
