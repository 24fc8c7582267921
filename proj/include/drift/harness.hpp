#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "drift/config.hpp"
#include "drift/montecarlo.hpp"
#include "drift/trace.hpp"

namespace drift {

struct SummaryRow {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::uint64_t mistakes = 0;
  std::uint64_t queries = 0;
  double final_rate = 0.0;  // mistake rate over the last max(1, T/10) rounds
  double mean_error = 0.0;

  void write_csv_row(std::ostream& os) const;
};

struct ExperimentResult {
  std::vector<RunTrace> traces;  // one per seed, in config order
  std::vector<SummaryRow> summary;
  std::vector<std::string> trace_paths;  // empty when files are not written
  std::string summary_path;
};

// config outdir if set, else $DRIFT_OUTDIR, else "."
std::string resolve_outdir(const ExperimentConfig& cfg);

RunTrace run_single(const ExperimentConfig& cfg, std::uint64_t seed);

SummaryRow summarize(const ExperimentConfig& cfg, std::uint64_t seed,
                     const RunTrace& tr);

// Runs every seed, then writes trace_<digest>_seed<N>.csv per seed and
// summary_<digest>.csv. Output paths are probed before any computation.
// Seeds may fan out across OpenMP threads; results are stored by seed index
// so the output order never depends on scheduling.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                bool write_files = true,
                                Exec exec = Exec::openmp);

struct SweepPoint {
  double value = 0.0;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::uint64_t mistakes = 0;
  std::uint64_t queries = 0;
  double mistake_rate = 0.0;
  double final_rate = 0.0;
  double mean_error = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // axis-value major, then seed order
  std::string csv_path;
  std::string plot_path;  // empty unless the plot was requested
};

// Cross product of axis values and the template's seeds. Emits one
// long-format CSV; with plot=true also an SVG of mean mistake rate per axis
// value with min/max whiskers.
SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<double>& values, bool plot,
                  bool write_files = true, Exec exec = Exec::openmp);

// Reference cross-checks (exhaustive window selection, hinge grid search,
// Monte Carlo band probabilities, analytic disagreement coefficient).
// Prints observed vs. expected per comparison; returns false on any miss.
// suite is one of: window, hinge, geometry, theta, all.
bool oracle_check(const std::string& suite, std::ostream& os);

}  // namespace drift
