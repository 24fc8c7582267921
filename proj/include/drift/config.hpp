#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "drift/environment.hpp"
#include "drift/halfspace_drift.hpp"
#include "drift/schedule.hpp"
#include "drift/window_erm.hpp"

namespace drift {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LearnerKind { adaptive, nonadaptive, halfspaces, active };

// Full experiment description. Every field has a default, so a minimal
// config file only names what it changes; serialization always writes the
// complete materialized form in a fixed order.
struct ExperimentConfig {
  // [experiment]
  LearnerKind learner = LearnerKind::adaptive;
  std::uint64_t horizon = 10000;
  std::vector<std::uint64_t> seeds = {1};
  std::string outdir;  // empty: resolve from DRIFT_OUTDIR, then "."

  // [environment]
  EnvKind env = EnvKind::rotating_halfspace;
  int d = 2;
  ScheduleKind schedule = ScheduleKind::constant;
  double delta = 0.001;
  double decay_c = 1.0;
  double decay_p = 1.0;
  std::uint64_t jump_period = 1000;
  WalkSupport walk_support = WalkSupport::pm_one;

  // [adaptive]
  AdaptiveConfig adaptive;

  // [abl] (d and drift rate come from the environment section)
  double abl_delta = 0.05;  // the pipeline's own confidence parameter
  double kappa = 0.1;
  double c5 = 1.0;
  double c7 = 1.0;
  double c8 = -1.0;  // negative: derive the default from kappa
  double c9 = -1.0;
  double c10 = -1.0;
  std::uint64_t m0 = 2000;
  bool theoretical_m0 = false;
  double alpha_min = 1.0 / 64.0;
  std::uint64_t solver_budget = 20000;

  // [active]
  double c1 = 1.0;
  std::uint64_t grid = 1024;

  DriftSchedule drift_schedule() const;
  AblConfig abl_config() const;  // learner=halfspaces view of the fields

  // complete key-value form, fixed section and key order
  std::string canonical_text() const;
  // FNV-1a 64 of the canonical text, 16 lowercase hex digits
  std::string digest() const;
};

// Parses the sectioned key = value format. Unknown sections or keys and
// syntax problems raise ParseError with the line number; well-formed but
// out-of-range values raise ValidationError naming the key.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config_file(const std::string& path);

// Sets one numeric field addressed as "section.key" (the sweep axis).
// Throws ValidationError if the key is unknown or not numeric. Does not
// revalidate; call validate_config afterwards.
void apply_numeric(ExperimentConfig& cfg, const std::string& dotted,
                   double value);

// Range and cross-field checks; throws ValidationError naming the key.
void validate_config(const ExperimentConfig& cfg);

const char* learner_name(LearnerKind k);
const char* env_name(EnvKind k);
const char* schedule_name(ScheduleKind k);

}  // namespace drift
