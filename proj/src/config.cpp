#include "drift/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "drift/active.hpp"
#include "drift/trace.hpp"

namespace drift {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw ParseError("config line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void bad_value(const std::string& section, const std::string& key,
                            const std::string& what) {
  throw ValidationError("config key \"" + key + "\" in [" + section + "]: " +
                        what);
}

double parse_double(int line, const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    parse_fail(line, "key \"" + key + "\": not a number: '" + v + "'");
  return out;
}

std::uint64_t parse_u64(int line, const std::string& key,
                        const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    parse_fail(line, "key \"" + key + "\": not a nonnegative integer: '" + v +
                         "'");
  return out;
}

int parse_int(int line, const std::string& key, const std::string& v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    parse_fail(line, "key \"" + key + "\": not an integer: '" + v + "'");
  return out;
}

bool parse_bool(int line, const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  parse_fail(line, "key \"" + key + "\": expected true or false, got '" + v +
                       "'");
}

// comma-separated values, each a single integer or an inclusive a..b range
std::vector<std::uint64_t> parse_seeds(int line, const std::string& v) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) parse_fail(line, "key \"seeds\": empty list entry");
    std::size_t dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_u64(line, "seeds", tok));
      continue;
    }
    std::uint64_t a = parse_u64(line, "seeds", trim(tok.substr(0, dots)));
    std::uint64_t b = parse_u64(line, "seeds", trim(tok.substr(dots + 2)));
    if (b < a) parse_fail(line, "key \"seeds\": descending range " + tok);
    if (b - a >= 100000)
      parse_fail(line, "key \"seeds\": range " + tok + " is too large");
    for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
  }
  return out;
}

}  // namespace

const char* learner_name(LearnerKind k) {
  switch (k) {
    case LearnerKind::adaptive: return "adaptive";
    case LearnerKind::nonadaptive: return "nonadaptive";
    case LearnerKind::halfspaces: return "halfspaces";
    case LearnerKind::active: return "active";
  }
  return "?";
}

const char* env_name(EnvKind k) {
  switch (k) {
    case EnvKind::rotating_halfspace: return "rotating";
    case EnvKind::random_walk_2d: return "walk";
    case EnvKind::drifting_threshold: return "threshold";
  }
  return "?";
}

const char* schedule_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::power_decay: return "power_decay";
    case ScheduleKind::constant_with_jumps: return "jumps";
  }
  return "?";
}

DriftSchedule ExperimentConfig::drift_schedule() const {
  switch (schedule) {
    case ScheduleKind::constant:
      return DriftSchedule::constant(delta);
    case ScheduleKind::power_decay:
      return DriftSchedule::power_decay(decay_c, decay_p);
    case ScheduleKind::constant_with_jumps:
      return DriftSchedule::constant_with_jumps(delta, jump_period);
  }
  return DriftSchedule::constant(0.0);
}

AblConfig ExperimentConfig::abl_config() const {
  AblConfig a;
  a.d = d;
  a.Delta = delta;
  a.delta = abl_delta;
  a.kappa = kappa;
  a.c5 = c5;
  a.c7 = c7;
  a.c8 = c8;
  a.c9 = c9;
  a.c10 = c10;
  a.m0 = m0;
  a.theoretical_m0 = theoretical_m0;
  a.alpha_min = alpha_min;
  a.solver_budget = solver_budget;
  return a;
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream os;
  os << "[experiment]\n";
  os << "learner = " << learner_name(learner) << "\n";
  os << "horizon = " << horizon << "\n";
  os << "seeds = ";
  for (std::size_t i = 0; i < seeds.size(); ++i)
    os << (i ? "," : "") << seeds[i];
  os << "\n";
  os << "outdir = " << outdir << "\n";
  os << "\n[environment]\n";
  os << "kind = " << env_name(env) << "\n";
  os << "d = " << d << "\n";
  os << "schedule = " << schedule_name(schedule) << "\n";
  os << "delta = " << format_double(delta) << "\n";
  os << "decay_c = " << format_double(decay_c) << "\n";
  os << "decay_p = " << format_double(decay_p) << "\n";
  os << "jump_period = " << jump_period << "\n";
  os << "walk_support = "
     << (walk_support == WalkSupport::pm_one ? "pm_one" : "zero_one") << "\n";
  os << "\n[adaptive]\n";
  os << "K = " << format_double(adaptive.K) << "\n";
  os << "delta = " << format_double(adaptive.delta) << "\n";
  os << "vc = " << adaptive.vc_dim << "\n";
  os << "confidence = "
     << (adaptive.confidence == ConfidenceSchedule::per_round ? "per_round"
                                                              : "fixed")
     << "\n";
  os << "\n[abl]\n";
  os << "delta = " << format_double(abl_delta) << "\n";
  os << "kappa = " << format_double(kappa) << "\n";
  os << "c5 = " << format_double(c5) << "\n";
  os << "c7 = " << format_double(c7) << "\n";
  os << "c8 = " << format_double(c8) << "\n";
  os << "c9 = " << format_double(c9) << "\n";
  os << "c10 = " << format_double(c10) << "\n";
  os << "m0 = " << m0 << "\n";
  os << "theoretical_m0 = " << (theoretical_m0 ? "true" : "false") << "\n";
  os << "alpha_min = " << format_double(alpha_min) << "\n";
  os << "solver_budget = " << solver_budget << "\n";
  os << "\n[active]\n";
  os << "c1 = " << format_double(c1) << "\n";
  os << "grid = " << grid << "\n";
  return os.str();
}

std::string ExperimentConfig::digest() const {
  std::string text = canonical_text();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64 offset basis
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.horizon < 1)
    bad_value("experiment", "horizon", "must be at least 1");
  if (cfg.seeds.empty()) bad_value("experiment", "seeds", "must be nonempty");
  std::vector<std::uint64_t> dedup = cfg.seeds;
  std::sort(dedup.begin(), dedup.end());
  if (std::adjacent_find(dedup.begin(), dedup.end()) != dedup.end())
    bad_value("experiment", "seeds", "duplicate seed");

  if (!(cfg.delta >= 0.0 && cfg.delta <= 1.0))
    bad_value("environment", "delta", "must lie in [0,1]");
  if (!(cfg.decay_c >= 0.0))
    bad_value("environment", "decay_c", "must be nonnegative");
  if (!(cfg.decay_p >= 0.0))
    bad_value("environment", "decay_p", "must be nonnegative");
  if (cfg.schedule == ScheduleKind::constant_with_jumps && cfg.jump_period < 1)
    bad_value("environment", "jump_period", "must be at least 1");
  switch (cfg.env) {
    case EnvKind::drifting_threshold:
      if (cfg.d != 1)
        bad_value("environment", "d", "threshold environment requires d = 1");
      break;
    case EnvKind::random_walk_2d:
      if (cfg.d != 2)
        bad_value("environment", "d", "walk environment requires d = 2");
      break;
    case EnvKind::rotating_halfspace:
      if (cfg.d < 2)
        bad_value("environment", "d", "rotating environment requires d >= 2");
      break;
  }

  if (!(cfg.adaptive.K > 0.0)) bad_value("adaptive", "K", "must be positive");
  if (!(cfg.adaptive.delta > 0.0 && cfg.adaptive.delta <= 1.0))
    bad_value("adaptive", "delta", "must lie in (0,1]");
  if (cfg.adaptive.vc_dim < 1)
    bad_value("adaptive", "vc", "must be at least 1");

  if (!(cfg.abl_delta > 0.0 && cfg.abl_delta < 1.0))
    bad_value("abl", "delta", "must lie in (0,1)");
  if (!(cfg.alpha_min > 0.0 && cfg.alpha_min <= 1.0))
    bad_value("abl", "alpha_min", "must lie in (0,1]");
  if (cfg.m0 < 1) bad_value("abl", "m0", "must be at least 1");
  if (cfg.solver_budget < 1)
    bad_value("abl", "solver_budget", "must be at least 1");

  if (!(cfg.c1 > 0.0)) bad_value("active", "c1", "must be positive");
  if (cfg.grid < 1) bad_value("active", "grid", "must be at least 1");

  if (cfg.learner == LearnerKind::halfspaces) {
    if (cfg.env != EnvKind::rotating_halfspace)
      bad_value("environment", "kind",
                "halfspaces learner requires the rotating environment");
    if (cfg.schedule != ScheduleKind::constant)
      bad_value("environment", "schedule",
                "halfspaces learner requires the constant schedule");
    try {
      (void)AblSchedule::derive(cfg.abl_config());
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("config section [abl]: ") + e.what());
    }
  }
  if (cfg.learner == LearnerKind::active) {
    if (cfg.env == EnvKind::drifting_threshold)
      bad_value("environment", "kind",
                "active learner requires a halfspace environment");
    if (cfg.schedule != ScheduleKind::constant)
      bad_value("environment", "schedule",
                "active learner requires the constant schedule");
    if (!(cfg.delta > 0.0))
      bad_value("environment", "delta",
                "active learner requires a positive drift rate");
    if (static_cast<double>(cfg.d) * cfg.delta > 1.0)
      bad_value("environment", "delta",
                "active learner requires d * delta <= 1");
  }
  if (cfg.learner == LearnerKind::adaptive ||
      cfg.learner == LearnerKind::nonadaptive) {
    if (cfg.env == EnvKind::rotating_halfspace && cfg.d != 2)
      bad_value("environment", "d",
                "passive window learners handle the rotating environment "
                "only at d = 2");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  std::vector<std::string> seen;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    std::size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') parse_fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "experiment" && section != "environment" &&
          section != "adaptive" && section != "abl" && section != "active")
        parse_fail(line, "unknown section [" + section + "]");
      continue;
    }

    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      parse_fail(line, "expected key = value, got '" + s + "'");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty()) parse_fail(line, "empty key");
    if (section.empty())
      parse_fail(line, "key \"" + key + "\" appears before any section");
    if (val.empty() && !(section == "experiment" && key == "outdir"))
      parse_fail(line, "key \"" + key + "\": empty value");

    std::string full = section + "." + key;
    if (std::find(seen.begin(), seen.end(), full) != seen.end())
      parse_fail(line, "duplicate key \"" + key + "\" in [" + section + "]");
    seen.push_back(full);

    if (section == "experiment") {
      if (key == "learner") {
        if (val == "adaptive") cfg.learner = LearnerKind::adaptive;
        else if (val == "nonadaptive") cfg.learner = LearnerKind::nonadaptive;
        else if (val == "halfspaces") cfg.learner = LearnerKind::halfspaces;
        else if (val == "active") cfg.learner = LearnerKind::active;
        else parse_fail(line, "unknown learner '" + val + "'");
      } else if (key == "horizon") {
        cfg.horizon = parse_u64(line, key, val);
      } else if (key == "seeds") {
        cfg.seeds = parse_seeds(line, val);
      } else if (key == "outdir") {
        cfg.outdir = val;
      } else {
        parse_fail(line, "unknown key \"" + key + "\" in [experiment]");
      }
    } else if (section == "environment") {
      if (key == "kind") {
        if (val == "rotating") cfg.env = EnvKind::rotating_halfspace;
        else if (val == "walk") cfg.env = EnvKind::random_walk_2d;
        else if (val == "threshold") cfg.env = EnvKind::drifting_threshold;
        else parse_fail(line, "unknown environment '" + val + "'");
      } else if (key == "d") {
        cfg.d = parse_int(line, key, val);
      } else if (key == "schedule") {
        if (val == "constant") cfg.schedule = ScheduleKind::constant;
        else if (val == "power_decay") cfg.schedule = ScheduleKind::power_decay;
        else if (val == "jumps")
          cfg.schedule = ScheduleKind::constant_with_jumps;
        else parse_fail(line, "unknown schedule '" + val + "'");
      } else if (key == "delta") {
        cfg.delta = parse_double(line, key, val);
      } else if (key == "decay_c") {
        cfg.decay_c = parse_double(line, key, val);
      } else if (key == "decay_p") {
        cfg.decay_p = parse_double(line, key, val);
      } else if (key == "jump_period") {
        cfg.jump_period = parse_u64(line, key, val);
      } else if (key == "walk_support") {
        if (val == "pm_one") cfg.walk_support = WalkSupport::pm_one;
        else if (val == "zero_one") cfg.walk_support = WalkSupport::zero_one;
        else parse_fail(line, "unknown walk support '" + val + "'");
      } else {
        parse_fail(line, "unknown key \"" + key + "\" in [environment]");
      }
    } else if (section == "adaptive") {
      if (key == "K") {
        cfg.adaptive.K = parse_double(line, key, val);
      } else if (key == "delta") {
        cfg.adaptive.delta = parse_double(line, key, val);
      } else if (key == "vc") {
        cfg.adaptive.vc_dim = parse_int(line, key, val);
      } else if (key == "confidence") {
        if (val == "fixed")
          cfg.adaptive.confidence = ConfidenceSchedule::fixed;
        else if (val == "per_round")
          cfg.adaptive.confidence = ConfidenceSchedule::per_round;
        else parse_fail(line, "unknown confidence schedule '" + val + "'");
      } else {
        parse_fail(line, "unknown key \"" + key + "\" in [adaptive]");
      }
    } else if (section == "abl") {
      if (key == "delta") cfg.abl_delta = parse_double(line, key, val);
      else if (key == "kappa") cfg.kappa = parse_double(line, key, val);
      else if (key == "c5") cfg.c5 = parse_double(line, key, val);
      else if (key == "c7") cfg.c7 = parse_double(line, key, val);
      else if (key == "c8") cfg.c8 = parse_double(line, key, val);
      else if (key == "c9") cfg.c9 = parse_double(line, key, val);
      else if (key == "c10") cfg.c10 = parse_double(line, key, val);
      else if (key == "m0") cfg.m0 = parse_u64(line, key, val);
      else if (key == "theoretical_m0")
        cfg.theoretical_m0 = parse_bool(line, key, val);
      else if (key == "alpha_min")
        cfg.alpha_min = parse_double(line, key, val);
      else if (key == "solver_budget")
        cfg.solver_budget = parse_u64(line, key, val);
      else parse_fail(line, "unknown key \"" + key + "\" in [abl]");
    } else if (section == "active") {
      if (key == "c1") cfg.c1 = parse_double(line, key, val);
      else if (key == "grid") cfg.grid = parse_u64(line, key, val);
      else parse_fail(line, "unknown key \"" + key + "\" in [active]");
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_numeric(ExperimentConfig& cfg, const std::string& dotted,
                   double value) {
  auto as_u64 = [&](const char* what) {
    if (!(value >= 0.0) || value != std::floor(value) || value > 1e18)
      throw ValidationError("sweep axis " + dotted + ": " + what +
                            " needs a nonnegative integer, got " +
                            format_double(value));
    return static_cast<std::uint64_t>(value);
  };
  auto as_int = [&](const char* what) {
    if (value != std::floor(value) || value < -1e9 || value > 1e9)
      throw ValidationError("sweep axis " + dotted + ": " + what +
                            " needs an integer, got " + format_double(value));
    return static_cast<int>(value);
  };

  if (dotted == "experiment.horizon") cfg.horizon = as_u64("horizon");
  else if (dotted == "environment.d") cfg.d = as_int("d");
  else if (dotted == "environment.delta") cfg.delta = value;
  else if (dotted == "environment.decay_c") cfg.decay_c = value;
  else if (dotted == "environment.decay_p") cfg.decay_p = value;
  else if (dotted == "environment.jump_period")
    cfg.jump_period = as_u64("jump_period");
  else if (dotted == "adaptive.K") cfg.adaptive.K = value;
  else if (dotted == "adaptive.delta") cfg.adaptive.delta = value;
  else if (dotted == "adaptive.vc") cfg.adaptive.vc_dim = as_int("vc");
  else if (dotted == "abl.delta") cfg.abl_delta = value;
  else if (dotted == "abl.kappa") cfg.kappa = value;
  else if (dotted == "abl.c5") cfg.c5 = value;
  else if (dotted == "abl.c7") cfg.c7 = value;
  else if (dotted == "abl.c8") cfg.c8 = value;
  else if (dotted == "abl.c9") cfg.c9 = value;
  else if (dotted == "abl.c10") cfg.c10 = value;
  else if (dotted == "abl.m0") cfg.m0 = as_u64("m0");
  else if (dotted == "abl.alpha_min") cfg.alpha_min = value;
  else if (dotted == "abl.solver_budget")
    cfg.solver_budget = as_u64("solver_budget");
  else if (dotted == "active.c1") cfg.c1 = value;
  else if (dotted == "active.grid") cfg.grid = as_u64("grid");
  else
    throw ValidationError("sweep axis \"" + dotted +
                          "\" does not name a numeric config key");
}

}  // namespace drift
