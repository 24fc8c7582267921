#include "drift/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "drift/active.hpp"
#include "drift/environment.hpp"
#include "drift/geometry.hpp"
#include "drift/halfspace_drift.hpp"
#include "drift/oracles.hpp"
#include "drift/rng.hpp"
#include "drift/window_erm.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;

namespace drift {

namespace {

DriftEnvironment make_env(const ExperimentConfig& cfg, std::uint64_t seed) {
  switch (cfg.env) {
    case EnvKind::rotating_halfspace:
      return make_rotating_halfspace_env(cfg.d, cfg.drift_schedule(), seed);
    case EnvKind::random_walk_2d:
      return make_random_walk_2d_env(cfg.drift_schedule(), cfg.walk_support,
                                     seed);
    case EnvKind::drifting_threshold:
      return make_threshold_env(cfg.drift_schedule(), seed);
  }
  throw std::logic_error("make_env: unhandled environment kind");
}

void probe_writable(const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write output file: " + path);
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return out;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

void SummaryRow::write_csv_row(std::ostream& os) const {
  os << config_digest << ',' << seed << ',' << mistakes << ',' << queries
     << ',' << format_double(final_rate) << ',' << format_double(mean_error)
     << '\n';
}

std::string resolve_outdir(const ExperimentConfig& cfg) {
  if (!cfg.outdir.empty()) return cfg.outdir;
  if (const char* env = std::getenv("DRIFT_OUTDIR"); env && *env) return env;
  return ".";
}

RunTrace run_single(const ExperimentConfig& cfg, std::uint64_t seed) {
  DriftEnvironment env = make_env(cfg, seed);
  switch (cfg.learner) {
    case LearnerKind::adaptive:
      return run_passive_learner(env, cfg.horizon, PassiveLearner::adaptive,
                                 cfg.adaptive);
    case LearnerKind::nonadaptive:
      return run_passive_learner(env, cfg.horizon, PassiveLearner::nonadaptive,
                                 cfg.adaptive);
    case LearnerKind::halfspaces: {
      AblSchedule sched = AblSchedule::derive(cfg.abl_config());
      return run_drifting_halfspaces(env, cfg.horizon, sched);
    }
    case LearnerKind::active: {
      ActiveConfig a;
      a.d = cfg.d;
      a.Delta = cfg.delta;
      a.c1 = cfg.c1;
      FiniteClass cls = make_angle_grid(cfg.grid);
      return run_drifting_active(env, cfg.horizon, a, cls);
    }
  }
  throw std::logic_error("run_single: unhandled learner kind");
}

SummaryRow summarize(const ExperimentConfig& cfg, std::uint64_t seed,
                     const RunTrace& tr) {
  SummaryRow row;
  row.config_digest = cfg.digest();
  row.seed = seed;
  row.mistakes = tr.total_mistakes();
  row.queries = tr.total_queries();
  std::uint64_t T = cfg.horizon;
  std::uint64_t tail = std::max<std::uint64_t>(1, T / 10);
  row.final_rate = tr.mistake_rate(T - tail + 1, T);
  row.mean_error = tr.mean_exact_error();
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files,
                                Exec exec) {
  validate_config(cfg);
  const std::string digest = cfg.digest();
  const std::size_t n = cfg.seeds.size();

  ExperimentResult res;
  res.traces.resize(n);
  res.summary.resize(n);

  if (write_files) {
    fs::path dir = resolve_outdir(cfg);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
      throw std::runtime_error("cannot create output directory: " +
                               dir.string() + ": " + ec.message());
    for (std::size_t i = 0; i < n; ++i) {
      fs::path p = dir / ("trace_" + digest + "_seed" +
                          std::to_string(cfg.seeds[i]) + ".csv");
      res.trace_paths.push_back(p.string());
      probe_writable(p.string());
    }
    res.summary_path = (dir / ("summary_" + digest + ".csv")).string();
    probe_writable(res.summary_path);
  }

#ifdef _OPENMP
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      res.traces[static_cast<std::size_t>(i)] =
          run_single(cfg, cfg.seeds[static_cast<std::size_t>(i)]);
  } else
#endif
  {
    for (std::size_t i = 0; i < n; ++i)
      res.traces[i] = run_single(cfg, cfg.seeds[i]);
  }

  for (std::size_t i = 0; i < n; ++i)
    res.summary[i] = summarize(cfg, cfg.seeds[i], res.traces[i]);

  if (write_files) {
    for (std::size_t i = 0; i < n; ++i) {
      std::ofstream f(res.trace_paths[i], std::ios::trunc);
      if (!f)
        throw std::runtime_error("cannot write output file: " +
                                 res.trace_paths[i]);
      res.traces[i].write_csv(f);
    }
    std::ofstream s(res.summary_path, std::ios::trunc);
    if (!s)
      throw std::runtime_error("cannot write output file: " +
                               res.summary_path);
    s << "config_digest,seed,mistakes,queries,final_rate,mean_error\n";
    for (const SummaryRow& row : res.summary) row.write_csv_row(s);
  }
  return res;
}

namespace {

void write_sweep_svg(const std::string& path, const std::string& axis,
                     const std::vector<double>& xs,
                     const std::vector<double>& means,
                     const std::vector<double>& lows,
                     const std::vector<double>& highs) {
  const double W = 640, H = 420, L = 80, R = 20, T = 30, B = 60;
  double xmin = xs.front(), xmax = xs.front(), ymax = 0.0;
  for (double v : xs) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  for (double v : highs) ymax = std::max(ymax, v);
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.08;
  double xspan = xmax - xmin;
  auto px = [&](double v) {
    if (xspan <= 0.0) return L + (W - L - R) / 2.0;
    return L + (v - xmin) / xspan * (W - L - R);
  };
  auto py = [&](double v) { return H - B - v / ymax * (H - T - B); };

  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write plot file: " + path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
    << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  f << "<rect width=\"" << W << "\" height=\"" << H
    << "\" fill=\"white\"/>\n";
  f << "<g font-family=\"monospace\" font-size=\"12\" fill=\"black\">\n";
  f << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
    << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
    << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double yv = ymax * i / 4.0;
    f << "<line x1=\"" << L - 4 << "\" y1=\"" << py(yv) << "\" x2=\"" << L
      << "\" y2=\"" << py(yv) << "\" stroke=\"black\"/>\n";
    f << "<text x=\"" << L - 8 << "\" y=\"" << py(yv) + 4
      << "\" text-anchor=\"end\">" << short_num(yv) << "</text>\n";
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    f << "<line x1=\"" << px(xs[i]) << "\" y1=\"" << H - B << "\" x2=\""
      << px(xs[i]) << "\" y2=\"" << H - B + 4 << "\" stroke=\"black\"/>\n";
    f << "<text x=\"" << px(xs[i]) << "\" y=\"" << H - B + 18
      << "\" text-anchor=\"middle\">" << short_num(xs[i]) << "</text>\n";
  }
  f << "<text x=\"" << (L + W - R) / 2.0 << "\" y=\"" << H - 14
    << "\" text-anchor=\"middle\">" << axis << "</text>\n";
  f << "<text x=\"" << (L + W - R) / 2.0 << "\" y=\"" << T - 10
    << "\" text-anchor=\"middle\">mistake rate vs " << axis
    << " (mean, min/max whiskers)</text>\n";

  // whiskers, then the mean polyline on top
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double x = px(xs[i]);
    f << "<line x1=\"" << x << "\" y1=\"" << py(lows[i]) << "\" x2=\"" << x
      << "\" y2=\"" << py(highs[i]) << "\" stroke=\"steelblue\"/>\n";
    f << "<line x1=\"" << x - 5 << "\" y1=\"" << py(lows[i]) << "\" x2=\""
      << x + 5 << "\" y2=\"" << py(lows[i]) << "\" stroke=\"steelblue\"/>\n";
    f << "<line x1=\"" << x - 5 << "\" y1=\"" << py(highs[i]) << "\" x2=\""
      << x + 5 << "\" y2=\"" << py(highs[i]) << "\" stroke=\"steelblue\"/>\n";
  }
  f << "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"1.5\" "
       "points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i)
    f << px(xs[i]) << ',' << py(means[i]) << ' ';
  f << "\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    f << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(means[i])
      << "\" r=\"3\" fill=\"crimson\"/>\n";
  f << "</g>\n</svg>\n";
}

}  // namespace

SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<double>& values, bool plot,
                  bool write_files, Exec exec) {
  if (values.empty())
    throw ValidationError("sweep: values list must be nonempty");

  SweepResult out;
  std::vector<double> means, lows, highs, xs;
  for (double v : values) {
    ExperimentConfig cfg = base;
    apply_numeric(cfg, axis, v);
    validate_config(cfg);
    ExperimentResult res = run_experiment(cfg, /*write_files=*/false, exec);

    double sum = 0.0, lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      const SummaryRow& s = res.summary[i];
      SweepPoint p;
      p.value = v;
      p.seed = s.seed;
      p.config_digest = s.config_digest;
      p.mistakes = s.mistakes;
      p.queries = s.queries;
      p.mistake_rate =
          static_cast<double>(s.mistakes) / static_cast<double>(cfg.horizon);
      p.final_rate = s.final_rate;
      p.mean_error = s.mean_error;
      out.points.push_back(p);
      sum += p.mistake_rate;
      lo = std::min(lo, p.mistake_rate);
      hi = std::max(hi, p.mistake_rate);
    }
    xs.push_back(v);
    means.push_back(sum / static_cast<double>(cfg.seeds.size()));
    lows.push_back(lo);
    highs.push_back(hi);
  }

  if (write_files) {
    fs::path dir = resolve_outdir(base);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
      throw std::runtime_error("cannot create output directory: " +
                               dir.string() + ": " + ec.message());
    std::string stem = "sweep_" + sanitize(axis) + "_" + base.digest();
    out.csv_path = (dir / (stem + ".csv")).string();
    std::ofstream f(out.csv_path, std::ios::trunc);
    if (!f)
      throw std::runtime_error("cannot write output file: " + out.csv_path);
    f << "axis,value,seed,config_digest,mistakes,queries,mistake_rate,"
         "final_rate,mean_error\n";
    for (const SweepPoint& p : out.points)
      f << axis << ',' << format_double(p.value) << ',' << p.seed << ','
        << p.config_digest << ',' << p.mistakes << ',' << p.queries << ','
        << format_double(p.mistake_rate) << ',' << format_double(p.final_rate)
        << ',' << format_double(p.mean_error) << '\n';
    if (plot) {
      out.plot_path = (dir / (stem + ".svg")).string();
      write_sweep_svg(out.plot_path, axis, xs, means, lows, highs);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// oracle suites

namespace {

struct SuiteStats {
  int checks = 0;
  int failures = 0;

  void note(bool ok) {
    ++checks;
    if (!ok) ++failures;
  }
};

bool oracle_window(std::ostream& os) {
  const std::vector<double> dom{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> cuts{0.0};
  cuts.insert(cuts.end(), dom.begin(), dom.end());

  SuiteStats st;
  for (double K : {8.0, 1.0}) {
    AdaptiveConfig cfg;
    cfg.K = K;
    std::uint64_t histories = 0, mismatches = 0;
    for (int off = 0; off < 9; ++off) {
      for (int len = 1; len <= 8; ++len) {
        for (std::uint32_t mask = 0; mask < (1u << len); ++mask) {
          History h;
          for (int i = 0; i < len; ++i)
            h.add(dom[(off + i) % 9], (mask >> i) & 1 ? +1 : -1);
          BruteAdaptiveResult want =
              brute_force_adaptive_threshold(h, cfg, cuts);
          FitResult got = adaptive_fit(h, cfg, ClassKind::threshold);
          ++histories;
          bool same = got.m_hat == want.m_hat;
          if (same && want.m_hat > 0)
            same = got.score == want.score &&
                   count_window_mistakes(h, got.h.thr, got.m_hat) ==
                       want.window_mistakes;
          if (!same) ++mismatches;
        }
      }
    }
    os << "window K=" << format_double(K) << ": " << histories
       << " exhaustive histories (all labelings, length <= 8, 9 cyclic "
          "shifts), mismatches "
       << mismatches << " (tolerance: exact)\n";
    st.note(mismatches == 0);
  }
  os << "window suite: " << st.checks << " checks, " << st.failures
     << " failures\n";
  return st.failures == 0;
}

bool oracle_hinge(std::ostream& os) {
  const double r = 0.3, tau = 0.2, kappa = 0.05;
  const int G = 400, m = 20;
  const double res = m / tau * (2.0 * r / G) * std::sqrt(2.0);
  const double allowance = kappa * m + res;

  SuiteStats st;
  double worst = -1e300;
  Rng rng(606);
  for (int rep = 0; rep < 50; ++rep) {
    UnitVector w(sample_unit_sphere(2, rng));
    QueryBatch W;
    for (int i = 0; i < m; ++i) {
      Vec x = sample_unit_sphere(2, rng);
      int y = sign_pm(dot(w.coords, x));
      if (rng.uniform01() < 0.15) y = -y;
      W.items.push_back({x, y});
    }
    Vec v = hinge_minimize_ball(W, w, r, tau, kappa);
    double got = hinge_total_loss(W, v, tau);

    double best = 1e300;
    for (int a = 0; a <= G; ++a) {
      for (int b = 0; b <= G; ++b) {
        Vec c{w.coords[0] - r + 2.0 * r * a / G,
              w.coords[1] - r + 2.0 * r * b / G};
        Vec dd{c[0] - w.coords[0], c[1] - w.coords[1]};
        if (norm(dd) > r || norm(c) > 1.0 || norm(c) == 0.0) continue;
        best = std::min(best, hinge_total_loss(W, c, tau));
      }
    }
    double excess = got - best;
    worst = std::max(worst, excess);
    st.note(excess <= allowance);
    if (excess > allowance)
      os << "hinge rep " << rep << ": solver loss " << format_double(got)
         << " vs grid " << format_double(best) << ", excess "
         << format_double(excess) << " > allowance "
         << format_double(allowance) << "\n";
  }
  os << "hinge: 50 instances (|W|=20, r=0.3, tau=0.2, kappa=0.05) vs 400x400 "
        "grid, worst excess "
     << format_double(worst) << " <= allowance " << format_double(allowance)
     << ": " << (st.failures == 0 ? "yes" : "NO") << "\n";
  os << "hinge suite: " << st.checks << " checks, " << st.failures
     << " failures\n";
  return st.failures == 0;
}

bool oracle_geometry(std::ostream& os) {
  SuiteStats st;
  std::uint64_t idx = 0;
  for (int d : {2, 3, 5, 10}) {
    for (double g : {0.05, 0.1, 0.3, 0.7}) {
      double exact = band_probability(d, g);
      double mc = mc_band_probability(d, g, 1000000, mix_seed(777, idx++));
      double diff = std::abs(exact - mc);
      bool ok = diff < 3e-3;
      st.note(ok);
      os << "geometry d=" << d << " gamma=" << format_double(g)
         << ": analytic=" << format_double(exact)
         << " mc=" << format_double(mc) << " |diff|=" << format_double(diff)
         << " tol=0.003 " << (ok ? "ok" : "MISS") << "\n";
    }
  }
  double e1 = std::abs(band_probability(3, 0.25) - 0.25);
  double e2 = std::abs(band_probability(2, std::sqrt(0.5)) - 0.5);
  st.note(e1 < 1e-9);
  st.note(e2 < 1e-9);
  os << "geometry closed forms: |P(3,0.25)-0.25|=" << format_double(e1)
     << " |P(2,sqrt(1/2))-0.5|=" << format_double(e2) << " tol=1e-9 "
     << (e1 < 1e-9 && e2 < 1e-9 ? "ok" : "MISS") << "\n";
  os << "geometry suite: " << st.checks << " checks, " << st.failures
     << " failures\n";
  return st.failures == 0;
}

bool oracle_theta(std::ostream& os) {
  const std::size_t n_grid = 1024;
  FiniteClass grid = make_angle_grid(n_grid);
  std::vector<double> rs{0.05, 0.1, 0.2};

  // ball of radius r keeps floor(512 r) grid steps to each side; the
  // disagreement region of that arc of separators is two lenses of total
  // mass k/256
  double analytic_max = 0.0;
  for (double r : rs) {
    double k = std::floor(512.0 * r);
    analytic_max = std::max(analytic_max, (k / 256.0) / r);
  }

  ThetaEstimate est =
      estimate_disagreement_coefficient(grid, 0, 0.01, rs, 1000000, 20240);
  double dev = std::abs(est.theta - 2.0);
  double vs_analytic = std::abs(est.theta - analytic_max);

  SuiteStats st;
  st.note(dev <= 0.05);
  st.note(vs_analytic <= 0.02);
  os << "theta: 1024-angle grid, radii {0.05,0.1,0.2}, theta_hat="
     << format_double(est.theta) << " (mc half-width "
     << format_double(est.half_width) << ")\n";
  os << "theta vs 2.0: |dev|=" << format_double(dev) << " tol=0.05 "
     << (dev <= 0.05 ? "ok" : "MISS") << "\n";
  os << "theta vs analytic sup " << format_double(analytic_max)
     << ": |dev|=" << format_double(vs_analytic) << " tol=0.02 "
     << (vs_analytic <= 0.02 ? "ok" : "MISS") << "\n";
  os << "theta suite: " << st.checks << " checks, " << st.failures
     << " failures\n";
  return st.failures == 0;
}

}  // namespace

bool oracle_check(const std::string& suite, std::ostream& os) {
  if (suite == "window") return oracle_window(os);
  if (suite == "hinge") return oracle_hinge(os);
  if (suite == "geometry") return oracle_geometry(os);
  if (suite == "theta") return oracle_theta(os);
  if (suite == "all") {
    bool ok = oracle_window(os);
    ok = oracle_hinge(os) && ok;
    ok = oracle_geometry(os) && ok;
    ok = oracle_theta(os) && ok;
    os << (ok ? "all oracle suites passed\n" : "oracle failures present\n");
    return ok;
  }
  throw std::invalid_argument(
      "oracle_check: unknown suite '" + suite +
      "' (expected window, hinge, geometry, theta, or all)");
}

}  // namespace drift
