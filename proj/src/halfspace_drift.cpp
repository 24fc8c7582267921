#include "drift/halfspace_drift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace drift {

namespace {

constexpr std::uint64_t kNoCap = std::numeric_limits<std::uint64_t>::max();

double pow2i(int k) { return std::ldexp(1.0, k); }

// land inside both balls: ||v - c|| <= r and ||v|| <= 1; alternating
// projections converge geometrically because the intersection has interior
// (c itself is strictly inside for r > 0)
void project_two_balls(Vec& v, const Vec& c, double r) {
  const std::size_t d = v.size();
  for (int it = 0; it < 200; ++it) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double t = v[j] - c[j];
      d2 += t * t;
    }
    double dist = std::sqrt(d2);
    bool ok = true;
    if (dist > r + 1e-12) {
      double sc = r / dist;
      for (std::size_t j = 0; j < d; ++j) v[j] = c[j] + (v[j] - c[j]) * sc;
      ok = false;
    }
    double nv = norm(v);
    if (nv > 1.0 + 1e-12) {
      for (std::size_t j = 0; j < d; ++j) v[j] /= nv;
      ok = false;
    }
    if (ok) break;
  }
}

UnitVector mp_init_capped(DriftEnvironment& env, std::uint64_t m0,
                          const HalfspaceHypothesis& carried,
                          const UnitVector* w_init, RunTrace* trace,
                          std::uint64_t cap) {
  Vec w = w_init ? w_init->coords : carried.weight.coords;
  const std::size_t d = w.size();
  const std::uint64_t n = std::min(m0, cap);
  for (std::uint64_t s = 0; s < n; ++s) {
    StepSample smp = env.advance();
    if (trace) {
      int pred = carried.predict(smp.x);
      trace->add(env.rounds_emitted(), pred != smp.y, true,
                 smp.exact_error(carried));
    }
    double wx = dot(w, smp.x);
    if (sign_pm(wx) != smp.y) {
      for (std::size_t j = 0; j < d; ++j) w[j] -= 2.0 * wx * smp.x[j];
    }
  }
  return UnitVector(w);
}

AblResult abl_capped(DriftEnvironment& env, const HalfspaceHypothesis& carried,
                     const AblSchedule& sched, const UnitVector& w0,
                     RunTrace* trace, AblAudit* audit, bool return_last,
                     std::uint64_t cap) {
  std::vector<UnitVector> ws;
  ws.reserve(static_cast<std::size_t>(sched.K_max) + 1);
  ws.push_back(w0);
  std::uint64_t queries = 0;
  std::uint64_t used = 0;
  bool truncated = false;

  for (int k = 1; k <= sched.K_max && !truncated; ++k) {
    QueryBatch Wk;
    const UnitVector& wk1 = ws.back();
    const double b = sched.b_prev[static_cast<std::size_t>(k)];
    const std::uint64_t mk = sched.m_k[static_cast<std::size_t>(k)];
    for (std::uint64_t s = 0; s < mk; ++s) {
      if (used >= cap) {
        truncated = true;
        break;
      }
      StepSample smp = env.advance();
      ++used;
      if (trace) {
        int pred = carried.predict(smp.x);
        bool queried = std::fabs(dot(wk1.coords, smp.x)) <= b;
        trace->add(env.rounds_emitted(), pred != smp.y, queried,
                   smp.exact_error(carried));
      }
      if (std::fabs(dot(wk1.coords, smp.x)) <= b) {
        Wk.items.emplace_back(smp.x, smp.y);
        ++queries;
      }
    }
    if (truncated) {
      if (audit) audit->batches.push_back(std::move(Wk));
      break;  // incomplete epoch: its refit would never be used
    }
    Vec v = hinge_minimize_ball(Wk, wk1, sched.r_k[static_cast<std::size_t>(k)],
                                sched.tau_k[static_cast<std::size_t>(k)],
                                sched.kappa, sched.solver_budget);
    UnitVector wk = norm(v) > 0.0 ? UnitVector(v) : wk1;
    if (audit) audit->batches.push_back(std::move(Wk));
    ws.push_back(wk);
  }
  if (audit) audit->w = ws;

  std::size_t idx;
  if (return_last || ws.size() < 2)
    idx = ws.size() - 1;
  else
    idx = ws.size() - 2;  // next-to-last weight is the one carried forward
  return {HalfspaceHypothesis{ws[idx]}, queries};
}

}  // namespace

std::uint64_t AblSchedule::theoretical_m0(int d, double delta) {
  double c1 = kPi * kPi / (d * 400.0 * 32768.0);
  double a = std::ceil(128.0 * (1.0 / c1) * std::log(32.0));
  double b = std::ceil(512.0 * std::log(4.0 / delta));
  return static_cast<std::uint64_t>(std::max(a, b));
}

AblSchedule AblSchedule::derive(const AblConfig& cfg) {
  if (cfg.d < 1) throw std::invalid_argument("AblSchedule: d must be >= 1");
  if (cfg.Delta < 0.0)
    throw std::invalid_argument("AblSchedule: Delta must be >= 0");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw std::invalid_argument("AblSchedule: delta must lie in (0,1)");
  if (!(cfg.kappa > 0.0 && cfg.kappa < 1.0))
    throw std::invalid_argument("AblSchedule: kappa must lie in (0,1)");
  if (cfg.c5 <= 0.0 || cfg.c7 <= 0.0)
    throw std::invalid_argument("AblSchedule: c5 and c7 must be positive");
  if (cfg.m0 < 1) throw std::invalid_argument("AblSchedule: m0 must be >= 1");
  if (!(cfg.alpha_min > 0.0 && cfg.alpha_min <= 1.0))
    throw std::invalid_argument("AblSchedule: alpha_min must lie in (0,1]");
  if (cfg.solver_budget < 1)
    throw std::invalid_argument("AblSchedule: solver_budget must be >= 1");

  AblSchedule s;
  s.d = cfg.d;
  s.Delta = cfg.Delta;
  s.delta = cfg.delta;
  s.kappa = cfg.kappa;
  s.c5 = cfg.c5;
  s.c7 = cfg.c7;
  s.c8 = cfg.c8 > 0.0 ? cfg.c8 : cfg.kappa;
  s.c9 = cfg.c9 > 0.0 ? cfg.c9 : 1.0 / (cfg.kappa * cfg.kappa * cfg.kappa);
  s.c10 = cfg.c10 > 0.0 ? cfg.c10 : kPi * std::sqrt(2.0) / 8.0;
  s.solver_budget = cfg.solver_budget;
  s.m0 = cfg.theoretical_m0 ? theoretical_m0(cfg.d, cfg.delta) : cfg.m0;

  double raw =
      s.c9 * std::sqrt(cfg.Delta * cfg.d * log_cap(1.0 / (cfg.kappa * cfg.delta)));
  s.alpha = std::min(1.0, std::max(cfg.alpha_min, raw));
  s.K_max = s.alpha >= 1.0
                ? 0
                : static_cast<int>(std::ceil(std::log2(1.0 / s.alpha)));

  const double sqd = std::sqrt(static_cast<double>(s.d));
  const int lceil = static_cast<int>(std::ceil(std::log2(4.0 / s.alpha)));
  s.m_k.assign(static_cast<std::size_t>(s.K_max) + 1, 0);
  s.tau_k.assign(static_cast<std::size_t>(s.K_max) + 1, 0.0);
  s.b_prev.assign(static_cast<std::size_t>(s.K_max) + 1, 0.0);
  s.r_k.assign(static_cast<std::size_t>(s.K_max) + 1, 0.0);
  s.delta_k.assign(static_cast<std::size_t>(s.K_max) + 1, 0.0);
  s.M1 = 0;
  for (int k = 1; k <= s.K_max; ++k) {
    std::size_t i = static_cast<std::size_t>(k);
    double rem = static_cast<double>(lceil - k);
    s.delta_k[i] = s.delta / (rem * rem);
    double mk = std::ceil(s.c5 * (pow2i(k) / (s.kappa * s.kappa)) * s.d *
                          log_cap(1.0 / (s.kappa * s.delta_k[i])));
    s.m_k[i] = static_cast<std::uint64_t>(std::max(1.0, mk));
    s.tau_k[i] = s.c8 * pow2i(-k) / sqd;
    s.b_prev[i] = s.c7 * pow2i(1 - k) / sqd;
    s.r_k[i] = s.c10 * pow2i(-k);
    s.M1 += s.m_k[i];
  }
  s.M = s.m0 + s.M1;
  return s;
}

std::string AblSchedule::dump() const {
  std::ostringstream os;
  os << "d=" << d << "\n";
  os << "Delta=" << format_double(Delta) << "\n";
  os << "delta=" << format_double(delta) << "\n";
  os << "kappa=" << format_double(kappa) << "\n";
  os << "c5=" << format_double(c5) << "\n";
  os << "c7=" << format_double(c7) << "\n";
  os << "c8=" << format_double(c8) << "\n";
  os << "c9=" << format_double(c9) << "\n";
  os << "c10=" << format_double(c10) << "\n";
  os << "alpha=" << format_double(alpha) << "\n";
  os << "m0=" << m0 << "\n";
  os << "K_max=" << K_max << "\n";
  os << "M=" << M << "\n";
  os << "M1=" << M1 << "\n";
  os << "solver_budget=" << solver_budget << "\n";
  for (int k = 1; k <= K_max; ++k) {
    std::size_t i = static_cast<std::size_t>(k);
    os << "m_" << k << "=" << m_k[i] << "\n";
    os << "tau_" << k << "=" << format_double(tau_k[i]) << "\n";
    os << "b_" << (k - 1) << "=" << format_double(b_prev[i]) << "\n";
    os << "r_" << k << "=" << format_double(r_k[i]) << "\n";
    os << "delta_" << k << "=" << format_double(delta_k[i]) << "\n";
  }
  return os.str();
}

UnitVector mod_perceptron_update(const UnitVector& w, const UnitVector& x,
                                 int /*y*/) {
  double wx = dot(w.coords, x.coords);
  Vec out = w.coords;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= 2.0 * wx * x.coords[j];
  return UnitVector(out);
}

UnitVector mod_perceptron_init(DriftEnvironment& env, std::uint64_t m0,
                               const HalfspaceHypothesis& carried,
                               const UnitVector* w_init, RunTrace* trace) {
  if (m0 < 1) throw std::invalid_argument("mod_perceptron_init: m0 must be >= 1");
  return mp_init_capped(env, m0, carried, w_init, trace, kNoCap);
}

double hinge_total_loss(const QueryBatch& W, const Vec& v, double tau) {
  double loss = 0.0;
  for (const auto& [x, y] : W.items) {
    double z = y * dot(v, x);
    if (z < tau) loss += 1.0 - z / tau;
  }
  return loss;
}

Vec hinge_minimize_ball(const QueryBatch& W, const UnitVector& w_prev,
                        double r, double tau, double kappa,
                        std::uint64_t budget) {
  if (!(r > 0.0) || !(tau > 0.0) || !(kappa > 0.0))
    throw std::invalid_argument("hinge_minimize_ball: r, tau, kappa must be > 0");
  if (W.empty()) return w_prev.coords;

  const std::size_t d = w_prev.coords.size();

  // descent horizon that makes the best iterate kappa*|W|-suboptimal for
  // the normalized-step schedule; the budget is a hard cap on top
  double sn = 50.0;
  for (int it = 0; it < 30; ++it)
    sn = r * (4.0 + 2.0 * std::log(std::max(sn, 1.0))) / (4.0 * kappa * tau);
  std::uint64_t want =
      static_cast<std::uint64_t>(std::min(1e18, std::ceil(sn * sn))) + 100;
  const std::uint64_t iters = std::min(want, budget);

  Vec v = w_prev.coords;
  Vec best = v;
  double best_loss = hinge_total_loss(W, v, tau);
  Vec g(d, 0.0);

  for (std::uint64_t i = 1; i <= iters; ++i) {
    double loss = 0.0;
    std::fill(g.begin(), g.end(), 0.0);
    for (const auto& [x, y] : W.items) {
      double z = y * dot(v, x);
      if (z < tau) {
        loss += 1.0 - z / tau;
        double c = static_cast<double>(y) / tau;
        for (std::size_t j = 0; j < d; ++j) g[j] -= c * x[j];
      }
    }
    if (loss < best_loss) {
      best_loss = loss;
      best = v;
    }
    if (loss == 0.0) break;
    double gn = norm(g);
    if (gn == 0.0) break;
    double step = r / std::sqrt(static_cast<double>(i));
    for (std::size_t j = 0; j < d; ++j) v[j] -= step * g[j] / gn;
    project_two_balls(v, w_prev.coords, r);
  }
  double fl = hinge_total_loss(W, v, tau);
  if (fl < best_loss) best = v;

  if (norm(best) < 1e-12) {
    // keep the norm strictly positive without leaving the radius ball
    double sc = 1.0 - std::min(r, 1.0) / 2.0;
    best = w_prev.coords;
    for (double& c : best) c *= sc;
  }
  return best;
}

AblResult abl_batch(DriftEnvironment& env, const HalfspaceHypothesis& carried,
                    const AblSchedule& sched, const UnitVector& w0,
                    RunTrace* trace, AblAudit* audit, bool return_last) {
  return abl_capped(env, carried, sched, w0, trace, audit, return_last, kNoCap);
}

RunTrace run_drifting_halfspaces(DriftEnvironment& env, std::uint64_t T,
                                 const AblSchedule& sched) {
  if (env.kind() != EnvKind::rotating_halfspace)
    throw std::invalid_argument(
        "run_drifting_halfspaces: needs a uniform-sphere halfspace environment");
  if (env.dimension() != sched.d)
    throw std::invalid_argument(
        "run_drifting_halfspaces: schedule dimension does not match environment");
  if (T < 1) throw std::invalid_argument("run_drifting_halfspaces: T must be >= 1");

  RunTrace tr;
  Vec e1(static_cast<std::size_t>(sched.d), 0.0);
  e1[0] = 1.0;
  HalfspaceHypothesis carried{UnitVector(e1)};

  while (tr.rows.size() < T) {
    std::uint64_t remaining = T - tr.rows.size();
    UnitVector w0 = mp_init_capped(env, sched.m0, carried, nullptr, &tr, remaining);
    if (tr.rows.size() >= T) break;
    remaining = T - tr.rows.size();
    AblResult res =
        abl_capped(env, carried, sched, w0, &tr, nullptr, false, remaining);
    if (tr.rows.size() >= T) break;
    carried = res.h;
  }
  return tr;
}

}  // namespace drift
