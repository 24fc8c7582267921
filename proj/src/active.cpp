#include "drift/active.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "drift/rng.hpp"

namespace drift {

VersionSpace VersionSpace::full(const FiniteClass& c) {
  VersionSpace v;
  v.cls = &c;
  v.alive.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v.alive[i] = i;
  v.mistakes.assign(c.size(), 0);
  return v;
}

std::uint64_t ActiveConfig::batch_length() const {
  if (d < 1) throw std::invalid_argument("ActiveConfig: d must be >= 1");
  if (!(Delta > 0.0))
    throw std::invalid_argument("ActiveConfig: Delta must be > 0");
  if (!(c1 > 0.0)) throw std::invalid_argument("ActiveConfig: c1 must be > 0");
  double raw = std::ceil(c1 * std::sqrt(static_cast<double>(d) / Delta));
  std::uint64_t want = std::max<std::uint64_t>(4, static_cast<std::uint64_t>(raw));
  std::uint64_t M = 4;
  while (M < want) M <<= 1;
  return M;
}

bool dis_membership(const VersionSpace& V, const Vec& x) {
  if (!V.cls || V.alive.empty())
    throw std::logic_error("dis_membership: empty version space");
  int first = V.cls->hypotheses[V.alive[0]].predict(x);
  for (std::size_t i = 1; i < V.alive.size(); ++i)
    if (V.cls->hypotheses[V.alive[i]].predict(x) != first) return true;
  return false;
}

double threshold_tk(int k, int d, double Delta) {
  if (k < 0) throw std::invalid_argument("threshold_tk: k must be >= 0");
  if (d < 1) throw std::invalid_argument("threshold_tk: d must be >= 1");
  if (Delta < 0.0) throw std::invalid_argument("threshold_tk: Delta must be >= 0");
  double dD = static_cast<double>(d) * Delta;
  if (dD > 1.0)
    throw std::invalid_argument("threshold_tk: d*Delta must not exceed 1");
  if (Delta == 0.0) return 0.0;  // no-drift limit: both terms vanish
  return std::log2(1.0 / std::sqrt(dD)) + std::ldexp(1.0, 2 * k + 2) * kE * Delta;
}

PruneResult prune_version_space(const VersionSpace& V,
                                const std::vector<std::pair<Vec, int>>& Qk,
                                double tk) {
  if (!V.cls || V.alive.empty())
    throw std::logic_error("prune_version_space: empty version space");
  PruneResult out;
  if (Qk.empty()) {
    out.space = V;
    std::fill(out.space.mistakes.begin(), out.space.mistakes.end(), 0u);
    out.best = V.alive.front();
    return out;
  }

  std::vector<std::uint32_t> counts(V.alive.size(), 0);
  for (std::size_t i = 0; i < V.alive.size(); ++i) {
    const HalfspaceHypothesis& h = V.cls->hypotheses[V.alive[i]];
    for (const auto& [x, y] : Qk)
      if (h.predict(x) != y) ++counts[i];
  }
  std::size_t best_pos = 0;
  for (std::size_t i = 1; i < counts.size(); ++i)
    if (counts[i] < counts[best_pos]) best_pos = i;  // ties: smaller index

  out.space.cls = V.cls;
  for (std::size_t i = 0; i < V.alive.size(); ++i) {
    double excess = static_cast<double>(counts[i] - counts[best_pos]);
    if (excess <= tk) {
      out.space.alive.push_back(V.alive[i]);
      out.space.mistakes.push_back(counts[i]);
    }
  }
  out.best = V.alive[best_pos];
  return out;
}

RunTrace run_drifting_active(DriftEnvironment& env, std::uint64_t T,
                             const ActiveConfig& cfg, const FiniteClass& cls) {
  if (cls.size() == 0)
    throw std::invalid_argument("run_drifting_active: class must be nonempty");
  if (env.kind() == EnvKind::drifting_threshold)
    throw std::invalid_argument(
        "run_drifting_active: needs a halfspace environment");
  if (env.dimension() != cfg.d)
    throw std::invalid_argument(
        "run_drifting_active: config dimension does not match environment");
  for (const auto& h : cls.hypotheses)
    if (h.weight.coords.size() != static_cast<std::size_t>(cfg.d))
      throw std::invalid_argument(
          "run_drifting_active: class dimension does not match environment");

  const std::uint64_t M = cfg.batch_length();
  int K = 0;
  while ((2ull << (K + 1)) <= M) ++K;  // M = 2^(K+1)

  RunTrace tr;
  while (tr.rows.size() < T) {
    VersionSpace V = VersionSpace::full(cls);
    std::size_t cur = 0;  // batch opener predicts with the first hypothesis

    StepSample smp = env.advance();
    int pred = cls.hypotheses[cur].predict(smp.x);
    tr.add(env.rounds_emitted(), pred != smp.y, false,
           smp.exact_error(cls.hypotheses[cur]));
    if (tr.rows.size() >= T) break;

    bool done = false;
    for (int k = 0; k <= K && !done; ++k) {
      std::vector<std::pair<Vec, int>> Qk;
      std::uint64_t len = 1ull << k;
      for (std::uint64_t s = 0; s < len; ++s) {
        smp = env.advance();
        pred = cls.hypotheses[cur].predict(smp.x);
        bool q = dis_membership(V, smp.x);
        if (q) Qk.emplace_back(smp.x, smp.y);
        tr.add(env.rounds_emitted(), pred != smp.y, q,
               smp.exact_error(cls.hypotheses[cur]));
        if (tr.rows.size() >= T) {
          done = true;
          break;
        }
      }
      if (done) break;  // truncated epoch: its refit would never predict
      PruneResult pr =
          prune_version_space(V, Qk, threshold_tk(k, cfg.d, cfg.Delta));
      V = std::move(pr.space);
      cur = pr.best;
    }
  }
  return tr;
}

ThetaEstimate estimate_disagreement_coefficient(
    const FiniteClass& cls, std::size_t h_index, double r0,
    const std::vector<double>& r_grid, std::uint64_t n, std::uint64_t seed,
    Exec exec) {
  if (r_grid.empty())
    throw std::invalid_argument(
        "estimate_disagreement_coefficient: radius grid is empty");
  if (!(r0 > 0.0))
    throw std::invalid_argument(
        "estimate_disagreement_coefficient: r0 must be > 0");
  if (h_index >= cls.size())
    throw std::invalid_argument(
        "estimate_disagreement_coefficient: hypothesis index out of range");
  for (double r : r_grid)
    if (!(r > r0))
      throw std::invalid_argument(
          "estimate_disagreement_coefficient: every r must exceed r0");

  ThetaEstimate out;
  std::uint64_t j = 0;
  for (double r : r_grid) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < cls.size(); ++i)
      if (cls.disagreement(i, h_index) <= r) members.push_back(i);
    double p = mc_dis_mass(cls, members, n, mix_seed(seed, j++), exec);
    double ratio = p / r;
    if (ratio > out.theta) {
      out.theta = ratio;
      out.half_width =
          1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)) / r;
    }
  }
  return out;
}

}  // namespace drift
