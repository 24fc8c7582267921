#include "drift/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace drift {

namespace {

double brute_den(std::size_t mp, const AdaptiveConfig& cfg, std::size_t T1) {
  double logdelta = cfg.confidence == ConfidenceSchedule::per_round
                        ? log_cap(static_cast<double>(T1 + 1))
                        : log_cap(1.0 / cfg.delta);
  return cfg.vc_dim * log_cap(static_cast<double>(mp) / cfg.vc_dim) + logdelta;
}

double brute_score(const History& h, double cut, int pol, std::size_t m,
                   const AdaptiveConfig& cfg) {
  const std::size_t T1 = h.size();
  double worst = 0.0;
  for (std::size_t mp = 1; mp <= m; ++mp) {
    std::uint32_t mk = 0;
    for (std::size_t j = 1; j <= mp; ++j) {
      const Observation& o = h.obs[T1 - j];
      if (pol * sign_pm(o.x - cut) != o.y) ++mk;
    }
    double r = static_cast<double>(mk) / brute_den(mp, cfg, T1);
    if (r > worst) worst = r;
  }
  return worst;
}

}  // namespace

std::uint32_t count_window_mistakes(const History& h,
                                    const ThresholdHypothesis& t,
                                    std::size_t m) {
  const std::size_t T1 = h.size();
  std::uint32_t mk = 0;
  for (std::size_t j = 1; j <= m; ++j) {
    const Observation& o = h.obs[T1 - j];
    if (t.predict(o.x) != o.y) ++mk;
  }
  return mk;
}

BruteAdaptiveResult brute_force_adaptive_threshold(
    const History& h, const AdaptiveConfig& cfg,
    const std::vector<double>& cuts) {
  const std::size_t T1 = h.size();
  BruteAdaptiveResult out;
  if (T1 == 0) return out;

  std::vector<double> grid = cuts;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // largest m whose best score stays under K; every m is checked, no
  // structural shortcuts
  std::size_t m_hat = 0;
  for (std::size_t m = 1; m <= T1; ++m) {
    double best = std::numeric_limits<double>::infinity();
    for (double c : grid)
      for (int pol : {+1, -1})
        best = std::min(best, brute_score(h, c, pol, m, cfg));
    if (best < cfg.K) m_hat = m;
  }
  if (m_hat == 0) return out;

  double best = std::numeric_limits<double>::infinity();
  ThresholdHypothesis bh{0.0, +1};
  for (double c : grid) {
    for (int pol : {+1, -1}) {
      double s = brute_score(h, c, pol, m_hat, cfg);
      if (s < best) {
        best = s;
        bh = ThresholdHypothesis{c, pol};
      }
    }
  }
  out.m_hat = m_hat;
  out.score = best;
  out.h = bh;
  out.window_mistakes = count_window_mistakes(h, bh, m_hat);
  return out;
}

}  // namespace drift
