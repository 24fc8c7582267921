#pragma once

#include <cstdint>
#include <vector>

#include "drift/geometry.hpp"
#include "drift/window_erm.hpp"

namespace drift {

// Slow reference implementations used to cross-check the fast engines.
// Everything here is written straight from the definitions with plain
// loops, no screening, no incremental state.

struct BruteAdaptiveResult {
  std::size_t m_hat = 0;     // 0 means no window qualified
  double score = 0.0;        // best window score at m_hat
  ThresholdHypothesis h{};   // canonical best hypothesis at m_hat
  std::uint32_t window_mistakes = 0;  // mistakes of h on the m_hat window
};

// Exhaustive adaptive window selection for thresholds over an explicit
// candidate cut grid: every (hypothesis, window, suffix) triple is scored
// directly. Division-form ratios throughout, matching the fast engine.
BruteAdaptiveResult brute_force_adaptive_threshold(
    const History& h, const AdaptiveConfig& cfg,
    const std::vector<double>& cuts);

// mistakes of a threshold on the last m observations, counted one by one
std::uint32_t count_window_mistakes(const History& h,
                                    const ThresholdHypothesis& t,
                                    std::size_t m);

}  // namespace drift
