#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "drift/environment.hpp"
#include "drift/geometry.hpp"
#include "drift/schedule.hpp"
#include "drift/trace.hpp"

namespace drift {

// Hypothesis classes with exact window ERM. Observations are stored as a
// scalar per point: the position in [0,1] for thresholds, the polar angle of
// the unit-circle point for 2d halfspaces.
enum class ClassKind { threshold, halfspace2d };

struct Observation {
  double x;
  int y;
};

// chronological sample history, oldest first; window m is the last m entries
struct History {
  std::vector<Observation> obs;

  std::size_t size() const { return obs.size(); }
  void add(double x, int y) { obs.push_back({x, y}); }
};

inline double point_angle(const Vec& x) {
  double a = std::atan2(x[1], x[0]);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

enum class ConfidenceSchedule { fixed, per_round };

struct AdaptiveConfig {
  double K = 8.0;
  double delta = 0.05;           // confidence parameter
  int vc_dim = 1;
  ConfidenceSchedule confidence = ConfidenceSchedule::fixed;
};

// conservative theoretical form of the feasibility bound, parameterized by
// the constant of the uniform deviation inequality it is derived from
inline double score_bound_from_constant(double c) { return 145.0 * c * c; }

// A fitted hypothesis in either class. For halfspace2d the weight vector is
// (cos a, sin a) for the stored weight angle a; predictions use the same
// scalar predicate as the fitting engine so traces are bit-reproducible.
struct WindowHypothesis {
  ClassKind kind = ClassKind::threshold;
  ThresholdHypothesis thr{};
  double weight_angle = 0.0;

  int predict_scalar(double x) const {
    if (kind == ClassKind::threshold) return thr.predict(x);
    return cos_sign(x - weight_angle);
  }

  HalfspaceHypothesis halfspace() const {
    return HalfspaceHypothesis(
        Vec{std::cos(weight_angle), std::sin(weight_angle)});
  }
};

// exact ERM over all thresholds: fewest mistakes, ties by smallest cut then
// polarity +1; candidate cuts are 0 and the sample points themselves
ThresholdHypothesis erm_threshold(const std::vector<Observation>& window);

// exact ERM over 2d homogeneous halfspaces via the candidate weight angles
// induced by the sample; ties by smallest weight angle
HalfspaceHypothesis erm_halfspace_2d(const std::vector<std::pair<Vec, int>>& window);
WindowHypothesis erm_halfspace_2d_angles(const std::vector<Observation>& window);

// max over m' <= m of (mistakes on the last m' samples) / (d Log(m'/d) + Log(1/delta))
double window_score(const History& h, const WindowHypothesis& hyp,
                    std::size_t m, const AdaptiveConfig& cfg);

struct FitResult {
  std::size_t m_hat = 0;
  double score = 0.0;
  WindowHypothesis h;
};

struct WindowViewCache;

// Opaque cross-round accelerator state for adaptive_fit. Passing the same
// state object along a growing history never changes results, only speed:
// the previous round's chosen hypothesis certifies window feasibility
// cheaply, the previous window length brackets the search, and the probed
// window's candidate list is maintained incrementally instead of rebuilt.
// The state is bound to one growing history; reuse across different
// histories of equal length is not supported.
struct FitState {
  bool valid = false;
  WindowHypothesis witness;
  std::size_t m_prev = 1;
  std::vector<double> logterm;  // cached d*Log(m/d) table, grows per round
  int vc = 0;
  std::shared_ptr<WindowViewCache> view_cache;

  // exact running facts about the stored witness, advanced one observation
  // per round: wc_cnt mistakes over obs[wc_time..now) bound its score from
  // below, and w_ub bounds its score from above in every window starting at
  // or after w_start (appending a correctly classified observation can only
  // lower suffix ratios). Together they settle most per-round feasibility
  // probes without a backward scan.
  std::uint32_t wc_cnt = 0;
  std::size_t wc_time = 0;
  double w_ub = std::numeric_limits<double>::infinity();
  std::size_t w_start = 0;
  std::size_t w_synced = 0;
};

// The adaptive window selection: m_hat is the largest m in {1..T-1} whose
// best achievable window score is below K, and h the canonical minimizer at
// m_hat. The candidate sets induced by the window realize every achievable
// mistake pattern, so the inner minimum over the class is exact.
FitResult adaptive_fit(const History& h, const AdaptiveConfig& cfg,
                       ClassKind kind, FitState* state = nullptr);

// known-drift window choice: argmin over m of the drift-plus-complexity
// objective, ties to the smaller m
std::size_t nonadaptive_window(const DriftSchedule& s, std::uint64_t t, int d);

enum class PassiveLearner { adaptive, nonadaptive };

// Streaming driver: each round fits on the history, predicts the fresh
// point, records mistake and exact error, then ingests the labeled example.
// Round 1 predicts with the canonical first hypothesis of the class.
RunTrace run_passive_learner(DriftEnvironment& env, std::uint64_t T,
                             PassiveLearner learner,
                             const AdaptiveConfig& cfg);

}  // namespace drift
