#pragma once

#include <cstdint>

#include "drift/geometry.hpp"
#include "drift/rng.hpp"
#include "drift/schedule.hpp"
#include "drift/trace.hpp"

namespace drift {

enum class EnvKind { rotating_halfspace, random_walk_2d, drifting_threshold };

// support of the multiplier B_t in the random-walk construction
enum class WalkSupport { pm_one, zero_one };

// test hook for the rotating environment at d = 2: force every drift step
// counterclockwise instead of choosing a random orthogonal direction
enum class DriftDirectionMode { random, forced_positive };

// One emitted round: the point, its label under the emitting target, and a
// snapshot of that target so exact errors can be evaluated after the
// environment has already drifted.
struct StepSample {
  EnvKind kind;
  Vec x;                    // the drawn point; threshold env uses x[0]
  int y;
  Vec target_w;             // halfspace environments
  double target_cut = 0.0;  // threshold environment

  double exact_error(const HalfspaceHypothesis& h) const;
  double exact_error(const ThresholdHypothesis& h) const;
};

// Seeded generator of (X_t, Y_t) with a hidden drifting target. The per-step
// disagreement between consecutive targets never exceeds the schedule's
// budget; rotation steps meet it with equality. Drift is applied after the
// round is emitted, so round t is always labeled by the pre-drift target.
class DriftEnvironment {
 public:
  StepSample advance();

  EnvKind kind() const { return kind_; }
  int dimension() const { return d_; }
  std::uint64_t rounds_emitted() const { return t_; }
  const DriftSchedule& schedule() const { return sched_; }

  const Vec& target_weight() const { return w_; }
  double target_cut() const { return cut_; }

  void set_direction_mode(DriftDirectionMode m);

  friend DriftEnvironment make_rotating_halfspace_env(int d,
                                                      const DriftSchedule& s,
                                                      std::uint64_t seed);
  friend DriftEnvironment make_random_walk_2d_env(const DriftSchedule& s,
                                                  WalkSupport support,
                                                  std::uint64_t seed);
  friend DriftEnvironment make_threshold_env(const DriftSchedule& s,
                                             std::uint64_t seed);

 private:
  DriftEnvironment(EnvKind kind, int d, const DriftSchedule& s,
                   std::uint64_t seed)
      : kind_(kind), d_(d), sched_(s), rng_(seed) {}

  void drift(double budget);

  EnvKind kind_;
  int d_;
  DriftSchedule sched_;
  Rng rng_;
  Vec w_;              // current halfspace target (unit)
  double phi_ = 0.0;   // polar angle mirror of w_ for the 2d walk
  double cut_ = 0.5;   // current threshold target
  std::uint64_t t_ = 0;
  WalkSupport support_ = WalkSupport::pm_one;
  DriftDirectionMode dir_mode_ = DriftDirectionMode::random;
};

DriftEnvironment make_rotating_halfspace_env(int d, const DriftSchedule& s,
                                             std::uint64_t seed);
DriftEnvironment make_random_walk_2d_env(const DriftSchedule& s,
                                         WalkSupport support,
                                         std::uint64_t seed);
DriftEnvironment make_threshold_env(const DriftSchedule& s,
                                    std::uint64_t seed);

inline StepSample env_advance(DriftEnvironment& env) { return env.advance(); }

}  // namespace drift
