#include "drift/environment.hpp"

namespace drift {

double StepSample::exact_error(const HalfspaceHypothesis& h) const {
  if (kind == EnvKind::drifting_threshold)
    throw std::invalid_argument("exact_error: environment is not a halfspace");
  return halfspace_disagreement(h.weight, UnitVector(target_w));
}

double StepSample::exact_error(const ThresholdHypothesis& h) const {
  if (kind != EnvKind::drifting_threshold)
    throw std::invalid_argument("exact_error: environment is not a threshold");
  // target is the threshold at target_cut with polarity +1; under uniform
  // X on [0,1] the two predictions differ exactly between the cuts
  double between = std::fabs(h.cut - target_cut);
  return h.polarity == +1 ? between : 1.0 - between;
}

DriftEnvironment make_rotating_halfspace_env(int d, const DriftSchedule& s,
                                             std::uint64_t seed) {
  if (d < 2)
    throw std::invalid_argument(
        "make_rotating_halfspace_env: d must be at least 2");
  DriftEnvironment env(EnvKind::rotating_halfspace, d, s, seed);
  env.w_ = sample_unit_sphere(d, env.rng_);
  return env;
}

DriftEnvironment make_random_walk_2d_env(const DriftSchedule& s,
                                         WalkSupport support,
                                         std::uint64_t seed) {
  DriftEnvironment env(EnvKind::random_walk_2d, 2, s, seed);
  env.support_ = support;
  env.phi_ = env.rng_.uniform(0.0, 2.0 * kPi);
  env.w_ = {std::cos(env.phi_), std::sin(env.phi_)};
  return env;
}

DriftEnvironment make_threshold_env(const DriftSchedule& s,
                                    std::uint64_t seed) {
  DriftEnvironment env(EnvKind::drifting_threshold, 1, s, seed);
  env.cut_ = env.rng_.uniform01();
  return env;
}

void DriftEnvironment::set_direction_mode(DriftDirectionMode m) {
  if (kind_ != EnvKind::rotating_halfspace || d_ != 2)
    throw std::invalid_argument(
        "set_direction_mode: only the rotating environment at d = 2 has a "
        "forced direction");
  dir_mode_ = m;
}

StepSample DriftEnvironment::advance() {
  ++t_;
  StepSample s;
  s.kind = kind_;
  switch (kind_) {
    case EnvKind::rotating_halfspace:
    case EnvKind::random_walk_2d:
      s.x = sample_unit_sphere(d_, rng_);
      s.y = sign_pm(dot(w_, s.x));
      s.target_w = w_;
      break;
    case EnvKind::drifting_threshold:
      s.x = {rng_.uniform01()};
      s.y = sign_pm(s.x[0] - cut_);
      s.target_cut = cut_;
      break;
  }
  drift(sched_.at(t_ + 1));
  return s;
}

void DriftEnvironment::drift(double budget) {
  if (budget <= 0.0) return;
  switch (kind_) {
    case EnvKind::rotating_halfspace: {
      if (budget >= 1.0) {
        // full budget: redraw the target uniformly, the most adversarial
        // move the constraint allows
        w_ = sample_unit_sphere(d_, rng_);
        return;
      }
      Vec u;
      if (dir_mode_ == DriftDirectionMode::forced_positive) {
        u = {-w_[1], w_[0]};
      } else {
        for (;;) {
          Vec g = sample_unit_sphere(d_, rng_);
          double gw = dot(g, w_);
          for (int i = 0; i < d_; ++i) g[i] -= gw * w_[i];
          double n = norm(g);
          if (n > 1e-9) {
            for (int i = 0; i < d_; ++i) g[i] /= n;
            u = std::move(g);
            break;
          }
        }
      }
      double theta = kPi * budget;
      double ct = std::cos(theta), st = std::sin(theta);
      for (int i = 0; i < d_; ++i) w_[i] = ct * w_[i] + st * u[i];
      w_ = normalized(std::move(w_));
      return;
    }
    case EnvKind::random_walk_2d: {
      double b;
      if (support_ == WalkSupport::pm_one)
        b = static_cast<double>(rng_.sign());
      else
        b = rng_.uniform01() < 0.5 ? 0.0 : 1.0;
      double step = (budget < 0.5 ? budget : 0.5) * kPi * b;
      phi_ += step;
      w_ = {std::cos(phi_), std::sin(phi_)};
      return;
    }
    case EnvKind::drifting_threshold: {
      if (budget >= 1.0) {
        cut_ = rng_.uniform01();
        return;
      }
      double c = cut_ + budget * static_cast<double>(rng_.sign());
      // reflect at the ends of [0,1]; the reflected move never disagrees
      // with the old cut on more mass than the budget
      if (c > 1.0) c = 2.0 - c;
      if (c < 0.0) c = -c;
      cut_ = c;
      return;
    }
  }
}

}  // namespace drift
