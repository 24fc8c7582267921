#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace drift {

enum class ScheduleKind { constant, power_decay, constant_with_jumps };

// The per-round drift budget Delta_t, defined for t >= 2. Values are always
// clamped to [0,1]. Jump rounds (t a positive multiple of jump_period) return
// a full budget of 1.
struct DriftSchedule {
  ScheduleKind kind = ScheduleKind::constant;
  double delta = 0.0;          // constant and constant_with_jumps
  double c = 0.0, p = 0.0;     // power_decay: min{c t^-p, 1}
  std::uint64_t jump_period = 0;

  static DriftSchedule constant(double delta) {
    check01(delta, "delta");
    DriftSchedule s;
    s.kind = ScheduleKind::constant;
    s.delta = delta;
    return s;
  }

  static DriftSchedule power_decay(double c, double p) {
    if (!(c >= 0.0))
      throw std::invalid_argument("power_decay: c must be nonnegative");
    if (!(p >= 0.0))
      throw std::invalid_argument("power_decay: p must be nonnegative");
    DriftSchedule s;
    s.kind = ScheduleKind::power_decay;
    s.c = c;
    s.p = p;
    return s;
  }

  static DriftSchedule constant_with_jumps(double delta,
                                           std::uint64_t jump_period) {
    check01(delta, "delta");
    if (jump_period == 0)
      throw std::invalid_argument("constant_with_jumps: period must be >= 1");
    DriftSchedule s;
    s.kind = ScheduleKind::constant_with_jumps;
    s.delta = delta;
    s.jump_period = jump_period;
    return s;
  }

  double at(std::uint64_t t) const {
    if (t < 2) throw std::invalid_argument("DriftSchedule: t must be >= 2");
    switch (kind) {
      case ScheduleKind::constant:
        return delta;
      case ScheduleKind::power_decay: {
        double v = c * std::pow(static_cast<double>(t), -p);
        return v < 1.0 ? v : 1.0;
      }
      case ScheduleKind::constant_with_jumps:
        return (t % jump_period == 0) ? 1.0 : delta;
    }
    return 0.0;
  }

 private:
  static void check01(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument(std::string("DriftSchedule: ") + name +
                                  " must lie in [0,1]");
  }
};

}  // namespace drift
