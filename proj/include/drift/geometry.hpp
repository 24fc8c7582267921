#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "drift/rng.hpp"

namespace drift {

using Vec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kE = 2.71828182845904523536;

// sign with the deterministic boundary rule sign(0) = +1
inline int sign_pm(double x) { return x >= 0.0 ? +1 : -1; }

// ln(max{x, e}); always >= 1, total on the reals
inline double log_cap(double x) { return std::log(x > kE ? x : kE); }

// Sign of cos(a) without evaluating the cosine; agrees with
// sign_pm(std::cos(a)) bit-for-bit for every finite a. The quadrant
// boundaries k*pi/2 all round down to their nearest double, so each
// comparison below is inclusive; beyond 7*pi/2 the cosine fallback takes
// over (never reached for wrapped angle differences).
inline int cos_sign(double a) {
  double v = std::fabs(a);
  if (v <= 0x1.921fb54442d18p+0) return +1;  // pi/2
  if (v <= 0x1.2d97c7f3321d2p+2) return -1;  // 3*pi/2
  if (v <= 0x1.f6a7a2955385ep+2) return +1;  // 5*pi/2
  if (v <= 0x1.5fdbbe9bba775p+3) return -1;  // 7*pi/2
  return sign_pm(std::cos(a));
}

inline double hinge(double x, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("hinge: tau must be positive");
  double v = 1.0 - x / tau;
  return v > 0.0 ? v : 0.0;
}

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(Vec v) {
  double n = norm(v);
  if (!(n > 0.0)) throw std::invalid_argument("normalized: zero vector");
  for (double& c : v) c /= n;
  return v;
}

// Unit-norm vector, renormalized on construction.
struct UnitVector {
  Vec coords;

  explicit UnitVector(Vec v) : coords(normalized(std::move(v))) {}

  std::size_t dimension() const { return coords.size(); }
};

struct HalfspaceHypothesis {
  UnitVector weight;

  explicit HalfspaceHypothesis(UnitVector w) : weight(std::move(w)) {}
  explicit HalfspaceHypothesis(Vec w) : weight(std::move(w)) {}

  int predict(const Vec& x) const { return sign_pm(dot(weight.coords, x)); }
};

struct ThresholdHypothesis {
  double cut = 0.0;      // in [0,1]
  int polarity = +1;     // +1 or -1

  int predict(double x) const { return polarity * sign_pm(x - cut); }
};

// disagreement mass of two homogeneous halfspaces under the uniform sphere:
// angle between the weights divided by pi
inline double halfspace_disagreement(const UnitVector& u, const UnitVector& v) {
  if (u.dimension() != v.dimension())
    throw std::invalid_argument("halfspace_disagreement: dimension mismatch");
  double c = dot(u.coords, v.coords);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c) / kPi;
}

inline double halfspace_disagreement(const HalfspaceHypothesis& h,
                                     const HalfspaceHypothesis& g) {
  return halfspace_disagreement(h.weight, g.weight);
}

double regularized_incomplete_beta(double x, double a, double b);

// P(|w . X| <= gamma) for X uniform on the unit sphere in R^d.
// Evaluates to the regularized incomplete beta I_{gamma^2}(1/2, (d-1)/2).
double band_probability(int d, double gamma);

// uniform draw from the unit sphere in R^d (d = 1 gives +-1)
Vec sample_unit_sphere(int d, Rng& rng);

// allocation-free variant for hot loops; resizes out to d
void sample_unit_sphere(int d, Rng& rng, Vec& out);

template <class H, class X>
double empirical_disagreement(const H& h, const H& g,
                              const std::vector<X>& sample) {
  if (sample.empty())
    throw std::invalid_argument("empirical_disagreement: empty sample");
  std::size_t differ = 0;
  for (const X& x : sample)
    if (h.predict(x) != g.predict(x)) ++differ;
  return static_cast<double>(differ) / static_cast<double>(sample.size());
}

// Explicitly enumerated hypothesis class with an exact pairwise metric.
// Ordering is part of the contract: argmin ties break toward lower index.
struct FiniteClass {
  std::vector<HalfspaceHypothesis> hypotheses;

  std::size_t size() const { return hypotheses.size(); }

  double disagreement(std::size_t i, std::size_t j) const {
    return halfspace_disagreement(hypotheses[i], hypotheses[j]);
  }
};

// evenly spaced boundary angles on the circle, hypothesis j has weight
// (cos(2 pi j / n), sin(2 pi j / n))
FiniteClass make_angle_grid(std::size_t n);

}  // namespace drift
