#include "drift/geometry.hpp"

namespace drift {
namespace {

// Continued fraction for the incomplete beta function, modified Lentz scheme.
double incomplete_beta_cf(double a, double b, double x) {
  const double eps = 1e-15;
  const double fpmin = 1e-300;
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lnfront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                   a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(lnfront);
  // symmetry switch keeps the continued fraction in its fast-converging range
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * incomplete_beta_cf(a, b, x) / a;
  return 1.0 - front * incomplete_beta_cf(b, a, 1.0 - x) / b;
}

double band_probability(int d, double gamma) {
  if (d < 2)
    throw std::invalid_argument("band_probability: d must be at least 2");
  if (!(gamma >= 0.0))
    throw std::invalid_argument("band_probability: gamma must be nonnegative");
  if (gamma >= 1.0) return 1.0;
  return regularized_incomplete_beta(gamma * gamma, 0.5, (d - 1) / 2.0);
}

void sample_unit_sphere(int d, Rng& rng, Vec& out) {
  if (d < 1) throw std::invalid_argument("sample_unit_sphere: d must be >= 1");
  out.resize(d);
  for (;;) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      out[i] = rng.normal();
      s += out[i] * out[i];
    }
    if (s > 1e-24) {
      double inv = 1.0 / std::sqrt(s);
      for (int i = 0; i < d; ++i) out[i] *= inv;
      return;
    }
  }
}

Vec sample_unit_sphere(int d, Rng& rng) {
  Vec v;
  sample_unit_sphere(d, rng, v);
  return v;
}

FiniteClass make_angle_grid(std::size_t n) {
  if (n == 0) throw std::invalid_argument("make_angle_grid: empty grid");
  FiniteClass c;
  c.hypotheses.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    double a = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    c.hypotheses.emplace_back(Vec{std::cos(a), std::sin(a)});
  }
  return c;
}

}  // namespace drift
