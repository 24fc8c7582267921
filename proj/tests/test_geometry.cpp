#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "drift/geometry.hpp"
#include "drift/montecarlo.hpp"
#include "drift/rng.hpp"

using namespace drift;

TEST_CASE("log_cap clamps below e") {
  CHECK(log_cap(1.0) == doctest::Approx(1.0));
  CHECK(log_cap(kE * kE) == doctest::Approx(2.0));
  CHECK(log_cap(-5.0) == doctest::Approx(1.0));
  CHECK(log_cap(0.0) == doctest::Approx(1.0));
}

TEST_CASE("hinge values and convexity") {
  CHECK(hinge(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(hinge(0.7, 0.7) == doctest::Approx(0.0));
  CHECK(hinge(0.5, 1.0) == doctest::Approx(0.5));
  CHECK(hinge(2.0, 1.0) == 0.0);
  CHECK_THROWS_AS(hinge(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hinge(0.5, -1.0), std::invalid_argument);

  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    double x1 = rng.uniform(-3.0, 3.0);
    double x2 = rng.uniform(-3.0, 3.0);
    double lam = rng.uniform01();
    double tau = rng.uniform(0.1, 2.0);
    double lhs = hinge(lam * x1 + (1.0 - lam) * x2, tau);
    double rhs = lam * hinge(x1, tau) + (1.0 - lam) * hinge(x2, tau);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("sign convention at zero") {
  CHECK(sign_pm(0.0) == 1);
  CHECK(sign_pm(-0.0) == 1);
  CHECK(sign_pm(1e-300) == 1);
  CHECK(sign_pm(-1e-300) == -1);
}

TEST_CASE("sample_unit_sphere symmetry") {
  Rng rng(11);
  const int n = 100000;

  SUBCASE("d=1 is a fair sign") {
    int pos = 0;
    for (int i = 0; i < n; ++i)
      if (sample_unit_sphere(1, rng)[0] > 0) ++pos;
    double freq = static_cast<double>(pos) / n;
    CHECK(std::fabs(freq - 0.5) < 0.01);
  }

  SUBCASE("d=3 coordinate means vanish") {
    double s[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
      Vec x = sample_unit_sphere(3, rng);
      for (int j = 0; j < 3; ++j) s[j] += x[j];
    }
    for (int j = 0; j < 3; ++j) CHECK(std::fabs(s[j] / n) < 0.01);
  }

  SUBCASE("d=2 angle is uniform (KS)") {
    std::vector<double> a;
    a.reserve(n);
    for (int i = 0; i < n; ++i) {
      Vec x = sample_unit_sphere(2, rng);
      double ang = std::atan2(x[1], x[0]);
      if (ang < 0) ang += 2.0 * kPi;
      a.push_back(ang / (2.0 * kPi));
    }
    std::sort(a.begin(), a.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
      double lo = static_cast<double>(i) / n;
      double hi = static_cast<double>(i + 1) / n;
      ks = std::max(ks, std::max(std::fabs(a[i] - lo), std::fabs(a[i] - hi)));
    }
    CHECK(ks < 0.01);
  }
}

TEST_CASE("halfspace_disagreement is angle over pi") {
  UnitVector u(Vec{1.0, 0.0});
  UnitVector v(Vec{0.0, 1.0});
  CHECK(halfspace_disagreement(u, u) == doctest::Approx(0.0));
  CHECK(halfspace_disagreement(u, v) == doctest::Approx(0.5));
  UnitVector w(Vec{-1.0, 0.0});
  CHECK(halfspace_disagreement(u, w) == doctest::Approx(1.0));
  UnitVector z(Vec{1.0, 0.0, 0.0});
  CHECK_THROWS_AS(halfspace_disagreement(u, z), std::invalid_argument);
}

TEST_CASE("halfspace_disagreement metric properties") {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    UnitVector a(sample_unit_sphere(4, rng));
    UnitVector b(sample_unit_sphere(4, rng));
    UnitVector c(sample_unit_sphere(4, rng));
    double ab = halfspace_disagreement(a, b);
    double ba = halfspace_disagreement(b, a);
    double ac = halfspace_disagreement(a, c);
    double cb = halfspace_disagreement(c, b);
    CHECK(ab == doctest::Approx(ba));
    CHECK(ab <= ac + cb + 1e-12);
  }
}

TEST_CASE("band_probability closed-form values") {
  CHECK(band_probability(2, 1.0) == doctest::Approx(1.0));
  CHECK(band_probability(7, 1.5) == doctest::Approx(1.0));
  CHECK(band_probability(5, 0.0) == doctest::Approx(0.0));
  // first coordinate of the 2-sphere is uniform on [-1,1]
  CHECK(std::fabs(band_probability(3, 0.25) - 0.25) < 1e-10);
  // the band of half-width sqrt(2)/2 covers half the circle
  CHECK(std::fabs(band_probability(2, std::sqrt(0.5)) - 0.5) < 1e-10);
  CHECK_THROWS_AS(band_probability(1, 0.3), std::invalid_argument);
}

TEST_CASE("band_probability monotone and within linear envelope") {
  for (int d : {2, 3, 5, 10}) {
    double prev = 0.0;
    for (double g = 0.0; g <= 1.001; g += 0.01) {
      double p = band_probability(d, g);
      CHECK(p >= prev - 1e-12);
      prev = p;
    }
    // two-sided linear bounds on [0, 1/sqrt(d)]; the smallest slope over
    // this range is 2/(pi sqrt(2)) ~ 0.45 at d=2, the largest sqrt(2/pi)
    for (double g = 0.01 / std::sqrt(d); g <= 1.0 / std::sqrt(d); g += 0.05) {
      double p = band_probability(d, g);
      CHECK(p >= 0.44 * g * std::sqrt(static_cast<double>(d)));
      CHECK(p <= 1.2 * g * std::sqrt(static_cast<double>(d)));
    }
  }
}

TEST_CASE("empirical_disagreement basics and convergence") {
  Rng rng(17);
  std::vector<Vec> sample;
  for (int i = 0; i < 100000; ++i) sample.push_back(sample_unit_sphere(2, rng));

  HalfspaceHypothesis h(Vec{1.0, 0.0});
  HalfspaceHypothesis g45(Vec{std::sqrt(0.5), std::sqrt(0.5)});
  HalfspaceHypothesis g90(Vec{0.0, 1.0});
  HalfspaceHypothesis hneg(Vec{-1.0, 0.0});

  CHECK(empirical_disagreement(h, h, sample) == 0.0);
  CHECK(empirical_disagreement(h, hneg, sample) == 1.0);
  // an eighth of a turn disagrees on a quarter of the circle, a quarter
  // turn on half of it
  CHECK(halfspace_disagreement(h, g45) == doctest::Approx(0.25));
  CHECK(std::fabs(empirical_disagreement(h, g45, sample) - 0.25) < 0.01);
  CHECK(std::fabs(empirical_disagreement(h, g90, sample) - 0.5) < 0.01);

  std::vector<Vec> empty;
  CHECK_THROWS_AS(empirical_disagreement(h, g90, empty), std::invalid_argument);

  for (int i = 0; i < 20; ++i) {
    HalfspaceHypothesis a(sample_unit_sphere(2, rng));
    HalfspaceHypothesis b(sample_unit_sphere(2, rng));
    double exact = halfspace_disagreement(a, b);
    CHECK(std::fabs(empirical_disagreement(a, b, sample) - exact) < 0.01);
  }
}

TEST_CASE("mc kernels: serial equals openmp bitwise") {
  double s1 = mc_band_probability(3, 0.3, 200000, 99, Exec::serial);
  double p1 = mc_band_probability(3, 0.3, 200000, 99, Exec::openmp);
  CHECK(s1 == p1);

  UnitVector u(Vec{1.0, 0.0, 0.0});
  UnitVector v(Vec{0.0, 1.0, 0.0});
  double s2 = mc_pair_disagreement(u, v, 100000, 5, Exec::serial);
  double p2 = mc_pair_disagreement(u, v, 100000, 5, Exec::openmp);
  CHECK(s2 == p2);
  CHECK(std::fabs(s2 - 0.5) < 0.01);

  FiniteClass grid = make_angle_grid(64);
  std::vector<std::size_t> members{0, 1, 2, 3};
  double s3 = mc_dis_mass(grid, members, 100000, 21, Exec::serial);
  double p3 = mc_dis_mass(grid, members, 100000, 21, Exec::openmp);
  CHECK(s3 == p3);
  // three grid steps of spread: disagreement mass 2 * (3/64 * 2pi) / (2pi)
  CHECK(std::fabs(s3 - 3.0 / 32.0) < 0.01);
}

TEST_CASE("mc band estimate brackets the closed form") {
  for (int d : {2, 5}) {
    for (double g : {0.1, 0.4}) {
      double mc = mc_band_probability(d, g, 400000, 1234);
      CHECK(std::fabs(mc - band_probability(d, g)) < 5e-3);
    }
  }
}

TEST_CASE("unit vector renormalizes") {
  UnitVector u(Vec{3.0, 4.0});
  CHECK(norm(u.coords) == doctest::Approx(1.0));
  CHECK(u.coords[0] == doctest::Approx(0.6));
  CHECK_THROWS_AS(UnitVector(Vec{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("threshold hypothesis boundary rule") {
  ThresholdHypothesis h{0.5, +1};
  CHECK(h.predict(0.5) == 1);   // sign(0) = +1
  CHECK(h.predict(0.49) == -1);
  ThresholdHypothesis g{0.5, -1};
  CHECK(g.predict(0.5) == -1);
  CHECK(g.predict(0.49) == 1);
}
