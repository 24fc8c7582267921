#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "drift/environment.hpp"
#include "drift/halfspace_drift.hpp"
#include "drift/rng.hpp"

using namespace drift;

TEST_CASE("reflection update worked cases") {
  UnitVector w(Vec{1.0, 0.0});
  double s2 = std::sqrt(2.0) / 2.0;
  UnitVector got = mod_perceptron_update(w, UnitVector(Vec{s2, s2}), -1);
  CHECK_EQ(got.coords[0], doctest::Approx(0.0).epsilon(1e-12));
  CHECK_EQ(got.coords[1], doctest::Approx(-1.0).epsilon(1e-12));

  // orthogonal point leaves the vector alone
  got = mod_perceptron_update(w, UnitVector(Vec{0.0, 1.0}), +1);
  CHECK_EQ(got.coords[0], doctest::Approx(1.0).epsilon(1e-14));
  CHECK_EQ(got.coords[1], doctest::Approx(0.0).epsilon(1e-14));

  // reflecting across the vector itself flips it
  got = mod_perceptron_update(w, w, -1);
  CHECK_EQ(got.coords[0], doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("reflection preserves norm over many random updates") {
  Rng rng(8);
  Vec w = sample_unit_sphere(6, rng);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    Vec x = sample_unit_sphere(6, rng);
    double wx = dot(w, x);
    for (std::size_t j = 0; j < 6; ++j) w[j] -= 2.0 * wx * x[j];
    worst = std::max(worst, std::fabs(norm(w) - 1.0));
  }
  CHECK_LT(worst, 1e-12);
}

TEST_CASE("mistake-driven reflections never move away from a static target") {
  Rng rng(17);
  int events = 0;
  while (events < 10000) {
    Vec t = sample_unit_sphere(4, rng);
    UnitVector w(sample_unit_sphere(4, rng));
    for (int i = 0; i < 400 && events < 10000; ++i) {
      Vec x = sample_unit_sphere(4, rng);
      int y = sign_pm(dot(t, x));
      if (sign_pm(dot(w.coords, x)) == y) continue;
      double before = dot(w.coords, t);
      w = mod_perceptron_update(w, UnitVector(x), y);
      double after = dot(w.coords, t);
      CHECK_GE(after, before - 1e-12);
      ++events;
    }
  }
}

TEST_CASE("burn-in initializer is inert when started at a static target") {
  DriftEnvironment env =
      make_rotating_halfspace_env(3, DriftSchedule::constant(0.0), 55);
  UnitVector target(env.target_weight());
  HalfspaceHypothesis carried{target};
  UnitVector w = mod_perceptron_init(env, 500, carried, &target);
  CHECK_LT(halfspace_disagreement(HalfspaceHypothesis{w},
                                  HalfspaceHypothesis{target}),
           1e-12);
  CHECK_EQ(env.rounds_emitted(), 500u);
}

TEST_CASE("burn-in initializer reaches a small error at desk scale") {
  // d=10 with 2000 rounds: nearly every seeded trial ends within 1/16
  int good = 0;
  for (int s = 0; s < 100; ++s) {
    DriftEnvironment env =
        make_rotating_halfspace_env(10, DriftSchedule::constant(0.0), 1000 + s);
    Vec e1(10, 0.0);
    e1[0] = 1.0;
    HalfspaceHypothesis carried{UnitVector(e1)};
    UnitVector w = mod_perceptron_init(env, 2000, carried);
    double dis = halfspace_disagreement(
        HalfspaceHypothesis{w}, HalfspaceHypothesis{UnitVector(env.target_weight())});
    if (dis <= 1.0 / 16.0) ++good;
  }
  CHECK_GE(good, 95);
}

TEST_CASE("burn-in trace rows reflect the carried predictor") {
  DriftEnvironment env =
      make_rotating_halfspace_env(2, DriftSchedule::constant(0.0), 3);
  Vec e1{1.0, 0.0};
  HalfspaceHypothesis carried{UnitVector(e1)};
  RunTrace tr;
  mod_perceptron_init(env, 300, carried, nullptr, &tr);
  REQUIRE_EQ(tr.rows.size(), 300u);
  CHECK_EQ(tr.total_queries(), 300u);  // every label is requested
  double expect =
      halfspace_disagreement(carried, HalfspaceHypothesis{UnitVector(env.target_weight())});
  CHECK_EQ(tr.rows.back().exact_error, doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("schedule arithmetic matches an independent recomputation") {
  Rng rng(2121);
  for (int rep = 0; rep < 20; ++rep) {
    AblConfig cfg;
    cfg.d = 2 + static_cast<int>(rng.uniform_int(9));
    cfg.Delta = rng.uniform01() * 0.01;
    cfg.delta = 0.01 + rng.uniform01() * 0.3;
    cfg.kappa = 0.02 + rng.uniform01() * 0.5;
    cfg.c5 = 0.1 + rng.uniform01();
    cfg.c7 = 0.1 + rng.uniform01();
    AblSchedule s = AblSchedule::derive(cfg);

    double c9 = 1.0 / (cfg.kappa * cfg.kappa * cfg.kappa);
    double raw = c9 * std::sqrt(cfg.Delta * cfg.d *
                                log_cap(1.0 / (cfg.kappa * cfg.delta)));
    double alpha = std::min(1.0, std::max(1.0 / 64.0, raw));
    CHECK_EQ(s.alpha, alpha);
    int K = alpha >= 1.0 ? 0 : static_cast<int>(std::ceil(std::log2(1.0 / alpha)));
    REQUIRE_EQ(s.K_max, K);
    int lceil = static_cast<int>(std::ceil(std::log2(4.0 / alpha)));
    std::uint64_t M1 = 0;
    for (int k = 1; k <= K; ++k) {
      double dk = cfg.delta / ((lceil - k) * static_cast<double>(lceil - k));
      CHECK_EQ(s.delta_k[k], dk);
      double mk = std::ceil(cfg.c5 * (std::pow(2.0, k) / (cfg.kappa * cfg.kappa)) *
                            cfg.d * log_cap(1.0 / (cfg.kappa * dk)));
      CHECK_EQ(s.m_k[k], static_cast<std::uint64_t>(mk));
      CHECK_EQ(s.tau_k[k],
               doctest::Approx(cfg.kappa * std::pow(2.0, -k) /
                               std::sqrt(static_cast<double>(cfg.d)))
                   .epsilon(1e-14));
      CHECK_EQ(s.b_prev[k],
               doctest::Approx(cfg.c7 * std::pow(2.0, 1 - k) /
                               std::sqrt(static_cast<double>(cfg.d)))
                   .epsilon(1e-14));
      CHECK_EQ(s.r_k[k],
               doctest::Approx(kPi * std::sqrt(2.0) / 8.0 * std::pow(2.0, -k))
                   .epsilon(1e-14));
      CHECK_GT(s.m_k[k], 0u);
      CHECK_GT(s.tau_k[k], 0.0);
      CHECK_GT(s.b_prev[k], 0.0);
      CHECK_GT(s.r_k[k], 0.0);
      CHECK_GT(s.delta_k[k], 0.0);
      M1 += s.m_k[k];
    }
    CHECK_EQ(s.M1, M1);
    CHECK_EQ(s.M, s.m0 + M1);
  }
}

TEST_CASE("schedule worked case and dump") {
  AblConfig cfg;
  cfg.d = 2;
  cfg.Delta = 0.0;
  AblSchedule s = AblSchedule::derive(cfg);
  CHECK_EQ(s.alpha, 1.0 / 64.0);  // floored so the epoch count stays finite
  CHECK_EQ(s.K_max, 6);
  CHECK_EQ(s.delta_k[6], doctest::Approx(0.05 / 4.0));
  CHECK_EQ(s.b_prev[1], doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_EQ(s.m0, 2000u);

  std::string d = s.dump();
  CHECK(d.find("alpha=0.015625") != std::string::npos);
  CHECK(d.find("K_max=6") != std::string::npos);
  CHECK(d.find("m_6=") != std::string::npos);
  CHECK(d.find("b_0=") != std::string::npos);

  // a huge drift budget collapses the refinement stage entirely
  cfg.Delta = 0.5;
  s = AblSchedule::derive(cfg);
  CHECK_EQ(s.alpha, 1.0);
  CHECK_EQ(s.K_max, 0);
  CHECK_EQ(s.M, s.m0);

  cfg.theoretical_m0 = true;
  s = AblSchedule::derive(cfg);
  CHECK_EQ(s.m0, AblSchedule::theoretical_m0(2, 0.05));
  CHECK_GT(s.m0, 1000000u);  // the conservative form is astronomically larger
}

TEST_CASE("hinge solver trivial cases") {
  UnitVector w(Vec{1.0, 0.0});
  QueryBatch empty;
  Vec v = hinge_minimize_ball(empty, w, 0.3, 0.2, 0.05);
  CHECK_EQ(v[0], 1.0);
  CHECK_EQ(v[1], 0.0);

  QueryBatch one;
  one.items.push_back({Vec{1.0, 0.0}, +1});
  v = hinge_minimize_ball(one, w, 0.3, 0.5, 0.05);
  CHECK_LE(hinge_total_loss(one, v, 0.5), 0.05);
}

TEST_CASE("hinge solver stays feasible and beats a grid oracle") {
  Rng rng(606);
  for (int rep = 0; rep < 10; ++rep) {
    UnitVector w(sample_unit_sphere(2, rng));
    QueryBatch W;
    for (int i = 0; i < 20; ++i) {
      // points near the separator band, labels noisy
      Vec x = sample_unit_sphere(2, rng);
      int y = sign_pm(dot(w.coords, x));
      if (rng.uniform01() < 0.15) y = -y;
      W.items.push_back({x, y});
    }
    const double r = 0.3, tau = 0.2, kappa = 0.05;
    Vec v = hinge_minimize_ball(W, w, r, tau, kappa);

    Vec diff{v[0] - w.coords[0], v[1] - w.coords[1]};
    CHECK_LE(norm(diff), r + 1e-9);
    CHECK_LE(norm(v), 1.0 + 1e-9);
    CHECK_GT(norm(v), 0.0);

    // exhaustive search over a square grid clipped to the feasible set
    double best = 1e300;
    const int G = 200;
    for (int a = 0; a <= G; ++a) {
      for (int b = 0; b <= G; ++b) {
        Vec c{w.coords[0] - r + 2.0 * r * a / G,
              w.coords[1] - r + 2.0 * r * b / G};
        Vec dd{c[0] - w.coords[0], c[1] - w.coords[1]};
        if (norm(dd) > r || norm(c) > 1.0 || norm(c) == 0.0) continue;
        best = std::min(best, hinge_total_loss(W, c, tau));
      }
    }
    // grid resolution contributes |W|/tau * step to the oracle's own slack
    double res = 20.0 / tau * (2.0 * r / G) * std::sqrt(2.0);
    CHECK_LE(hinge_total_loss(W, v, tau), best + kappa * 20 + res);
  }
}

TEST_CASE("hinge solver best loss is nonincreasing in budget") {
  Rng rng(7007);
  UnitVector w(sample_unit_sphere(2, rng));
  QueryBatch W;
  for (int i = 0; i < 25; ++i) {
    Vec x = sample_unit_sphere(2, rng);
    int y = rng.uniform01() < 0.2 ? -sign_pm(dot(w.coords, x))
                                  : sign_pm(dot(w.coords, x));
    W.items.push_back({x, y});
  }
  double prev = 1e300;
  for (std::uint64_t budget : {50ull, 200ull, 1000ull, 5000ull, 20000ull}) {
    Vec v = hinge_minimize_ball(W, w, 0.25, 0.1, 0.05, budget);
    double loss = hinge_total_loss(W, v, 0.1);
    CHECK_LE(loss, prev + 1e-12);
    prev = loss;
  }
}

TEST_CASE("refinement pass honors its query band and improves the weight") {
  AblConfig cfg;
  cfg.d = 2;
  cfg.Delta = 0.0;
  AblSchedule s = AblSchedule::derive(cfg);
  DriftEnvironment env =
      make_rotating_halfspace_env(2, DriftSchedule::constant(0.0), 404);
  UnitVector target(env.target_weight());
  HalfspaceHypothesis carried{target};

  AblAudit audit;
  RunTrace tr;
  AblResult res = abl_batch(env, carried, s, target, &tr, &audit);

  CHECK_LE(res.queries, s.M1);
  REQUIRE_EQ(audit.batches.size(), static_cast<std::size_t>(s.K_max));
  REQUIRE_EQ(audit.w.size(), static_cast<std::size_t>(s.K_max) + 1);
  std::uint64_t total = 0;
  for (int k = 1; k <= s.K_max; ++k) {
    const QueryBatch& Wk = audit.batches[k - 1];
    total += Wk.size();
    for (const auto& [x, y] : Wk.items)
      CHECK_LE(std::fabs(dot(audit.w[k - 1].coords, x)), s.b_prev[k]);
  }
  CHECK_EQ(total, res.queries);

  double dis = halfspace_disagreement(
      res.h, HalfspaceHypothesis{UnitVector(env.target_weight())});
  CHECK_LE(dis, 0.02);
  CHECK_EQ(tr.rows.size(), s.M1);
}

TEST_CASE("query fraction per epoch concentrates at the band mass") {
  AblConfig cfg;
  cfg.d = 5;
  cfg.Delta = 1e-6;
  cfg.c9 = 1.0;  // keeps several epochs alive at this tiny drift
  cfg.c5 = 0.02;
  AblSchedule s = AblSchedule::derive(cfg);
  REQUIRE_GE(s.K_max, 3);

  DriftEnvironment env =
      make_rotating_halfspace_env(5, DriftSchedule::constant(1e-6), 515);
  UnitVector target(env.target_weight());
  AblAudit audit;
  abl_batch(env, HalfspaceHypothesis{target}, s, target, nullptr, &audit);
  for (int k = 1; k <= s.K_max; ++k) {
    if (s.m_k[k] < 500) continue;
    double frac =
        static_cast<double>(audit.batches[k - 1].size()) / s.m_k[k];
    double want = band_probability(5, std::min(1.0, s.b_prev[k]));
    CHECK_LE(std::fabs(frac - want), 0.05);
  }
}

TEST_CASE("full pipeline settles after its first batch on a static target") {
  AblConfig cfg;
  cfg.d = 2;
  cfg.Delta = 0.0;
  AblSchedule s = AblSchedule::derive(cfg);
  for (int seed = 0; seed < 10; ++seed) {
    DriftEnvironment env =
        make_rotating_halfspace_env(2, DriftSchedule::constant(0.0), 600 + seed);
    RunTrace tr = run_drifting_halfspaces(env, 2 * s.M, s);
    REQUIRE_EQ(tr.rows.size(), 2 * s.M);
    CHECK_LE(tr.mistake_rate(s.M + 1, 2 * s.M), 0.05);
  }
}

TEST_CASE("pipeline horizon may cut a batch short") {
  AblConfig cfg;
  cfg.d = 2;
  cfg.Delta = 1e-4;
  cfg.c5 = 0.0075;
  cfg.c9 = 1.0;
  cfg.m0 = 150;
  AblSchedule s = AblSchedule::derive(cfg);
  DriftEnvironment env =
      make_rotating_halfspace_env(2, DriftSchedule::constant(1e-4), 11);
  std::uint64_t T = s.M + s.m0 + 10;  // ends inside the second batch
  RunTrace tr = run_drifting_halfspaces(env, T, s);
  CHECK_EQ(tr.rows.size(), T);
  for (std::size_t i = 0; i < tr.rows.size(); ++i)
    CHECK_EQ(tr.rows[i].t, static_cast<std::uint64_t>(i + 1));
}

TEST_CASE("pipeline mistake rate scales like the drift square root") {
  // tuned desk-scale constants; ratio target is 2 with generous margins
  auto run_rate = [](double Delta, int seed) {
    AblConfig c;
    c.d = 2;
    c.Delta = Delta;
    c.c5 = 0.0075;
    c.c9 = 1.0;
    c.m0 = 150;
    AblSchedule s = AblSchedule::derive(c);
    DriftEnvironment env =
        make_rotating_halfspace_env(2, DriftSchedule::constant(Delta), seed);
    RunTrace tr = run_drifting_halfspaces(env, 10 * s.M, s);
    return tr.mistake_rate(s.M + 1, 10 * s.M);
  };
  double lo = 0.0, hi = 0.0;
  for (int s = 0; s < 20; ++s) {
    lo += run_rate(1e-4, 7000 + s);
    hi += run_rate(4e-4, 8000 + s);
  }
  double ratio = hi / lo;
  CHECK_GE(ratio, 1.5);
  CHECK_LE(ratio, 2.8);
}
