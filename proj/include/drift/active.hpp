#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "drift/environment.hpp"
#include "drift/geometry.hpp"
#include "drift/montecarlo.hpp"
#include "drift/trace.hpp"

namespace drift {

// Surviving subset of an explicit hypothesis class. alive holds class
// indices in ascending order; mistakes holds the counts from the latest
// prune, parallel to alive.
struct VersionSpace {
  const FiniteClass* cls = nullptr;
  std::vector<std::size_t> alive;
  std::vector<std::uint32_t> mistakes;

  static VersionSpace full(const FiniteClass& c);
  bool empty() const { return alive.empty(); }
};

struct ActiveConfig {
  int d = 2;
  double Delta = 1e-4;
  double c1 = 1.0;

  // smallest power of two >= max(4, ceil(c1*sqrt(d/Delta)))
  std::uint64_t batch_length() const;
};

// true iff two alive hypotheses disagree at x (first-vs-rest short circuit)
bool dis_membership(const VersionSpace& V, const Vec& x);

// pruning threshold for epoch k; zero drift drops both terms
double threshold_tk(int k, int d, double Delta);

struct PruneResult {
  VersionSpace space;
  std::size_t best = 0;  // class index of the empirical best
};

// Keep every hypothesis whose mistake count on the queried examples exceeds
// the empirical best's by at most tk. The best itself always survives; an
// empty query set keeps the space as is with the first alive as best.
PruneResult prune_version_space(const VersionSpace& V,
                                const std::vector<std::pair<Vec, int>>& Qk,
                                double tk);

// Batched doubling-epoch driver: each batch spans batch_length() rounds,
// reopens the full class, predicts round 1 with the first hypothesis, then
// runs epochs of 2^k rounds that query inside the disagreement region and
// prune at epoch end. The trace marks per-round mistakes and queries.
RunTrace run_drifting_active(DriftEnvironment& env, std::uint64_t T,
                             const ActiveConfig& cfg, const FiniteClass& cls);

struct ThetaEstimate {
  double theta = 0.0;
  double half_width = 0.0;  // Monte Carlo 95% half-width at the maximizing r
};

// sup over the radius grid of (estimated DIS mass of the radius-r ball
// around hypothesis h) / r; ball membership is exact, mass is Monte Carlo
ThetaEstimate estimate_disagreement_coefficient(
    const FiniteClass& cls, std::size_t h_index, double r0,
    const std::vector<double>& r_grid, std::uint64_t n,
    std::uint64_t seed = 12345, Exec exec = Exec::openmp);

}  // namespace drift
