#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drift/environment.hpp"
#include "drift/geometry.hpp"
#include "drift/trace.hpp"

namespace drift {

// Inputs for the margin-band pipeline schedule. The c* multipliers default
// to the relations that make the epoch geometry work (c8 tied to kappa,
// c9 to 1/kappa^3, c10 = pi*sqrt(2)/8); magnitudes for c5 and c7 are kept
// at desk scale. Negative c8/c9/c10 mean "use the default relation".
struct AblConfig {
  int d = 2;
  double Delta = 0.0;
  double delta = 0.05;
  double kappa = 0.1;
  double c5 = 1.0;
  double c7 = 1.0;
  double c8 = -1.0;
  double c9 = -1.0;
  double c10 = -1.0;
  std::uint64_t m0 = 2000;
  bool theoretical_m0 = false;  // replace m0 by the conservative closed form
  double alpha_min = 1.0 / 64.0;  // keeps the epoch count finite at Delta=0
  std::uint64_t solver_budget = 20000;
};

// Fully derived epoch schedule. Arrays are 1-based: index k in {1..K_max}
// describes epoch k; b_prev[k] is the query band used during epoch k.
struct AblSchedule {
  int d = 2;
  double Delta = 0.0;
  double delta = 0.05;
  double kappa = 0.1;
  double c5 = 1.0, c7 = 1.0, c8 = 0.1, c9 = 1000.0, c10 = 0.0;
  double alpha = 1.0;
  std::uint64_t m0 = 2000;
  int K_max = 0;
  std::vector<std::uint64_t> m_k;
  std::vector<double> tau_k;
  std::vector<double> b_prev;
  std::vector<double> r_k;
  std::vector<double> delta_k;
  std::uint64_t M = 0;   // m0 plus all epoch lengths
  std::uint64_t M1 = 0;  // epoch lengths only
  std::uint64_t solver_budget = 20000;

  static AblSchedule derive(const AblConfig& cfg);
  static std::uint64_t theoretical_m0(int d, double delta);
  std::string dump() const;  // key=value text, one field per line
};

struct QueryBatch {
  std::vector<std::pair<Vec, int>> items;
  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

// reflection across the hyperplane normal to x; exact norm preservation
UnitVector mod_perceptron_update(const UnitVector& w, const UnitVector& x,
                                 int y);

// Burn-in initializer: consumes m0 rounds, predicting each with the carried
// hypothesis and querying every label; the internal vector reflects on its
// own mistakes. Starts from w_init when given, otherwise from the carried
// weight. Appends per-round rows to trace when provided.
UnitVector mod_perceptron_init(DriftEnvironment& env, std::uint64_t m0,
                               const HalfspaceHypothesis& carried,
                               const UnitVector* w_init = nullptr,
                               RunTrace* trace = nullptr);

// Constrained hinge minimization by projected subgradient descent: step
// r/sqrt(i) along the normalized subgradient, alternating projections onto
// the two balls, best feasible iterate kept. The returned loss is within
// kappa*|W| of the constrained optimum once the budget covers the descent
// horizon; an empty batch returns w_prev.
Vec hinge_minimize_ball(const QueryBatch& W, const UnitVector& w_prev,
                        double r, double tau, double kappa,
                        std::uint64_t budget = 20000);

double hinge_total_loss(const QueryBatch& W, const Vec& v, double tau);

struct AblAudit {
  std::vector<QueryBatch> batches;  // W_k per epoch, 0-based k-1
  std::vector<UnitVector> w;        // w[0]=w0 .. w[K_max]
};

struct AblResult {
  HalfspaceHypothesis h;
  std::uint64_t queries = 0;
};

// One refinement pass: epoch k consumes m_k rounds predicting with the
// carried hypothesis, queries labels inside the band |w_{k-1} . x| <=
// b_prev[k], and re-fits by constrained hinge minimization. Returns the
// next-to-last weight by default (return_last picks the final one).
AblResult abl_batch(DriftEnvironment& env, const HalfspaceHypothesis& carried,
                    const AblSchedule& sched, const UnitVector& w0,
                    RunTrace* trace = nullptr, AblAudit* audit = nullptr,
                    bool return_last = false);

// Full streaming driver: repeated batches of burn-in plus refinement, each
// batch predicting throughout with the hypothesis produced by the previous
// one. A horizon that cuts a batch short truncates the trace mid-batch.
RunTrace run_drifting_halfspaces(DriftEnvironment& env, std::uint64_t T,
                                 const AblSchedule& sched);

}  // namespace drift
