#pragma once

#include <cstdint>

#include "drift/geometry.hpp"
#include "drift/rng.hpp"

namespace drift {

// Execution policy for the data-parallel counting kernels. The two paths
// produce bitwise-identical counts: draws are split into fixed chunks, each
// chunk runs its own generator seeded by mix_seed(seed, chunk), and integer
// counts are summed. openmp falls back to serial when built without OpenMP.
enum class Exec { serial, openmp };

inline constexpr std::uint64_t kMcChunk = 1ULL << 14;

template <class Body>
std::uint64_t chunked_count(std::uint64_t n, std::uint64_t seed, Exec exec,
                            const Body& chunk_hits) {
  const long long chunks =
      static_cast<long long>((n + kMcChunk - 1) / kMcChunk);
  std::uint64_t total = 0;
  if (exec == Exec::openmp) {
#pragma omp parallel for reduction(+ : total) schedule(static)
    for (long long c = 0; c < chunks; ++c) {
      std::uint64_t lo = static_cast<std::uint64_t>(c) * kMcChunk;
      std::uint64_t len = (lo + kMcChunk <= n) ? kMcChunk : n - lo;
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
      total += chunk_hits(rng, len);
    }
  } else {
    for (long long c = 0; c < chunks; ++c) {
      std::uint64_t lo = static_cast<std::uint64_t>(c) * kMcChunk;
      std::uint64_t len = (lo + kMcChunk <= n) ? kMcChunk : n - lo;
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
      total += chunk_hits(rng, len);
    }
  }
  return total;
}

// Monte Carlo estimate of P(|X_1| <= gamma) on the unit sphere in R^d
double mc_band_probability(int d, double gamma, std::uint64_t n,
                           std::uint64_t seed, Exec exec = Exec::openmp);

// Monte Carlo estimate of the disagreement mass of two halfspaces
double mc_pair_disagreement(const UnitVector& u, const UnitVector& v,
                            std::uint64_t n, std::uint64_t seed,
                            Exec exec = Exec::openmp);

// Monte Carlo estimate of the mass of the disagreement region of a subset of
// a finite class (points where not all members predict alike)
double mc_dis_mass(const FiniteClass& cls,
                   const std::vector<std::size_t>& members, std::uint64_t n,
                   std::uint64_t seed, Exec exec = Exec::openmp);

}  // namespace drift
