#include "drift/montecarlo.hpp"

namespace drift {

double mc_band_probability(int d, double gamma, std::uint64_t n,
                           std::uint64_t seed, Exec exec) {
  if (d < 2)
    throw std::invalid_argument("mc_band_probability: d must be at least 2");
  std::uint64_t hits =
      chunked_count(n, seed, exec, [&](Rng& rng, std::uint64_t len) {
        Vec x;
        std::uint64_t h = 0;
        for (std::uint64_t i = 0; i < len; ++i) {
          sample_unit_sphere(d, rng, x);
          if (std::fabs(x[0]) <= gamma) ++h;
        }
        return h;
      });
  return static_cast<double>(hits) / static_cast<double>(n);
}

double mc_pair_disagreement(const UnitVector& u, const UnitVector& v,
                            std::uint64_t n, std::uint64_t seed, Exec exec) {
  if (u.dimension() != v.dimension())
    throw std::invalid_argument("mc_pair_disagreement: dimension mismatch");
  const int d = static_cast<int>(u.dimension());
  std::uint64_t hits =
      chunked_count(n, seed, exec, [&](Rng& rng, std::uint64_t len) {
        Vec x;
        std::uint64_t h = 0;
        for (std::uint64_t i = 0; i < len; ++i) {
          sample_unit_sphere(d, rng, x);
          if (sign_pm(dot(u.coords, x)) != sign_pm(dot(v.coords, x))) ++h;
        }
        return h;
      });
  return static_cast<double>(hits) / static_cast<double>(n);
}

double mc_dis_mass(const FiniteClass& cls,
                   const std::vector<std::size_t>& members, std::uint64_t n,
                   std::uint64_t seed, Exec exec) {
  if (members.empty())
    throw std::invalid_argument("mc_dis_mass: empty member set");
  const int d = static_cast<int>(cls.hypotheses[members[0]].weight.dimension());
  std::uint64_t hits =
      chunked_count(n, seed, exec, [&](Rng& rng, std::uint64_t len) {
        Vec x;
        std::uint64_t h = 0;
        for (std::uint64_t i = 0; i < len; ++i) {
          sample_unit_sphere(d, rng, x);
          int first = cls.hypotheses[members[0]].predict(x);
          for (std::size_t j = 1; j < members.size(); ++j) {
            if (cls.hypotheses[members[j]].predict(x) != first) {
              ++h;
              break;
            }
          }
        }
        return h;
      });
  return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace drift
