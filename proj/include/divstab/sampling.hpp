#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "divstab/curve.hpp"

namespace divstab {

/// Seeded generators of exact test data. All draws go through
/// std::mt19937_64 with integer distributions, so a seed fixes the sample.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  Rational fraction(long lo, long hi, long den) { return Rational(integer(lo, hi), den); }

  /// Positive integer weights summing to `total` in `parts` pieces.
  std::vector<long> composition(long total, std::size_t parts) {
    std::vector<long> w(parts, 1);
    for (long k = static_cast<long>(parts); k < total; ++k) ++w[static_cast<std::size_t>(integer(0, static_cast<long>(parts) - 1))];
    return w;
  }

  /// Finite-type PL omega-psh potential on the rays of `points`.
  PLPotential potential(const CurveModel& m, const std::vector<std::string>& points) {
    PLPotential phi;
    phi.c = fraction(-6, 6, 2);
    const std::size_t active = static_cast<std::size_t>(integer(1, static_cast<long>(points.size())));
    const Rational budget = m.V * Rational(integer(1, 8), 8);
    std::vector<std::string> pool = points;
    std::shuffle(pool.begin(), pool.end(), rng_);
    const auto share = composition(12, active);
    for (std::size_t r = 0; r < active; ++r) {
      const Rational slope = budget * Rational(share[r], 12);
      const std::size_t breaks = static_cast<std::size_t>(integer(1, 3));
      const auto jumps = composition(6, breaks);
      RayProfile ray;
      Rational t = 0, s = -slope;
      for (std::size_t k = 0; k < breaks; ++k) {
        t += fraction(1, 8, 4);
        ray.slopes.push_back(s);
        ray.breaks.push_back(t);
        s += slope * Rational(jumps[k], 6);
      }
      ray.slopes.push_back(0);
      phi.rays[pool[r]] = std::move(ray);
    }
    return phi;
  }

  /// Divisorial probability measure with atoms on `points` and possibly at
  /// the trivial valuation.
  CurveMeasure measure(const std::vector<std::string>& points) {
    const std::size_t atoms = static_cast<std::size_t>(integer(1, 4));
    const bool trivial = integer(0, 3) == 0;
    const auto w = composition(24, atoms + (trivial ? 1 : 0));
    CurveMeasure mu;
    for (std::size_t k = 0; k < atoms; ++k)
      mu.atoms.push_back({points[static_cast<std::size_t>(integer(0, static_cast<long>(points.size()) - 1))],
                          fraction(1, 12, 4), Rational(w[k], 24)});
    if (trivial) mu.atoms.push_back({"", Rational(0), Rational(w.back(), 24)});
    return mu.normalized();
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace divstab
