#pragma once

#include <vector>

#include "divstab/rational.hpp"

namespace divstab {

/// (f(h) - f(-h)) / 2h.
template <class F>
Rational central_difference(F&& f, const Rational& h) {
  return (f(h) - f(-h)) / (2 * h);
}

struct Extrapolation {
  Rational value;
  int levels = 0;
  bool converged = false;
};

/// Derivative of f at 0 by Richardson extrapolation of central differences
/// with steps h0, h0/2, h0/4, ...; stops once two successive diagonal
/// entries agree to rel_tol relative (absolute when the value is 0).
template <class F>
Extrapolation richardson_derivative(F&& f, const Rational& h0, double rel_tol = 1e-9, int max_levels = 14) {
  std::vector<Rational> prev;
  Rational h = h0;
  Extrapolation out;
  for (int k = 0; k < max_levels; ++k, h /= 2) {
    std::vector<Rational> row{central_difference(f, h)};
    Rational factor = 4;
    for (std::size_t j = 1; j <= static_cast<std::size_t>(k); ++j, factor *= 4)
      row.push_back(row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1));
    if (k > 0) {
      const Rational diff = abs(Rational(row.back() - prev.back()));
      const Rational scale = abs(Rational(row.back()));
      if (to_double(diff) <= rel_tol * (scale == 0 ? 1.0 : to_double(scale))) {
        out.value = row.back();
        out.levels = k + 1;
        out.converged = true;
        return out;
      }
    }
    prev = std::move(row);
    out.value = prev.back();
    out.levels = k + 1;
  }
  return out;
}

}  // namespace divstab
