#pragma once

#include <optional>
#include <vector>

#include "divstab/rational.hpp"

namespace divstab {

using Matrix = std::vector<Vec>;

inline Matrix zero_matrix(std::size_t rows, std::size_t cols) { return Matrix(rows, Vec(cols, Rational(0))); }

inline Vec mat_vec(const Matrix& a, const Vec& x) {
  Vec r(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = dot(a[i], x);
  return r;
}

/// x^T G y.
inline Rational bilinear(const Matrix& g, const Vec& x, const Vec& y) { return dot(x, mat_vec(g, y)); }

inline bool is_symmetric(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != a.size()) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (a[i][j] != a[j][i]) return false;
  }
  return true;
}

/// Row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> row_reduce(Matrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    const Rational inv = Rational(1) / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Matrix a) { return row_reduce(a).size(); }

/// Unique solution of A x = b, or nullopt when A is singular.
inline std::optional<Vec> solve(const Matrix& a, const Vec& b) {
  const std::size_t n = a.size();
  Matrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = a[i];
    aug[i].push_back(b[i]);
  }
  const auto pivots = row_reduce(aug);
  if (pivots.size() != n || (n > 0 && pivots.back() != n - 1)) return std::nullopt;
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

inline Rational determinant(Matrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

struct Inertia {
  std::size_t positive = 0, negative = 0, zero = 0;
};

/// Sylvester inertia of a symmetric matrix via exact congruence diagonalization.
inline Inertia inertia(Matrix a) {
  const std::size_t n = a.size();
  Inertia in;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][p] == 0) ++p;
    if (p == n) {
      // No nonzero diagonal entry left: fold an off-diagonal one onto the diagonal.
      std::size_t pi = n, pj = n;
      for (std::size_t i = k; i < n && pi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (a[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == n) {
        in.zero += n - k;
        return in;
      }
      for (std::size_t j = 0; j < n; ++j) a[pi][j] += a[pj][j];
      for (std::size_t i = 0; i < n; ++i) a[i][pi] += a[i][pj];
      p = pi;
    }
    if (p != k) {
      std::swap(a[p], a[k]);
      for (auto& row : a) std::swap(row[p], row[k]);
    }
    const Rational d = a[k][k];
    (d.sign() > 0 ? in.positive : in.negative)++;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      const Rational f = a[i][k] / d;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      for (std::size_t j = k; j < n; ++j) a[j][i] = a[i][j];
    }
  }
  return in;
}

inline bool is_negative_definite(const Matrix& a) {
  const Inertia in = inertia(a);
  return in.negative == a.size();
}

inline Matrix submatrix(const Matrix& a, const std::vector<std::size_t>& idx) {
  Matrix s(idx.size(), Vec(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) s[i][j] = a[idx[i]][idx[j]];
  return s;
}

}  // namespace divstab
