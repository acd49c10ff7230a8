#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "divstab/rational.hpp"

namespace divstab {

/// Dense univariate polynomial with rational coefficients, c[i] multiplies x^i.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(Rational constant) : c_{std::move(constant)} { trim(); }
  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

  static Polynomial monomial(unsigned degree, const Rational& coeff = 1) {
    std::vector<Rational> c(degree + 1, Rational(0));
    c[degree] = coeff;
    return Polynomial(std::move(c));
  }
  /// x - r
  static Polynomial linear_root(const Rational& r) { return Polynomial({-r, Rational(1)}); }

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) { return *this += -o; }
  Polynomial& operator*=(const Rational& s) {
    for (auto& x : c_) x *= s;
    trim();
    return *this;
  }
  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return Polynomial(std::move(d));
  }

  /// Antiderivative vanishing at 0.
  Polynomial antiderivative() const {
    std::vector<Rational> a(c_.size() + 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<long>(i + 1);
    return Polynomial(std::move(a));
  }

  Rational integrate(const Rational& a, const Rational& b) const {
    const Polynomial F = antiderivative();
    return F(b) - F(a);
  }

  /// q(x) = p(x + s), by repeated synthetic division.
  Polynomial shifted(const Rational& s) const {
    std::vector<Rational> a = c_;
    const std::size_t n = a.size();
    for (std::size_t k = 0; k + 1 < n; ++k)
      for (std::size_t i = n - 1; i > k; --i) a[i - 1] += s * a[i];
    return Polynomial(std::move(a));
  }

  /// q(x) = p(s x).
  Polynomial dilated(const Rational& s) const {
    std::vector<Rational> a = c_;
    Rational f = 1;
    for (auto& x : a) {
      x *= f;
      f *= s;
    }
    return Polynomial(std::move(a));
  }

  /// Euclidean division; returns (quotient, remainder).
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw DomainError("nonzero divisor", "polynomial division by zero");
    std::vector<Rational> r = c_;
    const int dd = d.degree();
    std::vector<Rational> q(std::max(0, degree() - dd + 1), Rational(0));
    for (int i = degree(); i >= dd; --i) {
      const Rational f = r[i] / d.leading();
      q[i - dd] = f;
      for (int j = 0; j <= dd; ++j) r[i - dd + j] -= f * d.c_[j];
    }
    r.resize(std::max(0, dd));
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }

  Polynomial monic() const {
    if (is_zero()) return {};
    return *this * (Rational(1) / leading());
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Interpolating polynomial through (xs[i], ys[i]); xs pairwise distinct.
inline Polynomial lagrange(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  Polynomial result;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Polynomial basis(Rational(1));
    Rational denom = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      basis = basis * Polynomial::linear_root(xs[j]);
      denom *= xs[i] - xs[j];
    }
    result += basis * (ys[i] / denom);
  }
  return result;
}

/// Sturm chain of the square-free part of p; counts distinct real roots.
class SturmChain {
 public:
  explicit SturmChain(const Polynomial& p) {
    const Polynomial g = gcd(p, p.derivative());
    Polynomial sq = g.degree() > 0 ? p.divmod(g).first : p;
    chain_.push_back(sq);
    chain_.push_back(sq.derivative());
    while (!chain_.back().is_zero()) {
      const auto& a = chain_[chain_.size() - 2];
      const auto& b = chain_.back();
      chain_.push_back(-(a.divmod(b).second));
    }
    chain_.pop_back();
  }

  const Polynomial& squarefree() const { return chain_.front(); }

  int sign_changes(const Rational& x) const {
    int changes = 0, last = 0;
    for (const auto& q : chain_) {
      const int s = q(x).sign();
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  /// Number of distinct roots in (a, b]; a must not be a root.
  int count(const Rational& a, const Rational& b) const { return sign_changes(a) - sign_changes(b); }

 private:
  std::vector<Polynomial> chain_;
};

/// The fraction with the smallest denominator in the closed interval [lo, hi].
inline Rational simplest_between(Rational lo, Rational hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo.sign() < 0) {
    if (hi.sign() >= 0) return 0;
    return -simplest_between(-hi, -lo);
  }
  const Integer fl = numerator_of(lo) / denominator_of(lo);
  Integer ce = fl;
  if (Rational(fl) != lo) ce += 1;
  if (Rational(ce) <= hi) return Rational(ce);
  return Rational(fl) + Rational(1) / simplest_between(Rational(1) / (hi - fl), Rational(1) / (lo - fl));
}

/// Leading coefficient of the primitive integer polynomial proportional to p.
inline Integer primitive_leading(const Polynomial& p) {
  Integer l = 1;
  for (const auto& c : p.coeffs()) l = boost::multiprecision::lcm(l, denominator_of(c));
  Integer g = 0;
  for (const auto& c : p.coeffs()) g = boost::multiprecision::gcd(g, numerator_of(c) * (l / denominator_of(c)));
  Integer lead = numerator_of(p.leading()) * (l / denominator_of(p.leading())) / g;
  return lead < 0 ? Integer(-lead) : lead;
}

/// Smallest root of p in (lo, hi], assuming p(lo) != 0. The root must be
/// rational; an isolated irrational root raises a DomainError.
inline std::optional<Rational> smallest_root_in(const Polynomial& p, Rational lo, Rational hi) {
  if (p.is_zero()) throw DomainError("nonzero polynomial", "zero polynomial has no isolated roots");
  if (p(lo) == 0) throw DomainError("nonzero left endpoint", "root search started at a root");
  const SturmChain sturm(p);
  if (sturm.count(lo, hi) == 0) return std::nullopt;
  const Polynomial& sq = sturm.squarefree();
  const Integer q = primitive_leading(sq);
  const Rational width = Rational(1) / (Rational(q) * q * 2);
  while (true) {
    if (sq(hi) == 0 && sturm.count(lo, hi) == 1) return hi;
    const Rational mid = (lo + hi) / 2;
    if (sq(mid) == 0 || sturm.count(lo, mid) > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo < width && sturm.count(lo, hi) == 1) {
      const Rational s = simplest_between(lo, hi);
      if (s > lo && sq(s) == 0) return s;
      throw DomainError("rational root", "polynomial root in (" + to_string(lo) + ", " + to_string(hi) +
                                             "] is irrational");
    }
  }
}

}  // namespace divstab
