#pragma once

#include <optional>
#include <string>
#include <vector>

#include "divstab/polynomial.hpp"

namespace divstab {

/// Continuous piecewise-polynomial function on [0, inf). Piece i lives on
/// [b_i, b_{i+1}] and is stored in the shifted variable (x - b_i); beyond the
/// last breakpoint the function equals a constant tail.
class PiecewisePoly {
 public:
  PiecewisePoly() : breaks_{Rational(0)} {}

  /// `pieces[i]` is expressed in the local variable x - breaks[i].
  PiecewisePoly(std::vector<Rational> breaks, std::vector<Polynomial> pieces, Rational tail)
      : breaks_(std::move(breaks)), pieces_(std::move(pieces)), tail_(std::move(tail)) {
    validate();
  }

  static PiecewisePoly constant(const Rational& c) { return PiecewisePoly({Rational(0)}, {}, c); }

  /// Builds from pieces written in the global variable.
  static PiecewisePoly from_global(std::vector<Rational> breaks, const std::vector<Polynomial>& global,
                                   Rational tail) {
    std::vector<Polynomial> local;
    local.reserve(global.size());
    for (std::size_t i = 0; i < global.size(); ++i) local.push_back(global[i].shifted(breaks[i]));
    return PiecewisePoly(std::move(breaks), std::move(local), std::move(tail));
  }

  const std::vector<Rational>& breakpoints() const { return breaks_; }
  const std::vector<Polynomial>& pieces() const { return pieces_; }
  const Rational& tail() const { return tail_; }
  const Rational& support_end() const { return breaks_.back(); }

  /// Piece i in the global variable.
  Polynomial global_piece(std::size_t i) const { return pieces_[i].shifted(-breaks_[i]); }

  int max_degree() const {
    int d = 0;
    for (const auto& p : pieces_) d = std::max(d, p.degree());
    return d;
  }

  Rational operator()(const Rational& x) const {
    if (x.sign() < 0) throw DomainError("nonnegative argument", "evaluation at " + to_string(x) + " < 0");
    if (x >= breaks_.back()) return tail_;
    const std::size_t i = piece_index(x);
    return pieces_[i](x - breaks_[i]);
  }

  /// One-sided limits at a breakpoint; they coincide by the continuity invariant.
  Rational left_limit(std::size_t break_index) const {
    if (break_index == 0) return (*this)(Rational(0));
    const std::size_t i = break_index - 1;
    return pieces_[i](breaks_[break_index] - breaks_[i]);
  }
  Rational right_limit(std::size_t break_index) const {
    if (break_index == pieces_.size()) return tail_;
    return pieces_[break_index](Rational(0));
  }

  Rational integrate(const Rational& a, const Rational& b) const {
    if (a > b)
      throw DomainError("ordered bounds", "integration from " + to_string(a) + " to " + to_string(b));
    if (a.sign() < 0) throw DomainError("nonnegative argument", "integration from " + to_string(a));
    Rational sum = 0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const Rational lo = std::max(a, breaks_[i]);
      const Rational hi = std::min(b, breaks_[i + 1]);
      if (lo < hi) sum += pieces_[i].integrate(lo - breaks_[i], hi - breaks_[i]);
    }
    if (b > breaks_.back()) sum += tail_ * (b - std::max(a, breaks_.back()));
    return sum;
  }

  /// Integral over the support [0, last breakpoint]; the tail must vanish for
  /// the improper integral to be finite.
  Rational integrate_support() const { return integrate(Rational(0), breaks_.back()); }

  PiecewisePoly scaled(const Rational& s) const {
    std::vector<Polynomial> p = pieces_;
    for (auto& q : p) q *= s;
    return PiecewisePoly(breaks_, std::move(p), tail_ * s);
  }

  /// Smallest x >= 0 with f(x) = 0, given f(0) > 0.
  std::optional<Rational> first_nonneg_root() const {
    if ((*this)(Rational(0)).sign() <= 0)
      throw DomainError("positive start value", "f(0) = " + to_string((*this)(Rational(0))) + " <= 0");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const Rational len = breaks_[i + 1] - breaks_[i];
      if (pieces_[i].is_zero()) return breaks_[i];
      if (auto r = smallest_root_in(pieces_[i], Rational(0), len)) return breaks_[i] + *r;
    }
    return std::nullopt;
  }

 private:
  std::size_t piece_index(const Rational& x) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
  }

  void validate() const {
    if (breaks_.empty() || breaks_.front() != 0)
      throw DomainError("breakpoints start at 0", "first breakpoint must be 0");
    if (pieces_.size() + 1 != breaks_.size())
      throw DomainError("piece count", std::to_string(pieces_.size()) + " pieces for " +
                                           std::to_string(breaks_.size()) + " breakpoints");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      if (breaks_[i] <= breaks_[i - 1]) throw DomainError("strictly increasing breakpoints", to_string(breaks_[i]));
    for (std::size_t i = 1; i <= pieces_.size(); ++i)
      if (left_limit(i) != right_limit(i))
        throw DomainError("continuity", "jump at " + to_string(breaks_[i]) + ": " + to_string(left_limit(i)) +
                                            " vs " + to_string(right_limit(i)));
  }

  std::vector<Rational> breaks_;
  std::vector<Polynomial> pieces_;
  Rational tail_;
};

}  // namespace divstab
