#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "divstab/errors.hpp"

namespace divstab {

/// Exact rational scalar; GMP keeps it in lowest terms with a positive
/// denominator after every operation.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using Vec = std::vector<Rational>;

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign(const Rational& q) { return q.sign(); }

inline Rational abs(const Rational& q) { return q.sign() < 0 ? Rational(-q) : q; }

/// Serializes as "p/q", or "p" when q = 1.
inline std::string to_string(const Rational& q) {
  const Integer den = denominator_of(q);
  if (den == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + den.str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Float rendering used in reports; never fed back into computations.
inline std::string to_float_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}
inline std::string to_float_string(const Rational& q) { return to_float_string(to_double(q)); }

namespace detail {
inline bool is_integer_literal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}
}  // namespace detail

/// Parses "p", "-p", "p/q". Decimal literals are rejected so that no float
/// ever enters the exact pipeline.
inline Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den) || den[0] == '-')
    throw SchemaError("not an exact rational literal: \"" + std::string(text) + "\"");
  Integer n(num[0] == '+' ? num.substr(1) : num);
  Integer d(den[0] == '+' ? den.substr(1) : den);
  if (d == 0) throw SchemaError("zero denominator in \"" + std::string(text) + "\"");
  return Rational(n, d);
}

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent) {
    if (exponent & 1u) result *= b;
    b *= b;
    exponent >>= 1u;
  }
  return result;
}

inline Rational pow(const Rational& base, int exponent) {
  if (exponent >= 0) return pow(base, static_cast<unsigned>(exponent));
  if (base == 0) throw DomainError("nonzero base", "negative power of zero");
  return pow(Rational(1) / base, static_cast<unsigned>(-exponent));
}

inline Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}
inline Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
inline Vec operator*(const Rational& s, const Vec& a) {
  Vec r(a);
  for (auto& x : r) x *= s;
  return r;
}
inline Vec operator-(const Vec& a) { return Rational(-1) * a; }

inline bool is_zero(const Vec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

inline std::string to_string(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += to_string(v[i]);
  }
  return s + ")";
}

}  // namespace divstab
