#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>

#include "divstab/rational.hpp"

namespace divstab {

/// Process-unique identifier handed to every loaded or derived model.
inline std::uint64_t next_model_tag() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

/// Element of Num(X) in the fixed coordinate basis of its owning model.
struct NumClass {
  Vec coords;
  std::uint64_t owner = 0;

  std::size_t rank() const { return coords.size(); }
  const Rational& operator[](std::size_t i) const { return coords[i]; }
};

inline void require_same_owner(const NumClass& a, const NumClass& b) {
  if (a.owner != b.owner || a.coords.size() != b.coords.size())
    throw DomainError("same model", "classes from different models cannot be combined");
}

inline NumClass operator+(const NumClass& a, const NumClass& b) {
  require_same_owner(a, b);
  return {a.coords + b.coords, a.owner};
}
inline NumClass operator-(const NumClass& a, const NumClass& b) {
  require_same_owner(a, b);
  return {a.coords - b.coords, a.owner};
}
inline NumClass operator*(const Rational& s, const NumClass& a) { return {s * a.coords, a.owner}; }
inline bool operator==(const NumClass& a, const NumClass& b) { return a.owner == b.owner && a.coords == b.coords; }

/// If a = s b for a rational s, returns s.
inline std::optional<Rational> proportionality(const Vec& a, const Vec& b) {
  std::optional<Rational> s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] == 0) {
      if (a[i] != 0) return std::nullopt;
      continue;
    }
    const Rational r = a[i] / b[i];
    if (s && *s != r) return std::nullopt;
    s = r;
  }
  if (!s) return Rational(0);
  return s;
}

}  // namespace divstab
