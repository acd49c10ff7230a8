#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "divstab/curve.hpp"
#include "divstab/surface.hpp"
#include "divstab/toric.hpp"

namespace divstab {

enum class Backend { curve, surface, toric };

inline const char* backend_name(Backend b) {
  switch (b) {
    case Backend::curve: return "curve";
    case Backend::surface: return "surface";
    case Backend::toric: return "toric";
  }
  return "?";
}

/// A loaded model of one of the three backends, immutable after load.
struct VarietyModel {
  std::variant<CurveModel, SurfaceModel, ToricModel> data;
  std::optional<Vec> default_omega;  ///< coordinates of the model's default polarization

  Backend backend() const { return static_cast<Backend>(data.index()); }
  const CurveModel& curve() const { return std::get<CurveModel>(data); }
  const SurfaceModel& surface() const { return std::get<SurfaceModel>(data); }
  const ToricModel& toric() const { return std::get<ToricModel>(data); }

  std::uint64_t tag() const {
    return std::visit([](const auto& m) { return m.tag; }, data);
  }

  std::size_t dimension() const {
    switch (backend()) {
      case Backend::curve: return 1;
      case Backend::surface: return 2;
      case Backend::toric: return toric().n;
    }
    return 0;
  }

  std::size_t rank() const {
    switch (backend()) {
      case Backend::curve: return 1;
      case Backend::surface: return surface().rank();
      case Backend::toric: return toric().rank();
    }
    return 0;
  }

  NumClass make_class(Vec coords) const {
    if (coords.size() != rank())
      throw DomainError("class length", "expected " + std::to_string(rank()) + " coordinates, got " +
                                            std::to_string(coords.size()));
    return {std::move(coords), tag()};
  }

  /// K_X + B.
  NumClass canonical_class() const {
    switch (backend()) {
      case Backend::curve: return make_class({curve().canonical_degree()});
      case Backend::surface: return make_class(surface().log_canonical());
      case Backend::toric: return make_class(toric().reduce(toric().per_ray_canonical()));
    }
    return {};
  }

  NumClass omega() const {
    if (!default_omega) throw ConfigError("model has no default polarization");
    return make_class(*default_omega);
  }

  void check(const NumClass& a) const {
    if (a.owner != tag() || a.coords.size() != rank())
      throw DomainError("same model", "class does not belong to this model");
  }

  /// Values that are >= 0 on nef classes and generate the dual of the nef
  /// cone: curve classes on surfaces, convexity values on toric fans.
  Vec positivity_tests(const NumClass& a) const {
    check(a);
    switch (backend()) {
      case Backend::curve: return {a[0]};
      case Backend::surface: {
        const auto& s = surface();
        if (s.extremal.empty()) throw ConfigError("surface model has an empty extremal curve list");
        Vec out;
        for (auto i : s.extremal) out.push_back(s.intersect(a.coords, s.curves[i].cls));
        return out;
      }
      case Backend::toric: return toric().convexity_values(a.coords);
    }
    return {};
  }
};

inline bool is_ample(const VarietyModel& m, const NumClass& theta) {
  m.check(theta);
  switch (m.backend()) {
    case Backend::curve: return theta[0].sign() > 0;
    case Backend::surface: return m.surface().is_ample(theta.coords);
    case Backend::toric: return m.toric().is_ample(theta.coords);
  }
  return false;
}

inline bool is_nef(const VarietyModel& m, const NumClass& theta) {
  m.check(theta);
  switch (m.backend()) {
    case Backend::curve: return theta[0].sign() >= 0;
    case Backend::surface: return m.surface().is_nef(theta.coords);
    case Backend::toric: return m.toric().is_nef(theta.coords);
  }
  return false;
}

inline void require_ample(const VarietyModel& m, const NumClass& omega, const std::string& what = "omega") {
  m.check(omega);
  switch (m.backend()) {
    case Backend::curve:
      if (omega[0].sign() <= 0) throw DomainError("ample", what + " has nonpositive degree");
      return;
    case Backend::surface: m.surface().require_ample(omega.coords, what); return;
    case Backend::toric: m.toric().require_ample(omega.coords, what); return;
  }
}

/// (omega^n).
inline Rational volume(const VarietyModel& m, const NumClass& omega) {
  require_ample(m, omega);
  switch (m.backend()) {
    case Backend::curve: return omega[0];
    case Backend::surface: return m.surface().intersect(omega.coords, omega.coords);
    case Backend::toric: return m.toric().volume(omega.coords);
  }
  return 0;
}

/// (omega^{n-1} . theta).
inline Rational mixed_intersection(const VarietyModel& m, const NumClass& omega, const NumClass& theta) {
  require_ample(m, omega);
  m.check(theta);
  switch (m.backend()) {
    case Backend::curve: return theta[0];
    case Backend::surface: return m.surface().intersect(omega.coords, theta.coords);
    case Backend::toric: {
      const auto& t = m.toric();
      return t.volume_polynomial(omega.coords, theta.coords).coeff(1) / static_cast<long>(t.n);
    }
  }
  return 0;
}

/// n (omega^{n-1} . theta) / (omega^n).
inline Rational trace(const VarietyModel& m, const NumClass& omega, const NumClass& theta) {
  return static_cast<long>(m.dimension()) * mixed_intersection(m, omega, theta) / volume(m, omega);
}

/// Smallest s >= 0 with -s omega <= theta <= s omega.
inline Rational norm_sup(const VarietyModel& m, const NumClass& omega, const NumClass& theta) {
  require_ample(m, omega);
  const Vec w = m.positivity_tests(omega), t = m.positivity_tests(theta);
  Rational best = 0;
  for (std::size_t i = 0; i < w.size(); ++i) best = std::max(best, abs(t[i]) / w[i]);
  return best;
}

/// Extreme ratios (s_lo, s_hi) with s_lo omega <= omega' <= s_hi omega.
inline std::pair<Rational, Rational> thompson(const VarietyModel& m, const NumClass& omega, const NumClass& omega2) {
  require_ample(m, omega);
  require_ample(m, omega2, "omega'");
  const Vec w = m.positivity_tests(omega), w2 = m.positivity_tests(omega2);
  Rational lo = w2[0] / w[0], hi = lo;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const Rational r = w2[i] / w[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

/// Multiplicative Thompson scale s = max(s_hi, 1/s_lo) >= 1.
inline Rational thompson_scale(const std::pair<Rational, Rational>& ratios) {
  return std::max({ratios.second, Rational(1) / ratios.first, Rational(1)});
}

inline double thompson_distance(const std::pair<Rational, Rational>& ratios) {
  return std::log(to_double(thompson_scale(ratios)));
}

}  // namespace divstab
