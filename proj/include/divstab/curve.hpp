#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "divstab/numclass.hpp"

namespace divstab {

struct CurvePoint {
  std::string id;
  Rational b;
};

/// Smooth projective curve of genus g with a boundary supported on finitely
/// many marked points and a polarization of degree V. Points that are not
/// listed carry boundary coefficient 0.
struct CurveModel {
  int genus = 0;
  Rational V = 1;
  std::vector<CurvePoint> points;
  std::uint64_t tag = next_model_tag();

  Rational boundary_coefficient(const std::string& id) const {
    for (const auto& p : points)
      if (p.id == id) return p.b;
    return 0;
  }
  Rational canonical_degree() const {
    Rational d = 2 * genus - 2;
    for (const auto& p : points) d += p.b;
    return d;
  }
  /// Same curve and boundary, polarized by a class of degree `degree`.
  CurveModel with_degree(const Rational& degree) const {
    CurveModel m = *this;
    m.V = degree;
    return m;
  }

  void validate() const {
    if (genus < 0) throw DomainError("genus >= 0", std::to_string(genus));
    if (V.sign() <= 0) throw DomainError("positive degree", "V = " + to_string(V));
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].id.empty()) throw SchemaError("curve point with empty id");
      for (std::size_t j = 0; j < i; ++j)
        if (points[i].id == points[j].id) throw SchemaError("duplicate curve point id " + points[i].id);
    }
  }
};

/// Convex nonincreasing PL function on one ray [0, inf): slope slopes[0] on
/// [0, breaks[0]), slopes[k] on [breaks[k-1], breaks[k]), constant after the
/// last break.
struct RayProfile {
  std::vector<Rational> breaks;
  std::vector<Rational> slopes;

  Rational initial_slope() const { return slopes.front(); }

  /// phi_p(t) - phi(v_triv).
  Rational drop(const Rational& t) const {
    Rational acc = 0, prev = 0;
    for (std::size_t k = 0; k < breaks.size(); ++k) {
      if (t <= breaks[k]) return acc + slopes[k] * (t - prev);
      acc += slopes[k] * (breaks[k] - prev);
      prev = breaks[k];
    }
    return acc + slopes.back() * (t - prev);
  }
};

/// Finite-type PL omega-psh function on the Berkovich tree of a curve.
struct PLPotential {
  Rational c;  ///< value at the trivial valuation
  std::map<std::string, RayProfile> rays;

  Rational operator()(const std::string& point, const Rational& t) const {
    if (t == 0) return c;
    auto it = rays.find(point);
    return it == rays.end() ? c : c + it->second.drop(t);
  }
};

struct CurveAtom {
  std::string point;  ///< empty for the trivial valuation
  Rational t;
  Rational mass;
};

inline bool operator==(const CurveAtom& a, const CurveAtom& b) {
  return a.point == b.point && a.t == b.t && a.mass == b.mass;
}

/// Finitely supported probability measure on divisorial points t ord_p.
struct CurveMeasure {
  std::vector<CurveAtom> atoms;

  static CurveMeasure trivial() { return CurveMeasure{{{"", Rational(0), Rational(1)}}}; }

  /// Sorts by (point, t), merges repeated atoms and folds t = 0 into the
  /// trivial valuation.
  CurveMeasure normalized() const {
    std::vector<CurveAtom> a = atoms;
    for (auto& x : a)
      if (x.t == 0) x.point.clear();
    std::sort(a.begin(), a.end(), [](const CurveAtom& l, const CurveAtom& r) {
      return l.point != r.point ? l.point < r.point : l.t < r.t;
    });
    std::vector<CurveAtom> out;
    for (auto& x : a) {
      if (!out.empty() && out.back().point == x.point && out.back().t == x.t)
        out.back().mass += x.mass;
      else
        out.push_back(x);
    }
    return CurveMeasure{std::move(out)};
  }

  void validate() const {
    Rational total = 0;
    for (const auto& x : atoms) {
      if (x.mass.sign() <= 0) throw DomainError("positive masses", "atom mass " + to_string(x.mass));
      if (x.t.sign() < 0) throw DomainError("nonnegative parameter", "atom t = " + to_string(x.t));
      if (x.t.sign() > 0 && x.point.empty()) throw SchemaError("atom with t > 0 needs a point");
      total += x.mass;
    }
    if (total != 1) throw DomainError("probability measure", "total mass " + to_string(total));
  }
};

inline bool operator==(const CurveMeasure& a, const CurveMeasure& b) {
  return a.normalized().atoms == b.normalized().atoms;
}

inline void validate_potential(const CurveModel& model, const PLPotential& phi) {
  Rational initial = 0;
  for (const auto& [point, ray] : phi.rays) {
    if (ray.slopes.size() != ray.breaks.size() + 1)
      throw DomainError("not omega-psh", "ray " + point + ": need one more slope than breaks");
    for (std::size_t k = 0; k < ray.breaks.size(); ++k)
      if (ray.breaks[k].sign() <= 0 || (k && ray.breaks[k] <= ray.breaks[k - 1]))
        throw DomainError("not omega-psh", "ray " + point + ": breaks must be positive and increasing");
    for (std::size_t k = 0; k < ray.slopes.size(); ++k) {
      if (ray.slopes[k].sign() > 0) throw DomainError("not omega-psh", "ray " + point + ": positive slope");
      if (k && ray.slopes[k] < ray.slopes[k - 1])
        throw DomainError("not omega-psh", "ray " + point + ": slopes must be nondecreasing (convexity)");
    }
    if (ray.slopes.back() != 0) throw DomainError("not omega-psh", "ray " + point + ": final slope must be 0");
    initial -= ray.initial_slope();
  }
  if (initial > model.V)
    throw DomainError("not omega-psh", "total initial slope " + to_string(initial) + " exceeds V = " +
                                           to_string(model.V));
}

inline Rational integrate(const PLPotential& phi, const CurveMeasure& mu) {
  Rational s = 0;
  for (const auto& a : mu.atoms) s += a.mass * phi(a.point, a.t);
  return s;
}

inline CurveMeasure monge_ampere(const CurveModel& model, const PLPotential& phi) {
  validate_potential(model, phi);
  CurveMeasure mu;
  Rational triv = 1;
  for (const auto& [point, ray] : phi.rays) {
    triv += ray.initial_slope() / model.V;
    for (std::size_t k = 0; k < ray.breaks.size(); ++k) {
      const Rational jump = ray.slopes[k + 1] - ray.slopes[k];
      if (jump != 0) mu.atoms.push_back({point, ray.breaks[k], jump / model.V});
    }
  }
  if (triv.sign() < 0) throw DomainError("not omega-psh", "negative mass at the trivial valuation");
  if (triv.sign() > 0) mu.atoms.push_back({"", Rational(0), triv});
  return mu.normalized();
}

/// Monge-Ampere energy, E = (int phi dMA(phi) + phi(v_triv)) / 2.
inline Rational energy(const CurveModel& model, const PLPotential& phi) {
  return (integrate(phi, monge_ampere(model, phi)) + phi.c) / 2;
}

inline Rational twisted_energy(const CurveModel& model, const PLPotential& phi, const Rational& theta_degree) {
  validate_potential(model, phi);
  return theta_degree / model.V * phi.c;
}

/// Derivative of the energy along theta: E^theta - tr(theta) E.
inline Rational grad_energy(const CurveModel& model, const PLPotential& phi, const Rational& theta_degree) {
  return theta_degree / model.V * (phi.c - energy(model, phi));
}

/// sup phi - E(phi); sup phi is attained at the trivial valuation.
inline Rational j_functional(const CurveModel& model, const PLPotential& phi) { return phi.c - energy(model, phi); }

inline PLPotential potential_of_measure(const CurveModel& model, const CurveMeasure& measure) {
  measure.validate();
  const CurveMeasure mu = measure.normalized();
  PLPotential phi;
  phi.c = 0;
  std::map<std::string, std::vector<const CurveAtom*>> by_point;
  for (const auto& a : mu.atoms)
    if (a.t.sign() > 0) by_point[a.point].push_back(&a);
  for (const auto& [point, atoms] : by_point) {
    RayProfile ray;
    Rational tail = 0;
    for (const auto* a : atoms) tail += a->mass;
    for (const auto* a : atoms) {
      ray.slopes.push_back(-model.V * tail);
      ray.breaks.push_back(a->t);
      tail -= a->mass;
    }
    ray.slopes.push_back(0);
    phi.rays.emplace(point, std::move(ray));
  }
  phi.c = -integrate(phi, mu);
  return phi;
}

struct MeasureEnergy {
  Rational norm;
  PLPotential potential;
};

/// Energy of a measure together with its normalized potential; the potential
/// is checked to solve the Monge-Ampere equation exactly.
inline MeasureEnergy measure_energy(const CurveModel& model, const CurveMeasure& mu) {
  PLPotential phi = potential_of_measure(model, mu);
  if (!(monge_ampere(model, phi) == mu))
    throw ConsistencyError("potential of a measure does not solve the Monge-Ampere equation");
  return {energy(model, phi), std::move(phi)};
}

inline Rational i_functional(const CurveModel& model, const PLPotential& phi, const PLPotential& psi) {
  const CurveMeasure ma_phi = monge_ampere(model, phi), ma_psi = monge_ampere(model, psi);
  return integrate(phi, ma_psi) - integrate(psi, ma_psi) - integrate(phi, ma_phi) + integrate(psi, ma_phi);
}

inline Rational j_mu(const CurveModel& model, const CurveMeasure& mu, const PLPotential& phi) {
  return measure_energy(model, mu).norm - energy(model, phi) + integrate(phi, mu);
}

inline Rational log_discrepancy(const CurveModel& model, const std::string& point, const Rational& t) {
  if (t == 0) return 0;
  return t * (1 - model.boundary_coefficient(point));
}

inline Rational entropy(const CurveModel& model, const CurveMeasure& mu) {
  Rational s = 0;
  for (const auto& a : mu.atoms) s += a.mass * log_discrepancy(model, a.point, a.t);
  return s;
}

/// inf over divisorial v of A(v) + phi(v). Each ray contributes a convex PL
/// minimization whose minimum sits at t = 0 or at a break.
inline Rational l_functional(const CurveModel& model, const PLPotential& phi) {
  for (const auto& p : model.points)
    if (p.b >= 1) throw DomainError("subklt pair", "boundary coefficient of " + p.id + " is " + to_string(p.b));
  validate_potential(model, phi);
  Rational best = phi.c;
  for (const auto& [point, ray] : phi.rays)
    for (const auto& t : ray.breaks) best = std::min(best, log_discrepancy(model, point, t) + phi(point, t));
  return best;
}

inline Rational ding(const CurveModel& model, const PLPotential& phi) {
  return l_functional(model, phi) - energy(model, phi);
}

inline Rational mabuchi(const CurveModel& model, const PLPotential& phi) {
  return entropy(model, monge_ampere(model, phi)) + grad_energy(model, phi, model.canonical_degree());
}

/// The scaling action (t . phi)(v) = t phi(t^{-1} v).
inline PLPotential scale_potential(const PLPotential& phi, const Rational& t) {
  PLPotential out = phi;
  out.c *= t;
  for (auto& [point, ray] : out.rays)
    for (auto& b : ray.breaks) b *= t;
  return out;
}

/// Push-forward under v -> t v.
inline CurveMeasure scale_measure(const CurveMeasure& mu, const Rational& t) {
  CurveMeasure out = mu;
  for (auto& a : out.atoms) a.t *= t;
  return out.normalized();
}

/// The potential whose Monge-Ampere measure is the Dirac mass at t0 ord_p,
/// sup-normalized.
inline PLPotential dirac_potential(const CurveModel& model, const std::string& point, const Rational& t0) {
  PLPotential phi;
  phi.c = 0;
  phi.rays[point] = RayProfile{{t0}, {-model.V, Rational(0)}};
  return phi;
}

}  // namespace divstab
