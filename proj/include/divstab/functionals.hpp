#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "divstab/parallel.hpp"
#include "divstab/variety.hpp"

namespace divstab {

/// v = t ord_p on a curve; points not listed in the model carry b = 0.
struct CurveValuation {
  std::string point;
  Rational t = 1;
};

inline std::string encode(const CurveValuation& v) { return v.point + "@" + to_string(v.t); }

/// A divisorial valuation t ord_F on one of the backends; t = 0 is the
/// trivial valuation.
using DivisorialValuation = std::variant<CurveValuation, SurfaceValuation, ToricValuation>;

inline const Rational& scale_of(const DivisorialValuation& v) {
  return std::visit([](const auto& x) -> const Rational& { return x.t; }, v);
}

inline bool is_trivial(const DivisorialValuation& v) { return scale_of(v) == 0; }

inline std::string encode(const DivisorialValuation& v) {
  if (is_trivial(v)) return "triv";
  return std::visit([](const auto& x) { return encode(x); }, v);
}

inline DivisorialValuation scaled(DivisorialValuation v, const Rational& s) {
  std::visit([&](auto& x) { x.t *= s; }, v);
  return v;
}

/// (X, B; omega) with the derived data V, K_{X,B} and, when -K_{X,B} is
/// numerically lambda omega, the factor lambda.
struct PolarizedPair {
  std::shared_ptr<const VarietyModel> model;
  NumClass omega;
  Rational V;
  NumClass K;
  std::optional<Rational> lambda;

  const VarietyModel& x() const { return *model; }
  std::size_t n() const { return model->dimension(); }
  /// The curve model polarized by omega.
  CurveModel curve() const { return model->curve().with_degree(omega[0]); }
};

inline PolarizedPair polarize(std::shared_ptr<const VarietyModel> model, const NumClass& omega) {
  require_ample(*model, omega);
  PolarizedPair p{model, omega, volume(*model, omega), model->canonical_class(), std::nullopt};
  p.lambda = proportionality(Rational(-1) * p.K.coords, omega.coords);
  return p;
}

inline PolarizedPair polarize(std::shared_ptr<const VarietyModel> model, const Vec& omega) {
  const NumClass w = model->make_class(omega);
  return polarize(std::move(model), w);
}

inline PolarizedPair with_omega(const PolarizedPair& p, const Vec& omega) { return polarize(p.model, omega); }

/// C_n = 2n^2 + 1.
inline long dimensional_constant(std::size_t n) { return 2 * static_cast<long>(n * n) + 1; }

inline void require_backend(const PolarizedPair& p, const DivisorialValuation& v) {
  if (static_cast<std::size_t>(p.x().backend()) != v.index())
    throw ConfigError(std::string("valuation ") + encode(v) + " does not belong to the " +
                      backend_name(p.x().backend()) + " backend");
}

inline Rational log_discrepancy(const PolarizedPair& p, const DivisorialValuation& v) {
  require_backend(p, v);
  if (is_trivial(v)) return 0;
  switch (p.x().backend()) {
    case Backend::curve: {
      const auto& c = std::get<CurveValuation>(v);
      if (c.t.sign() < 0) throw DomainError("positive scale", encode(v));
      return log_discrepancy(p.x().curve(), c.point, c.t);
    }
    case Backend::surface: {
      const auto& s = std::get<SurfaceValuation>(v);
      if (s.t.sign() < 0) throw DomainError("positive scale", encode(v));
      return log_discrepancy(p.x().surface(), s);
    }
    case Backend::toric: return p.x().toric().log_discrepancy(std::get<ToricValuation>(v));
  }
  return 0;
}

/// Log discrepancy, energy and energy derivative along theta of one Dirac mass.
struct DiracData {
  Rational A, energy, grad;
};

namespace detail {

inline DiracData surface_dirac(const PolarizedPair& p, const SurfaceValuation& v, const NumClass& theta) {
  const SurfaceModel& base = p.x().surface();
  if (v.t.sign() < 0) throw DomainError("positive scale", encode(v));
  const SurfaceModel y = apply_chain(base, v.chain, v.steps);
  const VolumeProfile prof = volume_profile(y, pull_back(p.omega.coords, y.rank()), y.curve_index(v.divisor));
  const Vec th = pull_back(theta.coords, y.rank());
  Rational integral = 0;
  for (const auto& ch : prof.chambers) {
    const Rational a = y.intersect(ch.p0, th), b = y.intersect(ch.p1, th);
    integral += 2 * (a * (ch.hi - ch.lo) + b * (ch.hi * ch.hi - ch.lo * ch.lo) / 2);
  }
  const Rational energy = v.t * prof.volume.integrate_support() / p.V;
  const Rational tr = 2 * base.intersect(p.omega.coords, theta.coords) / p.V;
  return {v.t * (1 - y.curves[y.curve_index(v.divisor)].b), energy, v.t * integral / p.V - tr * energy};
}

inline DiracData curve_dirac(const PolarizedPair& p, const CurveValuation& v, const NumClass& theta) {
  if (v.t.sign() < 0) throw DomainError("positive scale", encode(v));
  const CurveModel m = p.curve();
  // vol(omega - lambda p) = V - lambda on [0, V]; the gradient integrand is deg theta.
  const Rational energy = v.t * p.V / 2;
  const Rational tr = theta[0] / p.V;
  return {log_discrepancy(m, v.point, v.t), energy, v.t * theta[0] - tr * energy};
}

}  // namespace detail

inline DiracData dirac_data(const PolarizedPair& p, const DivisorialValuation& v, const NumClass& theta) {
  require_backend(p, v);
  p.x().check(theta);
  if (is_trivial(v)) return {Rational(0), Rational(0), Rational(0)};
  switch (p.x().backend()) {
    case Backend::curve: return detail::curve_dirac(p, std::get<CurveValuation>(v), theta);
    case Backend::surface: return detail::surface_dirac(p, std::get<SurfaceValuation>(v), theta);
    case Backend::toric: {
      const auto& t = p.x().toric();
      const auto& tv = std::get<ToricValuation>(v);
      const auto [e, g] = t.energy_from(t.energy_data(p.omega.coords, theta.coords), tv);
      return {t.log_discrepancy(tv), e, g};
    }
  }
  return {};
}

/// Energy of the Dirac mass at v: V^-1 int_0^inf vol(omega - lambda F) d lambda, times t.
inline Rational dirac_energy(const PolarizedPair& p, const DivisorialValuation& v) {
  require_backend(p, v);
  if (is_trivial(v)) return 0;
  switch (p.x().backend()) {
    case Backend::curve:
    case Backend::surface: return dirac_data(p, v, p.omega).energy;
    case Backend::toric: return p.x().toric().expected_order(p.omega.coords, std::get<ToricValuation>(v));
  }
  return 0;
}

inline Rational dirac_energy_grad(const PolarizedPair& p, const DivisorialValuation& v, const NumClass& theta) {
  return dirac_data(p, v, theta).grad;
}

/// T_omega(v): the first lambda where vol(omega - lambda F) vanishes, times t.
inline Rational dirac_threshold(const PolarizedPair& p, const DivisorialValuation& v) {
  require_backend(p, v);
  if (is_trivial(v)) return 0;
  switch (p.x().backend()) {
    case Backend::curve: return std::get<CurveValuation>(v).t * p.V;
    case Backend::surface: {
      const auto& s = std::get<SurfaceValuation>(v);
      return s.t * vol_curve(p.x().surface(), s, p.omega.coords).threshold;
    }
    case Backend::toric: {
      const auto& tv = std::get<ToricValuation>(v);
      p.x().toric().require_direction(tv);
      return tv.t * p.x().toric().threshold(p.omega.coords, tv.u);
    }
  }
  return 0;
}

/// beta = A + grad_K ||v||; when -K = lambda omega also A - lambda ||v||, and
/// the two must agree exactly.
inline Rational beta_from(const PolarizedPair& p, const DivisorialValuation& v, const DiracData& d) {
  const Rational value = d.A + d.grad;
  if (p.lambda && value != d.A - *p.lambda * d.energy)
    throw ConsistencyError("beta of " + encode(v) + ": derivative formula gives " + to_string(value) +
                           ", proportional formula gives " + to_string(d.A - *p.lambda * d.energy));
  return value;
}

inline Rational beta_dirac(const PolarizedPair& p, const DivisorialValuation& v) {
  return beta_from(p, v, dirac_data(p, v, p.K));
}

struct MeasureAtom {
  DivisorialValuation v;
  Rational mass;
};

/// Finitely supported probability measure on divisorial valuations.
struct DivisorialMeasure {
  std::vector<MeasureAtom> atoms;

  static DivisorialMeasure dirac(DivisorialValuation v) { return {{{std::move(v), Rational(1)}}}; }

  /// Merges atoms with equal encodings, in encoding order.
  DivisorialMeasure merged() const {
    std::map<std::string, MeasureAtom> by_code;
    for (const auto& a : atoms) {
      auto [it, fresh] = by_code.emplace(encode(a.v), a);
      if (!fresh) it->second.mass += a.mass;
    }
    DivisorialMeasure out;
    for (auto& [code, a] : by_code) out.atoms.push_back(a);
    return out;
  }
};

inline void validate(const PolarizedPair& p, const DivisorialMeasure& mu) {
  if (mu.atoms.empty()) throw DomainError("probability measure", "no atoms");
  Rational total = 0;
  for (const auto& a : mu.atoms) {
    require_backend(p, a.v);
    if (a.mass.sign() <= 0) throw DomainError("positive masses", "atom " + encode(a.v));
    if (scale_of(a.v).sign() < 0) throw DomainError("positive scale", encode(a.v));
    total += a.mass;
  }
  if (total != 1) throw DomainError("probability measure", "total mass " + to_string(total));
}

inline DivisorialMeasure scale_measure(const DivisorialMeasure& mu, const Rational& t) {
  DivisorialMeasure out = mu;
  for (auto& a : out.atoms) a.v = scaled(a.v, t);
  return out;
}

inline Rational entropy(const PolarizedPair& p, const DivisorialMeasure& mu) {
  validate(p, mu);
  Rational s = 0;
  for (const auto& a : mu.atoms) s += a.mass * log_discrepancy(p, a.v);
  return s;
}

inline CurveMeasure to_curve_measure(const DivisorialMeasure& mu) {
  CurveMeasure out;
  for (const auto& a : mu.atoms) {
    const auto& c = std::get<CurveValuation>(a.v);
    out.atoms.push_back({c.t == 0 ? std::string() : c.point, c.t, a.mass});
  }
  return out.normalized();
}

/// Certified lower bound for the energy of a measure with toric atoms: the
/// potential of the concave PL function g = min_i(<m, a_i> - w_i) on the
/// moment polytope gives E - int phi dmu = avg_P g + sum_j m_j (w_j - min_P <., a_j>).
/// The weights w are tuned by ascent on this concave function and the bound
/// is evaluated exactly at the final rational weights.
inline Rational toric_energy_lower_bound(const ToricModel& t, const Vec& omega,
                                         const std::vector<std::pair<Vec, Rational>>& atoms) {
  const Polytope P = t.polytope_of(omega);
  const Rational nvol = P.normalized_volume();
  const std::size_t k = atoms.size();
  Vec lows;
  for (const auto& [a, m] : atoms) lows.push_back(P.min_pairing(a));

  auto evaluate = [&](const Vec& w, std::vector<double>* area) {
    Rational avg = 0;
    for (std::size_t i = 0; i < k; ++i) {
      Polytope region = P;
      for (std::size_t j = 0; j < k; ++j)
        if (j != i) region = region.cut(atoms[j].first - atoms[i].first, w[i] - w[j]);
      const Rational rv = region.normalized_volume();
      avg += (region.integral_linear(atoms[i].first) - w[i] * rv) / nvol;
      if (area) (*area)[i] = to_double(rv / nvol);
    }
    Rational value = avg;
    for (std::size_t j = 0; j < k; ++j) value += atoms[j].second * (w[j] - lows[j]);
    return value;
  };

  const Rational scale_den = Rational(1 << 20);
  auto round = [&](double x) { return Rational(static_cast<long>(std::llround(x * (1 << 20)))) / scale_den; };
  Vec w = lows;
  std::vector<double> area(k);
  Rational best = evaluate(w, &area);
  double step = to_double(t.threshold(omega, atoms[0].first) + 1);
  for (int it = 0; it < 120 && step > 1e-7; ++it) {
    Vec trial(k);
    double gnorm = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double g = to_double(atoms[i].second) - area[i];
      gnorm = std::max(gnorm, std::fabs(g));
      trial[i] = round(to_double(w[i]) + step * g);
    }
    if (gnorm < 1e-9) break;
    std::vector<double> trial_area(k);
    const Rational value = evaluate(trial, &trial_area);
    if (value > best) {
      best = value;
      w = trial;
      area = trial_area;
      step *= 1.5;
    } else {
      step /= 2;
    }
  }
  return best;
}

/// Bounds lo <= ||mu|| <= hi; lo == hi when the value is exact.
struct EnergyBracket {
  Rational lo, hi;
  bool exact() const { return lo == hi; }
};

inline EnergyBracket measure_energy(const PolarizedPair& p, const DivisorialMeasure& measure) {
  validate(p, measure);
  const DivisorialMeasure mu = measure.merged();
  if (p.x().backend() == Backend::curve) {
    const Rational e = measure_energy(p.curve(), to_curve_measure(mu)).norm;
    return {e, e};
  }
  if (mu.atoms.size() == 1) {
    const Rational e = dirac_energy(p, mu.atoms[0].v);
    return {e, e};
  }
  Rational upper = 0;
  for (const auto& a : mu.atoms) upper += a.mass * dirac_energy(p, a.v);
  Rational lower = 0;
  if (p.x().backend() == Backend::toric) {
    std::vector<std::pair<Vec, Rational>> atoms;
    for (const auto& a : mu.atoms) {
      const auto& tv = std::get<ToricValuation>(a.v);
      atoms.emplace_back(tv.t * tv.u, a.mass);
      if (tv.t == 0) atoms.back().first = Vec(p.n(), Rational(0));
    }
    lower = std::max(lower, toric_energy_lower_bound(p.x().toric(), p.omega.coords, atoms));
  }
  if (lower > upper) throw ConsistencyError("measure energy lower bound exceeds the convexity upper bound");
  return {lower, upper};
}

/// beta(mu) = Ent(mu) + grad_K ||mu||, exact or as a bracket.
struct BetaBracket {
  Rational entropy, lo, hi;
  bool exact() const { return lo == hi; }
};

inline BetaBracket beta_measure(const PolarizedPair& p, const DivisorialMeasure& measure) {
  const Rational ent = entropy(p, measure);
  const DivisorialMeasure mu = measure.merged();
  if (p.x().backend() == Backend::curve) {
    const CurveModel m = p.curve();
    const auto me = measure_energy(m, to_curve_measure(mu));
    const Rational b = ent + grad_energy(m, me.potential, m.canonical_degree());
    return {ent, b, b};
  }
  if (mu.atoms.size() == 1) {
    const Rational b = beta_dirac(p, mu.atoms[0].v);
    return {ent, b, b};
  }
  const EnergyBracket e = measure_energy(p, mu);
  if (p.lambda) {
    // grad_K ||mu|| = -lambda grad_omega ||mu|| = -lambda ||mu||.
    Rational a = ent - *p.lambda * e.lo, b = ent - *p.lambda * e.hi;
    if (a > b) std::swap(a, b);
    return {ent, a, b};
  }
  const Rational spread = dimensional_constant(p.n()) * norm_sup(p.x(), p.omega, p.K) * e.hi;
  return {ent, ent - spread, ent + spread};
}

enum class BoundKind { exact_on_set, upper_bound, bracket };

inline const char* bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::exact_on_set: return "exact-on-set";
    case BoundKind::upper_bound: return "upper-bound";
    case BoundKind::bracket: return "bracket";
  }
  return "?";
}

/// Infimum over an explicit candidate set. `status` records the two
/// non-finite outcomes: a candidate with negative log discrepancy (the pair
/// is not sublc and the threshold is -infinity) and an empty set.
struct ThresholdReport {
  enum class Status { finite, not_sublc, empty };
  Status status = Status::finite;
  Rational value;                 ///< the value, or the upper end of a bracket
  std::optional<Rational> lower;  ///< lower end of a bracket
  std::string witness;
  std::string candidate_set;
  BoundKind bound_kind = BoundKind::exact_on_set;
};

inline std::string status_name(ThresholdReport::Status s) {
  switch (s) {
    case ThresholdReport::Status::finite: return "finite";
    case ThresholdReport::Status::not_sublc: return "not-sublc";
    case ThresholdReport::Status::empty: return "empty candidate set";
  }
  return "?";
}

struct CandidateOptions {
  long radius = 3;        ///< toric: |u|_inf <= radius
  std::size_t depth = 2;  ///< surface: blowup steps per chain
};

struct CandidateSet {
  std::vector<DivisorialValuation> valuations;
  std::string description;
};

/// Primitive u in [-R, R]^n: the rays in model order, then by (|u|_inf, lex).
inline std::vector<Vec> toric_directions(const ToricModel& t, long radius) {
  std::vector<Vec> out;
  if (radius <= 0) return out;
  auto norm = [](const Vec& u) {
    Rational m = 0;
    for (const auto& x : u) m = std::max(m, abs(x));
    return m;
  };
  for (const auto& r : t.rays)
    if (norm(r) <= radius) out.push_back(r);
  std::vector<Vec> rest;
  Vec u(t.n, Rational(-radius));
  while (true) {
    if (!is_zero(u) && detail::integer_gcd(u) == 1 && std::find(out.begin(), out.end(), u) == out.end())
      rest.push_back(u);
    std::size_t i = t.n;
    while (i > 0 && u[i - 1] == radius) u[--i] = -radius;
    if (i == 0) break;
    u[i - 1] += 1;
  }
  std::stable_sort(rest.begin(), rest.end(), [&](const Vec& a, const Vec& b) { return norm(a) < norm(b); });
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

inline CandidateSet candidates(const VarietyModel& x, const CandidateOptions& opt) {
  CandidateSet set;
  switch (x.backend()) {
    case Backend::curve: {
      std::string ids;
      for (const auto& pt : x.curve().points) {
        set.valuations.push_back(CurveValuation{pt.id, 1});
        ids += (ids.empty() ? "" : ", ") + pt.id;
      }
      const auto& pts = x.curve().points;
      if (std::none_of(pts.begin(), pts.end(), [](const CurvePoint& pt) { return pt.id == "generic"; }))
        set.valuations.push_back(CurveValuation{"generic", 1});
      set.description = "ord_p for the marked points {" + ids + "} and a generic point";
      break;
    }
    case Backend::surface: {
      const auto& s = x.surface();
      for (const auto& c : s.curves) set.valuations.push_back(SurfaceValuation{"", 0, c.id, 1});
      for (const auto& ch : s.chains)
        for (std::size_t k = 1; k <= std::min(opt.depth, ch.steps.size()); ++k)
          set.valuations.push_back(SurfaceValuation{ch.id, k, ch.steps[k - 1].exceptional, 1});
      set.description = "ord_C for the tracked curves and exceptional divisors of blowup chains up to depth " +
                        std::to_string(opt.depth);
      break;
    }
    case Backend::toric: {
      for (auto& u : toric_directions(x.toric(), opt.radius)) set.valuations.push_back(ToricValuation{u, 1});
      set.description = "toric valuations v_u with primitive u, |u|_inf <= " + std::to_string(opt.radius);
      break;
    }
  }
  return set;
}

inline CandidateSet candidates(const PolarizedPair& p, const CandidateOptions& opt) { return candidates(p.x(), opt); }

/// A, ||v|| and grad_K ||v|| for every candidate, computed in parallel and
/// stored by index.
inline std::vector<DiracData> evaluate_candidates(const PolarizedPair& p, const CandidateSet& set, unsigned jobs = 1) {
  std::vector<DiracData> out(set.valuations.size());
  if (p.x().backend() == Backend::toric) {
    const auto& t = p.x().toric();
    const auto data = t.energy_data(p.omega.coords, p.K.coords);
    parallel_for(out.size(), jobs, [&](std::size_t i) {
      const auto& v = std::get<ToricValuation>(set.valuations[i]);
      const auto [e, g] = t.energy_from(data, v);
      out[i] = {t.log_discrepancy(v), e, g};
    });
  } else {
    parallel_for(out.size(), jobs, [&](std::size_t i) { out[i] = dirac_data(p, set.valuations[i], p.K); });
  }
  return out;
}

struct ThresholdSuite {
  ThresholdReport delta, sigma_val, sigma_div;
};

inline ThresholdSuite thresholds(const PolarizedPair& p, const CandidateSet& set, unsigned jobs = 1) {
  const auto data = evaluate_candidates(p, set, jobs);
  ThresholdSuite out;
  for (auto* r : {&out.delta, &out.sigma_val, &out.sigma_div}) r->candidate_set = set.description;
  if (set.valuations.empty()) {
    for (auto* r : {&out.delta, &out.sigma_val, &out.sigma_div}) r->status = ThresholdReport::Status::empty;
    return out;
  }
  // Ties go to the lexicographically smallest encoding.
  std::vector<std::string> codes;
  for (const auto& v : set.valuations) codes.push_back(encode(v));
  std::optional<std::size_t> violation, best_delta, best_sigma;
  Rational delta = 0, sigma = 0;
  auto better = [&](const std::optional<std::size_t>& best, const Rational& cur, std::size_t i, const Rational& x) {
    return !best || x < cur || (x == cur && codes[i] < codes[*best]);
  };
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& d = data[i];
    if (d.A.sign() < 0 && better(violation, 0, i, 0)) violation = i;
    const Rational r = d.A / d.energy;
    if (better(best_delta, delta, i, r)) {
      best_delta = i;
      delta = r;
    }
    const Rational s = beta_from(p, set.valuations[i], d) / d.energy;
    if (better(best_sigma, sigma, i, s)) {
      best_sigma = i;
      sigma = s;
    }
  }
  out.sigma_val.value = sigma;
  out.sigma_val.witness = codes[*best_sigma];
  if (p.x().backend() == Backend::toric) {
    // Dual route for the witnesses: integral of the slice curve.
    for (auto i : {*best_delta, *best_sigma})
      if (dirac_energy(p, set.valuations[i]) != data[i].energy)
        throw ConsistencyError("toric energy routes disagree at " + encode(set.valuations[i]));
  }
  if (violation) {
    for (auto* r : {&out.delta, &out.sigma_div}) {
      r->status = ThresholdReport::Status::not_sublc;
      r->witness = codes[*violation];
    }
    return out;
  }
  out.delta.value = delta;
  out.delta.witness = codes[*best_delta];
  if (p.lambda) {
    out.sigma_div.value = delta - *p.lambda;
    out.sigma_div.witness = out.delta.witness;
  } else {
    out.sigma_div.bound_kind = BoundKind::bracket;
    out.sigma_div.value = sigma;
    out.sigma_div.lower = delta - dimensional_constant(p.n()) * norm_sup(p.x(), p.omega, p.K);
    out.sigma_div.witness = out.sigma_val.witness;
  }
  return out;
}

inline ThresholdReport delta(const PolarizedPair& p, const CandidateSet& set, unsigned jobs = 1) {
  return thresholds(p, set, jobs).delta;
}
inline ThresholdReport sigma_val(const PolarizedPair& p, const CandidateSet& set, unsigned jobs = 1) {
  return thresholds(p, set, jobs).sigma_val;
}
inline ThresholdReport sigma_div(const PolarizedPair& p, const CandidateSet& set, unsigned jobs = 1) {
  return thresholds(p, set, jobs).sigma_div;
}

}  // namespace divstab
