#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "divstab/linalg.hpp"
#include "divstab/numclass.hpp"
#include "divstab/piecewise.hpp"

namespace divstab {

struct SurfaceCurve {
  std::string id;
  Vec cls;
  Rational b = 0;  ///< coefficient in the boundary B
  bool exceptional = false;
};

struct BlowupStep {
  std::string exceptional;                      ///< id given to the new exceptional curve
  std::map<std::string, Rational> multiplicities;  ///< curve id -> multiplicity at the center
  std::vector<std::string> extremal;            ///< Mori cone generators on the blown-up surface
};

struct BlowupChain {
  std::string id;
  std::vector<BlowupStep> steps;
};

/// Smooth projective surface presented numerically: an intersection form on
/// a basis of Num(X), the canonical class, and a finite list of tracked prime
/// curves. Nefness is tested against `extremal`, assumed to generate the
/// Mori cone; `negative` lists the tracked curves with negative
/// self-intersection available to the Zariski decomposition.
struct SurfaceModel {
  std::vector<std::string> basis;
  Matrix gram;
  Vec canonical;
  std::vector<SurfaceCurve> curves;
  std::vector<std::size_t> negative;
  std::vector<std::size_t> extremal;
  Vec reference_ample;
  std::vector<BlowupChain> chains;
  std::uint64_t tag = next_model_tag();

  std::size_t rank() const { return basis.size(); }

  Rational intersect(const Vec& a, const Vec& b) const { return bilinear(gram, a, b); }

  std::optional<std::size_t> find_curve(const std::string& id) const {
    for (std::size_t i = 0; i < curves.size(); ++i)
      if (curves[i].id == id) return i;
    return std::nullopt;
  }
  std::size_t curve_index(const std::string& id) const {
    if (auto i = find_curve(id)) return *i;
    throw ConfigError("unknown curve id \"" + id + "\"");
  }
  const BlowupChain& chain(const std::string& id) const {
    for (const auto& c : chains)
      if (c.id == id) return c;
    throw ConfigError("unknown blowup chain \"" + id + "\"");
  }

  /// K_X + B.
  Vec log_canonical() const {
    Vec k = canonical;
    for (const auto& c : curves)
      if (c.b != 0) k = k + c.b * c.cls;
    return k;
  }

  NumClass make_class(Vec coords) const { return {std::move(coords), tag}; }

  bool is_nef(const Vec& a) const {
    for (auto i : extremal)
      if (intersect(a, curves[i].cls).sign() < 0) return false;
    return true;
  }

  /// Positive on every extremal curve, positive square, and on the positive
  /// side of the light cone (tested against the reference ample class).
  bool is_ample(const Vec& a) const {
    if (a.size() != rank()) return false;
    for (auto i : extremal)
      if (intersect(a, curves[i].cls).sign() <= 0) return false;
    return intersect(a, a).sign() > 0 && intersect(a, reference_ample).sign() > 0;
  }

  void require_ample(const Vec& a, const std::string& what) const {
    if (a.size() != rank()) throw DomainError("class length", what + " has wrong number of coordinates");
    for (auto i : extremal)
      if (intersect(a, curves[i].cls).sign() <= 0)
        throw DomainError("ample", what + " is not positive on extremal curve " + curves[i].id);
    if (intersect(a, a).sign() <= 0) throw DomainError("ample", what + " has nonpositive self-intersection");
    if (intersect(a, reference_ample).sign() <= 0)
      throw DomainError("ample", what + " lies in the negative light cone");
  }

  /// Load-time invariants.
  void validate() const {
    const std::size_t r = rank();
    if (r == 0) throw DomainError("positive rank", "empty basis");
    if (gram.size() != r) throw DomainError("gram shape", "gram must be rank x rank");
    for (const auto& row : gram)
      if (row.size() != r) throw DomainError("gram shape", "gram must be rank x rank");
    if (!is_symmetric(gram)) throw DomainError("symmetric intersection form", "gram is not symmetric");
    const Inertia in = inertia(gram);
    if (in.positive != 1 || in.negative != r - 1)
      throw DomainError("signature (1, rank-1)", "intersection form has inertia (" + std::to_string(in.positive) +
                                                     ", " + std::to_string(in.negative) + ", " +
                                                     std::to_string(in.zero) + ")");
    if (canonical.size() != r) throw DomainError("class length", "canonical class has wrong length");
    for (std::size_t i = 0; i < curves.size(); ++i) {
      if (curves[i].cls.size() != r) throw DomainError("class length", "curve " + curves[i].id);
      for (std::size_t j = 0; j < i; ++j)
        if (curves[i].id == curves[j].id) throw SchemaError("duplicate curve id " + curves[i].id);
    }
    for (auto i : negative)
      if (intersect(curves[i].cls, curves[i].cls).sign() >= 0)
        throw DomainError("negative curve", curves[i].id + " has nonnegative self-intersection");
    if (extremal.empty()) throw ConfigError("surface model needs a nonempty extremal curve list");
    if (reference_ample.size() != r) throw DomainError("class length", "reference ample class");
    for (auto i : extremal)
      if (intersect(reference_ample, curves[i].cls).sign() <= 0)
        throw DomainError("ample", "reference ample class is not positive on " + curves[i].id);
    if (intersect(reference_ample, reference_ample).sign() <= 0)
      throw DomainError("ample", "reference ample class has nonpositive self-intersection");
  }

  /// Tracked curves with negative self-intersection.
  std::vector<std::size_t> negative_from_curves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < curves.size(); ++i)
      if (intersect(curves[i].cls, curves[i].cls).sign() < 0) out.push_back(i);
    return out;
  }
};

/// a + b eps with lexicographic order; used to resolve the Zariski chamber
/// entered just to the right of a parameter value.
struct Germ {
  Rational value, slope;

  int sign() const { return value.sign() != 0 ? value.sign() : slope.sign(); }
  Germ operator+(const Germ& o) const { return {value + o.value, slope + o.slope}; }
  Germ operator-(const Germ& o) const { return {value - o.value, slope - o.slope}; }
  Germ operator-() const { return {-value, -slope}; }
  friend Germ operator*(const Rational& s, const Germ& g) { return {s * g.value, s * g.slope}; }
};

inline int sign(const Germ& g) { return g.sign(); }

namespace detail {

template <class S>
S scalar_zero() {
  if constexpr (std::is_same_v<S, Germ>)
    return Germ{Rational(0), Rational(0)};
  else
    return S(0);
}

template <class S>
S pair_with(const SurfaceModel& m, const std::vector<S>& a, const Vec& c) {
  const Vec gc = mat_vec(m.gram, c);
  S s = scalar_zero<S>();
  for (std::size_t i = 0; i < a.size(); ++i) s = s + gc[i] * a[i];
  return s;
}

template <class S>
std::vector<S> solve_support(const SurfaceModel& m, const std::vector<std::size_t>& supp, const std::vector<S>& rhs) {
  Matrix g(supp.size(), Vec(supp.size()));
  for (std::size_t i = 0; i < supp.size(); ++i)
    for (std::size_t j = 0; j < supp.size(); ++j)
      g[i][j] = m.intersect(m.curves[supp[i]].cls, m.curves[supp[j]].cls);
  if constexpr (std::is_same_v<S, Germ>) {
    Vec v(rhs.size()), s(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      v[i] = rhs[i].value;
      s[i] = rhs[i].slope;
    }
    auto xv = solve(g, v), xs = solve(g, s);
    std::vector<Germ> out(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) out[i] = {(*xv)[i], (*xs)[i]};
    return out;
  } else {
    return *solve(g, rhs);
  }
}

}  // namespace detail

template <class S>
struct ZariskiData {
  bool psef = false;
  std::vector<S> positive;                      ///< P
  std::vector<std::pair<std::size_t, S>> negative;  ///< (curve index, coefficient) of N
};

/// Zariski decomposition by iterated enlargement of the negative support.
/// Every successful result is certified: P nef, N >= 0 with negative definite
/// support, P . C = 0 on the support.
template <class S>
ZariskiData<S> zariski_generic(const SurfaceModel& m, const std::vector<S>& alpha) {
  ZariskiData<S> out;
  std::vector<std::size_t> supp;
  std::vector<S> coeff;
  std::vector<S> p = alpha;
  const std::size_t max_rounds = m.negative.size() + 1;
  for (std::size_t round = 0; round <= max_rounds; ++round) {
    std::vector<std::size_t> added;
    for (auto k : m.negative) {
      if (std::find(supp.begin(), supp.end(), k) != supp.end()) continue;
      if (sign(detail::pair_with(m, p, m.curves[k].cls)) < 0) added.push_back(k);
    }
    if (added.empty()) break;
    supp.insert(supp.end(), added.begin(), added.end());
    std::sort(supp.begin(), supp.end());
    {
      Matrix gs(supp.size(), Vec(supp.size()));
      for (std::size_t i = 0; i < supp.size(); ++i)
        for (std::size_t j = 0; j < supp.size(); ++j)
          gs[i][j] = m.intersect(m.curves[supp[i]].cls, m.curves[supp[j]].cls);
      if (!is_negative_definite(gs)) return out;
    }
    std::vector<S> rhs;
    for (auto k : supp) rhs.push_back(detail::pair_with(m, alpha, m.curves[k].cls));
    coeff = detail::solve_support(m, supp, rhs);
    p = alpha;
    for (std::size_t j = 0; j < supp.size(); ++j)
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = p[i] - m.curves[supp[j]].cls[i] * coeff[j];
  }
  for (auto i : m.extremal)
    if (sign(detail::pair_with(m, p, m.curves[i].cls)) < 0) return out;
  for (std::size_t j = 0; j < supp.size(); ++j) {
    if (sign(coeff[j]) < 0)
      throw ConsistencyError("Zariski certificate: negative coefficient on " + m.curves[supp[j]].id +
                             " (incomplete negative curve list?)");
    if (sign(detail::pair_with(m, p, m.curves[supp[j]].cls)) != 0)
      throw ConsistencyError("Zariski certificate: P . " + m.curves[supp[j]].id + " != 0");
  }
  out.psef = true;
  out.positive = p;
  for (std::size_t j = 0; j < supp.size(); ++j)
    if (sign(coeff[j]) != 0) out.negative.emplace_back(supp[j], coeff[j]);
  return out;
}

struct Zariski {
  Vec P, N;
  std::vector<std::pair<std::size_t, Rational>> support;
};

inline std::optional<Zariski> try_zariski(const SurfaceModel& m, const Vec& alpha) {
  auto z = zariski_generic<Rational>(m, alpha);
  if (!z.psef) return std::nullopt;
  Zariski out{z.positive, Vec(alpha.size(), Rational(0)), z.negative};
  for (const auto& [k, c] : z.negative) out.N = out.N + c * m.curves[k].cls;
  if (m.intersect(out.P, out.N) != 0) throw ConsistencyError("Zariski certificate: P . N != 0");
  if (out.P + out.N != alpha) throw ConsistencyError("Zariski certificate: P + N != alpha");
  return out;
}

inline Zariski zariski(const SurfaceModel& m, const Vec& alpha) {
  auto z = try_zariski(m, alpha);
  if (!z) throw DomainError("not pseudoeffective", "class " + to_string(alpha));
  return *z;
}

inline Rational vol_big(const SurfaceModel& m, const Vec& alpha) {
  auto z = try_zariski(m, alpha);
  return z ? m.intersect(z->P, z->P) : Rational(0);
}

/// 2 <P, theta>; 0 outside the pseudoeffective cone.
inline Rational grad_vol(const SurfaceModel& m, const Vec& alpha, const Vec& theta) {
  auto z = try_zariski(m, alpha);
  return z ? 2 * m.intersect(z->P, theta) : Rational(0);
}

inline Rational surface_volume(const SurfaceModel& m, const Vec& omega) {
  m.require_ample(omega, "omega");
  return m.intersect(omega, omega);
}

/// One Zariski chamber of lambda -> omega - lambda F: on [lo, hi] the
/// positive part is P0 + lambda P1.
struct VolumeChamber {
  Rational lo, hi;
  Vec p0, p1;
};

struct VolumeProfile {
  std::vector<VolumeChamber> chambers;
  Rational threshold;  ///< first lambda with vol(omega - lambda F) = 0
  PiecewisePoly volume;
};

namespace detail {
inline Rational positive_root_bound(const Polynomial& p) {
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, abs(p.coeff(i) / p.leading()));
  return m + 1;
}
}  // namespace detail

/// Exact volume curve lambda -> vol(omega - lambda F) for a big class omega
/// and a tracked curve F.
inline VolumeProfile volume_profile(const SurfaceModel& m, const Vec& omega, std::size_t f_index) {
  if (vol_big(m, omega).sign() <= 0) throw DomainError("big", "volume curve needs a big start class");
  const Vec& F = m.curves[f_index].cls;
  VolumeProfile prof;
  Rational cur = 0;
  const std::size_t max_chambers = 2 * m.curves.size() + 4;
  for (std::size_t iter = 0; iter <= max_chambers; ++iter) {
    const Vec at = omega - cur * F;
    std::vector<Germ> germ(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) germ[i] = {at[i], -F[i]};
    const auto z = zariski_generic<Germ>(m, germ);
    if (!z.psef) throw ConsistencyError("volume curve left the pseudoeffective cone before vanishing");
    std::vector<std::size_t> supp;
    for (const auto& [k, c] : z.negative) supp.push_back(k);
    // Affine positive part on the chamber: c(lambda) = c0 - lambda c1.
    Vec r0, r1;
    for (auto k : supp) {
      r0.push_back(m.intersect(omega, m.curves[k].cls));
      r1.push_back(m.intersect(F, m.curves[k].cls));
    }
    const Vec c0 = supp.empty() ? Vec{} : detail::solve_support<Rational>(m, supp, r0);
    const Vec c1 = supp.empty() ? Vec{} : detail::solve_support<Rational>(m, supp, r1);
    Vec p0 = omega, p1 = -F;
    for (std::size_t j = 0; j < supp.size(); ++j) {
      p0 = p0 - c0[j] * m.curves[supp[j]].cls;
      p1 = p1 + c1[j] * m.curves[supp[j]].cls;
    }
    std::optional<Rational> end;
    auto consider = [&](const Rational& a, const Rational& b) {
      if (b.sign() >= 0) return;
      const Rational r = -a / b;
      if (r <= cur) return;
      if (!end || r < *end) end = r;
    };
    for (std::size_t j = 0; j < supp.size(); ++j) consider(c0[j], -c1[j]);
    auto consider_curve = [&](std::size_t k) {
      if (std::find(supp.begin(), supp.end(), k) != supp.end()) return;
      consider(m.intersect(p0, m.curves[k].cls), m.intersect(p1, m.curves[k].cls));
    };
    for (auto k : m.negative) consider_curve(k);
    for (auto k : m.extremal) consider_curve(k);

    const Polynomial q({m.intersect(p0, p0), 2 * m.intersect(p0, p1), m.intersect(p1, p1)});
    const Polynomial local = q.shifted(cur);
    const Rational span = end ? *end - cur : detail::positive_root_bound(local);
    auto root = smallest_root_in(local, Rational(0), span);
    const Rational hi = root ? cur + *root : *end;
    if (!root && !end) throw ConsistencyError("volume curve does not vanish");
    prof.chambers.push_back({cur, hi, p0, p1});
    if (root) {
      prof.threshold = hi;
      break;
    }
    cur = hi;
    if (iter == max_chambers) throw ConsistencyError("volume curve chamber walk did not terminate");
  }

  std::vector<Rational> breaks;
  std::vector<Polynomial> pieces;
  for (const auto& ch : prof.chambers) {
    const Polynomial q({m.intersect(ch.p0, ch.p0), 2 * m.intersect(ch.p0, ch.p1), m.intersect(ch.p1, ch.p1)});
    // Independent route: interpolate three Zariski volumes, check a fourth.
    const Rational w = ch.hi - ch.lo;
    std::vector<Rational> xs{ch.lo, ch.lo + w / 2, ch.hi}, ys;
    for (const auto& x : xs) ys.push_back(vol_big(m, omega - x * F));
    const Polynomial interp = lagrange(xs, ys);
    const Rational probe = ch.lo + w / 3;
    if (!(interp == q) || vol_big(m, omega - probe * F) != q(probe))
      throw ConsistencyError("volume curve piece on [" + to_string(ch.lo) + ", " + to_string(ch.hi) +
                             "] disagrees with sampled volumes");
    breaks.push_back(ch.lo);
    pieces.push_back(q);
  }
  breaks.push_back(prof.threshold);
  prof.volume = PiecewisePoly::from_global(breaks, pieces, Rational(0));
  return prof;
}

/// Blows up one point. Curves keep their ids; their classes become strict
/// transforms C - m E. The new exceptional E gets boundary coefficient
/// sum(b_D m_D) - 1 so that K_Y + B_Y is the pullback of K_X + B.
inline SurfaceModel blow_up(const SurfaceModel& x, const BlowupStep& step) {
  for (const auto& [id, mult] : step.multiplicities) {
    x.curve_index(id);
    if (mult.sign() < 0) throw DomainError("nonnegative multiplicity", id);
  }
  for (const auto& c : x.curves) {
    const bool needed = c.exceptional || c.b != 0;
    if (needed && !step.multiplicities.count(c.id))
      throw ConfigError("blowup step " + step.exceptional + " is missing the multiplicity of " + c.id);
  }
  if (x.find_curve(step.exceptional)) throw ConfigError("exceptional id " + step.exceptional + " already used");

  SurfaceModel y;
  const std::size_t r = x.rank();
  y.basis = x.basis;
  y.basis.push_back(step.exceptional);
  y.gram = zero_matrix(r + 1, r + 1);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) y.gram[i][j] = x.gram[i][j];
  y.gram[r][r] = -1;
  y.canonical = x.canonical;
  y.canonical.push_back(1);
  Rational pulled_boundary = 0;
  for (const auto& c : x.curves) {
    auto it = step.multiplicities.find(c.id);
    const Rational mult = it == step.multiplicities.end() ? Rational(0) : it->second;
    SurfaceCurve s = c;
    s.cls.push_back(-mult);
    y.curves.push_back(std::move(s));
    pulled_boundary += c.b * mult;
  }
  SurfaceCurve e{step.exceptional, Vec(r + 1, Rational(0)), pulled_boundary - 1, true};
  e.cls[r] = 1;
  y.curves.push_back(std::move(e));
  y.negative = y.negative_from_curves();
  if (step.extremal.empty()) throw ConfigError("blowup step " + step.exceptional + " needs extremal curves");
  for (const auto& id : step.extremal) y.extremal.push_back(y.curve_index(id));

  Vec pulled = x.reference_ample;
  pulled.push_back(0);
  Rational eps = 1;
  y.reference_ample.clear();
  for (int k = 0; k < 64; ++k, eps /= 2) {
    Vec cand = pulled;
    cand[r] = -eps;
    bool ok = y.intersect(cand, cand).sign() > 0;
    for (auto i : y.extremal) ok = ok && y.intersect(cand, y.curves[i].cls).sign() > 0;
    if (ok) {
      y.reference_ample = cand;
      break;
    }
  }
  if (y.reference_ample.empty())
    throw ConfigError("blowup step " + step.exceptional + ": no ample class found near the pullback");
  y.chains.clear();
  y.validate();
  return y;
}

/// The surface obtained after the first `steps` blowups of `chain_id`.
inline SurfaceModel apply_chain(const SurfaceModel& base, const std::string& chain_id, std::size_t steps) {
  if (chain_id.empty()) {
    if (steps != 0) throw ConfigError("blowup steps given without a chain");
    return base;
  }
  const BlowupChain& chain = base.chain(chain_id);
  if (steps > chain.steps.size()) throw ConfigError("chain " + chain_id + " has fewer steps than requested");
  SurfaceModel y = base;
  for (std::size_t k = 0; k < steps; ++k) y = blow_up(y, chain.steps[k]);
  return y;
}

/// Pullback of a class on the base to a model with more exceptional basis vectors.
inline Vec pull_back(const Vec& a, std::size_t target_rank) {
  Vec out = a;
  out.resize(target_rank, Rational(0));
  return out;
}

/// v = t ord_F with F a tracked curve on the model reached by a chain prefix.
struct SurfaceValuation {
  std::string chain;  ///< empty for curves on the base surface
  std::size_t steps = 0;
  std::string divisor;
  Rational t = 1;
};

inline std::string encode(const SurfaceValuation& v) {
  return (v.chain.empty() ? std::string("-") : v.chain) + "/" + std::to_string(v.steps) + "/" + v.divisor + "@" +
         to_string(v.t);
}

inline Rational log_discrepancy(const SurfaceModel& base, const SurfaceValuation& v) {
  const SurfaceModel y = apply_chain(base, v.chain, v.steps);
  return v.t * (1 - y.curves[y.curve_index(v.divisor)].b);
}

/// lambda -> vol(pi^* omega - lambda F) for the valuation's divisor.
inline VolumeProfile vol_curve(const SurfaceModel& base, const SurfaceValuation& v, const Vec& omega) {
  base.require_ample(omega, "omega");
  const SurfaceModel y = apply_chain(base, v.chain, v.steps);
  return volume_profile(y, pull_back(omega, y.rank()), y.curve_index(v.divisor));
}

}  // namespace divstab
