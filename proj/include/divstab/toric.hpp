#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "divstab/numclass.hpp"
#include "divstab/piecewise.hpp"
#include "divstab/polytope.hpp"

namespace divstab {

namespace detail {

/// Calls f on every k-subset of {0, ..., n-1} in lexicographic order.
inline void for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!f(idx)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Normal vector of the hyperplane spanned by n-1 vectors in R^n (generalized
/// cross product).
inline Vec hyperplane_normal(const std::vector<Vec>& vs, std::size_t n) {
  Vec w(n);
  for (std::size_t j = 0; j < n; ++j) {
    Matrix m;
    for (const auto& v : vs) {
      Vec row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(v[c]);
      m.push_back(row);
    }
    const Rational d = m.empty() ? Rational(1) : determinant(m);
    w[j] = (j % 2 == 0) ? d : Rational(-d);
  }
  return w;
}

inline Integer integer_gcd(const Vec& u) {
  Integer g = 0;
  for (const auto& x : u) g = boost::multiprecision::gcd(g, numerator_of(x));
  return g;
}

}  // namespace detail

/// v = t v_u for a primitive lattice direction u.
struct ToricValuation {
  Vec u;
  Rational t = 1;
};

inline std::string encode(const ToricValuation& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.u.size(); ++i) s += (i ? "," : "") + to_string(v.u[i]);
  return s + ")@" + to_string(v.t);
}

/// Complete toric variety given by a fan. Num(X) classes are stored as
/// per-ray coefficients reduced modulo linear equivalence: the coefficients
/// of a fixed set of n independent rays are made zero and the remaining
/// r - n coefficients are the coordinates.
struct ToricModel {
  std::size_t n = 0;
  std::vector<std::string> ray_ids;
  std::vector<Vec> rays;
  std::vector<std::vector<std::size_t>> cones;
  Vec boundary;  ///< b_rho per ray
  std::uint64_t tag = next_model_tag();

  std::vector<std::size_t> fixed;  ///< rays whose coefficient is normalized to 0
  std::vector<std::size_t> free;   ///< rays carrying the coordinates

  std::size_t rank() const { return free.size(); }

  /// Validates the fan and prepares the coordinate system.
  void prepare() {
    if (n == 0) throw DomainError("positive dimension", "toric model with n = 0");
    if (rays.size() != ray_ids.size() || boundary.size() != rays.size())
      throw SchemaError("toric model: rays, ids and boundary coefficients must have equal length");
    for (std::size_t i = 0; i < rays.size(); ++i) {
      const auto& u = rays[i];
      if (u.size() != n) throw DomainError("ray dimension", "ray " + ray_ids[i] + " has wrong length");
      for (const auto& x : u)
        if (denominator_of(x) != 1) throw DomainError("integral rays", "ray " + ray_ids[i]);
      if (is_zero(u)) throw DomainError("nonzero rays", "ray " + ray_ids[i]);
      if (detail::integer_gcd(u) != 1) throw DomainError("primitive rays", "ray " + ray_ids[i] + " is not primitive");
      for (std::size_t j = 0; j < i; ++j)
        if (ray_ids[j] == ray_ids[i]) throw SchemaError("duplicate ray id " + ray_ids[i]);
    }
    for (const auto& c : cones) {
      Matrix m;
      for (auto i : c) {
        if (i >= rays.size()) throw SchemaError("cone refers to a missing ray");
        m.push_back(rays[i]);
      }
      if (divstab::rank(m) != n) throw DomainError("full-dimensional cones", "a maximal cone is not full-dimensional");
    }
    check_complete();
    fixed.clear();
    free.clear();
    Matrix basis;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      Matrix trial = basis;
      trial.push_back(rays[i]);
      if (fixed.size() < n && divstab::rank(trial) > basis.size()) {
        basis = trial;
        fixed.push_back(i);
      } else {
        free.push_back(i);
      }
    }
    if (!is_cartier(per_ray_canonical()))
      throw DomainError("Q-Cartier log canonical", "K_X + B is not Q-Cartier on the fan");
  }

  /// K_X + B as per-ray coefficients.
  Vec per_ray_canonical() const {
    Vec k(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) k[i] = boundary[i] - 1;
    return k;
  }

  Vec reduce(const Vec& d) const {
    if (d.size() != rays.size()) throw DomainError("class length", "per-ray vector has wrong length");
    Matrix a;
    Vec rhs;
    for (auto i : fixed) {
      a.push_back(rays[i]);
      rhs.push_back(-d[i]);
    }
    const Vec m = *solve(a, rhs);
    Vec out;
    for (auto i : free) out.push_back(d[i] + dot(m, rays[i]));
    return out;
  }

  Vec lift(const Vec& coords) const {
    if (coords.size() != rank()) throw DomainError("class length", "toric class has wrong number of coordinates");
    Vec d(rays.size(), Rational(0));
    for (std::size_t k = 0; k < free.size(); ++k) d[free[k]] = coords[k];
    return d;
  }

  NumClass class_of(const Vec& per_ray) const { return {reduce(per_ray), tag}; }

  /// Local linear function m_sigma with <m_sigma, u_rho> = -d_rho on the cone,
  /// or nullopt when the cone's rays impose inconsistent conditions.
  std::optional<Vec> local_vertex(const Vec& d, std::size_t cone) const {
    Matrix a;
    Vec rhs;
    for (auto i : cones[cone]) {
      a.push_back(rays[i]);
      rhs.push_back(-d[i]);
    }
    Matrix aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
    const auto piv = row_reduce(aug);
    if (!piv.empty() && piv.back() == n) return std::nullopt;
    Vec m(n, Rational(0));
    for (std::size_t r = 0; r < piv.size(); ++r) m[piv[r]] = aug[r][n];
    return m;
  }

  bool is_cartier(const Vec& d) const {
    for (std::size_t c = 0; c < cones.size(); ++c)
      if (!local_vertex(d, c)) return false;
    return true;
  }

  /// Values <m_sigma, u_rho> + d_rho for rho outside sigma; all >= 0 iff the
  /// class is nef, all > 0 iff ample. They play the role of curve classes in
  /// the norm and Thompson ratios.
  Vec convexity_values(const Vec& coords) const {
    const Vec d = lift(coords);
    Vec out;
    for (std::size_t c = 0; c < cones.size(); ++c) {
      auto m = local_vertex(d, c);
      if (!m) throw DomainError("Q-Cartier", "class is not Cartier on a maximal cone");
      for (std::size_t i = 0; i < rays.size(); ++i) {
        if (std::find(cones[c].begin(), cones[c].end(), i) != cones[c].end()) continue;
        out.push_back(dot(*m, rays[i]) + d[i]);
      }
    }
    return out;
  }

  bool is_ample(const Vec& coords) const {
    if (coords.size() != rank() || !is_cartier(lift(coords))) return false;
    for (const auto& x : convexity_values(coords))
      if (x.sign() <= 0) return false;
    return true;
  }

  bool is_nef(const Vec& coords) const {
    if (coords.size() != rank() || !is_cartier(lift(coords))) return false;
    for (const auto& x : convexity_values(coords))
      if (x.sign() < 0) return false;
    return true;
  }

  void require_ample(const Vec& coords, const std::string& what) const {
    if (!is_ample(coords)) throw DomainError("ample", what + " does not have a strictly convex support function");
  }

  Polytope polytope_of(const Vec& coords) const { return polytope_of_support(lift(coords)); }

  /// Moment polytope {m : <m, u_rho> + d_rho >= 0} of per-ray support values;
  /// lifting reduced coordinates gives a translate.
  Polytope polytope_of_support(const Vec& d) const {
    require_ample(reduce(d), "omega");
    Polytope p(n, rays, d);
    if (p.vertices().size() != cones.size())
      throw ConsistencyError("moment polytope vertices do not match the maximal cones");
    return p;
  }

  Rational volume(const Vec& coords) const { return polytope_of(coords).normalized_volume(); }

  /// Largest t0 = 2^-k with omega +- t0 theta ample.
  Rational ample_radius(const Vec& omega, const Vec& theta) const {
    Rational t = 1;
    for (int k = 0; k < 80; ++k, t /= 2)
      if (is_ample(omega + t * theta) && is_ample(omega - t * theta)) return t;
    throw DomainError("ample", "no ample neighborhood along the direction");
  }

  /// t -> n! Vol(P_{omega + t theta}) near t = 0, exact.
  Polynomial volume_polynomial(const Vec& omega, const Vec& theta) const {
    const Rational t0 = ample_radius(omega, theta);
    return fit(n, t0, [&](const Rational& t) { return volume(omega + t * theta); });
  }

  /// Coefficients (index, c) of u in the rays of a cone containing it.
  std::vector<std::pair<std::size_t, Rational>> cone_coordinates(const Vec& u) const {
    for (const auto& cone : cones) {
      std::vector<std::pair<std::size_t, Rational>> found;
      detail::for_each_subset(cone.size(), n, [&](const std::vector<std::size_t>& pick) {
        Matrix a(n, Vec(n));
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c) a[r][c] = rays[cone[pick[c]]][r];
        auto x = solve(a, u);
        if (!x) return true;
        for (const auto& c : *x)
          if (c.sign() < 0) return true;
        for (std::size_t c = 0; c < n; ++c) found.emplace_back(cone[pick[c]], (*x)[c]);
        return false;
      });
      if (!found.empty()) return found;
    }
    throw ConsistencyError("direction not covered by the fan");
  }

  Rational log_discrepancy(const ToricValuation& v) const {
    require_direction(v);
    Rational a = 0;
    for (const auto& [i, c] : cone_coordinates(v.u)) a += c * (1 - boundary[i]);
    return v.t * a;
  }

  void require_direction(const ToricValuation& v) const {
    if (v.u.size() != n) throw DomainError("direction length", "toric direction has wrong length");
    if (is_zero(v.u)) throw DomainError("nonzero direction", "u = 0");
    for (const auto& x : v.u)
      if (denominator_of(x) != 1) throw DomainError("integral direction", encode(v));
    if (detail::integer_gcd(v.u) != 1) throw DomainError("primitive direction", encode(v));
    if (v.t.sign() <= 0) throw DomainError("positive scale", encode(v));
  }

  /// lambda -> n! Vol{m in P : <m,u> >= min_P <.,u> + lambda}.
  PiecewisePoly vol_slice_curve(const Vec& omega, const Vec& u) const {
    if (is_zero(u)) throw DomainError("nonzero direction", "u = 0");
    const Polytope p = polytope_of(omega);
    const Rational lo = p.min_pairing(u);
    std::vector<Rational> heights;
    for (const auto& v : p.vertices()) heights.push_back(dot(v, u) - lo);
    std::sort(heights.begin(), heights.end());
    heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
    auto slice = [&](const Rational& lambda) { return p.cut(u, -(lo + lambda)).normalized_volume(); };
    std::vector<Polynomial> pieces;
    for (std::size_t i = 0; i + 1 < heights.size(); ++i) {
      const Rational a = heights[i], w = heights[i + 1] - heights[i];
      pieces.push_back(fit(n, w, [&](const Rational& x) { return slice(a + x); }, false).shifted(-a));
    }
    auto f = PiecewisePoly::from_global(heights, pieces, Rational(0));
    if (f(Rational(0)) != p.normalized_volume()) throw ConsistencyError("slice curve does not start at the volume");
    return f;
  }

  Rational vol_slice(const Vec& omega, const Vec& u, const Rational& lambda) const {
    const Polytope p = polytope_of(omega);
    return p.cut(u, -(p.min_pairing(u) + lambda)).normalized_volume();
  }

  /// Energy of t v_u via the barycenter: t (<bar, u> - min <., u>).
  Rational dirac_energy(const Vec& omega, const ToricValuation& v) const {
    require_direction(v);
    const Polytope p = polytope_of(omega);
    return v.t * (dot(p.barycenter(), v.u) - p.min_pairing(v.u));
  }

  /// Expected vanishing order by integrating the slice curve, compared
  /// exactly with the barycenter formula.
  Rational expected_order(const Vec& omega, const ToricValuation& v) const {
    require_direction(v);
    const PiecewisePoly f = vol_slice_curve(omega, v.u);
    const Rational by_integral = v.t * f.integrate_support() / volume(omega);
    const Rational by_barycenter = dirac_energy(omega, v);
    if (by_integral != by_barycenter)
      throw ConsistencyError("expected order: integral " + to_string(by_integral) + " != barycenter " +
                             to_string(by_barycenter));
    return by_integral;
  }

  Rational threshold(const Vec& omega, const Vec& u) const {
    const Polytope p = polytope_of(omega);
    return p.max_pairing(u) - p.min_pairing(u);
  }

  /// d/ds of the energy of t v_u along omega + s theta at s = 0, from exact
  /// polynomial fits of the volume and first moment.
  Rational dirac_energy_grad(const Vec& omega, const Vec& theta, const ToricValuation& v) const {
    require_direction(v);
    const Rational t0 = ample_radius(omega, theta);
    const Polynomial vol = fit(n, t0, [&](const Rational& s) { return volume(omega + s * theta); });
    const Polynomial moment =
        fit(n + 1, t0, [&](const Rational& s) { return polytope_of(omega + s * theta).integral_linear(v.u); });
    const Polynomial low =
        fit(1, t0, [&](const Rational& s) { return polytope_of(omega + s * theta).min_pairing(v.u); });
    const Rational v0 = vol(Rational(0));
    const Rational dv = vol.coeff(1), m0 = moment(Rational(0)), dm = moment.coeff(1);
    return v.t * ((dm * v0 - m0 * dv) / (v0 * v0) - low.coeff(1));
  }

  /// Barycenter and vertices of P_omega with their derivatives along theta;
  /// gives energies and energy derivatives of every direction in O(n).
  struct EnergyData {
    Vec bar, dbar;
    std::vector<Vec> vertex, dvertex;  ///< m_sigma per maximal cone
  };

  EnergyData energy_data(const Vec& omega, const Vec& theta) const {
    require_ample(omega, "omega");
    const Vec d = lift(omega), dt = lift(theta);
    EnergyData e;
    for (std::size_t c = 0; c < cones.size(); ++c) {
      e.vertex.push_back(*local_vertex(d, c));
      auto dv = local_vertex(dt, c);
      if (!dv) throw DomainError("Q-Cartier", "theta is not Cartier on a maximal cone");
      e.dvertex.push_back(*dv);
    }
    // n! Vol has degree n and n! int m has degree n + 1 in s.
    const Rational t0 = ample_radius(omega, theta);
    std::vector<Rational> xs;
    std::vector<Rational> vols;
    std::vector<Vec> moments;
    for (std::size_t k = 0; k <= n + 1; ++k) xs.push_back(t0 * Rational(static_cast<long>(k), static_cast<long>(n + 1)));
    xs.push_back(-t0 / 2);
    for (const auto& s : xs) {
      const Polytope p = polytope_of(omega + s * theta);
      vols.push_back(p.normalized_volume());
      Vec mom;
      for (std::size_t i = 0; i < n; ++i) {
        Vec ei(n, Rational(0));
        ei[i] = 1;
        mom.push_back(p.integral_linear(ei));
      }
      moments.push_back(mom);
    }
    const std::vector<Rational> fit_x(xs.begin(), xs.end() - 1);
    std::vector<Rational> vy(vols.begin(), vols.end() - 1);
    const Polynomial vol = lagrange(fit_x, vy);
    if (vol.degree() > static_cast<int>(n) || vol(xs.back()) != vols.back())
      throw ConsistencyError("volume is not polynomial of degree n along theta");
    const Rational v0 = vol(Rational(0)), dv = vol.coeff(1);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> my;
      for (std::size_t k = 0; k + 1 < xs.size(); ++k) my.push_back(moments[k][i]);
      const Polynomial mi = lagrange(fit_x, my);
      if (mi(xs.back()) != moments.back()[i]) throw ConsistencyError("first moment fit failed its verification sample");
      const Rational m0 = mi(Rational(0)), dm = mi.coeff(1);
      e.bar.push_back(m0 / v0);
      e.dbar.push_back((dm * v0 - m0 * dv) / (v0 * v0));
    }
    return e;
  }

  /// (energy, derivative along theta) of t v_u from cached data.
  std::pair<Rational, Rational> energy_from(const EnergyData& e, const ToricValuation& v) const {
    require_direction(v);
    std::size_t best = 0;
    Rational low = dot(e.vertex[0], v.u);
    for (std::size_t c = 1; c < e.vertex.size(); ++c) {
      const Rational x = dot(e.vertex[c], v.u);
      if (x < low) {
        low = x;
        best = c;
      }
    }
    const Rational dlow = dot(e.dvertex[best], v.u);
    for (std::size_t c = 0; c < e.vertex.size(); ++c)
      if (dot(e.vertex[c], v.u) == low && dot(e.dvertex[c], v.u) != dlow)
        throw ConsistencyError("minimizing vertices of " + encode(v) + " move apart along theta");
    return {v.t * (dot(e.bar, v.u) - low), v.t * (dot(e.dbar, v.u) - dlow)};
  }

 private:
  /// Interpolates a polynomial of degree <= deg through samples at
  /// s = span k / deg and checks it at an extra interior point.
  template <class F>
  static Polynomial fit(std::size_t deg, const Rational& span, F&& f, bool symmetric = true) {
    std::vector<Rational> xs, ys;
    for (std::size_t k = 0; k <= deg; ++k) {
      xs.push_back(span * Rational(static_cast<long>(k), static_cast<long>(deg)));
      ys.push_back(f(xs.back()));
    }
    const Polynomial p = lagrange(xs, ys);
    const Rational probe = symmetric ? Rational(-span / 2) : Rational(span / Rational(2 * static_cast<long>(deg) + 1));
    if (p(probe) != f(probe)) throw ConsistencyError("polynomial fit failed its verification sample");
    return p;
  }

  void check_complete() const {
    // Every facet of every maximal cone must be shared by exactly one other
    // maximal cone lying on the opposite side.
    std::map<std::vector<std::size_t>, std::vector<int>> sides;
    for (std::size_t c = 0; c < cones.size(); ++c) {
      const auto& cone = cones[c];
      std::set<std::vector<std::size_t>> facets;
      detail::for_each_subset(cone.size(), n - 1, [&](const std::vector<std::size_t>& pick) {
        std::vector<Vec> vs;
        for (auto i : pick) vs.push_back(rays[cone[i]]);
        if (n > 1 && divstab::rank(vs) != n - 1) return true;
        const Vec w = detail::hyperplane_normal(vs, n);
        int pos = 0, neg = 0;
        std::vector<std::size_t> on;
        for (auto i : cone) {
          const int s = dot(w, rays[i]).sign();
          if (s > 0) ++pos;
          if (s < 0) ++neg;
          if (s == 0) on.push_back(i);
        }
        if (pos && neg) return true;
        std::sort(on.begin(), on.end());
        if (facets.insert(on).second) sides[on].push_back(static_cast<int>(c));
        return true;
      });
    }
    for (const auto& [facet, owners] : sides) {
      if (owners.size() != 2) throw DomainError("complete fan", "a wall is not shared by exactly two maximal cones");
      std::vector<Vec> vs;
      for (auto i : facet) vs.push_back(rays[i]);
      // Any n-1 independent rays of the wall span it.
      Matrix basis;
      for (const auto& v : vs) {
        Matrix trial = basis;
        trial.push_back(v);
        if (divstab::rank(trial) > basis.size()) basis = trial;
      }
      const Vec w = detail::hyperplane_normal(basis, n);
      int side[2] = {0, 0};
      for (int k = 0; k < 2; ++k)
        for (auto i : cones[owners[k]]) {
          const int s = dot(w, rays[i]).sign();
          if (s != 0) side[k] = s;
        }
      if (side[0] == side[1]) throw DomainError("complete fan", "two cones on the same side of a wall");
    }
  }
};

}  // namespace divstab
