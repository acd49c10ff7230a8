#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "divstab/finite_difference.hpp"
#include "divstab/functionals.hpp"
#include "divstab/sampling.hpp"

namespace divstab {

/// One property checked on seeded samples. `residual` is the largest
/// |lhs - rhs| for identities and the largest violation for inequalities.
struct LedgerRow {
  std::string check;
  std::string property;
  std::size_t samples = 0;
  bool passed = true;
  Rational residual = 0;
  std::string detail;
};

struct ValidationLedger {
  std::uint64_t seed = 0;
  std::vector<LedgerRow> rows;

  bool passed() const {
    for (const auto& r : rows)
      if (!r.passed) return false;
    return true;
  }
  const LedgerRow* find(const std::string& check) const {
    for (const auto& r : rows)
      if (r.check == check) return &r;
    return nullptr;
  }
};

namespace detail {

class RowBuilder {
 public:
  RowBuilder(std::string check, std::string property) { row_.check = std::move(check), row_.property = std::move(property); }

  void equal(const Rational& a, const Rational& b, const std::string& what = "") {
    ++row_.samples;
    const Rational r = abs(Rational(a - b));
    if (r > row_.residual) row_.residual = r;
    if (r != 0) fail(what + ": " + to_string(a) + " != " + to_string(b));
  }
  /// Records a <= b.
  void at_most(const Rational& a, const Rational& b, const std::string& what = "") {
    ++row_.samples;
    if (a > b) {
      const Rational r = a - b;
      if (r > row_.residual) row_.residual = r;
      fail(what + ": " + to_string(a) + " > " + to_string(b));
    }
  }
  void expect(bool ok, const std::string& what) {
    ++row_.samples;
    if (!ok) fail(what);
  }
  void fail(const std::string& what) {
    if (row_.passed) row_.detail = what;
    row_.passed = false;
  }
  void note(std::string what) {
    if (row_.passed) row_.detail = std::move(what);
  }
  LedgerRow take() { return std::move(row_); }

 private:
  LedgerRow row_;
};

inline void run_row(ValidationLedger& ledger, const std::string& check, const std::string& property,
                    const std::function<void(RowBuilder&)>& body) {
  RowBuilder b(check, property);
  try {
    body(b);
  } catch (const Error& e) {
    b.fail(std::string("raised: ") + e.what());
  }
  ledger.rows.push_back(b.take());
}

/// Seeded draws of ample classes, valuations and measures on any backend.
class ModelSampler {
 public:
  ModelSampler(std::shared_ptr<const VarietyModel> m, std::uint64_t seed) : m_(std::move(m)), s_(seed) {
    anchor_ = find_anchor();
  }

  Sampler& rng() { return s_; }
  const VarietyModel& model() const { return *m_; }

  Vec ample() {
    for (int tries = 0; tries < 200; ++tries) {
      Vec w = s_.fraction(2, 8, 4) * anchor_;
      for (auto& x : w) x += s_.fraction(-3, 3, 8);
      if (is_ample(*m_, m_->make_class(w))) return w;
    }
    return anchor_;
  }

  Vec any_class() {
    Vec w(m_->rank());
    for (auto& x : w) x = s_.fraction(-8, 8, 4);
    return w;
  }

  DivisorialValuation valuation() {
    const Rational t = s_.fraction(1, 12, 4);
    switch (m_->backend()) {
      case Backend::curve: {
        const auto& pts = m_->curve().points;
        const long k = s_.integer(0, static_cast<long>(pts.size()));
        return CurveValuation{k == static_cast<long>(pts.size()) ? "generic" : pts[static_cast<std::size_t>(k)].id, t};
      }
      case Backend::surface: {
        CandidateOptions o;
        o.depth = 2;
        const auto set = candidates(*m_, o);
        auto v = set.valuations[static_cast<std::size_t>(s_.integer(0, static_cast<long>(set.valuations.size()) - 1))];
        return scaled(v, t);
      }
      case Backend::toric: {
        const std::size_t n = m_->toric().n;
        while (true) {
          Vec u(n);
          for (auto& x : u) x = Rational(s_.integer(-3, 3));
          if (!is_zero(u) && detail::integer_gcd(u) == 1) return ToricValuation{u, t};
        }
      }
    }
    return {};
  }

  DivisorialMeasure measure(std::size_t max_atoms = 3) {
    const auto w = s_.composition(12, static_cast<std::size_t>(s_.integer(1, static_cast<long>(max_atoms))));
    DivisorialMeasure mu;
    for (long x : w) mu.atoms.push_back({valuation(), Rational(x, 12)});
    return mu;
  }

  /// Largest 2^-k with omega +- h theta ample.
  Rational ample_step(const Vec& omega, const Vec& theta) const {
    Rational h = 1;
    for (int k = 0; k < 40; ++k, h /= 2)
      if (is_ample(*m_, m_->make_class(omega + h * theta)) && is_ample(*m_, m_->make_class(omega - h * theta))) return h;
    throw DomainError("ample", "no ample step along theta");
  }

 private:
  Vec find_anchor() {
    if (m_->default_omega) return *m_->default_omega;
    switch (m_->backend()) {
      case Backend::curve: return {m_->curve().V};
      case Backend::surface: return m_->surface().reference_ample;
      case Backend::toric: {
        const auto& t = m_->toric();
        for (int tries = 0; tries < 1000; ++tries) {
          Vec d(t.rays.size());
          for (auto& x : d) x = Rational(s_.integer(1, 6));
          const Vec w = t.reduce(d);
          if (t.is_ample(w)) return w;
        }
        throw DomainError("ample", "no ample class found on the toric model");
      }
    }
    return {};
  }

  std::shared_ptr<const VarietyModel> m_;
  Sampler s_;
  Vec anchor_;
};

inline std::vector<std::string> curve_sample_points(const CurveModel& m) {
  std::vector<std::string> pts;
  for (const auto& p : m.points) pts.push_back(p.id);
  pts.push_back("q1");
  pts.push_back("q2");
  return pts;
}

inline void curve_rows(ValidationLedger& ledger, const std::shared_ptr<const VarietyModel>& model, ModelSampler& ms) {
  const CurveModel base = model->curve();
  const auto pts = curve_sample_points(base);
  Sampler& s = ms.rng();
  auto polarized = [&] { return base.with_degree(ms.ample()[0]); };

  run_row(ledger, "energy_translation", "E(phi + c) = E(phi) + c", [&](RowBuilder& b) {
    for (int k = 0; k < 100; ++k) {
      const CurveModel m = polarized();
      PLPotential phi = s.potential(m, pts);
      const Rational e = energy(m, phi), c = s.fraction(-12, 12, 5);
      phi.c += c;
      b.equal(energy(m, phi), e + c, "sample " + std::to_string(k));
    }
  });
  run_row(ledger, "energy_of_monge_ampere", "||MA(phi)|| = E(phi) - int phi MA(phi)", [&](RowBuilder& b) {
    for (int k = 0; k < 100; ++k) {
      const CurveModel m = polarized();
      const PLPotential phi = s.potential(m, pts);
      const CurveMeasure mu = monge_ampere(m, phi);
      b.equal(measure_energy(m, mu).norm, energy(m, phi) - integrate(phi, mu), "sample " + std::to_string(k));
    }
  });
  run_row(ledger, "euler_identity", "grad_omega ||mu|| = ||mu||", [&](RowBuilder& b) {
    for (int k = 0; k < 100; ++k) {
      const CurveModel m = polarized();
      const auto me = measure_energy(m, s.measure(pts));
      b.equal(grad_energy(m, me.potential, m.V), me.norm, "sample " + std::to_string(k));
    }
  });
  run_row(ledger, "energy_homogeneity", "||t_* mu|| = t ||mu|| and ||mu||_{t omega} = t ||mu||", [&](RowBuilder& b) {
    for (int k = 0; k < 100; ++k) {
      const CurveModel m = polarized();
      const CurveMeasure mu = s.measure(pts);
      const Rational t = s.fraction(1, 16, 4), e = measure_energy(m, mu).norm;
      b.equal(measure_energy(m, scale_measure(mu, t)).norm, t * e, "push-forward");
      b.equal(measure_energy(m.with_degree(t * m.V), mu).norm, t * e, "polarization");
    }
  });
  run_row(ledger, "entropy_homogeneity", "Ent(t_* mu) = t Ent(mu)", [&](RowBuilder& b) {
    for (int k = 0; k < 100; ++k) {
      const CurveMeasure mu = s.measure(pts);
      const Rational t = s.fraction(1, 16, 4);
      b.equal(entropy(base, scale_measure(mu, t)), t * entropy(base, mu), "sample " + std::to_string(k));
    }
  });
  run_row(ledger, "convexity_chain", "A >= c ||.|| on atoms implies Ent(mu) >= c sum m_i ||v_i|| >= c ||mu||",
          [&](RowBuilder& b) {
            for (int k = 0; k < 100; ++k) {
              const CurveModel m = polarized();
              const CurveMeasure mu = s.measure(pts);
              std::optional<Rational> c;
              Rational sum = 0;
              for (const auto& a : mu.atoms) {
                if (a.t == 0) continue;
                const Rational e = measure_energy(m, CurveMeasure{{{a.point, a.t, Rational(1)}}}).norm;
                const Rational r = log_discrepancy(m, a.point, a.t) / e;
                if (!c || r < *c) c = r;
                sum += a.mass * e;
              }
              if (!c) continue;
              b.at_most(*c * sum, entropy(m, mu), "entropy bound");
              if (c->sign() >= 0) b.at_most(*c * measure_energy(m, mu).norm, *c * sum, "convexity");
            }
          });
}

inline void dirac_rows(ValidationLedger& ledger, const std::shared_ptr<const VarietyModel>& model, ModelSampler& ms) {
  Sampler& s = ms.rng();
  run_row(ledger, "dirac_euler_identity", "grad_omega ||v||_omega = ||v||_omega", [&](RowBuilder& b) {
    for (int k = 0; k < 100; ++k) {
      const PolarizedPair p = polarize(model, ms.ample());
      const auto v = ms.valuation();
      b.equal(dirac_energy_grad(p, v, p.omega), dirac_energy(p, v), encode(v));
    }
  });
  run_row(ledger, "dirac_energy_homogeneity", "||t v|| = t ||v|| and ||v||_{t omega} = t ||v||", [&](RowBuilder& b) {
    for (int k = 0; k < 100; ++k) {
      const PolarizedPair p = polarize(model, ms.ample());
      const auto v = ms.valuation();
      const Rational t = s.fraction(1, 16, 4), e = dirac_energy(p, v);
      b.equal(dirac_energy(p, scaled(v, t)), t * e, "push-forward " + encode(v));
      b.equal(dirac_energy(with_omega(p, t * p.omega.coords), v), t * e, "polarization " + encode(v));
    }
  });
  run_row(ledger, "measure_entropy_homogeneity", "Ent(t_* mu) = t Ent(mu)", [&](RowBuilder& b) {
    const PolarizedPair p = polarize(model, ms.ample());
    for (int k = 0; k < 100; ++k) {
      const auto mu = ms.measure();
      const Rational t = s.fraction(1, 16, 4);
      b.equal(entropy(p, scale_measure(mu, t)), t * entropy(p, mu), "sample " + std::to_string(k));
    }
  });
  run_row(ledger, "measure_energy_bracket", "0 <= lower <= ||mu|| <= sum m_i ||v_i||, exact on one atom",
          [&](RowBuilder& b) {
            for (int k = 0; k < 20; ++k) {
              const PolarizedPair p = polarize(model, ms.ample());
              const auto mu = ms.measure();
              const auto e = measure_energy(p, mu);
              b.at_most(Rational(0), e.lo, "lower >= 0");
              b.at_most(e.lo, e.hi, "lower <= upper");
              if (mu.merged().atoms.size() == 1) b.expect(e.exact(), "single atom is exact");
            }
          });
  run_row(ledger, "energy_gradient_finite_difference",
          "Richardson difference of ||v||_{omega + t theta} matches grad_theta ||v|| to 1e-6 relative", [&](RowBuilder& b) {
            for (int k = 0; k < 8; ++k) {
              const Vec omega = ms.ample();
              const PolarizedPair p = polarize(model, omega);
              const Vec theta = k % 2 ? p.K.coords : ms.any_class();
              if (is_zero(theta)) continue;
              const auto v = ms.valuation();
              const Rational h0 = ms.ample_step(omega, theta) / 4;
              const auto d = richardson_derivative(
                  [&](const Rational& h) { return dirac_energy(polarize(model, omega + h * theta), v); }, h0);
              const Rational exact = dirac_energy_grad(p, v, model->make_class(theta));
              const Rational err = abs(Rational(d.value - exact));
              const Rational tol = Rational(1, 1000000) * std::max(abs(exact), Rational(1, 1000000));
              b.expect(d.converged, encode(v) + " extrapolation did not converge");
              b.at_most(err, tol, encode(v) + " levels " + std::to_string(d.levels));
            }
          });
  run_row(ledger, "beta_dual_formula", "beta(v) = A(v) + grad_K ||v||, and A - lambda ||v|| when -K = lambda omega",
          [&](RowBuilder& b) {
            const Vec anti = -model->canonical_class().coords;
            const bool fano = is_ample(*model, model->make_class(anti));
            for (int k = 0; k < 30; ++k) {
              const PolarizedPair p = polarize(model, ms.ample());
              const auto v = ms.valuation();
              b.equal(beta_dirac(p, v), log_discrepancy(p, v) + dirac_energy_grad(p, v, p.K), encode(v));
              if (!fano) continue;
              const PolarizedPair a = polarize(model, ms.rng().fraction(1, 8, 2) * anti);
              b.equal(beta_dirac(a, v), log_discrepancy(a, v) - *a.lambda * dirac_energy(a, v), encode(v));
            }
          });
}

inline void class_rows(ValidationLedger& ledger, const std::shared_ptr<const VarietyModel>& model, ModelSampler& ms) {
  const std::size_t n = model->dimension();
  run_row(ledger, "trace_bound", "|tr_omega(theta)| <= n ||theta||_omega", [&](RowBuilder& b) {
    for (int k = 0; k < 100; ++k) {
      const NumClass w = model->make_class(ms.ample()), th = model->make_class(ms.any_class());
      b.at_most(Rational(abs(trace(*model, w, th))), Rational(static_cast<long>(n)) * norm_sup(*model, w, th),
                "sample " + std::to_string(k));
    }
  });
  run_row(ledger, "log_volume_derivative", "d/dt V_{omega + t theta} at 0 = V_omega tr_omega(theta)", [&](RowBuilder& b) {
    for (int k = 0; k < 30; ++k) {
      const Vec w = ms.ample(), th = ms.any_class();
      const Rational h0 = ms.ample_step(w, th) / 2;
      const auto d = richardson_derivative([&](const Rational& h) { return volume(*model, model->make_class(w + h * th)); },
                                           h0);
      const NumClass wc = model->make_class(w);
      b.equal(d.value, volume(*model, wc) * trace(*model, wc, model->make_class(th)), "sample " + std::to_string(k));
    }
  });
}

inline Rational measure_energy_exact(const PolarizedPair& p, const DivisorialMeasure& mu) {
  const auto e = measure_energy(p, mu);
  if (!e.exact()) throw DomainError("exact energy", "measure energy is only bracketed");
  return e.lo;
}

inline void comparison_rows(ValidationLedger& ledger, const std::shared_ptr<const VarietyModel>& model,
                            ModelSampler& ms) {
  const long c = dimensional_constant(model->dimension());
  CandidateOptions opt;
  opt.radius = 2;
  const CandidateSet set = candidates(*model, opt);
  run_row(ledger, "energy_comparison", "s^-C_n ||mu||_omega <= ||mu||_omega' <= s^C_n ||mu||_omega",
          [&](RowBuilder& b) {
            for (int k = 0; k < 50; ++k) {
              const PolarizedPair p = polarize(model, ms.ample()), q = polarize(model, ms.ample());
              const Rational s = pow(thompson_scale(thompson(*model, p.omega, q.omega)), static_cast<unsigned>(c));
              const DivisorialMeasure mu = model->backend() == Backend::curve
                                               ? ms.measure()
                                               : DivisorialMeasure::dirac(ms.valuation());
              const Rational e = measure_energy_exact(p, mu), e2 = measure_energy_exact(q, mu);
              b.at_most(e2, s * e, "upper");
              b.at_most(e, s * e2, "lower");
            }
          });
  run_row(ledger, "delta_comparison", "s^-C_n delta(omega) <= delta(omega') <= s^C_n delta(omega) on the candidate set",
          [&](RowBuilder& b) {
            for (int k = 0; k < 50; ++k) {
              const PolarizedPair p = polarize(model, ms.ample()), q = polarize(model, ms.ample());
              const Rational s = pow(thompson_scale(thompson(*model, p.omega, q.omega)), static_cast<unsigned>(c));
              const auto d = thresholds(p, set).delta, d2 = thresholds(q, set).delta;
              if (d.status != ThresholdReport::Status::finite || d2.status != ThresholdReport::Status::finite) {
                b.expect(d.status == d2.status, "sublc status depends on omega");
                continue;
              }
              b.at_most(d2.value, s * d.value, "upper");
              b.at_most(d.value, s * d2.value, "lower");
            }
          });
  run_row(ledger, "sigma_delta_bound", "|sigma_val - delta| <= C_n ||K||_omega on the candidate set", [&](RowBuilder& b) {
    for (int k = 0; k < 20; ++k) {
      const PolarizedPair p = polarize(model, ms.ample());
      const auto r = thresholds(p, set);
      if (r.delta.status != ThresholdReport::Status::finite) continue;
      b.at_most(abs(Rational(r.sigma_val.value - r.delta.value)), c * norm_sup(*model, p.omega, p.K),
                "sample " + std::to_string(k));
    }
  });
}

/// Zariski decompositions of seeded classes, re-verified from the
/// definition: P + N = alpha, N >= 0 on a negative definite support, P nef
/// and orthogonal to the support.
inline void zariski_rows(ValidationLedger& ledger, const SurfaceModel& m, Sampler& s, const Vec& anchor) {
  run_row(ledger, "zariski_certificate", "alpha = P + N with P nef, N >= 0 negative definite, P . N_i = 0",
          [&](RowBuilder& b) {
            for (int k = 0; k < 120; ++k) {
              Vec a = s.fraction(1, 8, 4) * anchor;
              for (auto i : m.negative) a = a + s.fraction(-4, 8, 4) * m.curves[i].cls;
              for (auto& x : a) x += s.fraction(-2, 2, 8);
              const auto z = try_zariski(m, a);
              if (!z) continue;
              b.expect(z->P + z->N == a, "P + N = alpha");
              b.expect(m.is_nef(z->P), "P nef");
              Matrix g;
              for (const auto& [i, ci] : z->support) {
                b.expect(ci.sign() > 0, "N coefficient positive");
                b.equal(m.intersect(z->P, m.curves[i].cls), 0, "P . " + m.curves[i].id);
                Vec row;
                for (const auto& [j, cj] : z->support) row.push_back(m.intersect(m.curves[i].cls, m.curves[j].cls));
                g.push_back(row);
              }
              if (!g.empty()) b.expect(is_negative_definite(g), "negative definite support");
              b.equal(vol_big(m, a), m.intersect(z->P, z->P), "vol = P^2");
            }
          });
}

/// A deliberately broken copy of the model must be rejected at load.
inline void corruption_row(ValidationLedger& ledger, const VarietyModel& model) {
  run_row(ledger, "corrupted_model_rejected", "load-time invariants reject a corrupted copy", [&](RowBuilder& b) {
    try {
      switch (model.backend()) {
        case Backend::curve: {
          CurveModel c = model.curve();
          c.V = -c.V;
          c.validate();
          break;
        }
        case Backend::surface: {
          SurfaceModel s = model.surface();
          for (auto& row : s.gram)
            for (auto& x : row) x = -x;
          s.validate();
          break;
        }
        case Backend::toric: {
          ToricModel t = model.toric();
          t.rays[0] = Rational(2) * t.rays[0];
          t.prepare();
          break;
        }
      }
      b.fail("corrupted model was accepted");
    } catch (const DomainError& e) {
      b.expect(true, "");
      b.note(std::string("rejected: ") + e.what());
    }
  });
}

}  // namespace detail

/// Matched data on two models of the same variety: classes and valuations
/// given pairwise in each model's own coordinates.
struct Counterpart {
  std::shared_ptr<const VarietyModel> model;
  std::vector<std::pair<Vec, Vec>> omegas;
  std::vector<std::pair<DivisorialValuation, DivisorialValuation>> valuations;
};

namespace detail {

inline void counterpart_rows(ValidationLedger& ledger, const std::shared_ptr<const VarietyModel>& model,
                             const Counterpart& other) {
  run_row(ledger, "counterpart_agreement", "volume, threshold, energy and log discrepancy agree across models",
          [&](RowBuilder& b) {
            for (const auto& [wa, wb] : other.omegas) {
              const PolarizedPair p = polarize(model, wa), q = polarize(other.model, wb);
              b.equal(p.V, q.V, "volume");
              for (const auto& [va, vb] : other.valuations) {
                const std::string tag = encode(va) + " ~ " + encode(vb);
                b.equal(dirac_threshold(p, va), dirac_threshold(q, vb), "threshold " + tag);
                b.equal(dirac_energy(p, va), dirac_energy(q, vb), "energy " + tag);
                b.equal(log_discrepancy(p, va), log_discrepancy(q, vb), "log discrepancy " + tag);
              }
            }
          });
}

}  // namespace detail

/// Seeded property checks on one model. Every row records its sample count
/// and the largest exact residual.
inline ValidationLedger validation_suite(const std::shared_ptr<const VarietyModel>& model, std::uint64_t seed,
                                         const Counterpart* counterpart = nullptr) {
  ValidationLedger ledger;
  ledger.seed = seed;
  detail::ModelSampler ms(model, seed);
  if (model->backend() == Backend::curve) detail::curve_rows(ledger, model, ms);
  detail::dirac_rows(ledger, model, ms);
  detail::class_rows(ledger, model, ms);
  detail::comparison_rows(ledger, model, ms);
  if (model->backend() == Backend::surface) {
    const Vec anchor = model->default_omega ? *model->default_omega : model->surface().reference_ample;
    detail::zariski_rows(ledger, model->surface(), ms.rng(), anchor);
  }
  detail::corruption_row(ledger, *model);
  if (counterpart) detail::counterpart_rows(ledger, model, *counterpart);
  return ledger;
}

}  // namespace divstab
