#include <gtest/gtest.h>

#include "divstab/sampling.hpp"
#include "fixtures.hpp"

using namespace divstab;
using fixtures::q;

namespace {

std::vector<std::string> names(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

// phi_p(t) = max(-t, -1) / N on N rays, V = 1.
PLPotential sigma_potential(int n) {
  PLPotential phi;
  phi.c = 0;
  for (const auto& p : names(n)) phi.rays[p] = RayProfile{{q(1)}, {q(-1, n), q(0)}};
  return phi;
}

CurveMeasure sigma_measure(int n) {
  CurveMeasure mu;
  for (const auto& p : names(n)) mu.atoms.push_back({p, q(1), q(1, n)});
  return mu;
}

PLPotential constant(const Rational& c) { return PLPotential{c, {}}; }

Rational total_mass(const CurveMeasure& mu) {
  Rational s = 0;
  for (const auto& a : mu.atoms) s += a.mass;
  return s;
}

PLPotential shifted(PLPotential phi, const Rational& c) {
  phi.c += c;
  return phi;
}

}  // namespace

TEST(MongeAmpere, TrivialPotential) {
  EXPECT_EQ(monge_ampere(fixtures::p1(), constant(q(3))), CurveMeasure::trivial());
}

TEST(MongeAmpere, UniformMeasureOnPoints) {
  for (int n : {1, 2, 5, 10}) EXPECT_EQ(monge_ampere(fixtures::p1(), sigma_potential(n)), sigma_measure(n));
}

TEST(MongeAmpere, DiracPotential) {
  auto m = fixtures::p1(q(3));
  CurveMeasure expected{{{"p", q(5, 2), q(1)}}};
  EXPECT_EQ(monge_ampere(m, dirac_potential(m, "p", q(5, 2))), expected);
}

TEST(MongeAmpere, InvalidPotentialsRejected) {
  auto m = fixtures::p1(q(1));
  PLPotential steep{q(0), {{"a", RayProfile{{q(1)}, {q(-2), q(0)}}}}};
  EXPECT_THROW(monge_ampere(m, steep), DomainError);
  PLPotential concave{q(0), {{"a", RayProfile{{q(1), q(2)}, {q(-1, 4), q(-1, 2), q(0)}}}}};
  EXPECT_THROW(monge_ampere(m, concave), DomainError);
  PLPotential infinite{q(0), {{"a", RayProfile{{q(1)}, {q(-1, 2), q(-1, 4)}}}}};
  EXPECT_THROW(monge_ampere(m, infinite), DomainError);
}

TEST(Energy, Examples) {
  auto m = fixtures::p1();
  EXPECT_EQ(energy(m, constant(q(7, 3))), q(7, 3));
  for (int n : {1, 2, 5, 10}) EXPECT_EQ(energy(m, sigma_potential(n)), q(-1, 2 * n));
  for (long d = 1; d <= 4; ++d) {
    auto md = fixtures::p1(q(d));
    const Rational t0 = q(3, 2);
    EXPECT_EQ(energy(md, shifted(dirac_potential(md, "p", t0), d * t0)), d * t0 / 2);
  }
}

TEST(TwistedEnergy, Examples) {
  auto m = fixtures::genus2();
  EXPECT_EQ(twisted_energy(m, dirac_potential(m, "p", q(1)), q(5)), 0);
  EXPECT_EQ(twisted_energy(m, constant(q(4)), m.V), 4);
  const Rational t0 = q(3, 4);
  EXPECT_EQ(twisted_energy(m, shifted(dirac_potential(m, "p", t0), m.V * t0), m.canonical_degree()), 2 * t0);
}

TEST(GradEnergy, Examples) {
  auto m = fixtures::p1();
  EXPECT_EQ(grad_energy(m, constant(q(2)), q(-2)), 0);
  for (int n : {1, 2, 5, 10}) {
    EXPECT_EQ(grad_energy(m, sigma_potential(n), m.canonical_degree()), q(-1, n));
    EXPECT_EQ(grad_energy(m, sigma_potential(n), m.V), measure_energy(m, sigma_measure(n)).norm);
  }
}

TEST(MeasureEnergy, Examples) {
  auto m = fixtures::p1();
  auto triv = measure_energy(m, CurveMeasure::trivial());
  EXPECT_EQ(triv.norm, 0);
  EXPECT_EQ(triv.potential.c, 0);
  EXPECT_TRUE(triv.potential.rays.empty());
  for (int n : {1, 2, 5, 10}) EXPECT_EQ(measure_energy(m, sigma_measure(n)).norm, q(1, 2 * n));
  for (long d = 1; d <= 6; ++d)
    for (const Rational& t : {q(1), q(5, 3)})
      EXPECT_EQ(measure_energy(fixtures::p1(q(d)), CurveMeasure{{{"p", t, q(1)}}}).norm, t * d / 2);
}

TEST(IJFunctionals, Examples) {
  auto m = fixtures::p1();
  EXPECT_EQ(i_functional(m, sigma_potential(3), sigma_potential(3)), 0);
  for (int n : {1, 2, 5, 10}) EXPECT_EQ(i_functional(m, sigma_potential(n), constant(q(0))), q(1, n));
  const CurveMeasure mu{{{"a", q(1), q(1, 3)}, {"b", q(2), q(1, 2)}, {"", q(0), q(1, 6)}}};
  EXPECT_EQ(j_mu(m, mu, measure_energy(m, mu).potential), 0);
  EXPECT_GT(j_mu(m, mu, sigma_potential(2)), 0);
}

TEST(Ding, Examples) {
  auto m = fixtures::p1();
  EXPECT_EQ(ding(m, constant(q(0))), 0);
  EXPECT_EQ(ding(m, dirac_potential(m, "p", q(1))), q(1, 2));
  const PLPotential phi = dirac_potential(m, "p", q(1));
  for (const Rational& t : {q(1, 3), q(2), q(7, 2)}) EXPECT_EQ(ding(m, scale_potential(phi, t)), t * ding(m, phi));
}

TEST(Ding, RequiresSubklt) {
  auto m = fixtures::p1(q(1), {{"p", q(1)}});
  EXPECT_THROW(ding(m, constant(q(0))), DomainError);
}

TEST(Mabuchi, Examples) {
  auto m = fixtures::p1();
  EXPECT_EQ(mabuchi(m, constant(q(0))), 0);
  for (long d = 1; d <= 6; ++d) {
    auto md = fixtures::p1(q(d));
    EXPECT_EQ(mabuchi(md, dirac_potential(md, "p", q(1))), 0);
  }
  auto g = fixtures::genus2();
  const PLPotential phi = dirac_potential(g, "p", q(1));
  for (const Rational& t : {q(1, 2), q(3)}) EXPECT_EQ(mabuchi(g, scale_potential(phi, t)), t * mabuchi(g, phi));
}

TEST(Entropy, UniformMeasureHasEntropyOne) {
  for (int n : {1, 2, 5, 10}) EXPECT_EQ(entropy(fixtures::p1(), sigma_measure(n)), 1);
}

TEST(CurveProperties, PotentialIdentities) {
  Sampler s(101);
  const auto pts = names(4);
  int samples = 0;
  for (const auto& m : {fixtures::p1(q(1)), fixtures::p1(q(5, 2)), fixtures::genus2()}) {
    for (int k = 0; k < 40; ++k) {
      const PLPotential phi = s.potential(m, pts);
      const CurveMeasure ma = monge_ampere(m, phi);
      EXPECT_EQ(total_mass(ma), 1);
      const Rational c = s.fraction(-5, 5, 3);
      EXPECT_EQ(energy(m, shifted(phi, c)), energy(m, phi) + c);
      const Rational norm = measure_energy(m, ma).norm;
      EXPECT_EQ(norm, energy(m, phi) - integrate(phi, ma));
      EXPECT_EQ(grad_energy(m, phi, m.V), norm);
      EXPECT_EQ(grad_energy(m, shifted(phi, c), m.canonical_degree()), grad_energy(m, phi, m.canonical_degree()));
      EXPECT_GE(j_functional(m, phi), 0);
      const PLPotential psi = s.potential(m, pts);
      EXPECT_GE(i_functional(m, phi, psi), 0);
      EXPECT_EQ(i_functional(m, phi, psi), i_functional(m, psi, phi));
      ++samples;
    }
  }
  EXPECT_GE(samples, 100);
}

TEST(CurveProperties, MeasureEnergyHomogeneityConvexityDecay) {
  Sampler s(202);
  const auto pts = names(3);
  auto m = fixtures::p1(q(3, 2));
  for (int k = 0; k < 100; ++k) {
    const CurveMeasure mu = s.measure(pts);
    const Rational norm = measure_energy(m, mu).norm;
    const Rational t = s.fraction(1, 9, 4);
    EXPECT_EQ(measure_energy(m, scale_measure(mu, t)).norm, t * norm);
    EXPECT_EQ(measure_energy(m.with_degree(t * m.V), mu).norm, t * norm);
    EXPECT_EQ(entropy(m, scale_measure(mu, t)), t * entropy(m, mu));
    Rational upper = 0;
    for (const auto& a : mu.atoms)
      if (a.t.sign() > 0) upper += a.mass * measure_energy(m, CurveMeasure{{{a.point, a.t, q(1)}}}).norm;
    EXPECT_LE(norm, upper);
    EXPECT_GE(norm, 0);
    EXPECT_EQ(norm == 0, mu == CurveMeasure::trivial());
    // Interpolation towards the trivial measure decays quadratically.
    const Rational w = s.fraction(1, 9, 10);
    CurveMeasure mix = mu;
    for (auto& a : mix.atoms) a.mass *= w;
    mix.atoms.push_back({"", q(0), 1 - w});
    EXPECT_LE(measure_energy(m, mix.normalized()).norm, w * w * norm);
  }
}

TEST(CurveProperties, MabuchiEqualsBetaOfMongeAmpere) {
  Sampler s(303);
  const auto pts = names(3);
  auto m = fixtures::p1(q(2), {{"p0", q(1, 3)}, {"p1", q(-1, 2)}});
  for (int k = 0; k < 50; ++k) {
    const PLPotential phi = s.potential(m, pts);
    const CurveMeasure ma = monge_ampere(m, phi);
    const auto me = measure_energy(m, ma);
    EXPECT_EQ(mabuchi(m, phi), entropy(m, ma) + grad_energy(m, me.potential, m.canonical_degree()));
  }
}
