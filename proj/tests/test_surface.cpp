#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace divstab;
using fixtures::q;

namespace {

SurfaceModel two_point_blowup() { return apply_chain(fixtures::p2_surface(), "p1p2", 2); }

Vec random_vec(std::size_t r, std::mt19937_64& rng, int range, int den) {
  std::uniform_int_distribution<int> d(-range, range);
  Vec v;
  for (std::size_t i = 0; i < r; ++i) v.push_back(Rational(d(rng), den));
  return v;
}

std::vector<std::size_t> support_of(const SurfaceModel& m, const Vec& a) {
  std::vector<std::size_t> s;
  for (const auto& [k, c] : zariski(m, a).support) s.push_back(k);
  return s;
}

}  // namespace

TEST(Zariski, AmpleClassIsItsOwnPositivePart) {
  auto m = fixtures::f1_surface();
  auto z = zariski(m, {q(3), q(-1)});
  EXPECT_EQ(z.P, (Vec{q(3), q(-1)}));
  EXPECT_TRUE(is_zero(z.N));
}

TEST(Zariski, NefPullbackOfLine) {
  auto z = zariski(fixtures::f1_surface(), {q(1), q(0)});
  EXPECT_EQ(z.P, (Vec{q(1), q(0)}));
  EXPECT_TRUE(is_zero(z.N));
}

TEST(Zariski, LinePlusExceptional) {
  auto m = fixtures::f1_surface();
  auto z = zariski(m, {q(1), q(1)});
  EXPECT_EQ(z.P, (Vec{q(1), q(0)}));
  EXPECT_EQ(z.N, (Vec{q(0), q(1)}));
  ASSERT_EQ(z.support.size(), 1u);
  EXPECT_EQ(m.curves[z.support[0].first].id, "E");
}

TEST(Zariski, NotPseudoeffective) {
  auto m = fixtures::f1_surface();
  EXPECT_THROW(zariski(m, {q(-1), q(0)}), DomainError);
  EXPECT_THROW(zariski(m, {q(0), q(-1)}), DomainError);
}

TEST(VolBig, Examples) {
  auto m = fixtures::f1_surface();
  EXPECT_EQ(vol_big(m, {q(1), q(1)}), 1);
  EXPECT_EQ(vol_big(m, {q(0), q(0)}), 0);
  EXPECT_EQ(vol_big(m, {q(3), q(-1)}), 8);
  EXPECT_EQ(vol_big(m, {q(-1), q(0)}), 0);
}

TEST(GradVol, Examples) {
  auto m = fixtures::f1_surface();
  EXPECT_EQ(grad_vol(m, {q(3), q(-1)}, {q(3), q(-1)}), 16);
  EXPECT_EQ(grad_vol(m, {q(1), q(1)}, {q(0), q(1)}), 0);
  EXPECT_EQ(grad_vol(fixtures::p2_surface(), {q(1, 2)}, {q(-3)}), -3);
  EXPECT_EQ(grad_vol(m, {q(-1), q(0)}, {q(1), q(0)}), 0);
}

TEST(VolCurve, F1Exceptional) {
  auto m = fixtures::f1_surface();
  auto prof = vol_curve(m, {"", 0, "E", 1}, {q(3), q(-1)});
  EXPECT_EQ(prof.threshold, 2);
  for (int k = 0; k <= 12; ++k) {
    const Rational l = q(k, 6);
    EXPECT_EQ(prof.volume(l), 9 - (1 + l) * (1 + l)) << to_string(l);
  }
  EXPECT_EQ(prof.volume(q(3)), 0);
  EXPECT_EQ(prof.volume.integrate_support(), q(28, 3));
}

TEST(VolCurve, ProjectivePlaneLine) {
  auto prof = vol_curve(fixtures::p2_surface(), {"", 0, "L1", 1}, {q(1)});
  EXPECT_EQ(prof.threshold, 1);
  EXPECT_EQ(prof.volume(q(1, 3)), q(4, 9));
  EXPECT_EQ(prof.volume(q(0)), 1);
  EXPECT_EQ(prof.volume.integrate_support(), q(1, 3));
}

TEST(VolCurve, InfinitelyNearPointHasTwoChambers) {
  // Weighted blowup with weights (1, 2): 1 - l^2/2 on [0,1], (2 - l)^2/2 on [1,2].
  auto prof = vol_curve(fixtures::p2_surface(), {"tower", 2, "E2", 1}, {q(1)});
  EXPECT_EQ(prof.threshold, 2);
  ASSERT_EQ(prof.chambers.size(), 2u);
  EXPECT_EQ(prof.chambers[0].hi, 1);
  EXPECT_EQ(prof.volume(q(1, 2)), q(7, 8));
  EXPECT_EQ(prof.volume(q(3, 2)), q(1, 8));
  EXPECT_EQ(prof.volume.integrate_support(), 1);
}

TEST(VolCurve, RejectsNonAmpleOmega) {
  EXPECT_THROW(vol_curve(fixtures::f1_surface(), {"", 0, "E", 1}, {q(1), q(0)}), DomainError);
}

TEST(LogDiscrepancy, Examples) {
  auto m = fixtures::p2_surface();
  EXPECT_EQ(log_discrepancy(m, {"", 0, "L1", 1}), 1);
  EXPECT_EQ(log_discrepancy(m, {"p1p2", 1, "E1", 1}), 2);
  EXPECT_EQ(log_discrepancy(m, {"p1p2", 1, "E1", 3}), 6);
  EXPECT_EQ(log_discrepancy(m, {"tower", 2, "E2", 1}), 3);
}

TEST(LogDiscrepancy, BoundaryCoefficientsEnter) {
  auto m = fixtures::p2_surface();
  m.curves[0].b = q(1, 2);
  EXPECT_EQ(log_discrepancy(m, {"", 0, "L1", 1}), q(1, 2));
  EXPECT_EQ(log_discrepancy(m, {"p1p2", 1, "E1", 1}), q(3, 2));
  EXPECT_EQ(log_discrepancy(m, {"tower", 2, "E2", 1}), 2);
}

TEST(LogDiscrepancy, MissingMultiplicityIsConfigurationError) {
  auto m = fixtures::p2_surface();
  m.chains[0].steps[1].multiplicities.erase("E1");
  EXPECT_THROW(log_discrepancy(m, {"p1p2", 2, "E2", 1}), ConfigError);
}

TEST(Blowup, RankAndPullbackRelations) {
  auto base = fixtures::p2_surface();
  auto y = two_point_blowup();
  EXPECT_EQ(y.rank(), base.rank() + 2);
  for (const char* id : {"E1", "E2"}) {
    const Vec& e = y.curves[y.curve_index(id)].cls;
    EXPECT_EQ(y.intersect(e, e), -1);
    EXPECT_EQ(y.intersect(pull_back({q(1)}, 3), e), 0);
  }
  EXPECT_EQ(y.intersect(y.log_canonical(), pull_back({q(1)}, 3)), -3);
}

TEST(SurfaceModel, SignatureViolationRejected) {
  auto m = fixtures::f1_surface();
  m.gram = {{q(1), q(0)}, {q(0), q(1)}};
  EXPECT_THROW(m.validate(), DomainError);
}

TEST(SurfaceProperties, ZariskiCertificatesAndHomogeneity) {
  std::mt19937_64 rng(3);
  std::vector<SurfaceModel> models{fixtures::f1_surface(), two_point_blowup(), fixtures::hirzebruch_surface(2),
                                   apply_chain(fixtures::p2_surface(), "tower", 2)};
  int psef = 0;
  for (const auto& m : models)
    for (int k = 0; k < 60; ++k) {
      const Vec a = random_vec(m.rank(), rng, 6, 2);
      auto z = try_zariski(m, a);
      if (!z) continue;
      ++psef;
      EXPECT_TRUE(m.is_nef(z->P));
      for (auto i : m.negative) EXPECT_GE(m.intersect(z->P, m.curves[i].cls), 0);
      for (const auto& [i, c] : z->support) {
        EXPECT_GT(c, 0);
        EXPECT_EQ(m.intersect(z->P, m.curves[i].cls), 0);
      }
      EXPECT_EQ(m.intersect(z->P, z->N), 0);
      const Rational s = q(k % 7 + 1, 3);
      EXPECT_EQ(vol_big(m, s * a), s * s * vol_big(m, a));
    }
  EXPECT_GE(psef, 40);
}

TEST(SurfaceProperties, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(5);
  for (const auto& m : {fixtures::f1_surface(), two_point_blowup()}) {
    int tested = 0;
    while (tested < 20) {
      const Vec a = random_vec(m.rank(), rng, 8, 3), th = random_vec(m.rank(), rng, 3, 1);
      if (vol_big(m, a).sign() <= 0) continue;
      const Rational hmax = q(1, 100);
      if (vol_big(m, a - hmax * th).sign() <= 0 || support_of(m, a + hmax * th) != support_of(m, a) ||
          support_of(m, a - hmax * th) != support_of(m, a))
        continue;
      ++tested;
      const Rational g = grad_vol(m, a, th);
      Rational worst = 0;
      for (int e = 2; e <= 5; ++e) {
        const Rational h = pow(q(1, 10), static_cast<unsigned>(e));
        const Rational fd = (vol_big(m, a + h * th) - vol_big(m, a - h * th)) / (2 * h);
        worst = std::max(worst, Rational(abs(fd - g) / (h * h)));
      }
      // Volume is quadratic on a Zariski chamber, so the residual constant is 0.
      EXPECT_EQ(worst, 0);
    }
  }
}

TEST(SurfaceProperties, VolumeCurvesAreMonotoneAndVanishAtThreshold) {
  auto base = fixtures::p2_surface();
  const std::vector<SurfaceValuation> vals{
      {"", 0, "L1", 1}, {"p1p2", 1, "E1", 1}, {"p1p2", 2, "E2", 1}, {"p1p2", 2, "L1", 1}, {"tower", 2, "E2", 1}};
  for (const Vec& w : {Vec{q(1)}, Vec{q(5, 2)}})
    for (const auto& v : vals) {
      const auto prof = vol_curve(base, v, w);
      EXPECT_EQ(prof.volume(Rational(0)), base.intersect(w, w));
      EXPECT_EQ(prof.volume(prof.threshold), 0);
      const auto& f = prof.volume;
      for (std::size_t i = 1; i < f.breakpoints().size(); ++i) EXPECT_EQ(f.left_limit(i), f.right_limit(i));
      Rational prev = f(Rational(0));
      for (int k = 1; k <= 40; ++k) {
        const Rational x = prof.threshold * q(k, 40);
        EXPECT_LE(f(x), prev);
        prev = f(x);
      }
    }
}

TEST(SurfaceProperties, ChainPresentationsAgree) {
  auto base = fixtures::p2_surface();
  for (const char* e : {"E1", "E2"}) {
    const SurfaceValuation a{"p1p2", 2, e, q(3, 2)}, b{"p2p1", 2, e, q(3, 2)};
    EXPECT_EQ(log_discrepancy(base, a), log_discrepancy(base, b));
    const auto fa = vol_curve(base, a, {q(2)}), fb = vol_curve(base, b, {q(2)});
    EXPECT_EQ(fa.threshold, fb.threshold);
    EXPECT_EQ(fa.volume.integrate_support(), fb.volume.integrate_support());
  }
  // A divisor already present after one blowup keeps its data after the second.
  EXPECT_EQ(vol_curve(base, {"p1p2", 1, "E1", 1}, {q(1)}).volume.integrate_support(),
            vol_curve(base, {"p1p2", 2, "E1", 1}, {q(1)}).volume.integrate_support());
}
