#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace divstab;
using fixtures::q;

namespace {

VarietyModel f1() { return fixtures::variety(fixtures::f1_surface(), Vec{q(3), q(-1)}); }

// Random class with coordinates in [-range, range] / den.
NumClass random_class(const VarietyModel& m, std::mt19937_64& rng, int range, int den) {
  std::uniform_int_distribution<int> d(-range, range);
  Vec c;
  for (std::size_t i = 0; i < m.rank(); ++i) c.push_back(Rational(d(rng), den));
  return m.make_class(c);
}

NumClass random_ample(const VarietyModel& m, std::mt19937_64& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    NumClass c = random_class(m, rng, 12, 2);
    if (is_ample(m, c)) return c;
  }
  throw std::runtime_error("no ample sample");
}

}  // namespace

TEST(Volume, CurveDegree) {
  auto m = fixtures::variety(fixtures::p1(q(4)));
  EXPECT_EQ(volume(m, m.make_class({q(4)})), 4);
}

TEST(Volume, ProjectivePlaneLine) {
  auto m = fixtures::variety(fixtures::p2_surface());
  EXPECT_EQ(volume(m, m.make_class({q(1)})), 1);
}

TEST(Volume, F1Anticanonical) {
  auto m = f1();
  EXPECT_EQ(volume(m, m.omega()), 8);
  EXPECT_THROW(volume(m, m.make_class({q(1), q(0)})), DomainError);
}

TEST(Trace, SelfTraceIsDimension) {
  auto m = f1();
  EXPECT_EQ(trace(m, m.omega(), m.omega()), 2);
  auto c = fixtures::variety(fixtures::p1(q(4)));
  EXPECT_EQ(trace(c, c.make_class({q(4)}), c.make_class({q(4)})), 1);
}

TEST(Trace, CanonicalExamples) {
  auto c = fixtures::variety(fixtures::p1(q(4)));
  EXPECT_EQ(trace(c, c.make_class({q(4)}), c.canonical_class()), q(-1, 2));
  auto m = f1();
  EXPECT_EQ(trace(m, m.omega(), m.canonical_class()), -2);
}

TEST(NormSup, Examples) {
  auto c = fixtures::variety(fixtures::p1(q(4)));
  const NumClass w = c.make_class({q(4)});
  EXPECT_EQ(norm_sup(c, w, w), 1);
  EXPECT_EQ(norm_sup(c, w, c.canonical_class()), q(1, 2));
  auto m = f1();
  EXPECT_EQ(norm_sup(m, m.omega(), m.canonical_class()), 1);
}

TEST(NormSup, EmptyCurveListIsConfigurationError) {
  auto s = fixtures::f1_surface();
  s.extremal.clear();
  auto m = fixtures::variety(s);
  EXPECT_THROW(m.positivity_tests(m.make_class({q(3), q(-1)})), ConfigError);
}

TEST(Thompson, Examples) {
  auto m = f1();
  const NumClass w = m.omega();
  EXPECT_EQ(thompson(m, w, w), std::make_pair(q(1), q(1)));
  EXPECT_EQ(thompson(m, w, q(2) * w), std::make_pair(q(2), q(2)));
  // (2H - E) . E = 1 against 1, (2H - E) . (H - E) = 1 against 2.
  EXPECT_EQ(thompson(m, w, m.make_class({q(2), q(-1)})), std::make_pair(q(1, 2), q(1)));
  EXPECT_THROW(thompson(m, w, m.make_class({q(1), q(0)})), DomainError);
}

TEST(IsAmple, Examples) {
  auto m = f1();
  EXPECT_FALSE(is_ample(m, m.make_class({q(0), q(0)})));
  EXPECT_TRUE(is_ample(m, m.make_class({q(3), q(-1)})));
  EXPECT_FALSE(is_ample(m, m.make_class({q(1), q(0)})));
  EXPECT_TRUE(is_nef(m, m.make_class({q(1), q(0)})));
  // Positive on both curves but in the negative light cone.
  EXPECT_FALSE(is_ample(m, m.make_class({q(-3), q(1)})));
}

TEST(NumClass, MixingModelsRejected) {
  auto a = f1(), b = f1();
  EXPECT_THROW(trace(a, a.omega(), b.omega()), DomainError);
  EXPECT_THROW(a.omega() + b.omega(), DomainError);
}

TEST(NumClassProperties, TraceBoundAndNormHomogeneity) {
  std::mt19937_64 rng(7);
  std::vector<VarietyModel> models{f1(), fixtures::variety(fixtures::hirzebruch_surface(2)),
                                   fixtures::variety(fixtures::p1_cubed_toric()),
                                   fixtures::variety(fixtures::hirzebruch_toric(1))};
  int samples = 0;
  for (const auto& m : models) {
    for (int k = 0; k < 30; ++k) {
      const NumClass w = random_ample(m, rng);
      const NumClass th = random_class(m, rng, 9, 3);
      const Rational n = static_cast<long>(m.dimension());
      EXPECT_LE(abs(trace(m, w, th)), n * norm_sup(m, w, th));
      const Rational s = Rational(static_cast<long>(k) - 15, 4);
      EXPECT_EQ(norm_sup(m, w, s * th), abs(s) * norm_sup(m, w, th));
      EXPECT_EQ(norm_sup(m, w, w), 1);
      EXPECT_EQ(is_ample(m, th), is_ample(m, Rational(k + 1, 3) * th));
      ++samples;
    }
  }
  EXPECT_GE(samples, 100);
}

TEST(NumClassProperties, LogarithmicDerivativeOfVolume) {
  std::mt19937_64 rng(11);
  std::vector<VarietyModel> models{f1(), fixtures::variety(fixtures::p1_cubed_toric())};
  for (const auto& m : models) {
    for (int k = 0; k < 10; ++k) {
      const NumClass w = random_ample(m, rng);
      const NumClass th = random_class(m, rng, 4, 1);
      const Rational v = volume(m, w), tr = trace(m, w, th);
      Rational worst = 0, first = -1;
      for (int e = 2; e <= 6; ++e) {
        Rational t = pow(Rational(1, 10), static_cast<unsigned>(e));
        for (const Rational& s : {t, Rational(-t)}) {
          const Rational residual = abs(volume(m, w + s * th) / v - 1 - s * tr) / (s * s);
          if (first < 0) first = residual;
          worst = std::max(worst, residual);
        }
      }
      // The second-order coefficient is bounded: residual / t^2 stays within
      // a fixed factor of its value at the coarsest step.
      EXPECT_LE(worst, 2 * first + 1);
    }
  }
}
