#include <gtest/gtest.h>

#include <random>

#include "divstab/piecewise.hpp"

using namespace divstab;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

// 9 - (1 + x)^2 = 8 - 2x - x^2 on [0, 2], zero afterwards.
PiecewisePoly shifted_square() {
  return PiecewisePoly::from_global({q(0), q(2)}, {Polynomial({q(8), q(-2), q(-1)})}, q(0));
}

PiecewisePoly random_function(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-9, 9), gap(1, 4), pieces(1, 4);
  const int k = pieces(rng);
  std::vector<Rational> breaks{q(0)};
  for (int i = 0; i < k; ++i) breaks.push_back(breaks.back() + q(gap(rng), 3));
  std::vector<Polynomial> local;
  Rational start = coef(rng);
  for (int i = 0; i < k; ++i) {
    Polynomial p({start, Rational(coef(rng)), Rational(coef(rng), 2)});
    start = p(breaks[i + 1] - breaks[i]);
    local.push_back(p);
  }
  return PiecewisePoly(breaks, local, start);
}

}  // namespace

TEST(Rational, SerializesInLowestTerms) {
  EXPECT_EQ(to_string(q(6, 4)), "3/2");
  EXPECT_EQ(to_string(q(-6, 3)), "-2");
  EXPECT_EQ(to_string(parse_rational("-20/2")), "-10");
}

TEST(Rational, ParsesExactLiterals) {
  EXPECT_EQ(parse_rational("-7/14"), q(-1, 2));
  EXPECT_EQ(parse_rational(" 5 "), q(5));
  EXPECT_THROW(parse_rational("0.5"), SchemaError);
  EXPECT_THROW(parse_rational("1/0"), SchemaError);
  EXPECT_THROW(parse_rational(""), SchemaError);
}

TEST(Integrate, ZeroIntegrand) { EXPECT_EQ(PiecewisePoly::constant(0).integrate(q(0), q(5)), 0); }

TEST(Integrate, ShiftedSquareGivesTwentyEightThirds) {
  EXPECT_EQ(shifted_square().integrate(q(0), q(2)), q(28, 3));
}

TEST(Integrate, OneMinusLambdaSquared) {
  auto f = PiecewisePoly::from_global({q(0), q(1)}, {Polynomial({q(1), q(-2), q(1)})}, q(0));
  EXPECT_EQ(f.integrate(q(0), q(1)), q(1, 3));
}

TEST(Integrate, ReversedBoundsRejected) {
  EXPECT_THROW(shifted_square().integrate(q(2), q(1)), DomainError);
}

TEST(FirstRoot, ShiftedSquareVanishesAtTwo) { EXPECT_EQ(shifted_square().first_nonneg_root(), q(2)); }

TEST(FirstRoot, LinearCurveOfDegreeFour) {
  auto f = PiecewisePoly::from_global({q(0), q(4)}, {Polynomial({q(4), q(-1)})}, q(0));
  EXPECT_EQ(f.first_nonneg_root(), q(4));
}

TEST(FirstRoot, PositiveConstantHasNoRoot) { EXPECT_EQ(PiecewisePoly::constant(1).first_nonneg_root(), std::nullopt); }

TEST(FirstRoot, NonpositiveStartRejected) {
  EXPECT_THROW(PiecewisePoly::constant(0).first_nonneg_root(), DomainError);
  EXPECT_THROW(PiecewisePoly::constant(-1).first_nonneg_root(), DomainError);
}

TEST(FirstRoot, InteriorRationalRootOfCubic) {
  // (3x - 2)(x + 5)(x - 7) is positive at 0 and first vanishes at 2/3.
  Polynomial p = Polynomial({q(-2), q(3)}) * Polynomial({q(5), q(1)}) * Polynomial({q(-7), q(1)});
  auto f = PiecewisePoly::from_global({q(0), q(10)}, {p}, p(q(10)));
  EXPECT_EQ(f.first_nonneg_root(), q(2, 3));
}

TEST(FirstRoot, DoubleRootIsFound) {
  // (x - 5/3)^2 touches zero without changing sign.
  Polynomial p = Polynomial({q(-5, 3), q(1)}) * Polynomial({q(-5, 3), q(1)});
  auto f = PiecewisePoly::from_global({q(0), q(4)}, {p}, p(q(4)));
  EXPECT_EQ(f.first_nonneg_root(), q(5, 3));
}

TEST(FirstRoot, IrrationalRootIsReported) {
  auto f = PiecewisePoly::from_global({q(0), q(3)}, {Polynomial({q(2), q(0), q(-1)})}, q(-7));
  EXPECT_THROW(f.first_nonneg_root(), DomainError);
}

TEST(PiecewisePoly, DiscontinuityRejected) {
  EXPECT_THROW(PiecewisePoly({q(0), q(1)}, {Polynomial({q(1)})}, q(2)), DomainError);
}

TEST(Polynomial, ShiftAndDivide) {
  Polynomial p({q(1), q(2), q(3)});
  EXPECT_EQ(p.shifted(q(2))(q(1)), p(q(3)));
  auto [quot, rem] = (p * Polynomial({q(-1), q(1)}) + Polynomial(q(4))).divmod(Polynomial({q(-1), q(1)}));
  EXPECT_EQ(quot, p);
  EXPECT_EQ(rem, Polynomial(q(4)));
}

TEST(Polynomial, SimplestFraction) {
  EXPECT_EQ(simplest_between(q(3, 10), q(4, 10)), q(1, 3));
  EXPECT_EQ(simplest_between(q(-5, 2), q(-9, 4)), q(-5, 2));
  EXPECT_EQ(simplest_between(q(-12, 5), q(-23, 10)), q(-7, 3));
  EXPECT_EQ(simplest_between(q(1, 2), q(1, 2)), q(1, 2));
}

TEST(PiecewiseProperties, AdditivityContinuityScaling) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 100; ++trial) {
    const PiecewisePoly f = random_function(rng);
    const Rational end = f.support_end() + 1;
    std::uniform_int_distribution<int> pick(0, 60);
    Rational a = end * q(pick(rng), 60), b = end * q(pick(rng), 60), c = end * q(pick(rng), 60);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    EXPECT_EQ(f.integrate(a, c), f.integrate(a, b) + f.integrate(b, c));
    for (std::size_t i = 1; i < f.breakpoints().size(); ++i) EXPECT_EQ(f.left_limit(i), f.right_limit(i));
    const Rational s = q(pick(rng) - 30, 7);
    EXPECT_EQ(f.scaled(s).integrate(a, c), s * f.integrate(a, c));
  }
}
