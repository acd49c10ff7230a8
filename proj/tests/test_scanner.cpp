#include <gtest/gtest.h>

#include <cmath>

#include "divstab/scanner.hpp"
#include "fixtures.hpp"

using namespace divstab;
using fixtures::q;

namespace {

template <class M>
std::shared_ptr<const VarietyModel> shared(M m) {
  return std::make_shared<const VarietyModel>(fixtures::variety(std::move(m)));
}

SliceGrid line(Vec base, Vec dir, Rational lo, Rational hi, long r) {
  return SliceGrid{std::move(base), {std::move(dir)}, {{lo, hi}}, {r}};
}

// omega(s) = 3H - sE on F_1.
SliceGrid f1_slice(long r) { return line({q(3), q(0)}, {q(0), q(-1)}, q(1, 2), q(3, 2), r); }

}  // namespace

TEST(Scan, SinglePointMatchesDirectCall) {
  auto m = shared(fixtures::f1_surface());
  const auto t = scan(m, line({q(3), q(-1)}, {q(0), q(1)}, q(0), q(0), 0), CandidateOptions{});
  ASSERT_EQ(t.rows.size(), 1u);
  const auto direct = thresholds(polarize(m, Vec{q(3), q(-1)}), candidates(*m, CandidateOptions{}));
  EXPECT_TRUE(same_report(t.rows[0].values.delta, direct.delta));
  EXPECT_TRUE(same_report(t.rows[0].values.sigma_val, direct.sigma_val));
  EXPECT_TRUE(same_report(t.rows[0].values.sigma_div, direct.sigma_div));
  EXPECT_EQ(t.rows[0].V, 8);
}

TEST(Scan, F1SliceThroughAnticanonical) {
  auto m = shared(fixtures::f1_surface());
  const auto t = scan(m, f1_slice(10), CandidateOptions{});
  ASSERT_EQ(t.rows.size(), 11u);
  for (const auto& r : t.rows) EXPECT_TRUE(r.inside);
  const auto& mid = t.rows[5];
  EXPECT_EQ(mid.params[0], 1);
  EXPECT_EQ(mid.values.sigma_val.value, q(-1, 7));
  EXPECT_EQ(mid.values.sigma_val.witness, "-/0/E@1");
  EXPECT_EQ(mid.values.sigma_div.value, q(-1, 7));
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    EXPECT_LT(t.rows[i].values.sigma_val.value, t.rows[i - 1].values.sigma_val.value);
  EXPECT_TRUE(t.sandwich_violations.empty());
  EXPECT_EQ(t.sandwich_checked, 10u);
  for (const auto& h : t.moduli) {
    EXPECT_TRUE(std::isfinite(h.value));
    EXPECT_EQ(h.pairs, 10u);
  }
}

TEST(Scan, OutsideConeCellsAreMarked) {
  auto m = shared(fixtures::f1_surface());
  const auto t = scan(m, line({q(3), q(0)}, {q(0), q(-1)}, q(0), q(4), 4), CandidateOptions{});
  std::vector<bool> inside;
  for (const auto& r : t.rows) inside.push_back(r.inside);
  EXPECT_EQ(inside, (std::vector<bool>{false, true, true, false, false}));
  EXPECT_NE(scan_csv(t).find("outside-cone"), std::string::npos);
}

TEST(Scan, ProjectiveLineFamilyIsSemistable) {
  auto m = shared(fixtures::p1());
  const auto t = scan(m, line({q(0)}, {q(1)}, q(1), q(10), 9), CandidateOptions{});
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.values.sigma_div.value, 0);
    EXPECT_EQ(r.values.delta.value, 2 / r.V);
  }
  EXPECT_TRUE(openness_extract(t).positive_rows.empty());
}

TEST(Scan, ByteIdenticalAcrossWorkerCounts) {
  auto m = shared(fixtures::f1_surface());
  const auto a = scan(m, f1_slice(10), CandidateOptions{}, all_functionals(), 1);
  const auto b = scan(m, f1_slice(10), CandidateOptions{}, all_functionals(), 4);
  EXPECT_EQ(scan_csv(a), scan_csv(b));
  auto t = shared(fixtures::hirzebruch_toric(1));
  const SliceGrid s{t->toric().reduce({q(1), q(1), q(1), q(1)}), {t->toric().reduce({q(0), q(1), q(0), q(0)})},
                    {{q(-1, 2), q(1, 2)}}, {4}};
  CandidateOptions o;
  o.radius = 2;
  EXPECT_EQ(scan_csv(scan(t, s, o, all_functionals(), 1)), scan_csv(scan(t, s, o, all_functionals(), 3)));
}

TEST(Scan, TwoAxisGridIsRowMajor) {
  auto m = shared(fixtures::f1_surface());
  const SliceGrid s{{q(3), q(-1)}, {{q(1), q(0)}, {q(0), q(1)}}, {{q(0), q(1)}, {q(-1, 2), q(0)}}, {2, 1}};
  const auto t = scan(m, s, CandidateOptions{});
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.rows[1].index, (std::vector<long>{0, 1}));
  EXPECT_EQ(t.rows[2].index, (std::vector<long>{1, 0}));
  EXPECT_EQ(t.rows[3].omega, (Vec{q(7, 2), q(-1)}));
}

TEST(Openness, RefinementEmbedsAndStaysPositive) {
  auto g = shared(fixtures::genus2());
  const auto s = line({q(0)}, {q(1)}, q(1), q(5), 4);
  const auto coarse = scan(g, s, CandidateOptions{});
  const auto fine = scan(g, s.refined(), CandidateOptions{});
  const auto rep = openness_extract(coarse, &fine);
  EXPECT_EQ(rep.positive_rows.size(), coarse.rows.size());
  EXPECT_TRUE(rep.embedded);
  EXPECT_EQ(rep.refined_points_checked, 4u);
  EXPECT_TRUE(rep.failures.empty());
  EXPECT_FALSE(rep.conservative);
}

TEST(Openness, AnticanonicalF1IsExcluded) {
  auto m = shared(fixtures::f1_surface());
  const auto coarse = scan(m, f1_slice(4), CandidateOptions{});
  const auto fine = scan(m, f1_slice(8), CandidateOptions{});
  const auto rep = openness_extract(coarse, &fine);
  EXPECT_TRUE(rep.embedded);
  EXPECT_TRUE(std::find(rep.positive_rows.begin(), rep.positive_rows.end(), 2u) == rep.positive_rows.end());
  EXPECT_TRUE(rep.failures.empty());
}

TEST(Openness, BracketValuesAreConservative) {
  auto m = shared(fixtures::f1_surface());
  const auto t = scan(m, line({q(3), q(-1)}, {q(1), q(0)}, q(-1, 2), q(1, 2), 2), CandidateOptions{});
  EXPECT_EQ(t.rows[1].values.sigma_div.bound_kind, BoundKind::exact_on_set);
  EXPECT_EQ(t.rows[0].values.sigma_div.bound_kind, BoundKind::bracket);
  EXPECT_TRUE(openness_extract(t).conservative);
}

TEST(PlotData, OneLinePerRow) {
  auto m = shared(fixtures::f1_surface());
  const auto t = scan(m, f1_slice(2), CandidateOptions{});
  const std::string d = plot_data(t, "sigma_val");
  EXPECT_EQ(std::count(d.begin(), d.end(), '\n'), 4);
  EXPECT_NE(d.find("1 0 -0.142857142857"), std::string::npos);
}
