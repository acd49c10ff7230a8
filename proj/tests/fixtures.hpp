#pragma once

#include "divstab/variety.hpp"

namespace fixtures {

using divstab::Rational;
using divstab::Vec;

inline Rational q(long p, long d = 1) { return Rational(p, d); }

inline divstab::CurveModel p1(const Rational& degree = 1, std::vector<divstab::CurvePoint> points = {}) {
  divstab::CurveModel m;
  m.genus = 0;
  m.V = degree;
  m.points = std::move(points);
  m.validate();
  return m;
}

inline divstab::CurveModel genus2() {
  divstab::CurveModel m;
  m.genus = 2;
  m.V = 2;
  m.validate();
  return m;
}

inline divstab::SurfaceCurve curve(std::string id, Vec cls, Rational b = 0) {
  return {std::move(id), std::move(cls), std::move(b), false};
}

/// P^2 with a tracked line L1 through two points p1, p2 and chains blowing
/// them up in either order, plus a tower blowing up p1 and then the point of
/// E1 in the direction of L1.
inline divstab::SurfaceModel p2_surface() {
  divstab::SurfaceModel m;
  m.basis = {"H"};
  m.gram = {{q(1)}};
  m.canonical = {q(-3)};
  m.curves = {curve("L1", {q(1)})};
  m.extremal = {0};
  m.reference_ample = {q(1)};
  using divstab::BlowupStep;
  m.chains = {
      {"p1p2", {BlowupStep{"E1", {{"L1", q(1)}}, {"E1", "L1"}},
                BlowupStep{"E2", {{"L1", q(1)}, {"E1", q(0)}}, {"E1", "E2", "L1"}}}},
      {"p2p1", {BlowupStep{"E2", {{"L1", q(1)}}, {"E2", "L1"}},
                BlowupStep{"E1", {{"L1", q(1)}, {"E2", q(0)}}, {"E1", "E2", "L1"}}}},
      {"tower", {BlowupStep{"E1", {{"L1", q(1)}}, {"E1", "L1"}},
                 BlowupStep{"E2", {{"L1", q(1)}, {"E1", q(1)}}, {"E1", "E2", "L1"}}}},
  };
  m.negative = m.negative_from_curves();
  m.validate();
  return m;
}

/// F_1 in the basis (H, E): the ruled surface as the blowup of P^2.
inline divstab::SurfaceModel f1_surface() {
  divstab::SurfaceModel m;
  m.basis = {"H", "E"};
  m.gram = {{q(1), q(0)}, {q(0), q(-1)}};
  m.canonical = {q(-3), q(1)};
  m.curves = {curve("F", {q(1), q(-1)}), curve("E", {q(0), q(1)}), curve("G", {q(1), q(-1)}),
              curve("H", {q(1), q(0)})};
  m.extremal = {1, 0};
  m.reference_ample = {q(2), q(-1)};
  m.negative = m.negative_from_curves();
  m.validate();
  return m;
}

/// F_a in the basis (F, E) with F a fiber and E the section with E^2 = -a.
/// Tracked curves are the four torus-invariant curves in the order of the
/// toric rays (1,0), (0,1), (-1,a), (0,-1).
inline divstab::SurfaceModel hirzebruch_surface(long a) {
  divstab::SurfaceModel m;
  m.basis = {"F", "E"};
  m.gram = {{q(0), q(1)}, {q(1), q(-a)}};
  m.canonical = {q(-(a + 2)), q(-2)};
  m.curves = {curve("F", {q(1), q(0)}), curve("E", {q(0), q(1)}), curve("G", {q(1), q(0)}),
              curve("H", {q(a), q(1)})};
  m.extremal = {1, 0};
  m.reference_ample = {q(a + 1), q(1)};
  m.negative = m.negative_from_curves();
  m.validate();
  return m;
}

inline divstab::ToricModel toric(std::size_t n, std::vector<std::string> ids, std::vector<Vec> rays,
                                 std::vector<std::vector<std::size_t>> cones, Vec boundary = {}) {
  divstab::ToricModel t;
  t.n = n;
  t.ray_ids = std::move(ids);
  t.rays = std::move(rays);
  t.cones = std::move(cones);
  t.boundary = boundary.empty() ? Vec(t.rays.size(), q(0)) : std::move(boundary);
  t.prepare();
  return t;
}

inline divstab::ToricModel p1_toric() { return toric(1, {"0", "inf"}, {{q(1)}, {q(-1)}}, {{0}, {1}}); }

inline divstab::ToricModel p2_toric() {
  return toric(2, {"D1", "D2", "D3"}, {{q(1), q(0)}, {q(0), q(1)}, {q(-1), q(-1)}}, {{0, 1}, {1, 2}, {2, 0}});
}

inline divstab::ToricModel hirzebruch_toric(long a) {
  return toric(2, {"F", "E", "G", "H"}, {{q(1), q(0)}, {q(0), q(1)}, {q(-1), q(a)}, {q(0), q(-1)}},
               {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

inline divstab::ToricModel p1_cubed_toric() {
  std::vector<Vec> rays;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < 3; ++i)
    for (long s : {1L, -1L}) {
      Vec u(3, q(0));
      u[i] = s;
      rays.push_back(u);
      ids.push_back(std::string(s > 0 ? "+" : "-") + std::to_string(i));
    }
  std::vector<std::vector<std::size_t>> cones;
  for (std::size_t a : {0, 1})
    for (std::size_t b : {2, 3})
      for (std::size_t c : {4, 5}) cones.push_back({a, b, c});
  return toric(3, ids, rays, cones);
}

template <class M>
divstab::VarietyModel variety(M m, std::optional<Vec> omega = std::nullopt) {
  return divstab::VarietyModel{std::move(m), std::move(omega)};
}

}  // namespace fixtures
