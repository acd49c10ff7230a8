#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "divstab/linalg.hpp"

namespace divstab {

/// Bounded polyhedron {m : <m, u_i> + a_i >= 0} with exact vertex
/// enumeration and a centroid-pulling triangulation.
class Polytope {
 public:
  Polytope(std::size_t dim, std::vector<Vec> normals, Vec offsets)
      : n_(dim), normals_(std::move(normals)), offsets_(std::move(offsets)) {
    enumerate_vertices();
    triangulate();
  }

  std::size_t dim() const { return n_; }
  const std::vector<Vec>& normals() const { return normals_; }
  const Vec& offsets() const { return offsets_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  bool full_dimensional() const { return !simplices_.empty(); }

  /// Adds the half-space <m, u> + a >= 0.
  Polytope cut(const Vec& u, const Rational& a) const {
    auto normals = normals_;
    auto offsets = offsets_;
    normals.push_back(u);
    offsets.push_back(a);
    return Polytope(n_, std::move(normals), std::move(offsets));
  }

  /// n! times the Euclidean volume.
  const Rational& normalized_volume() const { return nvol_; }

  /// n! times the integral of m -> <m, u>.
  Rational integral_linear(const Vec& u) const {
    Rational s = 0;
    for (std::size_t k = 0; k < simplices_.size(); ++k) s += weights_[k] * dot(centroids_[k], u);
    return s;
  }

  Vec barycenter() const {
    if (nvol_ == 0) throw DomainError("full-dimensional polytope", "barycenter of a degenerate polytope");
    Vec b(n_, Rational(0));
    for (std::size_t k = 0; k < simplices_.size(); ++k) b = b + weights_[k] * centroids_[k];
    return (Rational(1) / nvol_) * b;
  }

  Rational min_pairing(const Vec& u) const { return extreme(u, false); }
  Rational max_pairing(const Vec& u) const { return extreme(u, true); }

  bool contains(const Vec& m) const {
    for (std::size_t i = 0; i < normals_.size(); ++i)
      if ((dot(m, normals_[i]) + offsets_[i]).sign() < 0) return false;
    return true;
  }

 private:
  Rational extreme(const Vec& u, bool want_max) const {
    if (vertices_.empty()) throw DomainError("nonempty polytope", "pairing over an empty polytope");
    Rational best = dot(vertices_[0], u);
    for (const auto& v : vertices_) {
      const Rational x = dot(v, u);
      if (want_max ? x > best : x < best) best = x;
    }
    return best;
  }

  static std::size_t affine_dim(const std::vector<Vec>& pts) {
    if (pts.size() <= 1) return 0;
    Matrix diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(pts[i] - pts[0]);
    return rank(diffs);
  }

  void enumerate_vertices() {
    const std::size_t r = normals_.size();
    if (r < n_) return;
    std::set<Vec> found;
    // Iterate over n-subsets of constraints.
    std::vector<bool> mask(r, false);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(n_), true);
    do {
      Matrix a;
      Vec b;
      for (std::size_t i = 0; i < r; ++i)
        if (mask[i]) {
          a.push_back(normals_[i]);
          b.push_back(-offsets_[i]);
        }
      auto x = solve(a, b);
      if (x && contains(*x)) found.insert(*x);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    vertices_.assign(found.begin(), found.end());
    tight_.resize(vertices_.size());
    for (std::size_t v = 0; v < vertices_.size(); ++v)
      for (std::size_t i = 0; i < r; ++i)
        if (dot(vertices_[v], normals_[i]) + offsets_[i] == 0) tight_[v].push_back(i);
  }

  bool is_tight(std::size_t v, std::size_t i) const {
    return std::binary_search(tight_[v].begin(), tight_[v].end(), i);
  }

  /// Simplices (as vertex lists) of a face with the given vertices and
  /// affine dimension d, pulled from the face centroid.
  std::vector<std::vector<Vec>> face_simplices(const std::vector<std::size_t>& face, std::size_t d) const {
    if (d == 0) return {{vertices_[face[0]]}};
    Vec c(n_, Rational(0));
    for (auto v : face) c = c + vertices_[v];
    c = (Rational(1) / static_cast<long>(face.size())) * c;
    std::set<std::vector<std::size_t>> facets;
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      std::vector<std::size_t> sub;
      for (auto v : face)
        if (is_tight(v, i)) sub.push_back(v);
      if (sub.size() < d || sub.size() == face.size()) continue;
      std::vector<Vec> pts;
      for (auto v : sub) pts.push_back(vertices_[v]);
      if (affine_dim(pts) == d - 1) facets.insert(sub);
    }
    std::vector<std::vector<Vec>> out;
    for (const auto& f : facets)
      for (auto& s : face_simplices(f, d - 1)) {
        s.push_back(c);
        out.push_back(std::move(s));
      }
    return out;
  }

  void triangulate() {
    nvol_ = 0;
    std::vector<Vec> pts = vertices_;
    if (vertices_.size() < n_ + 1 || affine_dim(pts) < n_) return;
    std::vector<std::size_t> all(vertices_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    simplices_ = face_simplices(all, n_);
    for (const auto& s : simplices_) {
      Matrix m;
      for (std::size_t i = 1; i < s.size(); ++i) m.push_back(s[i] - s[0]);
      const Rational w = abs(determinant(m));
      Vec cen(n_, Rational(0));
      for (const auto& p : s) cen = cen + p;
      centroids_.push_back((Rational(1) / static_cast<long>(s.size())) * cen);
      weights_.push_back(w);
      nvol_ += w;
    }
  }

  std::size_t n_;
  std::vector<Vec> normals_;
  Vec offsets_;
  std::vector<Vec> vertices_;
  std::vector<std::vector<std::size_t>> tight_;
  std::vector<std::vector<Vec>> simplices_;
  std::vector<Vec> centroids_;
  Vec weights_;
  Rational nvol_ = 0;
};

}  // namespace divstab
