#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "divstab/functionals.hpp"
#include "divstab/parallel.hpp"

namespace divstab {

/// Affine grid omega = base + sum_i s_i d_i with s_i = lo_i + k (hi_i - lo_i) / r_i,
/// k = 0..r_i; r_i = 0 is the single point lo_i.
struct SliceGrid {
  Vec base;
  std::vector<Vec> directions;
  std::vector<std::pair<Rational, Rational>> ranges;
  std::vector<long> resolution;

  std::size_t axes() const { return directions.size(); }

  void validate(std::size_t rank) const {
    if (directions.empty() || directions.size() > 2) throw SchemaError("slice needs one or two directions");
    if (ranges.size() != directions.size() || resolution.size() != directions.size())
      throw SchemaError("slice ranges and resolutions must match the directions");
    if (base.size() != rank) throw DomainError("class length", "slice base has wrong number of coordinates");
    for (std::size_t i = 0; i < axes(); ++i) {
      if (directions[i].size() != rank) throw DomainError("class length", "slice direction has wrong length");
      if (resolution[i] < 0) throw SchemaError("slice resolution must be nonnegative");
      if (ranges[i].first > ranges[i].second) throw DomainError("ordered range", "slice range lo > hi");
    }
  }

  std::vector<long> extent() const {
    std::vector<long> e;
    for (auto r : resolution) e.push_back(r + 1);
    return e;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (auto e : extent()) s *= static_cast<std::size_t>(e);
    return s;
  }

  /// Row-major grid index of row `row`; the first axis varies slowest.
  std::vector<long> index_of(std::size_t row) const {
    const auto e = extent();
    std::vector<long> k(axes());
    for (std::size_t i = axes(); i-- > 0;) {
      k[i] = static_cast<long>(row % static_cast<std::size_t>(e[i]));
      row /= static_cast<std::size_t>(e[i]);
    }
    return k;
  }

  std::size_t row_of(const std::vector<long>& k) const {
    const auto e = extent();
    std::size_t row = 0;
    for (std::size_t i = 0; i < axes(); ++i) row = row * static_cast<std::size_t>(e[i]) + static_cast<std::size_t>(k[i]);
    return row;
  }

  Rational parameter(std::size_t axis, long k) const {
    const auto& [lo, hi] = ranges[axis];
    if (resolution[axis] == 0) return lo;
    return lo + Rational(k) * (hi - lo) / Rational(resolution[axis]);
  }

  /// The same slice with every resolution doubled.
  SliceGrid refined() const {
    SliceGrid s = *this;
    for (auto& r : s.resolution) r *= 2;
    return s;
  }
};

struct ScanRow {
  std::vector<long> index;
  std::vector<Rational> params;
  Vec omega;
  bool inside = false;
  Rational V;
  ThresholdSuite values;
};

/// max |f(w) - f(w')| / d_T(w, w')^alpha over adjacent grid pairs.
struct HolderModulus {
  std::string functional;
  double alpha = 1;
  double value = 0;
  std::size_t pairs = 0;
};

struct SandwichViolation {
  std::size_t a = 0, b = 0;
  std::string detail;
};

struct ScanTable {
  std::string model_hash;
  std::string candidate_set;
  SliceGrid slice;
  std::size_t dimension = 0;
  std::vector<std::string> functionals;
  std::vector<ScanRow> rows;
  std::vector<HolderModulus> moduli;
  std::size_t sandwich_checked = 0;
  std::vector<SandwichViolation> sandwich_violations;
};

inline const std::vector<std::string>& all_functionals() {
  static const std::vector<std::string> names{"delta", "sigma_val", "sigma_div"};
  return names;
}

inline const ThresholdReport& report_of(const ThresholdSuite& s, const std::string& name) {
  if (name == "delta") return s.delta;
  if (name == "sigma_val") return s.sigma_val;
  if (name == "sigma_div") return s.sigma_div;
  throw SchemaError("unknown functional \"" + name + "\"");
}

namespace detail {

/// Pairs of rows whose indices differ by one step along one axis.
inline std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs(const SliceGrid& s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t row = 0; row < s.size(); ++row) {
    const auto k = s.index_of(row);
    for (std::size_t i = 0; i < s.axes(); ++i) {
      if (k[i] + 1 > s.resolution[i]) continue;
      auto next = k;
      ++next[i];
      out.emplace_back(row, s.row_of(next));
    }
  }
  return out;
}

inline void post_pass(const VarietyModel& m, ScanTable& t) {
  const auto pairs = adjacent_pairs(t.slice);
  const long c = dimensional_constant(t.dimension);
  for (const auto& f : t.functionals)
    for (double alpha : {1.0, 0.5}) t.moduli.push_back({f, alpha, 0.0, 0});
  for (const auto& [a, b] : pairs) {
    const ScanRow &ra = t.rows[a], &rb = t.rows[b];
    if (!ra.inside || !rb.inside) continue;
    const auto ratios = thompson(m, m.make_class(ra.omega), m.make_class(rb.omega));
    const double d = thompson_distance(ratios);
    for (auto& h : t.moduli) {
      const auto &fa = report_of(ra.values, h.functional), &fb = report_of(rb.values, h.functional);
      if (fa.status != ThresholdReport::Status::finite || fb.status != ThresholdReport::Status::finite || d <= 0)
        continue;
      const double diff = std::fabs(to_double(Rational(fa.value - fb.value)));
      h.value = std::max(h.value, diff / std::pow(d, h.alpha));
      ++h.pairs;
    }
    const auto &da = ra.values.delta, &db = rb.values.delta;
    if (da.status != ThresholdReport::Status::finite || db.status != ThresholdReport::Status::finite) continue;
    const Rational bound = pow(thompson_scale(ratios), static_cast<unsigned>(c));
    ++t.sandwich_checked;
    if (db.value > bound * da.value || da.value > bound * db.value)
      t.sandwich_violations.push_back(
          {a, b, "delta " + to_string(da.value) + " vs " + to_string(db.value) + " with s^C = " + to_string(bound)});
  }
}

}  // namespace detail

/// Evaluates delta, sigma_val and sigma_div at every grid point on one fixed
/// candidate set. Rows are computed in parallel and stored by index.
inline ScanTable scan(const std::shared_ptr<const VarietyModel>& model, const SliceGrid& slice,
                      const CandidateOptions& opt, std::vector<std::string> functionals = all_functionals(),
                      unsigned jobs = 1) {
  slice.validate(model->rank());
  for (const auto& f : functionals) report_of(ThresholdSuite{}, f);
  ScanTable t;
  t.slice = slice;
  t.dimension = model->dimension();
  t.functionals = std::move(functionals);
  const CandidateSet set = candidates(*model, opt);
  t.candidate_set = set.description;
  t.rows.resize(slice.size());
  parallel_for(t.rows.size(), jobs, [&](std::size_t row) {
    ScanRow& r = t.rows[row];
    r.index = slice.index_of(row);
    r.omega = slice.base;
    for (std::size_t i = 0; i < slice.axes(); ++i) {
      r.params.push_back(slice.parameter(i, r.index[i]));
      r.omega = r.omega + r.params[i] * slice.directions[i];
    }
    r.inside = is_ample(*model, model->make_class(r.omega));
    if (!r.inside) return;
    const PolarizedPair p = polarize(model, r.omega);
    r.V = p.V;
    r.values = thresholds(p, set, 1);
  });
  detail::post_pass(*model, t);
  return t;
}

inline bool same_report(const ThresholdReport& a, const ThresholdReport& b) {
  return a.status == b.status && a.value == b.value && a.lower == b.lower && a.witness == b.witness &&
         a.bound_kind == b.bound_kind;
}

inline bool same_row(const ScanRow& a, const ScanRow& b) {
  if (a.params != b.params || a.omega != b.omega || a.inside != b.inside) return false;
  if (!a.inside) return true;
  return a.V == b.V && same_report(a.values.delta, b.values.delta) &&
         same_report(a.values.sigma_val, b.values.sigma_val) && same_report(a.values.sigma_div, b.values.sigma_div);
}

/// Grid cells with sigma_div > 0, and the refinement check against a scan at
/// twice the resolution.
struct OpennessReport {
  bool conservative = false;  ///< some value came from a bracket lower end
  std::vector<std::size_t> positive_rows;
  bool refined = false;
  bool embedded = true;  ///< coarse rows reappear unchanged in the refined scan
  std::size_t refined_points_checked = 0;
  std::vector<std::string> failures;
};

namespace detail {

inline bool sigma_positive(const ScanRow& r, bool& conservative) {
  if (!r.inside) return false;
  const auto& s = r.values.sigma_div;
  if (s.status != ThresholdReport::Status::finite) return false;
  if (s.bound_kind == BoundKind::bracket) {
    conservative = true;
    return s.lower && s.lower->sign() > 0;
  }
  return s.value.sign() > 0;
}

}  // namespace detail

/// A refined point with odd coordinates lies inside the coarse cell spanned
/// by rounding each odd coordinate down and up; when every such coarse
/// corner has sigma > 0 the refined point must too.
inline OpennessReport openness_extract(const ScanTable& coarse, const ScanTable* fine = nullptr) {
  OpennessReport out;
  for (std::size_t i = 0; i < coarse.rows.size(); ++i)
    if (detail::sigma_positive(coarse.rows[i], out.conservative)) out.positive_rows.push_back(i);
  if (!fine) return out;
  out.refined = true;
  const SliceGrid& cs = coarse.slice;
  const SliceGrid& fs = fine->slice;
  if (fs.base != cs.base || fs.directions != cs.directions || fs.ranges != cs.ranges)
    throw DomainError("refinement", "refined scan is over a different slice");
  for (std::size_t i = 0; i < cs.axes(); ++i)
    if (fs.resolution[i] != 2 * cs.resolution[i]) throw DomainError("refinement", "resolution is not doubled");
  for (std::size_t row = 0; row < coarse.rows.size(); ++row) {
    auto k = cs.index_of(row);
    for (auto& x : k) x *= 2;
    if (!same_row(coarse.rows[row], fine->rows[fs.row_of(k)])) {
      out.embedded = false;
      out.failures.push_back("coarse row " + std::to_string(row) + " differs in the refined scan");
    }
  }
  std::vector<char> positive(coarse.rows.size(), 0);
  for (auto r : out.positive_rows) positive[r] = 1;
  for (std::size_t row = 0; row < fine->rows.size(); ++row) {
    const auto k = fs.index_of(row);
    std::vector<std::size_t> odd;
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] % 2) odd.push_back(i);
    if (odd.empty()) continue;
    bool all = true;
    for (std::size_t mask = 0; mask < (std::size_t(1) << odd.size()) && all; ++mask) {
      std::vector<long> c(k.size());
      for (std::size_t i = 0; i < k.size(); ++i) c[i] = k[i] / 2;
      for (std::size_t j = 0; j < odd.size(); ++j)
        if (mask >> j & 1) c[odd[j]] += 1;
      all = positive[cs.row_of(c)];
    }
    if (!all) continue;
    ++out.refined_points_checked;
    bool ignored = false;
    if (!detail::sigma_positive(fine->rows[row], ignored))
      out.failures.push_back("refined point " + std::to_string(row) + " inside a positive cell is not positive");
  }
  return out;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline std::string join(const Vec& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + to_string(v[i]);
  return s;
}

inline std::string value_text(const ThresholdReport& r) {
  switch (r.status) {
    case ThresholdReport::Status::finite: return to_string(r.value);
    case ThresholdReport::Status::not_sublc: return "-inf";
    case ThresholdReport::Status::empty: return "";
  }
  return "";
}

inline std::string float_text(const ThresholdReport& r) {
  switch (r.status) {
    case ThresholdReport::Status::finite: return to_float_string(r.value);
    case ThresholdReport::Status::not_sublc: return "-inf";
    case ThresholdReport::Status::empty: return "";
  }
  return "";
}

}  // namespace detail

/// One line per grid point in row-major order; exact values, float
/// renderings, status, witness and bound kind per functional.
inline std::string scan_csv(const ScanTable& t) {
  std::ostringstream out;
  out << "# model_hash " << t.model_hash << "\n# candidates " << t.candidate_set << "\n";
  out << "row";
  for (std::size_t i = 0; i < t.slice.axes(); ++i) out << ",s" << i + 1;
  out << ",omega,inside,V,V_float";
  for (const auto& f : t.functionals) {
    out << "," << f << "," << f << "_float," << f << "_status," << f << "_witness," << f << "_bound_kind";
    if (f == "sigma_div") out << ",sigma_div_lower";
  }
  out << "\n";
  for (std::size_t row = 0; row < t.rows.size(); ++row) {
    const ScanRow& r = t.rows[row];
    out << row;
    for (const auto& s : r.params) out << "," << to_string(s);
    out << "," << detail::csv_field(detail::join(r.omega, " ")) << "," << (r.inside ? "1" : "0");
    if (!r.inside) {
      out << ",,";
      for (const auto& f : t.functionals) out << ",,,outside-cone,," << (f == "sigma_div" ? "," : "");
      out << "\n";
      continue;
    }
    out << "," << to_string(r.V) << "," << to_float_string(r.V);
    for (const auto& f : t.functionals) {
      const auto& rep = report_of(r.values, f);
      out << "," << detail::value_text(rep) << "," << detail::float_text(rep) << "," << status_name(rep.status) << ","
          << detail::csv_field(rep.witness) << "," << bound_kind_name(rep.bound_kind);
      if (f == "sigma_div") out << "," << (rep.lower ? to_string(*rep.lower) : "");
    }
    out << "\n";
  }
  return out.str();
}

/// "x y value" lines for external plotting; y is 0 on one-axis slices and
/// missing values are written as nan.
inline std::string plot_data(const ScanTable& t, const std::string& functional) {
  std::ostringstream out;
  out << "# " << functional << "\n";
  for (const auto& r : t.rows) {
    const std::string x = to_float_string(r.params[0]);
    const std::string y = r.params.size() > 1 ? to_float_string(r.params[1]) : "0";
    std::string v = "nan";
    if (r.inside) {
      const auto& rep = report_of(r.values, functional);
      if (rep.status == ThresholdReport::Status::finite) v = to_float_string(rep.value);
    }
    out << x << " " << y << " " << v << "\n";
  }
  return out.str();
}

}  // namespace divstab
