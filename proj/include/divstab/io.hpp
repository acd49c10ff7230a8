#pragma once

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "divstab/functionals.hpp"
#include "divstab/scanner.hpp"
#include "divstab/validation.hpp"

namespace divstab {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline std::string string_from(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a string");
  return j.get<std::string>();
}

inline long integer_from(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return j.get<long>();
}

inline std::vector<std::string> strings_from(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string_from(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

/// Exact rationals are JSON strings "p/q"; integers may also be JSON
/// integers. Floats are rejected.
inline Rational rational_from(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const SchemaError& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  throw SchemaError(where + ": expected an exact rational string");
}

inline Vec vec_from(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of rationals");
  Vec out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline Json to_json(const Rational& q) { return to_string(q); }

inline Json to_json(const Vec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

/// {"exact": "p/q", "float": "..."} for reports.
inline Json exact_json(const Rational& q) { return {{"exact", to_string(q)}, {"float", to_float_string(q)}}; }

inline Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

namespace detail {

inline CurveModel curve_from(const Json& j) {
  CurveModel m;
  m.genus = static_cast<int>(integer_from(field(j, "genus", "curve"), "curve.genus"));
  m.V = rational_from(field(j, "V", "curve"), "curve.V");
  if (j.contains("points")) {
    const Json& pts = j["points"];
    if (!pts.is_array()) throw SchemaError("curve.points: expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string w = "curve.points[" + std::to_string(i) + "]";
      m.points.push_back({string_from(field(pts[i], "id", w), w + ".id"),
                          pts[i].contains("b") ? rational_from(pts[i]["b"], w + ".b") : Rational(0)});
    }
  }
  m.validate();
  return m;
}

inline std::vector<std::size_t> curve_indices(const SurfaceModel& m, const Json& j, const std::string& where) {
  std::vector<std::size_t> out;
  for (const auto& id : strings_from(j, where)) {
    auto i = m.find_curve(id);
    if (!i) throw ConfigError(where + ": unknown curve id \"" + id + "\"");
    out.push_back(*i);
  }
  return out;
}

inline SurfaceModel surface_from(const Json& j) {
  SurfaceModel m;
  m.basis = strings_from(field(j, "basis", "surface"), "surface.basis");
  const Json& gram = field(j, "gram", "surface");
  if (!gram.is_array()) throw SchemaError("surface.gram: expected an array of rows");
  for (std::size_t i = 0; i < gram.size(); ++i) m.gram.push_back(vec_from(gram[i], "surface.gram[" + std::to_string(i) + "]"));
  m.canonical = vec_from(field(j, "canonical", "surface"), "surface.canonical");
  const Json& curves = field(j, "curves", "surface");
  if (!curves.is_array()) throw SchemaError("surface.curves: expected an array");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const std::string w = "surface.curves[" + std::to_string(i) + "]";
    SurfaceCurve c;
    c.id = string_from(field(curves[i], "id", w), w + ".id");
    c.cls = vec_from(field(curves[i], "class", w), w + ".class");
    if (curves[i].contains("exceptional")) c.exceptional = curves[i]["exceptional"].get<bool>();
    m.curves.push_back(std::move(c));
  }
  if (j.contains("boundary")) {
    const Json& b = j["boundary"];
    if (!b.is_array()) throw SchemaError("surface.boundary: expected an array");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string w = "surface.boundary[" + std::to_string(i) + "]";
      std::size_t k = 0;
      if (b[i].contains("curve")) {
        k = m.curve_index(string_from(b[i]["curve"], w + ".curve"));
      } else {
        const long idx = integer_from(field(b[i], "index", w), w + ".index");
        if (idx < 0 || static_cast<std::size_t>(idx) >= m.curves.size()) throw ConfigError(w + ": curve index out of range");
        k = static_cast<std::size_t>(idx);
      }
      m.curves[k].b = rational_from(field(b[i], "b", w), w + ".b");
    }
  }
  m.extremal = curve_indices(m, field(j, "extremal_curves", "surface"), "surface.extremal_curves");
  m.negative = j.contains("negative_curves") ? curve_indices(m, j["negative_curves"], "surface.negative_curves")
                                              : m.negative_from_curves();
  m.reference_ample = vec_from(field(j, "reference_ample", "surface"), "surface.reference_ample");
  if (j.contains("blowups")) {
    const Json& chains = j["blowups"];
    if (!chains.is_array()) throw SchemaError("surface.blowups: expected an array");
    for (std::size_t i = 0; i < chains.size(); ++i) {
      const std::string w = "surface.blowups[" + std::to_string(i) + "]";
      BlowupChain ch;
      ch.id = string_from(field(chains[i], "id", w), w + ".id");
      const Json& steps = field(chains[i], "steps", w);
      if (!steps.is_array()) throw SchemaError(w + ".steps: expected an array");
      for (std::size_t k = 0; k < steps.size(); ++k) {
        const std::string ws = w + ".steps[" + std::to_string(k) + "]";
        BlowupStep st;
        st.exceptional = string_from(field(steps[k], "exceptional", ws), ws + ".exceptional");
        const Json& mult = field(steps[k], "multiplicities", ws);
        if (!mult.is_object()) throw SchemaError(ws + ".multiplicities: expected an object");
        for (const auto& [id, v] : mult.items()) st.multiplicities[id] = rational_from(v, ws + ".multiplicities." + id);
        st.extremal = strings_from(field(steps[k], "extremal", ws), ws + ".extremal");
        ch.steps.push_back(std::move(st));
      }
      m.chains.push_back(std::move(ch));
    }
  }
  m.validate();
  for (std::size_t i = 0; i < m.chains.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k)
      if (m.chains[k].id == m.chains[i].id) throw SchemaError("duplicate blowup chain id " + m.chains[i].id);
    apply_chain(m, m.chains[i].id, m.chains[i].steps.size());
  }
  return m;
}

inline ToricModel toric_from(const Json& j) {
  ToricModel t;
  t.n = static_cast<std::size_t>(integer_from(field(j, "n", "toric"), "toric.n"));
  const Json& rays = field(j, "rays", "toric");
  if (!rays.is_array()) throw SchemaError("toric.rays: expected an array");
  for (std::size_t i = 0; i < rays.size(); ++i) t.rays.push_back(vec_from(rays[i], "toric.rays[" + std::to_string(i) + "]"));
  if (j.contains("ray_ids")) {
    t.ray_ids = strings_from(j["ray_ids"], "toric.ray_ids");
  } else {
    for (std::size_t i = 0; i < t.rays.size(); ++i) t.ray_ids.push_back("D" + std::to_string(i + 1));
  }
  const Json& cones = field(j, "max_cones", "toric");
  if (!cones.is_array()) throw SchemaError("toric.max_cones: expected an array");
  for (std::size_t i = 0; i < cones.size(); ++i) {
    const std::string w = "toric.max_cones[" + std::to_string(i) + "]";
    if (!cones[i].is_array()) throw SchemaError(w + ": expected an array of ray indices");
    std::vector<std::size_t> c;
    for (const auto& x : cones[i]) {
      const long k = integer_from(x, w);
      if (k < 0) throw SchemaError(w + ": negative ray index");
      c.push_back(static_cast<std::size_t>(k));
    }
    t.cones.push_back(std::move(c));
  }
  t.boundary = j.contains("boundary") ? vec_from(j["boundary"], "toric.boundary") : Vec(t.rays.size(), Rational(0));
  t.prepare();
  return t;
}

}  // namespace detail

/// Reads a class of `m`: a degree on curves, coordinates on surfaces,
/// per-ray support values on toric models.
inline Vec class_from(const VarietyModel& m, const Json& j, const std::string& where) {
  switch (m.backend()) {
    case Backend::curve:
      if (j.is_array()) return vec_from(j, where);
      return {rational_from(j, where)};
    case Backend::surface: return vec_from(j, where);
    case Backend::toric: {
      const Vec d = vec_from(j, where);
      if (d.size() != m.toric().rays.size())
        throw SchemaError(where + ": toric classes are per-ray support values");
      return m.toric().reduce(d);
    }
  }
  return {};
}

/// Inverse of class_from: toric classes are written as per-ray values.
inline Json class_json(const VarietyModel& m, const Vec& coords) {
  return to_json(m.backend() == Backend::toric ? m.toric().lift(coords) : coords);
}

inline VarietyModel model_from_json(const Json& j) {
  const std::string kind = detail::string_from(detail::field(j, "kind", "model"), "model.kind");
  VarietyModel m;
  if (kind == "curve") {
    m.data = detail::curve_from(j);
    m.default_omega = Vec{m.curve().V};
    return m;
  }
  if (kind == "surface") {
    m.data = detail::surface_from(j);
  } else if (kind == "toric") {
    m.data = detail::toric_from(j);
  } else {
    throw SchemaError("model.kind must be curve, surface or toric, got \"" + kind + "\"");
  }
  if (j.contains("omega")) {
    m.default_omega = class_from(m, j["omega"], "model.omega");
    require_ample(m, m.omega());
  }
  return m;
}

inline VarietyModel load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(read_json(path));
  } catch (const DomainError& e) {
    throw DomainError(e.invariant(), path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  } catch (const Json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

inline Json model_to_json(const VarietyModel& m) {
  Json j;
  switch (m.backend()) {
    case Backend::curve: {
      const auto& c = m.curve();
      j["kind"] = "curve";
      j["genus"] = c.genus;
      j["V"] = to_json(c.V);
      j["points"] = Json::array();
      for (const auto& p : c.points) j["points"].push_back({{"id", p.id}, {"b", to_json(p.b)}});
      return j;
    }
    case Backend::surface: {
      const auto& s = m.surface();
      j["kind"] = "surface";
      j["basis"] = s.basis;
      j["gram"] = Json::array();
      for (const auto& row : s.gram) j["gram"].push_back(to_json(row));
      j["canonical"] = to_json(s.canonical);
      j["curves"] = Json::array();
      j["boundary"] = Json::array();
      for (const auto& c : s.curves) {
        Json cj{{"id", c.id}, {"class", to_json(c.cls)}};
        if (c.exceptional) cj["exceptional"] = true;
        j["curves"].push_back(cj);
        if (c.b != 0) j["boundary"].push_back({{"curve", c.id}, {"b", to_json(c.b)}});
      }
      auto ids = [&](const std::vector<std::size_t>& idx) {
        Json a = Json::array();
        for (auto i : idx) a.push_back(s.curves[i].id);
        return a;
      };
      j["extremal_curves"] = ids(s.extremal);
      j["negative_curves"] = ids(s.negative);
      j["reference_ample"] = to_json(s.reference_ample);
      j["blowups"] = Json::array();
      for (const auto& ch : s.chains) {
        Json steps = Json::array();
        for (const auto& st : ch.steps) {
          Json mult = Json::object();
          for (const auto& [id, v] : st.multiplicities) mult[id] = to_json(v);
          steps.push_back({{"exceptional", st.exceptional}, {"multiplicities", mult}, {"extremal", st.extremal}});
        }
        j["blowups"].push_back({{"id", ch.id}, {"steps", steps}});
      }
      if (m.default_omega) j["omega"] = to_json(*m.default_omega);
      return j;
    }
    case Backend::toric: {
      const auto& t = m.toric();
      j["kind"] = "toric";
      j["n"] = t.n;
      j["rays"] = Json::array();
      for (const auto& r : t.rays) j["rays"].push_back(to_json(r));
      j["ray_ids"] = t.ray_ids;
      j["max_cones"] = t.cones;
      j["boundary"] = to_json(t.boundary);
      if (m.default_omega) j["omega"] = to_json(t.lift(*m.default_omega));
      return j;
    }
  }
  return j;
}

/// 64-bit FNV-1a of the canonical (sorted-key) serialization, as 16 hex digits.
inline std::string model_hash(const VarietyModel& m) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : model_to_json(m).dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Valuation documents: {"trivial": true}; curve {"point", "t"}; surface
/// {"curve"} or {"chain", "steps", "divisor"}; toric {"u"} or {"ray"}. "t"
/// defaults to 1.
inline DivisorialValuation valuation_from(const VarietyModel& m, const Json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected a valuation object");
  const Rational t = j.contains("t") ? rational_from(j["t"], where + ".t") : Rational(1);
  const bool trivial = j.contains("trivial") && j["trivial"].get<bool>();
  switch (m.backend()) {
    case Backend::curve: {
      if (trivial) return CurveValuation{"", 0};
      const std::string p = detail::string_from(detail::field(j, "point", where), where + ".point");
      return CurveValuation{p, t};
    }
    case Backend::surface: {
      const auto& s = m.surface();
      if (trivial) return SurfaceValuation{"", 0, s.curves.front().id, 0};
      if (j.contains("chain")) {
        SurfaceValuation v{detail::string_from(j["chain"], where + ".chain"),
                           static_cast<std::size_t>(detail::integer_from(detail::field(j, "steps", where), where + ".steps")),
                           detail::string_from(detail::field(j, "divisor", where), where + ".divisor"), t};
        const auto& ch = s.chain(v.chain);
        if (v.steps > ch.steps.size()) throw ConfigError(where + ": chain " + v.chain + " has fewer steps");
        apply_chain(s, v.chain, v.steps).curve_index(v.divisor);
        return v;
      }
      const std::string c = detail::string_from(detail::field(j, "curve", where), where + ".curve");
      s.curve_index(c);
      return SurfaceValuation{"", 0, c, t};
    }
    case Backend::toric: {
      const auto& tm = m.toric();
      if (trivial) return ToricValuation{Vec(tm.n, Rational(0)), 0};
      ToricValuation v{{}, t};
      if (j.contains("ray")) {
        const std::string id = detail::string_from(j["ray"], where + ".ray");
        auto it = std::find(tm.ray_ids.begin(), tm.ray_ids.end(), id);
        if (it == tm.ray_ids.end()) throw ConfigError(where + ": unknown ray id \"" + id + "\"");
        v.u = tm.rays[static_cast<std::size_t>(it - tm.ray_ids.begin())];
      } else {
        v.u = vec_from(detail::field(j, "u", where), where + ".u");
      }
      tm.require_direction(v);
      return v;
    }
  }
  throw SchemaError(where + ": unsupported backend");
}

/// {"atoms": [{"valuation": {...}, "mass": "p/q"}, ...]}.
inline DivisorialMeasure measure_from(const VarietyModel& m, const Json& j, const std::string& where) {
  const Json& atoms = detail::field(j, "atoms", where);
  if (!atoms.is_array()) throw SchemaError(where + ".atoms: expected an array");
  DivisorialMeasure mu;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string w = where + ".atoms[" + std::to_string(i) + "]";
    mu.atoms.push_back({valuation_from(m, detail::field(atoms[i], "valuation", w), w + ".valuation"),
                        rational_from(detail::field(atoms[i], "mass", w), w + ".mass")});
  }
  return mu;
}

/// Curve potentials: {"c", "rays": {id: {"breaks": [...], "slopes": [...]}}},
/// or {"dirac": {"point", "t"}} for the potential of a Dirac mass, with an
/// optional constant "shift".
inline PLPotential potential_from(const CurveModel& m, const Json& j, const std::string& where) {
  PLPotential phi;
  if (j.contains("dirac")) {
    const Json& d = j["dirac"];
    phi = dirac_potential(m, detail::string_from(detail::field(d, "point", where + ".dirac"), where + ".dirac.point"),
                          d.contains("t") ? rational_from(d["t"], where + ".dirac.t") : Rational(1));
  } else {
    phi.c = j.contains("c") ? rational_from(j["c"], where + ".c") : Rational(0);
    if (j.contains("rays")) {
      for (const auto& [id, r] : j["rays"].items()) {
        const std::string w = where + ".rays." + id;
        phi.rays[id] = RayProfile{vec_from(detail::field(r, "breaks", w), w + ".breaks"),
                                  vec_from(detail::field(r, "slopes", w), w + ".slopes")};
      }
    }
  }
  if (j.contains("shift")) phi.c += rational_from(j["shift"], where + ".shift");
  validate_potential(m, phi);
  return phi;
}

inline CandidateOptions candidate_options_from(const Json& j, CandidateOptions o = {}) {
  if (j.contains("candidates")) {
    const Json& c = j["candidates"];
    if (c.contains("radius")) o.radius = detail::integer_from(c["radius"], "candidates.radius");
    if (c.contains("depth"))
      o.depth = static_cast<std::size_t>(detail::integer_from(c["depth"], "candidates.depth"));
  }
  return o;
}

/// {"base": class, "directions": [class, ...], "ranges": [[lo, hi], ...],
/// "resolution": [r, ...]}; toric classes and directions are per-ray.
inline SliceGrid slice_from(const VarietyModel& m, const Json& j, const std::string& where) {
  SliceGrid s;
  s.base = class_from(m, detail::field(j, "base", where), where + ".base");
  const Json& dirs = detail::field(j, "directions", where);
  if (!dirs.is_array()) throw SchemaError(where + ".directions: expected an array");
  for (std::size_t i = 0; i < dirs.size(); ++i)
    s.directions.push_back(class_from(m, dirs[i], where + ".directions[" + std::to_string(i) + "]"));
  const Json& ranges = detail::field(j, "ranges", where);
  if (!ranges.is_array()) throw SchemaError(where + ".ranges: expected an array");
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const Vec r = vec_from(ranges[i], where + ".ranges[" + std::to_string(i) + "]");
    if (r.size() != 2) throw SchemaError(where + ".ranges: each range is [lo, hi]");
    s.ranges.emplace_back(r[0], r[1]);
  }
  const Json& res = detail::field(j, "resolution", where);
  if (!res.is_array()) throw SchemaError(where + ".resolution: expected an array");
  for (const auto& r : res) s.resolution.push_back(detail::integer_from(r, where + ".resolution"));
  s.validate(m.rank());
  return s;
}

inline Json report_json(const ThresholdReport& r) {
  Json j{{"status", status_name(r.status)},
         {"witness", r.witness},
         {"candidate_set", r.candidate_set},
         {"bound_kind", bound_kind_name(r.bound_kind)}};
  switch (r.status) {
    case ThresholdReport::Status::finite: j["value"] = exact_json(r.value); break;
    case ThresholdReport::Status::not_sublc: j["value"] = {{"exact", "-inf"}, {"float", "-inf"}}; break;
    case ThresholdReport::Status::empty: j["value"] = nullptr; break;
  }
  if (r.lower) j["lower"] = exact_json(*r.lower);
  return j;
}

inline Json scan_json(const ScanTable& t) {
  Json j;
  j["model_hash"] = t.model_hash;
  j["candidate_set"] = t.candidate_set;
  j["functionals"] = t.functionals;
  Json slice{{"base", to_json(t.slice.base)}, {"resolution", t.slice.resolution}};
  slice["directions"] = Json::array();
  for (const auto& d : t.slice.directions) slice["directions"].push_back(to_json(d));
  slice["ranges"] = Json::array();
  for (const auto& [lo, hi] : t.slice.ranges) slice["ranges"].push_back({to_string(lo), to_string(hi)});
  j["slice"] = slice;
  j["rows"] = Json::array();
  for (const auto& r : t.rows) {
    Json row{{"index", r.index}, {"omega", to_json(r.omega)}, {"inside", r.inside}};
    row["params"] = to_json(Vec(r.params.begin(), r.params.end()));
    if (r.inside) {
      row["V"] = exact_json(r.V);
      for (const auto& f : t.functionals) row[f] = report_json(report_of(r.values, f));
    }
    j["rows"].push_back(row);
  }
  j["holder_moduli"] = Json::array();
  for (const auto& h : t.moduli)
    j["holder_moduli"].push_back({{"functional", h.functional},
                                  {"alpha", to_float_string(h.alpha)},
                                  {"value", to_float_string(h.value)},
                                  {"pairs", h.pairs}});
  j["sandwich"] = {{"checked", t.sandwich_checked}, {"violations", Json::array()}};
  for (const auto& v : t.sandwich_violations)
    j["sandwich"]["violations"].push_back({{"rows", {v.a, v.b}}, {"detail", v.detail}});
  return j;
}

inline Json openness_json(const OpennessReport& r) {
  return {{"positive_rows", r.positive_rows},
          {"conservative", r.conservative},
          {"refined", r.refined},
          {"embedded", r.embedded},
          {"refined_points_checked", r.refined_points_checked},
          {"failures", r.failures}};
}

/// {"model": path, "omegas": [[a, b], ...], "valuations": [[va, vb], ...]},
/// each entry in the coordinates of its own model; paths are relative to base.
inline Counterpart counterpart_from(const VarietyModel& m, const Json& j, const std::filesystem::path& base) {
  Counterpart c;
  const auto path = base / detail::string_from(detail::field(j, "model", "counterpart"), "counterpart.model");
  c.model = std::make_shared<const VarietyModel>(load_model(path));
  auto pairs = [&](const char* key) -> const Json& {
    const Json& a = detail::field(j, key, "counterpart");
    if (!a.is_array()) throw SchemaError(std::string("counterpart.") + key + ": expected an array of pairs");
    for (const auto& e : a)
      if (!e.is_array() || e.size() != 2) throw SchemaError(std::string("counterpart.") + key + ": expected pairs");
    return a;
  };
  const Json& om = pairs("omegas");
  for (std::size_t i = 0; i < om.size(); ++i) {
    const std::string w = "counterpart.omegas[" + std::to_string(i) + "]";
    c.omegas.emplace_back(class_from(m, om[i][0], w), class_from(*c.model, om[i][1], w));
  }
  const Json& vs = pairs("valuations");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string w = "counterpart.valuations[" + std::to_string(i) + "]";
    c.valuations.emplace_back(valuation_from(m, vs[i][0], w), valuation_from(*c.model, vs[i][1], w));
  }
  return c;
}

inline Json ledger_json(const ValidationLedger& l) {
  Json j{{"seed", l.seed}, {"passed", l.passed()}, {"rows", Json::array()}};
  for (const auto& r : l.rows)
    j["rows"].push_back({{"check", r.check},
                         {"property", r.property},
                         {"samples", r.samples},
                         {"passed", r.passed},
                         {"max_residual", exact_json(r.residual)},
                         {"detail", r.detail}});
  return j;
}

/// Exit status for an escaped exception: 1 domain, 2 schema or config,
/// 3 internal consistency. `message` receives a one-line diagnostic.
inline int exit_status(const std::exception_ptr& e, std::string& message) {
  try {
    std::rethrow_exception(e);
  } catch (const DomainError& x) {
    message = "domain error [" + x.invariant() + "]: " + x.what();
    return 1;
  } catch (const SchemaError& x) {
    message = std::string("schema error: ") + x.what();
    return 2;
  } catch (const Json::exception& x) {
    message = std::string("schema error: ") + x.what();
    return 2;
  } catch (const ConsistencyError& x) {
    message = std::string("consistency error: ") + x.what();
    return 3;
  } catch (const std::exception& x) {
    message = std::string("internal error: ") + x.what();
    return 3;
  }
}

}  // namespace divstab
