#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "divstab/io.hpp"

namespace fs = std::filesystem;
using namespace divstab;

namespace {

struct Options {
  std::string command;
  std::string model_path, job_path, out_path, out_dir;
  std::string format = "json";
  unsigned jobs = 1;
  std::optional<long> radius;
  std::optional<long> depth;
  std::uint64_t seed = 0;
};

struct Context {
  std::shared_ptr<const VarietyModel> model;
  Json job = Json::object();
  fs::path job_dir = ".";
  std::string hash;
};

Context load(const Options& o) {
  Context c;
  if (!o.job_path.empty()) {
    c.job = read_json(o.job_path);
    if (!c.job.is_object()) throw SchemaError(o.job_path + ": expected a job object");
    c.job_dir = fs::path(o.job_path).parent_path();
  }
  fs::path model_path = o.model_path;
  if (model_path.empty()) {
    if (!c.job.contains("model")) throw SchemaError("no model: pass --model or set \"model\" in the job");
    model_path = c.job_dir / detail::string_from(c.job["model"], "job.model");
  }
  c.model = std::make_shared<const VarietyModel>(load_model(model_path));
  c.hash = model_hash(*c.model);
  return c;
}

PolarizedPair pair_of(const Context& c) {
  if (c.job.contains("omega")) return polarize(c.model, class_from(*c.model, c.job["omega"], "job.omega"));
  return polarize(c.model, c.model->omega());
}

Json header(const Options& o, const Context& c, const PolarizedPair* p = nullptr) {
  Json j{{"command", o.command}, {"model_hash", c.hash}, {"backend", backend_name(c.model->backend())}};
  if (p) {
    j["omega"] = class_json(*c.model, p->omega.coords);
    j["V"] = exact_json(p->V);
  }
  return j;
}

const Json& payload(const Context& c, const char* key) {
  return detail::field(c.job, key, "job");
}

const CurveModel& require_curve(const Context& c, const std::string& what) {
  if (c.model->backend() != Backend::curve) throw ConfigError(what + " is available on the curve backend only");
  return c.model->curve();
}

Json valuation_json(const PolarizedPair& p, const DivisorialValuation& v) {
  return {{"valuation", encode(v)},
          {"energy", exact_json(dirac_energy(p, v))},
          {"log_discrepancy", exact_json(log_discrepancy(p, v))},
          {"threshold", exact_json(dirac_threshold(p, v))},
          {"bound_kind", "exact"}};
}

Json run_norm(const Options& o, const Context& c) {
  const PolarizedPair p = pair_of(c);
  Json j = header(o, c, &p);
  if (c.job.contains("valuation")) j.update(valuation_json(p, valuation_from(*c.model, c.job["valuation"], "job.valuation")));
  if (c.job.contains("measure")) {
    const auto e = measure_energy(p, measure_from(*c.model, c.job["measure"], "job.measure"));
    j["energy"] = {{"lower", exact_json(e.lo)}, {"upper", exact_json(e.hi)}};
    j["bound_kind"] = e.exact() ? "exact" : "bracket";
  }
  if (c.job.contains("theta")) {
    const NumClass th = c.model->make_class(class_from(*c.model, c.job["theta"], "job.theta"));
    j["theta_norm"] = exact_json(norm_sup(*c.model, p.omega, th));
    j["theta_trace"] = exact_json(trace(*c.model, p.omega, th));
  }
  if (!c.job.contains("valuation") && !c.job.contains("measure") && !c.job.contains("theta"))
    throw SchemaError("job: norm needs \"valuation\", \"measure\" or \"theta\"");
  return j;
}

Json run_beta(const Options& o, const Context& c) {
  const PolarizedPair p = pair_of(c);
  Json j = header(o, c, &p);
  if (c.job.contains("measure")) {
    const auto b = beta_measure(p, measure_from(*c.model, c.job["measure"], "job.measure"));
    j["entropy"] = exact_json(b.entropy);
    if (b.exact()) {
      j["value"] = exact_json(b.lo);
      j["bound_kind"] = "exact";
    } else {
      j["value"] = {{"lower", exact_json(b.lo)}, {"upper", exact_json(b.hi)}};
      j["bound_kind"] = "bracket";
    }
    return j;
  }
  const DivisorialValuation v = valuation_from(*c.model, payload(c, "valuation"), "job.valuation");
  j.update(valuation_json(p, v));
  j["value"] = exact_json(beta_dirac(p, v));
  return j;
}

CandidateOptions candidate_options(const Options& o, const Context& c) {
  CandidateOptions opt = candidate_options_from(c.job);
  if (o.radius) opt.radius = *o.radius;
  if (o.depth) opt.depth = static_cast<std::size_t>(*o.depth);
  if (opt.radius < 0) throw SchemaError("radius must be nonnegative");
  return opt;
}

Json run_threshold(const Options& o, const Context& c) {
  const PolarizedPair p = pair_of(c);
  const CandidateSet set = candidates(*c.model, candidate_options(o, c));
  const ThresholdSuite s = thresholds(p, set, o.jobs);
  Json j = header(o, c, &p);
  j["candidate_count"] = set.valuations.size();
  const std::string name = o.command == "sigma-val" ? "sigma_val" : o.command == "sigma-div" ? "sigma_div" : "delta";
  j.update(report_json(report_of(s, name)));
  return j;
}

Json run_potential(const Options& o, const Context& c) {
  const CurveModel& base = require_curve(c, o.command);
  const PolarizedPair p = pair_of(c);
  const CurveModel m = base.with_degree(p.V);
  const PLPotential phi = potential_from(m, payload(c, "potential"), "job.potential");
  Json j = header(o, c, &p);
  if (o.command == "energy") j["value"] = exact_json(energy(m, phi));
  if (o.command == "ding") j["value"] = exact_json(ding(m, phi));
  if (o.command == "mabuchi") j["value"] = exact_json(mabuchi(m, phi));
  j["j_functional"] = exact_json(j_functional(m, phi));
  j["bound_kind"] = "exact";
  return j;
}

struct ScanOutput {
  Json json;
  std::string csv;
};

ScanOutput run_scan(const Options& o, const Context& c) {
  const SliceGrid slice = slice_from(*c.model, payload(c, "slice"), "job.slice");
  std::vector<std::string> functionals = all_functionals();
  if (c.job.contains("functionals")) functionals = detail::strings_from(c.job["functionals"], "job.functionals");
  for (const auto& f : functionals)
    if (std::find(all_functionals().begin(), all_functionals().end(), f) == all_functionals().end())
      throw SchemaError("job.functionals: unknown functional \"" + f + "\"");
  const CandidateOptions opt = candidate_options(o, c);
  ScanTable t = scan(c.model, slice, opt, functionals, o.jobs);
  t.model_hash = c.hash;
  ScanOutput out;
  out.csv = scan_csv(t);
  out.json = header(o, c);
  out.json.update(scan_json(t));
  const bool refine = c.job.contains("refine") && c.job["refine"].get<bool>();
  if (refine) {
    const ScanTable fine = scan(c.model, slice.refined(), opt, functionals, o.jobs);
    out.json["openness"] = openness_json(openness_extract(t, &fine));
  } else {
    out.json["openness"] = openness_json(openness_extract(t));
  }
  return out;
}

Json run_selftest(const Options& o, const Context& c) {
  std::optional<Counterpart> other;
  if (c.job.contains("counterpart")) other = counterpart_from(*c.model, c.job["counterpart"], c.job_dir);
  const ValidationLedger l = validation_suite(c.model, o.seed, other ? &*other : nullptr);
  Json j = header(o, c);
  j.update(ledger_json(l));
  return j;
}

void emit(const Options& o, const std::string& text) {
  fs::path out = o.out_path;
  if (out.empty() && !o.out_dir.empty()) out = o.command + (o.format == "csv" ? ".csv" : ".json");
  if (out.empty()) {
    std::cout << text;
    return;
  }
  if (!o.out_dir.empty() && out.is_relative()) out = fs::path(o.out_dir) / out;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream f(out, std::ios::binary);
  if (!f) throw SchemaError("cannot write " + out.string());
  f << text;
}

int run(const Options& o) {
  const Context c = load(o);
  if (o.format == "csv" && o.command != "scan") throw SchemaError("csv output is available for scan only");
  Json j;
  bool ok = true;
  if (o.command == "norm") {
    j = run_norm(o, c);
  } else if (o.command == "beta") {
    j = run_beta(o, c);
  } else if (o.command == "delta" || o.command == "sigma-val" || o.command == "sigma-div") {
    j = run_threshold(o, c);
  } else if (o.command == "energy" || o.command == "ding" || o.command == "mabuchi") {
    j = run_potential(o, c);
  } else if (o.command == "scan") {
    ScanOutput s = run_scan(o, c);
    if (o.format == "csv") {
      emit(o, s.csv);
      return 0;
    }
    j = std::move(s.json);
  } else if (o.command == "selftest") {
    j = run_selftest(o, c);
    ok = j["passed"].get<bool>();
  }
  emit(o, j.dump(2) + "\n");
  if (!ok) {
    std::cerr << "selftest: some properties failed\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact stability invariants of polarized pairs on curve, surface and toric models"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--model", o.model_path, "Model file");
  app.add_option("--job", o.job_path, "Job file");
  app.add_option("--out", o.out_path, "Output file (stdout when omitted)");
  app.add_option("--out-dir", o.out_dir, "Directory for relative output paths");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--radius", o.radius, "Toric candidate radius");
  app.add_option("--depth", o.depth, "Blowup chain depth for surface candidates");
  app.add_option("--seed", o.seed, "Seed for selftest samples");
  for (const char* name : {"norm", "beta", "delta", "sigma-val", "sigma-div", "energy", "ding", "mabuchi", "scan", "selftest"})
    app.add_subcommand(name)->callback([&o, name] { o.command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run(o);
  } catch (...) {
    std::string message;
    const int status = exit_status(std::current_exception(), message);
    std::cerr << message << "\n";
    return status;
  }
}
