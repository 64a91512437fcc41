#include "fracldg/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "fracldg/errors.hpp"

namespace fracldg {

using nlohmann::json;

double RunConfig::effective_cfl() const { return cfl ? *cfl : default_cfl(order); }

double RunConfig::effective_snapshot_interval() const {
  return snapshot_interval ? *snapshot_interval : final_time / 10.0;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field, field + ": " + what);
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) fail(field, "expected an integer");
  const long long v = j.get<long long>();
  if (v < -1000000000LL || v > 1000000000LL) fail(field, "out of range");
  return static_cast<int>(v);
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_number_list(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (const json& v : j) out.push_back(get_number(v, field));
  return out;
}

CustomProblemConfig parse_custom(const json& j) {
  if (!j.is_object()) fail("custom", "expected an object");
  CustomProblemConfig c;
  bool have_breaks = false, have_pieces = false;
  for (const auto& [key, value] : j.items()) {
    const std::string field = "custom." + key;
    if (key == "breakpoints") {
      c.breakpoints = get_number_list(value, field);
      have_breaks = true;
    } else if (key == "pieces") {
      if (!value.is_array()) fail(field, "expected an array of coefficient arrays");
      for (const json& piece : value) c.pieces.push_back(get_number_list(piece, field));
      have_pieces = true;
    } else if (key == "flux") {
      c.flux = get_string(value, field);
      if (c.flux != "zero" && c.flux != "burgers" && c.flux != "linear") {
        fail(field, "expected zero, burgers or linear");
      }
    } else if (key == "speed") {
      c.speed = get_number(value, field);
    } else if (key == "manufactured") {
      if (!value.is_boolean()) fail(field, "expected true or false");
      c.manufactured = value.get<bool>();
    } else {
      fail(field, "unknown key");
    }
  }
  if (!have_breaks) fail("custom.breakpoints", "missing");
  if (!have_pieces) fail("custom.pieces", "missing");
  if (c.breakpoints.size() != c.pieces.size() + 1 || c.pieces.empty()) {
    fail("custom.pieces", "need exactly one piece per breakpoint interval");
  }
  for (std::size_t i = 0; i + 1 < c.breakpoints.size(); ++i) {
    if (!(c.breakpoints[i] < c.breakpoints[i + 1])) {
      fail("custom.breakpoints", "must be strictly increasing");
    }
  }
  for (const auto& p : c.pieces) {
    if (p.empty()) fail("custom.pieces", "empty coefficient list");
  }
  return c;
}

}  // namespace

RunConfig parse_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");

  RunConfig cfg;
  std::set<std::string> seen;
  std::set<std::string> spelled;  // keys as written, so errors use the user's spelling
  auto canonical = [](const std::string& key) -> std::string {
    if (key == "K") return "elements";
    if (key == "T") return "final_time";
    return key;
  };
  for (const auto& [raw_key, value] : j.items()) {
    const std::string key = canonical(raw_key);
    spelled.insert(raw_key);
    if (!seen.insert(key).second) fail(raw_key, "given twice (directly and through its alias)");
    if (key == "problem") {
      cfg.problem = get_string(value, raw_key);
    } else if (key == "custom") {
      cfg.custom = parse_custom(value);
    } else if (key == "alpha") {
      cfg.alpha = get_number(value, raw_key);
    } else if (key == "epsilon") {
      cfg.epsilon = get_number(value, raw_key);
    } else if (key == "domain") {
      const std::vector<double> d = get_number_list(value, raw_key);
      if (d.size() != 2) fail(raw_key, "expected [a, b]");
      cfg.domain = std::make_pair(d[0], d[1]);
    } else if (key == "elements") {
      cfg.elements = get_int(value, raw_key);
    } else if (key == "order") {
      cfg.order = get_int(value, raw_key);
    } else if (key == "flux") {
      try {
        cfg.flux.convective = parse_convective_flux(get_string(value, raw_key));
      } catch (const InvalidArgument& e) {
        fail(raw_key, e.what());
      }
      cfg.flux_given = true;
    } else if (key == "lambda") {
      cfg.flux.lambda = get_number(value, raw_key);
    } else if (key == "beta") {
      cfg.flux.beta = get_number(value, raw_key);
    } else if (key == "orientation") {
      try {
        cfg.flux.orientation = parse_orientation(get_string(value, raw_key));
      } catch (const InvalidArgument& e) {
        fail(raw_key, e.what());
      }
    } else if (key == "cfl") {
      cfg.cfl = get_number(value, raw_key);
    } else if (key == "final_time") {
      cfg.final_time = get_number(value, raw_key);
    } else if (key == "snapshot_interval") {
      cfg.snapshot_interval = get_number(value, raw_key);
    } else if (key == "output_dir") {
      cfg.output_dir = get_string(value, raw_key);
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        fail(raw_key, "expected a non-negative integer");
      }
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "fast_apply") {
      if (!value.is_boolean()) fail(raw_key, "expected true or false");
      cfg.fast_apply = value.get<bool>();
    } else if (key == "dump_operator") {
      if (!value.is_boolean()) fail(raw_key, "expected true or false");
      cfg.dump_operator = value.get<bool>();
    } else {
      fail(raw_key, "unknown key");
    }
  }

  for (const char* required : {"problem", "alpha", "elements", "order", "final_time"}) {
    if (!seen.count(required)) fail(required, "missing required key");
  }
  const bool is_custom = cfg.problem == "custom";
  if (!is_custom) {
    try {
      parse_example_id(cfg.problem);
    } catch (const InvalidArgument&) {
      fail("problem", "expected example1, example2, example3 or custom");
    }
    if (cfg.custom) fail("custom", "only allowed with problem = custom");
    if (cfg.domain) fail("domain", "fixed for built-in problems");
  } else {
    if (!cfg.custom) fail("custom", "missing for problem = custom");
    if (!cfg.domain) fail("domain", "missing for problem = custom");
    if (!(cfg.domain->first < cfg.domain->second)) fail("domain", "need a < b");
  }
  const bool classical_ok = cfg.problem == "example3" || (is_custom && !cfg.custom->manufactured);
  if (!((cfg.alpha > 1.0 && cfg.alpha < 2.0) || (cfg.alpha == 2.0 && classical_ok))) {
    fail("alpha", "must lie in (1, 2)");
  }
  if (cfg.elements < 1) fail(spelled.count("K") ? "K" : "elements", "must be >= 1");
  if (cfg.order < 0 || cfg.order > 10) fail("order", "must lie in 0..10");
  if (!(cfg.final_time >= 0.0)) fail(spelled.count("T") ? "T" : "final_time", "must be >= 0");
  if (cfg.epsilon && !(*cfg.epsilon >= 0.0)) fail("epsilon", "must be >= 0");
  if (cfg.cfl && !(*cfg.cfl > 0.0 && *cfg.cfl < 1.0)) fail("cfl", "must lie in (0, 1)");
  if (!(cfg.flux.beta > 0.0)) fail("beta", "must be positive");
  if (cfg.flux.lambda && !(*cfg.flux.lambda >= 0.0)) fail("lambda", "must be >= 0");
  if (cfg.snapshot_interval && !(*cfg.snapshot_interval > 0.0)) {
    fail("snapshot_interval", "must be positive");
  }
  if (cfg.output_dir.empty()) fail("output_dir", "must not be empty");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

BuiltinProblem build_problem(const RunConfig& cfg) {
  if (cfg.problem != "custom") {
    return make_example(parse_example_id(cfg.problem), cfg.alpha, cfg.epsilon);
  }
  const CustomProblemConfig& c = *cfg.custom;
  PhysicalFlux flux = c.flux == "burgers"  ? PhysicalFlux::burgers()
                      : c.flux == "linear" ? PhysicalFlux::linear(c.speed)
                                           : PhysicalFlux::zero();
  try {
    return make_piecewise_problem("custom", PiecewisePoly(c.breakpoints, c.pieces), flux,
                                  cfg.epsilon.value_or(1.0), cfg.alpha, cfg.domain->first,
                                  cfg.domain->second, c.manufactured);
  } catch (const InvalidArgument& e) {
    throw ConfigError("custom", std::string("custom: ") + e.what());
  }
}

double total_variation(const DgField& u) {
  const auto samples = snapshot_samples(u);
  double tv = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) tv += std::abs(samples[i].second - samples[i - 1].second);
  return tv;
}

namespace {

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu.csv", index);
  return buf;
}

}  // namespace

SolveSummary run_solve(const RunConfig& cfg, const std::optional<std::string>& out_dir,
                       std::ostream& log) {
  namespace fs = std::filesystem;
  const fs::path dir = out_dir ? fs::path(*out_dir) : fs::path(cfg.output_dir);
  fs::create_directories(dir);

  const BuiltinProblem prob = build_problem(cfg);
  FluxSpec flux = cfg.flux;
  const MeshPtr mesh = make_mesh(prob.spec.a, prob.spec.b, cfg.elements);
  SemiDiscrete scheme(prob.spec, flux, mesh, cfg.order);
  if (cfg.fast_apply) scheme.set_fast_apply(true);

  StepControl ctrl;
  ctrl.cfl = cfg.effective_cfl();
  ctrl.h_min = mesh->min_width();
  ctrl.alpha = prob.spec.alpha;
  ctrl.final_time = cfg.final_time;
  ctrl.snapshot_interval = cfg.effective_snapshot_interval();

  log << "problem " << prob.id << ", alpha " << format_real(prob.spec.alpha) << ", K "
      << cfg.elements << ", k " << cfg.order << ", flux " << to_string(flux.convective)
      << ", T " << format_real(cfg.final_time) << '\n';
  const IntegrationResult result = integrate(scheme, ctrl);

  SolveSummary summary;
  summary.completed = result.completed;
  summary.failure = result.failure;
  summary.failure_time = result.failure_time;
  summary.steps = static_cast<long>(result.log.size()) - 1;
  summary.dt = result.log.size() > 1 ? result.log[1].dt : 0.0;
  summary.final_time = result.log.back().t;
  summary.initial_l2 = result.log.front().l2_norm;
  summary.final_l2 = result.log.back().l2_norm;
  summary.total_variation = total_variation(result.final_state);
  summary.upwind_fallbacks = scheme.upwind_fallbacks();
  if (result.completed && prob.has_exact) {
    const double T = cfg.final_time;
    summary.l2_error =
        l2_error(result.final_state, [&prob, T](double x) { return prob.spec.exact(x, T); });
  }

  std::ofstream index(dir / "snapshots.csv");
  index << "index,t,file\n";
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    const std::string name = snapshot_name(i);
    write_snapshot_csv(result.snapshots[i].u, (dir / name).string());
    index << i << ',' << format_real(result.snapshots[i].t) << ',' << name << '\n';
    summary.files.push_back(name);
  }
  write_step_log_csv(result.log, (dir / "steps.csv").string());
  summary.files.push_back("snapshots.csv");
  summary.files.push_back("steps.csv");
  if (cfg.dump_operator && scheme.riesz()) {
    write_matrix_csv(scheme.riesz()->combined(), (dir / "operator.csv").string());
    summary.files.push_back("operator.csv");
  }

  json s;
  s["problem"] = prob.id;
  s["alpha"] = prob.spec.alpha;
  s["epsilon"] = prob.spec.epsilon;
  s["elements"] = cfg.elements;
  s["order"] = cfg.order;
  s["flux"] = to_string(flux.convective);
  s["orientation"] = to_string(flux.orientation);
  s["beta"] = flux.beta;
  s["seed"] = cfg.seed;
  s["cfl"] = ctrl.cfl;
  s["dt"] = summary.dt;
  s["steps"] = summary.steps;
  s["final_time"] = summary.final_time;
  s["completed"] = summary.completed;
  if (!summary.completed) {
    s["failure"] = summary.failure;
    s["failure_time"] = summary.failure_time;
  }
  s["initial_l2_norm"] = summary.initial_l2;
  s["final_l2_norm"] = summary.final_l2;
  s["total_variation"] = summary.total_variation;
  s["upwind_fallbacks"] = summary.upwind_fallbacks;
  if (summary.l2_error) s["l2_error"] = *summary.l2_error;
  std::ofstream(dir / "summary.json") << s.dump(2) << '\n';
  summary.files.push_back("summary.json");

  if (summary.completed) {
    log << "completed " << summary.steps << " steps, dt " << format_real(summary.dt);
    if (summary.l2_error) log << ", L2 error " << format_real(*summary.l2_error);
    log << '\n';
  } else {
    log << "instability at t = " << format_real(summary.failure_time) << ": " << summary.failure
        << '\n';
  }
  if (summary.upwind_fallbacks > 0) {
    log << "upwind flux fell back to Godunov at " << summary.upwind_fallbacks
        << " interface evaluations\n";
  }
  return summary;
}

double observed_order(double e_prev, double e_cur, int k_prev, int k_cur) {
  return std::log(e_prev / e_cur) / std::log(static_cast<double>(k_cur) / k_prev);
}

std::string ConvergenceReport::csv() const {
  std::ostringstream out;
  out << "problem,flux,alpha,order,elements,l2_error,observed_order,status\n";
  for (const ConvergenceRow& r : rows) {
    out << problem << ',' << flux << ',' << format_real(r.alpha) << ',' << r.order << ','
        << r.elements << ',' << (r.failed ? "" : format_real(r.l2_error)) << ','
        << (r.observed_order ? format_real(*r.observed_order) : "") << ','
        << (r.failed ? "failed" : "ok") << '\n';
  }
  return out.str();
}

const ConvergenceRow* ConvergenceReport::find(double alpha, int order, int elements) const {
  for (const ConvergenceRow& r : rows) {
    if (r.alpha == alpha && r.order == order && r.elements == elements) return &r;
  }
  return nullptr;
}

std::string ConvergenceReport::aligned_text() const {
  std::vector<double> alphas;
  std::vector<int> orders, elements;
  for (const ConvergenceRow& r : rows) {
    if (std::find(alphas.begin(), alphas.end(), r.alpha) == alphas.end()) alphas.push_back(r.alpha);
    if (std::find(orders.begin(), orders.end(), r.order) == orders.end()) orders.push_back(r.order);
    if (std::find(elements.begin(), elements.end(), r.elements) == elements.end()) {
      elements.push_back(r.elements);
    }
  }
  std::ostringstream out;
  char buf[64];
  out << problem << " (flux " << flux << ")\n";
  for (double alpha : alphas) {
    out << "\nalpha = " << format_real(alpha) << '\n';
    out << "  k |";
    for (std::size_t i = 0; i < elements.size(); ++i) {
      std::snprintf(buf, sizeof buf, " %12s", ("K=" + std::to_string(elements[i])).c_str());
      out << buf;
      if (i > 0) out << "  order";
    }
    out << '\n';
    for (int k : orders) {
      std::snprintf(buf, sizeof buf, "%3d |", k);
      out << buf;
      for (std::size_t i = 0; i < elements.size(); ++i) {
        const ConvergenceRow* r = find(alpha, k, elements[i]);
        if (!r || r->failed) {
          std::snprintf(buf, sizeof buf, " %12s", "failed");
        } else {
          std::snprintf(buf, sizeof buf, " %12.3e", r->l2_error);
        }
        out << buf;
        if (i > 0) {
          if (r && r->observed_order) {
            std::snprintf(buf, sizeof buf, " %6.2f", *r->observed_order);
          } else {
            std::snprintf(buf, sizeof buf, " %6s", "-");
          }
          out << buf;
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

ConvergenceRow run_convergence_cell(ExampleId problem, double alpha, int order, int elements,
                                    const FluxSpec& flux, double final_time,
                                    std::optional<double> cfl) {
  ConvergenceRow row;
  row.alpha = alpha;
  row.order = order;
  row.elements = elements;
  const auto start = std::chrono::steady_clock::now();
  try {
    const BuiltinProblem prob = make_example(problem, alpha);
    if (!prob.has_exact) throw InvalidArgument(prob.id + " has no exact solution");
    const MeshPtr mesh = make_mesh(prob.spec.a, prob.spec.b, elements);
    const SemiDiscrete scheme(prob.spec, flux, mesh, order);
    StepControl ctrl;
    ctrl.cfl = cfl ? *cfl : default_cfl(order);
    ctrl.h_min = mesh->min_width();
    ctrl.alpha = alpha;
    ctrl.final_time = final_time;
    const IntegrationResult result = integrate(scheme, ctrl);
    if (!result.completed) {
      row.failed = true;
      row.note = result.failure;
    } else {
      row.l2_error = l2_error(result.final_state, [&prob, final_time](double x) {
        return prob.spec.exact(x, final_time);
      });
      if (!(row.l2_error > 0.0) || !std::isfinite(row.l2_error)) {
        row.failed = true;
        row.note = "non-positive or non-finite error";
      }
    }
  } catch (const std::exception& e) {
    row.failed = true;
    row.note = e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

ConvergenceReport run_convergence(const ConvergenceOptions& opts, std::ostream* progress) {
  if (opts.alphas.empty() || opts.orders.empty() || opts.elements.empty()) {
    throw InvalidArgument("convergence: alpha, order and element lists must be nonempty");
  }
  FluxSpec flux;
  flux.convective = opts.flux ? *opts.flux
                              : (opts.problem == ExampleId::example2 ? ConvectiveFlux::upwind
                                                                     : ConvectiveFlux::godunov);
  const double T = opts.final_time ? *opts.final_time
                                   : make_example(opts.problem, opts.alphas.front()).default_final_time;
  ConvergenceReport report;
  report.problem = to_string(opts.problem);
  report.flux = to_string(flux.convective);
  for (double alpha : opts.alphas) {
    for (int k : opts.orders) {
      // Copy, not pointer: rows reallocates as it grows.
      std::optional<ConvergenceRow> prev;
      for (int K : opts.elements) {
        ConvergenceRow row = run_convergence_cell(opts.problem, alpha, k, K, flux, T, opts.cfl);
        if (prev && !prev->failed && !row.failed) {
          row.observed_order = observed_order(prev->l2_error, row.l2_error, prev->elements, K);
        }
        if (progress) {
          *progress << "alpha " << format_real(alpha) << " k " << k << " K " << K << ": "
                    << (row.failed ? "failed (" + row.note + ")" : format_real(row.l2_error))
                    << '\n';
        }
        report.rows.push_back(row);
        prev = row;
      }
    }
  }
  return report;
}

void write_convergence_report(const ConvergenceReport& report, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream(p) << report.csv();
  fs::path text = p;
  text.replace_extension(".txt");
  if (text == p) text += ".txt";
  std::ofstream(text) << report.aligned_text();
}

}  // namespace fracldg
