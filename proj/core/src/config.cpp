#include "varcurve/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "varcurve/error.hpp"

namespace varcurve {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string(where) + ": missing \"" + key + "\"");
  }
  return j.at(key);
}

Vec read_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + ": expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

std::vector<double> read_doubles(const json& j, const char* what) {
  const Vec v = read_vector(j, what);
  return {v.data(), v.data() + v.size()};
}

PriorField read_field(const json& j) {
  const FieldKind kind = field_kind_from_string(require(j, "kind", "field").get<std::string>());
  std::vector<double> params;
  if (j.contains("params")) params = read_doubles(j.at("params"), "field params");
  PriorField f = PriorField::from_params(kind, params);
  if (j.contains("modulation")) f = f.with_modulation(read_doubles(j.at("modulation"), "field modulation"));
  return f;
}

FunctionalSpec read_functional(const json& j) {
  const std::string kind = require(j, "kind", "functional").get<std::string>();
  if (kind == "tension") return FunctionalSpec::tension(require(j, "tau", "functional").get<double>());
  if (kind == "energy") return FunctionalSpec::energy(require(j, "k", "functional").get<int>());
  if (kind == "conditional") {
    const int k = require(j, "k", "functional").get<int>();
    PriorField f = j.contains("field") ? read_field(j.at("field")) : PriorField::zero();
    return FunctionalSpec::conditional(k, std::move(f));
  }
  throw ConfigError("unknown functional kind '" + kind + "'");
}

BoundaryData read_boundary(const json& j, const char* where) {
  BoundaryData b;
  b.position = read_vector(require(j, "position", where), where);
  if (j.contains("velocity")) b.velocity = read_vector(j.at("velocity"), where);
  return b;
}

ConstraintSet read_constraints(const json& j) {
  const std::string kind = require(j, "kind", "constraints").get<std::string>();
  if (kind == "clamped") {
    return ConstraintSet::clamped(require(j, "k", "constraints").get<int>(),
                                  read_boundary(require(j, "left", "constraints"), "left boundary"),
                                  read_boundary(require(j, "right", "constraints"), "right boundary"));
  }
  if (kind == "interpolation") {
    std::vector<Knot> knots;
    const json& list = require(j, "knots", "constraints");
    if (!list.is_array()) throw ConfigError("constraints: knots must be an array");
    for (const auto& k : list) {
      knots.push_back({require(k, "t", "knot").get<double>(), read_vector(require(k, "position", "knot"), "knot")});
    }
    return ConstraintSet::interpolation(std::move(knots));
  }
  if (kind == "periodic") return ConstraintSet::periodic();
  throw ConfigError("unknown constraint kind '" + kind + "'");
}

SolveOptions read_solver(const json& j) {
  SolveOptions o;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  get("max_iters", o.max_iters);
  get("grad_tol", o.grad_tol);
  get("armijo_c1", o.armijo_c1);
  get("backtrack", o.backtrack);
  get("initial_step", o.initial_step);
  get("step_floor", o.step_floor);
  get("record_every", o.record_every);
  get("step_cap", o.step_cap);
  o.validate();
  return o;
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    RunConfig cfg;
    cfg.manifold_id = require(j, "manifold", "config").get<std::string>();
    cfg.manifold = make_manifold(cfg.manifold_id);
    if (j.contains("domain")) cfg.domain = domain_from_string(j.at("domain").get<std::string>());
    cfg.n = require(j, "N", "config").get<int>();
    if (cfg.n < 4) throw ConfigError("N must be >= 4");
    cfg.functional = read_functional(require(j, "functional", "config"));
    cfg.constraints = read_constraints(require(j, "constraints", "config"));
    if (!cfg.constraints.supports(cfg.domain)) {
      throw ConfigError(std::string("constraint kind does not support the ") + to_string(cfg.domain) + " domain");
    }
    cfg.constraints.validate(*cfg.manifold);
    if (const PriorField* f = cfg.functional.acceleration_field()) f->validate(*cfg.manifold);
    if (const PriorField* f = cfg.functional.velocity_field()) f->validate(*cfg.manifold);
    // Resolves every knot time against the grid.
    (void)free_mask(cfg.constraints, cfg.n, cfg.domain);
    if (j.contains("winding_hint")) {
      for (const auto& w : j.at("winding_hint")) cfg.hint.winding.push_back(w.get<int>());
    }
    if (j.contains("seed_direction")) cfg.hint.direction = read_vector(j.at("seed_direction"), "seed_direction");
    if (j.contains("solver")) cfg.solver = read_solver(j.at("solver"));
    if (j.contains("evaluate_only")) cfg.evaluate_only = j.at("evaluate_only").get<bool>();
    if (j.contains("output")) {
      const json& out = j.at("output");
      if (out.contains("report")) cfg.report_name = out.at("report").get<std::string>();
      if (out.contains("curve")) cfg.curve_name = out.at("curve").get<std::string>();
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

RunConfig with_parameter(const RunConfig& cfg, std::string_view name, double value) {
  RunConfig out = cfg;
  if (name == "tau") {
    if (!std::holds_alternative<Tension>(cfg.functional.kind())) {
      throw ConfigError("parameter tau needs a tension functional");
    }
    out.functional = FunctionalSpec::tension(value);
  } else if (name == "winding") {
    if (value != std::round(value)) throw ConfigError("winding values must be integers");
    if (out.hint.winding.empty()) {
      const int count = cfg.manifold->kind() == ManifoldKind::torus ? cfg.manifold->ambient_dim() : 1;
      out.hint.winding.assign(static_cast<std::size_t>(count), 0);
    }
    out.hint.winding.front() = static_cast<int>(value);
  } else {
    throw ConfigError("unknown sweep parameter '" + std::string(name) + "' (expected tau or winding)");
  }
  return out;
}

DiscreteCurve seed_curve(const RunConfig& cfg) {
  return seed(cfg.constraints, cfg.manifold, cfg.n, cfg.hint, cfg.domain);
}

SolveReport run(const RunConfig& cfg) {
  SolveOptions opts = cfg.solver;
  if (cfg.evaluate_only) opts.max_iters = 0;
  return minimize(cfg.functional, cfg.constraints, seed_curve(cfg), opts);
}

std::string report_json(const RunConfig& cfg, const SolveReport& report, const std::string& curve_file) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(report.verdict);
  j["iterations"] = report.iterations;
  j["objective"] = report.objective;
  j["residual"] = report.residual;
  j["manifold"] = cfg.manifold_id;
  j["domain"] = to_string(cfg.domain);
  j["N"] = cfg.n;
  j["functional"] = cfg.functional.describe();
  j["length"] = length(report.minimizer);
  if (!report.message.empty()) j["message"] = report.message;
  auto history = nlohmann::ordered_json::array();
  for (const auto& r : report.history) {
    nlohmann::ordered_json h;
    h["iteration"] = r.iteration;
    h["objective"] = r.objective;
    h["grad_norm"] = r.grad_norm;
    h["length"] = r.length;
    h["sup_velocity"] = r.sup_velocity;
    h["step"] = r.step;
    if (!r.winding.empty()) h["winding"] = r.winding;
    history.push_back(std::move(h));
  }
  j["history"] = std::move(history);
  j["minimizer"] = curve_file;
  return j.dump(2) + "\n";
}

}  // namespace varcurve
