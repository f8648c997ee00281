#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "geoperc/errors.hpp"

namespace geoperc::cli {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

// Rejects keys outside `allowed`, so typos do not silently fall back to defaults.
void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(std::string(where) + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) fail(std::string(where) + ": unknown key '" + key + "'");
}

template <class T>
T required(const json& j, const char* where, const char* key) {
  if (!j.contains(key)) fail(std::string(where) + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(std::string(where) + ": bad type for '" + key + "'");
  }
}

template <class T>
T optional(const json& j, const char* where, const char* key, T fallback) {
  return j.contains(key) ? required<T>(j, where, key) : fallback;
}

double cap_of(const json& j, const char* where) {
  return j.contains("cap") ? required<double>(j, where, "cap") : kInf;
}

template <class F>
auto translate(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParameterError& e) {
    fail(e.what());
  }
}

void check_grid(const std::vector<double>& grid, const char* name, bool (*ok)(double),
                const char* rule) {
  for (double v : grid)
    if (!std::isfinite(v) || !ok(v)) fail(std::string(name) + " grid: every entry must be " + rule);
}

void require_grid(const std::vector<double>& grid, const std::string& command, const char* name) {
  if (grid.empty()) fail(command + ": empty " + name + " grid");
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names{"estimate",     "scan-lambda", "lambda-c",
                                              "compare",      "voronoi-scan",
                                              "check-contraction"};
  return names;
}

const std::vector<std::string>& known_quantities() {
  static const std::vector<std::string> names{"point-coverage", "segment-coverage", "crossing",
                                              "pi-lambda",      "rho",              "field-mixing"};
  return names;
}

json to_json(const RadialDistribution& law) {
  using RD = RadialDistribution;
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RD::PointMass>) {
          return {{"law", "point_mass"}, {"value", d.value}};
        } else if constexpr (std::is_same_v<T, RD::TwoPoint>) {
          return {{"law", "two_point"},
                  {"high_probability", d.high_probability},
                  {"low", d.low},
                  {"high", d.high}};
        } else if constexpr (std::is_same_v<T, RD::Pareto>) {
          json j{{"law", "pareto"}, {"shape", d.shape}, {"scale", d.scale}};
          if (d.cap < kInf) j["cap"] = d.cap;
          return j;
        } else {
          return {{"law", "cylinder_marginal"},
                  {"coverage_rate", d.coverage_rate},
                  {"values", to_json(*d.values)}};
        }
      },
      law.family());
}

RadialDistribution radial_from_json(const json& j) {
  const char* w = "radius law";
  const auto law = required<std::string>(j, w, "law");
  return translate([&] {
    if (law == "point_mass") {
      check_keys(j, w, {"law", "value"});
      return RadialDistribution::point_mass(required<double>(j, w, "value"));
    }
    if (law == "two_point") {
      check_keys(j, w, {"law", "high_probability", "low", "high"});
      return RadialDistribution::two_point(required<double>(j, w, "high_probability"),
                                           required<double>(j, w, "low"),
                                           required<double>(j, w, "high"));
    }
    if (law == "pareto") {
      check_keys(j, w, {"law", "shape", "scale", "cap"});
      return RadialDistribution::pareto(required<double>(j, w, "shape"),
                                        required<double>(j, w, "scale"))
          .capped(cap_of(j, w));
    }
    if (law == "cylinder_marginal") {
      check_keys(j, w, {"law", "coverage_rate", "values"});
      return RadialDistribution::cylinder_marginal(required<double>(j, w, "coverage_rate"),
                                                   radial_from_json(j.at("values")));
    }
    fail("unknown radius law '" + law + "'");
  });
}

json to_json(const FieldSpec& field) {
  json j = std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantFieldParams>) {
          return {{"family", "constant"}, {"value", f.value}};
        } else if constexpr (std::is_same_v<T, CylinderFieldParams>) {
          return {{"family", "cylinder"},
                  {"line_intensity", f.line_intensity},
                  {"base_radius", f.base_radius},
                  {"values", to_json(f.values)}};
        } else {
          return {{"family", "voronoi"},
                  {"seed_intensity", f.seed_intensity},
                  {"high_probability", f.high_probability},
                  {"low_value", f.low_value},
                  {"high_value", f.high_value}};
        }
      },
      field.family());
  if (field.is_truncated()) j["cap"] = field.cap();
  return j;
}

FieldSpec field_from_json(const json& j) {
  const char* w = "field";
  const auto family = required<std::string>(j, w, "family");
  return translate([&] {
    FieldSpec f = FieldSpec::constant(0.0);
    if (family == "constant") {
      check_keys(j, w, {"family", "value", "cap"});
      f = FieldSpec::constant(required<double>(j, w, "value"));
    } else if (family == "cylinder") {
      check_keys(j, w, {"family", "line_intensity", "base_radius", "values", "cap"});
      if (!j.contains("values")) fail("field: missing 'values'");
      f = FieldSpec::cylinder({required<double>(j, w, "line_intensity"),
                               required<double>(j, w, "base_radius"),
                               radial_from_json(j.at("values"))});
    } else if (family == "voronoi") {
      check_keys(j, w,
                 {"family", "seed_intensity", "high_probability", "low_value", "high_value", "cap"});
      f = FieldSpec::voronoi({required<double>(j, w, "seed_intensity"),
                              required<double>(j, w, "high_probability"),
                              required<double>(j, w, "low_value"),
                              required<double>(j, w, "high_value")});
    } else {
      fail("unknown field family '" + family + "'");
    }
    return f.truncated(cap_of(j, w));
  });
}

json to_json(const ModelSpec& model) {
  if (const auto* f = std::get_if<FieldSpec>(&model.radii))
    return {{"marking", "geostatistical"}, {"field", to_json(*f)}};
  return {{"marking", "iid"}, {"radii", to_json(std::get<RadialDistribution>(model.radii))}};
}

ModelSpec model_from_json(const json& j) {
  const char* w = "model";
  check_keys(j, w, {"marking", "field", "radii"});
  const auto marking = required<std::string>(j, w, "marking");
  if (marking == "geostatistical") {
    if (!j.contains("field") || j.contains("radii"))
      fail("model: a geostatistical model takes 'field' and no 'radii'");
    return ModelSpec::geostatistical(field_from_json(j.at("field")));
  }
  if (marking == "iid") {
    if (j.contains("field") == j.contains("radii"))
      fail("model: an iid model takes exactly one of 'radii' or 'field' (matched marginal)");
    return j.contains("radii") ? ModelSpec::iid(radial_from_json(j.at("radii")))
                               : translate([&] {
                                   return ModelSpec::iid_matched(field_from_json(j.at("field")));
                                 });
  }
  fail("model: marking must be 'geostatistical' or 'iid'");
}

json to_json(const ExperimentConfig& c) {
  json j{{"command", c.command},
         {"experiment", c.experiment},
         {"model", to_json(c.model)},
         {"lambda", c.lambda},
         {"n", c.n},
         {"s", c.s},
         {"mu", c.mu},
         {"p", c.p},
         {"replications", c.replications},
         {"master_seed", c.master_seed},
         {"eps_pad", c.model.eps_pad},
         {"eps_leak", c.model.eps_leak},
         {"eps0", c.eps0},
         {"output", c.output},
         {"format", c.format}};
  if (!c.quantity.empty()) j["quantity"] = c.quantity;
  if (!c.note.empty()) j["note"] = c.note;
  if (c.command == "voronoi-scan") {
    j["a"] = c.a;
    j["b"] = c.b;
  }
  if (c.command == "lambda-c" || c.command == "voronoi-scan") {
    j["tolerance"] = c.tolerance;
  }
  if (c.command == "lambda-c") {
    if (!c.bracket.empty()) j["bracket"] = c.bracket;
    j["high_guess"] = c.high_guess;
    j["stability_check"] = c.stability_check;
  }
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  const char* w = "config";
  check_keys(j, w,
             {"command", "experiment", "quantity", "note", "model", "lambda", "n", "s", "mu", "p",
              "a", "b", "bracket", "high_guess", "tolerance", "stability_check", "replications",
              "master_seed", "eps_pad", "eps_leak", "eps0", "output", "format"});
  ExperimentConfig c;
  c.command = required<std::string>(j, w, "command");
  c.experiment = optional<std::string>(j, w, "experiment", c.command);
  c.quantity = optional<std::string>(j, w, "quantity", "");
  c.note = optional<std::string>(j, w, "note", "");
  if (j.contains("model")) c.model = model_from_json(j.at("model"));
  c.lambda = optional<std::vector<double>>(j, w, "lambda", {});
  c.n = optional<std::vector<double>>(j, w, "n", {});
  c.s = optional<std::vector<double>>(j, w, "s", {});
  c.mu = optional<std::vector<double>>(j, w, "mu", {});
  c.p = optional<std::vector<double>>(j, w, "p", {});
  c.a = optional<double>(j, w, "a", c.a);
  c.b = optional<double>(j, w, "b", c.b);
  c.bracket = optional<std::vector<double>>(j, w, "bracket", {});
  c.high_guess = optional<double>(j, w, "high_guess", c.high_guess);
  c.tolerance = optional<double>(j, w, "tolerance", c.tolerance);
  c.stability_check = optional<bool>(j, w, "stability_check", c.stability_check);
  const auto reps = optional<std::int64_t>(j, w, "replications", 2000);
  if (reps < 1) fail("replications must be >= 1");
  c.replications = static_cast<std::size_t>(reps);
  c.master_seed = optional<std::uint64_t>(j, w, "master_seed", c.master_seed);
  c.model.eps_pad = optional<double>(j, w, "eps_pad", c.model.eps_pad);
  c.model.eps_leak = optional<double>(j, w, "eps_leak", c.model.eps_leak);
  c.eps0 = optional<double>(j, w, "eps0", c.eps0);
  c.output = optional<std::string>(j, w, "output", "");
  c.format = optional<std::string>(j, w, "format", c.format);
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void validate(const ExperimentConfig& c) {
  const auto& cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end())
    fail("unknown command '" + c.command + "'");
  if (c.format != "csv" && c.format != "json") fail("format must be csv or json");
  if (c.replications < 1) fail("replications must be >= 1");
  if (!(c.eps0 > 0.0 && c.eps0 <= 0.2)) fail("eps0 must lie in (0, 1/5]");
  if (!(c.model.eps_pad > 0.0 && c.model.eps_pad < 1.0)) fail("eps_pad must lie in (0, 1)");
  if (!(c.model.eps_leak > 0.0 && c.model.eps_leak < 1.0)) fail("eps_leak must lie in (0, 1)");

  check_grid(c.lambda, "lambda", [](double v) { return v >= 0.0; }, ">= 0");
  check_grid(c.n, "n", [](double v) { return v > 0.0; }, "> 0");
  check_grid(c.s, "s", [](double v) { return v >= 0.0; }, ">= 0");
  check_grid(c.mu, "mu", [](double v) { return v > 0.0; }, "> 0");
  check_grid(c.p, "p", [](double v) { return v >= 0.0 && v <= 1.0; }, "in [0, 1]");

  const std::string& cmd = c.command;
  const bool geostat = c.model.is_geostatistical();
  if (cmd == "estimate") {
    const auto& qs = known_quantities();
    if (std::find(qs.begin(), qs.end(), c.quantity) == qs.end())
      fail("estimate: unknown quantity '" + c.quantity + "'");
    if (c.quantity != "field-mixing") require_grid(c.lambda, cmd, "lambda");
    if (c.quantity == "segment-coverage") require_grid(c.s, cmd, "s");
    if (c.quantity == "crossing" || c.quantity == "pi-lambda" || c.quantity == "rho" ||
        c.quantity == "field-mixing")
      require_grid(c.n, cmd, "n");
    if (c.quantity == "field-mixing" && !geostat) fail("field-mixing needs a geostatistical model");
  } else if (cmd == "scan-lambda") {
    require_grid(c.lambda, cmd, "lambda");
    require_grid(c.n, cmd, "n");
    if (!std::is_sorted(c.lambda.begin(), c.lambda.end()))
      fail("scan-lambda: lambda grid must be ascending");
  } else if (cmd == "lambda-c") {
    require_grid(c.n, cmd, "n");
    if (!(c.tolerance > 0.0)) fail("lambda-c: tolerance must be > 0");
    if (!c.bracket.empty() &&
        !(c.bracket.size() == 2 && c.bracket[0] >= 0.0 && c.bracket[0] < c.bracket[1] &&
          std::isfinite(c.bracket[1])))
      fail("lambda-c: bracket must be [low, high] with 0 <= low < high");
    if (c.bracket.empty() && !(c.high_guess > 0.0 && std::isfinite(c.high_guess)))
      fail("lambda-c: high_guess must be > 0");
  } else if (cmd == "compare") {
    require_grid(c.lambda, cmd, "lambda");
    if (!geostat) fail("compare: the model must be geostatistical (its i.i.d. twin is derived)");
  } else if (cmd == "voronoi-scan") {
    require_grid(c.mu, cmd, "mu");
    require_grid(c.p, cmd, "p");
    require_grid(c.n, cmd, "n");
    if (!(c.a > 0.0 && c.a < c.b && std::isfinite(c.b)))
      fail("voronoi-scan: need 0 < a < b < inf");
    if (!(c.tolerance > 0.0)) fail("voronoi-scan: tolerance must be > 0");
    for (double n : c.n)
      if (!(c.b < c.eps0 / 4.0 * n)) fail("voronoi-scan: need b < (eps0/4) n for every n");
  } else if (cmd == "check-contraction") {
    require_grid(c.lambda, cmd, "lambda");
    require_grid(c.n, cmd, "n");
    if (!(c.model.radius_bound() < kInf))
      fail("check-contraction: needs a bounded radius law or field");
  }
}

}  // namespace geoperc::cli
