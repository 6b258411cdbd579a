#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "curveq/expr.hpp"

namespace curveq::app {
namespace {

using nlohmann::json;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
    throw ConfigError("sha256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": expected a finite number");
  return v;
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) throw ConfigError(where + ": expected true or false");
  return j.get<bool>();
}

CurveSpec parse_curve(const json& j) {
  require_object(j, "curve");
  CurveSpec spec;
  const bool has_builtin = j.contains("builtin");
  const bool has_expr = j.contains("ax") || j.contains("ay") || j.contains("az");
  if (has_builtin == has_expr) {
    throw ConfigError("curve: give exactly one of the expressions ax/ay/az or a builtin");
  }
  if (has_expr) {
    reject_unknown(j, "curve", {"ax", "ay", "az", "parameter", "t_min", "t_max", "closed"});
    for (const char* key : {"ax", "ay", "az", "t_min", "t_max"}) {
      if (!j.contains(key)) throw ConfigError(std::string("curve: missing '") + key + "'");
    }
    spec.kind = CurveSpec::Kind::expressions;
    spec.ax = get_string(j["ax"], "curve.ax");
    spec.ay = get_string(j["ay"], "curve.ay");
    spec.az = get_string(j["az"], "curve.az");
    if (j.contains("parameter")) spec.parameter = get_string(j["parameter"], "curve.parameter");
    spec.t_min = get_number(j["t_min"], "curve.t_min");
    spec.t_max = get_number(j["t_max"], "curve.t_max");
    if (!(spec.t_max > spec.t_min)) throw ConfigError("curve: t_max must exceed t_min");
    if (j.contains("closed")) spec.closed = get_bool(j["closed"], "curve.closed");
    return spec;
  }

  const std::string builtin = get_string(j["builtin"], "curve.builtin");
  if (builtin == "helix") {
    reject_unknown(j, "curve", {"builtin", "R", "C", "turns"});
    if (!j.contains("R") || !j.contains("C")) throw ConfigError("curve: helix needs R and C");
    spec.kind = CurveSpec::Kind::helix;
    spec.helix.radius = get_number(j["R"], "curve.R");
    spec.helix.apex = get_number(j["C"], "curve.C");
    if (j.contains("turns")) spec.turns = get_number(j["turns"], "curve.turns");
    if (!(spec.helix.radius > 0.0) || !(spec.helix.apex >= 0.0)) {
      throw ConfigError("curve: helix needs R > 0 and C >= 0");
    }
    if (!(spec.turns > 0.0)) throw ConfigError("curve.turns: must be positive");
  } else if (builtin == "circle" || builtin == "line") {
    reject_unknown(j, "curve", {"builtin", "size"});
    if (!j.contains("size")) throw ConfigError("curve: " + builtin + " needs size");
    spec.kind = builtin == "circle" ? CurveSpec::Kind::circle : CurveSpec::Kind::line;
    spec.size = get_number(j["size"], "curve.size");
    if (!(spec.size > 0.0)) throw ConfigError("curve.size: must be positive");
  } else {
    throw ConfigError("curve.builtin: unknown builtin '" + builtin + "' (helix, circle, line)");
  }
  return spec;
}

BoundaryCondition parse_bc(const std::string& name) {
  if (name == "periodic") return BoundaryCondition::periodic;
  if (name == "dirichlet") return BoundaryCondition::dirichlet;
  throw ConfigError("grid.bc: expected 'periodic' or 'dirichlet'");
}

GridSpec parse_grid(const json& j) {
  require_object(j, "grid");
  reject_unknown(j, "grid", {"n", "bc", "refinements"});
  GridSpec grid;
  if (j.contains("n")) grid.n = get_int(j["n"], "grid.n");
  if (j.contains("bc")) grid.bc = parse_bc(get_string(j["bc"], "grid.bc"));
  if (j.contains("refinements")) {
    if (!j["refinements"].is_array()) throw ConfigError("grid.refinements: expected an array");
    grid.refinements.clear();
    for (const auto& v : j["refinements"]) grid.refinements.push_back(get_int(v, "grid.refinements"));
  }
  return grid;
}

}  // namespace

Task parse_task(std::string_view name) {
  if (name == "geometry") return Task::geometry;
  if (name == "spectrum") return Task::spectrum;
  if (name == "verify") return Task::verify;
  if (name == "helix-check") return Task::helix_check;
  throw ConfigError("unknown task '" + std::string(name) + "' (geometry, spectrum, verify, helix-check)");
}

const char* to_string(Task task) {
  switch (task) {
    case Task::geometry: return "geometry";
    case Task::spectrum: return "spectrum";
    case Task::verify: return "verify";
    case Task::helix_check: return "helix-check";
  }
  return "?";
}

OutputFormat parse_format(std::string_view name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw ConfigError("unknown format '" + std::string(name) + "' (csv, json)");
}

RunConfig parse_config(std::string_view text, Task task) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(j, "config");
  reject_unknown(j, "config", {"task", "curve", "constants", "grid", "spectrum", "tube", "output", "test_hooks"});

  RunConfig cfg;
  cfg.task = task;
  cfg.digest = sha256_hex(j.dump());
  if (j.contains("task") && parse_task(get_string(j["task"], "task")) != task) {
    throw ConfigError("config task '" + j["task"].get<std::string>() + "' does not match requested task '" +
                      to_string(task) + "'");
  }
  if (!j.contains("curve")) throw ConfigError("config: missing 'curve'");
  cfg.curve = parse_curve(j["curve"]);

  if (j.contains("constants")) {
    const json& c = j["constants"];
    require_object(c, "constants");
    reject_unknown(c, "constants", {"hbar", "mass"});
    if (c.contains("hbar")) cfg.constants.hbar = get_number(c["hbar"], "constants.hbar");
    if (c.contains("mass")) cfg.constants.mass = get_number(c["mass"], "constants.mass");
    if (!(cfg.constants.hbar > 0.0) || !(cfg.constants.mass > 0.0)) {
      throw ConfigError("constants: hbar and mass must be positive");
    }
  }
  if (j.contains("grid")) cfg.grid = parse_grid(j["grid"]);
  if (j.contains("spectrum")) {
    const json& s = j["spectrum"];
    require_object(s, "spectrum");
    reject_unknown(s, "spectrum", {"k"});
    if (s.contains("k")) cfg.k = get_int(s["k"], "spectrum.k");
  }
  if (j.contains("tube")) {
    const json& t = j["tube"];
    require_object(t, "tube");
    reject_unknown(t, "tube", {"points", "seed"});
    if (t.contains("points")) cfg.tube_points = get_int(t["points"], "tube.points");
    if (t.contains("seed")) {
      if (!t["seed"].is_number_unsigned()) throw ConfigError("tube.seed: expected a non-negative integer");
      cfg.seed = t["seed"].get<std::uint64_t>();
    }
    if (cfg.tube_points < 1) throw ConfigError("tube.points: must be at least 1");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    require_object(o, "output");
    reject_unknown(o, "output", {"path", "format"});
    if (o.contains("path")) cfg.output_path = get_string(o["path"], "output.path");
    if (o.contains("format")) cfg.format = parse_format(get_string(o["format"], "output.format"));
  }
  if (j.contains("test_hooks")) {
    const json& h = j["test_hooks"];
    require_object(h, "test_hooks");
    reject_unknown(h, "test_hooks", {"corrupt_kappa"});
    if (h.contains("corrupt_kappa")) cfg.corrupt_kappa = get_number(h["corrupt_kappa"], "test_hooks.corrupt_kappa");
  }

  // Task-specific requirements.
  if (cfg.grid.n < 8) throw ConfigError("grid.n: must be at least 8");
  switch (task) {
    case Task::geometry:
      break;
    case Task::spectrum:
      if (cfg.k < 1 || cfg.k > cfg.grid.n) throw ConfigError("spectrum.k: must lie in [1, grid.n]");
      break;
    case Task::verify: {
      const auto& r = cfg.grid.refinements;
      if (r.size() < 2) throw ConfigError("grid.refinements: need at least two levels");
      if (*std::min_element(r.begin(), r.end()) < 8) throw ConfigError("grid.refinements: levels must be >= 8");
      if (!std::is_sorted(r.begin(), r.end()) || std::adjacent_find(r.begin(), r.end()) != r.end()) {
        throw ConfigError("grid.refinements: levels must be strictly increasing");
      }
      break;
    }
    case Task::helix_check:
      if (cfg.curve.kind != CurveSpec::Kind::helix) throw ConfigError("helix-check requires curve.builtin = helix");
      if (cfg.k < 1 || cfg.k > cfg.grid.n) throw ConfigError("spectrum.k: must lie in [1, grid.n]");
      break;
  }
  return cfg;
}

CurveDefinition make_curve(const CurveSpec& spec) {
  switch (spec.kind) {
    case CurveSpec::Kind::expressions: {
      CurveDefinition c;
      auto parse = [&](const std::string& text, const char* field) {
        try {
          return parse_expression(text, spec.parameter);
        } catch (const ParseError& e) {
          throw ConfigError(std::string("curve.") + field + ": " + e.what());
        }
      };
      c.ax = parse(spec.ax, "ax");
      c.ay = parse(spec.ay, "ay");
      c.az = parse(spec.az, "az");
      c.t_min = spec.t_min;
      c.t_max = spec.t_max;
      c.closed = spec.closed;
      return c;
    }
    case CurveSpec::Kind::helix:
      return helix_curve(spec.helix, spec.turns);
    case CurveSpec::Kind::circle:
      return helix_curve(HelixParams{spec.size, 0.0}, 1.0);
    case CurveSpec::Kind::line: {
      using namespace expr;
      CurveDefinition c;
      c.ax = ExprAst(variable(), "t");
      c.ay = ExprAst(constant(0.0), "t");
      c.az = ExprAst(constant(0.0), "t");
      c.t_min = 0.0;
      c.t_max = spec.size;
      return c;
    }
  }
  throw ConfigError("unreachable curve kind");
}

BoundaryCondition resolve_bc(const GridSpec& grid, const CurveDefinition& curve) {
  if (grid.bc) return *grid.bc;
  return curve.closed ? BoundaryCondition::periodic : BoundaryCondition::dirichlet;
}

}  // namespace curveq::app
