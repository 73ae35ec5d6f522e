#include "config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace regretdro::cli {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string at(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* name : allowed) known = known || item.key() == name;
    if (!known) throw ConfigError(at(path, item.key()), "unknown field");
  }
}

const json& field(const json& j, const std::string& path, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(at(path, key), "missing required field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

std::uint64_t unsigned_integer(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string string_of(const json& j, const std::string& path, std::initializer_list<const char*> choices) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  const std::string s = j.get<std::string>();
  std::string listing;
  for (const char* c : choices) {
    if (s == c) return s;
    listing += listing.empty() ? c : std::string(", ") + c;
  }
  throw ConfigError(path, "expected one of " + listing + ", got \"" + s + "\"");
}

std::vector<double> vector_of(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], index(path, i)));
  return v;
}

SetSpec parse_set(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  SetSpec s;
  s.type = string_of(field(j, path, "type"), at(path, "type"), {"vpolytope", "box", "norm_ball"});
  if (s.type == "vpolytope") {
    require_object(j, path, {"type", "vertices"});
    const std::string vpath = at(path, "vertices");
    const json& v = field(j, path, "vertices");
    if (!v.is_array() || v.empty()) throw ConfigError(vpath, "expected a non-empty array of points");
    for (std::size_t i = 0; i < v.size(); ++i) {
      s.vertices.push_back(vector_of(v[i], index(vpath, i)));
      if (s.vertices.back().size() != s.vertices.front().size()) {
        throw ConfigError(index(vpath, i), "vertex dimension differs from the first vertex");
      }
    }
  } else if (s.type == "box") {
    require_object(j, path, {"type", "lower", "upper"});
    s.lower = vector_of(field(j, path, "lower"), at(path, "lower"));
    s.upper = vector_of(field(j, path, "upper"), at(path, "upper"));
    if (s.lower.size() != s.upper.size()) {
      throw ConfigError(at(path, "upper"), "length differs from lower");
    }
    for (std::size_t i = 0; i < s.lower.size(); ++i) {
      if (s.lower[i] > s.upper[i]) throw ConfigError(index(at(path, "upper"), i), "below the lower bound");
    }
  } else {
    require_object(j, path, {"type", "center", "radius", "norm"});
    s.center = vector_of(field(j, path, "center"), at(path, "center"));
    s.radius = number(field(j, path, "radius"), at(path, "radius"));
    if (s.radius < 0.0) throw ConfigError(at(path, "radius"), "must be >= 0");
    s.norm = string_of(field(j, path, "norm"), at(path, "norm"), {"l1", "l2", "linf"});
  }
  return s;
}

std::vector<Atom> parse_nominal(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of atoms");
  std::vector<Atom> atoms;
  double total = 0.0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string apath = index(path, i);
    require_object(j[i], apath, {"point", "weight"});
    Atom a;
    a.point = vector_of(field(j[i], apath, "point"), at(apath, "point"));
    if (a.point.size() != dim) {
      throw ConfigError(at(apath, "point"), "expected " + std::to_string(dim) + " coordinates");
    }
    a.weight = number(field(j[i], apath, "weight"), at(apath, "weight"));
    if (a.weight < 0.0) throw ConfigError(at(apath, "weight"), "must be >= 0");
    total += a.weight;
    atoms.push_back(std::move(a));
  }
  if (std::abs(total - 1.0) > 1e-6) throw ConfigError(path, "weights must sum to 1");
  return atoms;
}

RadiusSweep parse_sweep(const json& j, const std::string& path) {
  require_object(j, path, {"min", "max", "count", "log"});
  RadiusSweep s;
  s.min = number(field(j, path, "min"), at(path, "min"));
  s.max = number(field(j, path, "max"), at(path, "max"));
  s.count = unsigned_integer(field(j, path, "count"), at(path, "count"));
  const json& log = field(j, path, "log");
  if (!log.is_boolean()) throw ConfigError(at(path, "log"), "expected a boolean");
  s.log = log.get<bool>();
  if (s.min < 0.0) throw ConfigError(at(path, "min"), "must be >= 0");
  if (s.max < s.min) throw ConfigError(at(path, "max"), "must be >= min");
  if (s.count < 1) throw ConfigError(at(path, "count"), "must be >= 1");
  if (s.log && s.min <= 0.0) throw ConfigError(at(path, "min"), "log sweeps need min > 0");
  return s;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be > 0");
  return v;
}

Tolerances parse_tolerances(const json& j, const std::string& path) {
  require_object(j, path,
                 {"gap", "cvar_gap", "builder", "cross_solver", "max_refinements", "max_iter", "step"});
  Tolerances t;
  if (j.contains("gap")) t.gap = positive(j["gap"], at(path, "gap"));
  if (j.contains("cvar_gap")) t.cvar_gap = positive(j["cvar_gap"], at(path, "cvar_gap"));
  if (j.contains("builder")) t.builder = positive(j["builder"], at(path, "builder"));
  if (j.contains("cross_solver")) t.cross_solver = positive(j["cross_solver"], at(path, "cross_solver"));
  if (j.contains("max_refinements")) {
    t.max_refinements = unsigned_integer(j["max_refinements"], at(path, "max_refinements"));
  }
  if (j.contains("max_iter")) {
    t.max_iter = unsigned_integer(j["max_iter"], at(path, "max_iter"));
    if (*t.max_iter < 1) throw ConfigError(at(path, "max_iter"), "must be >= 1");
  }
  if (j.contains("step")) t.step = positive(j["step"], at(path, "step"));
  return t;
}

ordered emit_vector(const std::vector<double>& v) {
  ordered a = ordered::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

std::size_t SetSpec::dimension() const {
  if (type == "vpolytope") return vertices.empty() ? 0 : vertices.front().size();
  if (type == "box") return lower.size();
  return center.size();
}

ProblemConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  require_object(j, "", {"set", "nominal", "ground_norm", "radius", "radius_sweep", "alpha", "objective",
                         "method", "seed", "tolerances"});
  ProblemConfig c;
  c.set = parse_set(field(j, "", "set"), "set");
  c.nominal = parse_nominal(field(j, "", "nominal"), "nominal", c.set.dimension());
  c.ground_norm = string_of(field(j, "", "ground_norm"), "ground_norm", {"l1", "l2", "linf"});

  const bool has_radius = j.contains("radius");
  const bool has_sweep = j.contains("radius_sweep");
  if (has_radius == has_sweep) throw ConfigError("radius", "exactly one of radius or radius_sweep is required");
  if (has_radius) {
    c.radius = number(j["radius"], "radius");
    if (*c.radius < 0.0) throw ConfigError("radius", "must be >= 0");
  } else {
    c.radius_sweep = parse_sweep(j["radius_sweep"], "radius_sweep");
  }

  if (j.contains("alpha")) {
    c.alpha = number(j["alpha"], "alpha");
    if (*c.alpha < 0.0 || *c.alpha >= 1.0) throw ConfigError("alpha", "must lie in [0, 1)");
  }
  if (j.contains("objective")) {
    c.objective = string_of(j["objective"], "objective", {"drro", "dro"});
    if (c.alpha && *c.objective == "dro") {
      throw ConfigError("objective", "alpha selects the CVaR regret objective and cannot be combined with dro");
    }
  }
  if (j.contains("method")) c.method = string_of(j["method"], "method", {"auto", "simplex", "subgradient"});
  if (j.contains("seed")) c.seed = unsigned_integer(j["seed"], "seed");
  if (j.contains("tolerances")) c.tolerances = parse_tolerances(j["tolerances"], "tolerances");
  return c;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string emit_config(const ProblemConfig& c) {
  ordered j;
  ordered set;
  set["type"] = c.set.type;
  if (c.set.type == "vpolytope") {
    set["vertices"] = ordered::array();
    for (const auto& v : c.set.vertices) set["vertices"].push_back(emit_vector(v));
  } else if (c.set.type == "box") {
    set["lower"] = emit_vector(c.set.lower);
    set["upper"] = emit_vector(c.set.upper);
  } else {
    set["center"] = emit_vector(c.set.center);
    set["radius"] = c.set.radius;
    set["norm"] = c.set.norm;
  }
  j["set"] = set;
  j["nominal"] = ordered::array();
  for (const Atom& a : c.nominal) {
    ordered atom;
    atom["point"] = emit_vector(a.point);
    atom["weight"] = a.weight;
    j["nominal"].push_back(atom);
  }
  j["ground_norm"] = c.ground_norm;
  if (c.radius) j["radius"] = *c.radius;
  if (c.radius_sweep) {
    j["radius_sweep"] = {{"min", c.radius_sweep->min},
                         {"max", c.radius_sweep->max},
                         {"count", c.radius_sweep->count},
                         {"log", c.radius_sweep->log}};
  }
  if (c.alpha) j["alpha"] = *c.alpha;
  if (c.objective) j["objective"] = *c.objective;
  if (c.method) j["method"] = *c.method;
  if (c.seed) j["seed"] = *c.seed;
  if (c.tolerances) {
    const Tolerances& t = *c.tolerances;
    ordered tol = ordered::object();
    if (t.gap) tol["gap"] = *t.gap;
    if (t.cvar_gap) tol["cvar_gap"] = *t.cvar_gap;
    if (t.builder) tol["builder"] = *t.builder;
    if (t.cross_solver) tol["cross_solver"] = *t.cross_solver;
    if (t.max_refinements) tol["max_refinements"] = *t.max_refinements;
    if (t.max_iter) tol["max_iter"] = *t.max_iter;
    if (t.step) tol["step"] = *t.step;
    j["tolerances"] = tol;
  }
  return j.dump(2) + "\n";
}

std::vector<double> sweep_radii(const RadiusSweep& sweep) {
  std::vector<double> radii(sweep.count);
  if (sweep.count == 0) return radii;
  if (sweep.count == 1) {
    radii[0] = sweep.min;
    return radii;
  }
  const double last = static_cast<double>(sweep.count - 1);
  const double a = sweep.log ? std::log10(sweep.min) : sweep.min;
  const double b = sweep.log ? std::log10(sweep.max) : sweep.max;
  for (std::size_t i = 0; i < sweep.count; ++i) {
    const double t = a + (b - a) * static_cast<double>(i) / last;
    radii[i] = sweep.log ? std::pow(10.0, t) : t;
  }
  radii.front() = sweep.min;
  radii.back() = sweep.max;
  return radii;
}

}  // namespace regretdro::cli
