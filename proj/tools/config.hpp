#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace regretdro::cli {

/// Parse or validation failure; path names the offending field, e.g.
/// "set.center[1]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct SetSpec {
  std::string type;  // "vpolytope", "box" or "norm_ball"
  std::vector<std::vector<double>> vertices;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> center;
  double radius = 0.0;
  std::string norm;

  std::size_t dimension() const;
  bool operator==(const SetSpec&) const = default;
};

struct Atom {
  std::vector<double> point;
  double weight = 0.0;
  bool operator==(const Atom&) const = default;
};

struct RadiusSweep {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  bool log = false;
  bool operator==(const RadiusSweep&) const = default;
};

struct Tolerances {
  std::optional<double> gap;
  std::optional<double> cvar_gap;
  std::optional<double> builder;
  std::optional<double> cross_solver;
  std::optional<std::size_t> max_refinements;
  std::optional<std::size_t> max_iter;
  std::optional<double> step;
  bool operator==(const Tolerances&) const = default;
};

struct ProblemConfig {
  SetSpec set;
  std::vector<Atom> nominal;
  std::string ground_norm;
  std::optional<double> radius;
  std::optional<RadiusSweep> radius_sweep;
  std::optional<double> alpha;
  std::optional<std::string> objective;  // "drro" (default) or "dro"
  std::optional<std::string> method;     // "auto" (default), "simplex", "subgradient"
  std::optional<std::uint64_t> seed;
  std::optional<Tolerances> tolerances;

  std::size_t dimension() const { return set.dimension(); }
  bool operator==(const ProblemConfig&) const = default;
};

ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);
std::string emit_config(const ProblemConfig& config);

/// Radii of a sweep in ascending order. Log sweeps interpolate base-10
/// exponents and hit both endpoints exactly.
std::vector<double> sweep_radii(const RadiusSweep& sweep);

}  // namespace regretdro::cli
