#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "regretdro/regretdro.h"

namespace regretdro::cli {

namespace {

constexpr double kPrimalSlack = 1e-7;
constexpr double kDefaultGapTol = 1e-2;
constexpr double kDefaultCvarGapTol = 2e-2;
constexpr double kDefaultBuilderTol = 1e-8;
constexpr double kDefaultCrossSolverTol = 1e-4;
constexpr std::size_t kDefaultRefinements = 4;

const char* const kSupportedMatrix =
    "supported combinations (set, dual of ground_norm -> method):\n"
    "  regret objectives (drro, alpha):\n"
    "    vpolytope          dual l1 | linf   -> simplex\n"
    "    box                dual linf        -> simplex, subgradient\n"
    "    norm_ball (l2)     dual l2 | linf   -> subgradient\n"
    "    any set            radius 0         -> as for the nominal problem\n"
    "  cost objective (dro):\n"
    "    vpolytope          dual l1 | linf   -> simplex\n"
    "    box                dual l1 | linf   -> simplex, subgradient\n"
    "    box                dual l2          -> subgradient\n"
    "    norm_ball (l2)     any dual         -> subgradient\n";

class LibraryError : public std::runtime_error {
 public:
  LibraryError(rdro_status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  rdro_status status() const noexcept { return status_; }

 private:
  rdro_status status_;
};

void check(rdro_status status) {
  if (status != RDRO_OK) throw LibraryError(status, rdro_last_error_message());
}

bool is_config_error(rdro_status status) {
  switch (status) {
    case RDRO_ERR_INVALID_ARGUMENT:
    case RDRO_ERR_DIMENSION_MISMATCH:
    case RDRO_ERR_UNSUPPORTED_COMBINATION:
    case RDRO_ERR_NOT_IN_FEASIBLE_SET:
    case RDRO_ERR_INVALID_ALPHA:
    case RDRO_ERR_DIMENSION_TOO_LARGE:
      return true;
    default:
      return false;
  }
}

int report_library_error(const LibraryError& e, std::ostream& err) {
  err << "error: " << rdro_status_name(e.status()) << ": " << e.what() << "\n";
  if (e.status() == RDRO_ERR_UNSUPPORTED_COMBINATION) err << kSupportedMatrix;
  return is_config_error(e.status()) ? kExitConfig : kExitSolver;
}

rdro_norm to_norm(const std::string& name) {
  if (name == "l1") return RDRO_NORM_L1;
  if (name == "l2") return RDRO_NORM_L2;
  return RDRO_NORM_LINF;
}

rdro_norm dual_of(rdro_norm k) {
  if (k == RDRO_NORM_L1) return RDRO_NORM_LINF;
  if (k == RDRO_NORM_LINF) return RDRO_NORM_L1;
  return RDRO_NORM_L2;
}

double norm_of(const std::vector<double>& x, rdro_norm k) {
  double s = 0.0;
  for (double v : x) {
    if (k == RDRO_NORM_L1) s += std::abs(v);
    if (k == RDRO_NORM_L2) s += v * v;
    if (k == RDRO_NORM_LINF) s = std::max(s, std::abs(v));
  }
  return k == RDRO_NORM_L2 ? std::sqrt(s) : s;
}

using SetPtr = std::unique_ptr<rdro_set, decltype(&rdro_set_destroy)>;
using DistPtr = std::unique_ptr<rdro_dist, decltype(&rdro_dist_destroy)>;
using ReportPtr = std::unique_ptr<rdro_report, decltype(&rdro_report_destroy)>;

struct Problem {
  SetPtr set{nullptr, rdro_set_destroy};
  DistPtr nominal{nullptr, rdro_dist_destroy};
  std::size_t n = 0;
  rdro_norm ground = RDRO_NORM_L1;
  rdro_objective objective = RDRO_OBJECTIVE_DRRO;
  double alpha = 0.0;
  rdro_solver_options solver{};
};

Problem build_problem(const ProblemConfig& c, const CommandOptions& options) {
  Problem p;
  p.n = c.dimension();
  rdro_set* set = nullptr;
  if (c.set.type == "vpolytope") {
    std::vector<double> flat;
    for (const auto& v : c.set.vertices) flat.insert(flat.end(), v.begin(), v.end());
    check(rdro_set_create_vpolytope(p.n, c.set.vertices.size(), flat.data(), &set));
  } else if (c.set.type == "box") {
    check(rdro_set_create_box(p.n, c.set.lower.data(), c.set.upper.data(), &set));
  } else {
    check(rdro_set_create_norm_ball(p.n, c.set.center.data(), c.set.radius, to_norm(c.set.norm), &set));
  }
  p.set.reset(set);

  std::vector<double> atoms;
  std::vector<double> weights;
  for (const Atom& a : c.nominal) {
    atoms.insert(atoms.end(), a.point.begin(), a.point.end());
    weights.push_back(a.weight);
  }
  rdro_dist* dist = nullptr;
  check(rdro_dist_create(p.n, c.nominal.size(), atoms.data(), weights.data(), &dist));
  p.nominal.reset(dist);

  p.ground = to_norm(c.ground_norm);
  if (c.alpha) {
    p.objective = RDRO_OBJECTIVE_WCVAR;
    p.alpha = *c.alpha;
  } else if (c.objective && *c.objective == "dro") {
    p.objective = RDRO_OBJECTIVE_DRO;
  }

  rdro_solver_options_default(&p.solver);
  const std::string method = c.method.value_or("auto");
  p.solver.method = method == "simplex"       ? RDRO_METHOD_SIMPLEX
                    : method == "subgradient" ? RDRO_METHOD_SUBGRADIENT
                                              : RDRO_METHOD_AUTO;
  if (c.seed) p.solver.seed = *c.seed;
  if (options.seed) p.solver.seed = *options.seed;
  if (c.tolerances && c.tolerances->max_iter) p.solver.max_iter = *c.tolerances->max_iter;
  if (c.tolerances && c.tolerances->step) p.solver.step = *c.tolerances->step;
  return p;
}

struct SolveResult {
  rdro_status error = RDRO_OK;
  std::string message;
  std::vector<double> x;
  double objective = std::nan("");
  double lambda = std::nan("");
  std::string method;
  std::size_t iterations = 0;
  std::string status;
  bool optimal = false;
  bool non_unique = false;
};

SolveResult solve_at(const Problem& p, rdro_objective objective, double radius,
                     const rdro_solver_options& solver) {
  SolveResult out;
  rdro_report* raw = nullptr;
  out.error = rdro_solve(p.set.get(), p.nominal.get(), objective, radius, p.alpha, p.ground, &solver, &raw);
  if (out.error != RDRO_OK) {
    out.message = rdro_last_error_message();
    out.status = rdro_status_name(out.error);
    out.x.assign(p.n, std::nan(""));
    return out;
  }
  ReportPtr report(raw, rdro_report_destroy);
  out.x.resize(rdro_report_dimension(raw));
  rdro_report_x(raw, out.x.data());
  out.objective = rdro_report_objective(raw);
  out.lambda = rdro_report_lambda(raw);
  out.method = rdro_report_method(raw);
  out.iterations = rdro_report_iterations(raw);
  out.status = rdro_solve_status_name(rdro_report_status(raw));
  out.optimal = rdro_report_status(raw) == RDRO_SOLVE_OPTIMAL;
  out.non_unique = rdro_report_non_unique(raw) != 0;
  return out;
}

SolveResult solve_at(const Problem& p, rdro_objective objective, double radius) {
  return solve_at(p, objective, radius, p.solver);
}

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string json_vector(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + json_number(v[i]);
  return s + "]";
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

unsigned worker_count(const CommandOptions& options, std::size_t jobs) {
  unsigned threads = options.threads;
  if (threads == 0) {
    if (const char* env = std::getenv("REGRETDRO_THREADS")) {
      unsigned parsed = 0;
      const char* end = env + std::char_traits<char>::length(env);
      const auto [ptr, ec] = std::from_chars(env, end, parsed);
      if (ec == std::errc() && ptr == end && parsed > 0) threads = parsed;
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count); results land in caller-owned slots, so the
// output order never depends on scheduling.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job&& job) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) job(i);
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

std::vector<double> radii_of(const ProblemConfig& c) {
  if (!c.radius_sweep) throw ConfigError("radius_sweep", "this command needs a radius sweep");
  return sweep_radii(*c.radius_sweep);
}

const char* kind_name(rdro_objective objective) {
  switch (objective) {
    case RDRO_OBJECTIVE_DRRO:
      return "drro";
    case RDRO_OBJECTIVE_DRO:
      return "dro";
    case RDRO_OBJECTIVE_WCVAR:
      return "wcvar";
  }
  return "?";
}

int sweep_exit(const std::vector<const SolveResult*>& results, std::ostream& err) {
  int code = kExitOk;
  bool printed_matrix = false;
  for (const SolveResult* r : results) {
    if (r->error != RDRO_OK) {
      if (is_config_error(r->error)) {
        code = kExitConfig;
      } else if (code == kExitOk) {
        code = kExitSolver;
      }
      if (r->error == RDRO_ERR_UNSUPPORTED_COMBINATION && !printed_matrix) {
        err << "error: " << r->message << "\n" << kSupportedMatrix;
        printed_matrix = true;
      }
    } else if (!r->optimal && code == kExitOk) {
      code = kExitSolver;
    }
  }
  return code;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

int cmd_solve(const ProblemConfig& config, const CommandOptions& options, std::ostream& out,
              std::ostream& err) {
  if (!config.radius) throw ConfigError("radius", "solve needs a scalar radius");
  try {
    const Problem p = build_problem(config, options);
    const SolveResult r = solve_at(p, p.objective, *config.radius);
    if (r.error != RDRO_OK) throw LibraryError(r.error, r.message);
    out << "{\n"
        << "  \"x_star\": " << json_vector(r.x) << ",\n"
        << "  \"objective\": " << json_number(r.objective) << ",\n"
        << "  \"lambda\": " << json_number(r.lambda) << ",\n"
        << "  \"method\": " << json_string(r.method) << ",\n"
        << "  \"iterations\": " << r.iterations << ",\n"
        << "  \"status\": " << json_string(r.status) << "\n"
        << "}\n";
    if (r.non_unique) err << "warning: the optimal solution is not unique\n";
    return r.optimal ? kExitOk : kExitSolver;
  } catch (const LibraryError& e) {
    return report_library_error(e, err);
  }
}

int cmd_sweep(const ProblemConfig& config, const CommandOptions& options, std::ostream& out,
              std::ostream& err) {
  const std::vector<double> radii = radii_of(config);
  try {
    const Problem p = build_problem(config, options);
    std::vector<rdro_objective> kinds{p.objective};
    if (options.compare_dro && p.objective != RDRO_OBJECTIVE_DRO) kinds.push_back(RDRO_OBJECTIVE_DRO);
    const bool tagged = options.compare_dro;

    std::vector<SolveResult> results(radii.size() * kinds.size());
    parallel_for(results.size(), worker_count(options, results.size()), [&](std::size_t i) {
      results[i] = solve_at(p, kinds[i % kinds.size()], radii[i / kinds.size()]);
    });

    out << "r";
    for (std::size_t k = 0; k < p.n; ++k) out << ",x" << k + 1;
    out << ",objective,lambda,method,status";
    if (tagged) out << ",objective_kind";
    out << "\n";
    std::vector<const SolveResult*> all;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const SolveResult& r = results[i];
      all.push_back(&r);
      out << format_number(radii[i / kinds.size()]);
      for (double v : r.x) out << "," << format_number(v);
      out << "," << format_number(r.objective) << "," << format_number(r.lambda) << "," << r.method << ","
          << r.status;
      if (tagged) out << "," << kind_name(kinds[i % kinds.size()]);
      out << "\n";
    }
    return sweep_exit(all, err);
  } catch (const LibraryError& e) {
    return report_library_error(e, err);
  }
}

int cmd_validate(const ProblemConfig& config, const CommandOptions& options, std::ostream& out,
                 std::ostream& err) {
  if (!config.radius) throw ConfigError("radius", "validate needs a scalar radius");
  const double radius = *config.radius;
  const Tolerances tol = config.tolerances.value_or(Tolerances{});
  try {
    const Problem p = build_problem(config, options);
    const SolveResult solved = solve_at(p, p.objective, radius);
    if (solved.error != RDRO_OK) throw LibraryError(solved.error, solved.message);
    if (!solved.optimal) {
      err << "error: solver ended with status " << solved.status << "\n";
      return kExitSolver;
    }

    std::vector<std::string> checks;
    bool pass = true;
    auto verdict = [&](bool ok) {
      pass = pass && ok;
      return json_string(ok ? "PASS" : "FAIL");
    };
    const std::size_t refinements = tol.max_refinements.value_or(kDefaultRefinements);
    auto certificate = [&](const char* name, double alpha, double limit) {
      rdro_certificate c{};
      check(rdro_certify(p.set.get(), solved.x.data(), p.nominal.get(), radius, p.ground, alpha, limit,
                         refinements, &c));
      const bool ok = c.tolerance_reached != 0 && c.gap >= -kPrimalSlack;
      checks.push_back(std::string("{\"name\": ") + json_string(name) +
                       ", \"analytic\": " + json_number(c.analytic) +
                       ", \"primal_lower\": " + json_number(c.primal_lower) +
                       ", \"gap\": " + json_number(c.gap) + ", \"rounds\": " + std::to_string(c.rounds) +
                       ", \"tolerance\": " + json_number(limit) + ", \"result\": " + verdict(ok) + "}");
    };
    certificate("expected_regret_gap", -1.0, tol.gap.value_or(kDefaultGapTol));
    if (config.alpha) certificate("cvar_regret_gap", *config.alpha, tol.cvar_gap.value_or(kDefaultCvarGapTol));

    if (config.set.type == "vpolytope" && dual_of(p.ground) == RDRO_NORM_LINF) {
      double delta = 0.0;
      check(rdro_builder_equivalence(p.set.get(), p.nominal.get(), radius, &delta));
      const double limit = tol.builder.value_or(kDefaultBuilderTol);
      checks.push_back(std::string("{\"name\": \"builder_equivalence\", \"delta\": ") + json_number(delta) +
                       ", \"tolerance\": " + json_number(limit) + ", \"result\": " + verdict(delta <= limit) +
                       "}");
    }

    rdro_solver_options simplex = p.solver;
    simplex.method = RDRO_METHOD_SIMPLEX;
    rdro_solver_options subgradient = p.solver;
    subgradient.method = RDRO_METHOD_SUBGRADIENT;
    const SolveResult a = solve_at(p, p.objective, radius, simplex);
    const SolveResult b = solve_at(p, p.objective, radius, subgradient);
    if (a.error == RDRO_OK && b.error == RDRO_OK) {
      const double delta = std::abs(a.objective - b.objective);
      const double limit = tol.cross_solver.value_or(kDefaultCrossSolverTol);
      checks.push_back(std::string("{\"name\": \"cross_solver\", \"simplex\": ") + json_number(a.objective) +
                       ", \"subgradient\": " + json_number(b.objective) + ", \"delta\": " +
                       json_number(delta) + ", \"tolerance\": " + json_number(limit) +
                       ", \"result\": " + verdict(a.optimal && b.optimal && delta <= limit) + "}");
    } else {
      for (const SolveResult* r : {&a, &b}) {
        if (r->error != RDRO_OK && r->error != RDRO_ERR_UNSUPPORTED_COMBINATION) {
          throw LibraryError(r->error, r->message);
        }
      }
    }

    out << "{\n  \"x_star\": " << json_vector(solved.x) << ",\n  \"checks\": [\n";
    for (std::size_t i = 0; i < checks.size(); ++i) {
      out << "    " << checks[i] << (i + 1 < checks.size() ? "," : "") << "\n";
    }
    out << "  ],\n  \"result\": " << json_string(pass ? "PASS" : "FAIL") << "\n}\n";
    return pass ? kExitOk : kExitValidation;
  } catch (const LibraryError& e) {
    return report_library_error(e, err);
  }
}

int cmd_compare(const ProblemConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  const std::vector<double> radii = radii_of(config);
  try {
    const Problem p = build_problem(config, options);
    const rdro_objective regret_kind = p.objective == RDRO_OBJECTIVE_DRO ? RDRO_OBJECTIVE_DRRO : p.objective;
    std::vector<double> center(p.n);
    check(rdro_regularizer_argmin(p.set.get(), p.ground, &p.solver, center.data(), nullptr));
    const rdro_norm dual_norm = dual_of(p.ground);

    std::vector<SolveResult> results(2 * radii.size());
    parallel_for(results.size(), worker_count(options, results.size()), [&](std::size_t i) {
      results[i] = solve_at(p, i % 2 == 0 ? regret_kind : RDRO_OBJECTIVE_DRO, radii[i / 2]);
    });

    out << "r";
    for (const char* prefix : {"drro_x", "dro_x"}) {
      for (std::size_t k = 0; k < p.n; ++k) out << "," << prefix << k + 1;
    }
    out << ",drro_objective,dro_objective,drro_center_distance,dro_dual_norm,drro_status,dro_status\n";
    std::vector<const SolveResult*> all;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const SolveResult& a = results[2 * i];
      const SolveResult& b = results[2 * i + 1];
      all.push_back(&a);
      all.push_back(&b);
      std::vector<double> offset(p.n);
      for (std::size_t k = 0; k < p.n; ++k) offset[k] = a.x[k] - center[k];
      out << format_number(radii[i]);
      for (double v : a.x) out << "," << format_number(v);
      for (double v : b.x) out << "," << format_number(v);
      out << "," << format_number(a.objective) << "," << format_number(b.objective) << ","
          << format_number(norm_of(offset, RDRO_NORM_L2)) << "," << format_number(norm_of(b.x, dual_norm))
          << "," << a.status << "," << b.status << "\n";
    }
    return sweep_exit(all, err);
  } catch (const LibraryError& e) {
    return report_library_error(e, err);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributionally robust regret minimization over Wasserstein balls", "regretdro"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  bool compare_dro = false;
  std::uint64_t seed = 0;

  const std::vector<std::pair<const char*, const char*>> commands{
      {"solve", "Solve at a scalar radius and print a JSON report"},
      {"sweep", "Solve over a radius sweep and print CSV"},
      {"validate", "Check the solution against the transport oracle and builder cross-checks"},
      {"compare", "Contrast regret and cost optimizers over a radius sweep"}};
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_options;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Problem configuration (JSON)")->required();
    sub->add_option("--out", out_path, "Write the report here instead of stdout");
    sub->add_flag("--compare-dro", compare_dro, "Interleave the worst-case cost path (sweep)");
    seed_options.push_back(sub->add_option("--seed", seed, "Override the configured seed"));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CommandOptions options;
  options.compare_dro = compare_dro;
  for (const CLI::Option* opt : seed_options) {
    if (opt->count() > 0) options.seed = seed;
  }

  std::ostringstream report;
  int code = kExitOk;
  try {
    const ProblemConfig config = load_config(config_path);
    if (subs[0]->parsed()) code = cmd_solve(config, options, report, err);
    if (subs[1]->parsed()) code = cmd_sweep(config, options, report, err);
    if (subs[2]->parsed()) code = cmd_validate(config, options, report, err);
    if (subs[3]->parsed()) code = cmd_compare(config, options, report, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (out_path.empty()) {
    out << report.str();
  } else {
    std::ofstream file(out_path, std::ios::binary);
    file << report.str();
    if (!file) {
      err << "error: cannot write " << out_path << "\n";
      return kExitConfig;
    }
  }
  return code;
}

}  // namespace regretdro::cli
