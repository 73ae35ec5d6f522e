#include "regretdro/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "regretdro/errors.hpp"

namespace regretdro {

const char* to_string(Method method) noexcept {
  return method == Method::Simplex ? "SIMPLEX" : "SUBGRADIENT";
}

const char* to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Optimal:
      return "OPTIMAL";
    case SolveStatus::IterationLimit:
      return "ITERATION_LIMIT";
    case SolveStatus::Infeasible:
      return "INFEASIBLE";
    case SolveStatus::Unbounded:
      return "UNBOUNDED";
  }
  return "?";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vector difference(std::span<const double> a, std::span<const double> b) {
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

double regularizer_weight(const CompositeObjective& obj) {
  if (obj.kind == ObjectiveKind::CvarRegret) return obj.radius / (1.0 - obj.alpha);
  return obj.radius;
}

double regularizer_value(const FeasibleSet& set, const CompositeObjective& obj,
                         std::span<const double> x) {
  if (obj.kind == ObjectiveKind::ExpectedCost) return norm(x, obj.dual_norm);
  return farthest_distance(set, x, obj.dual_norm).distance;
}

SolveStatus from_lp(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return SolveStatus::Optimal;
    case LpStatus::Infeasible:
      return SolveStatus::Infeasible;
    case LpStatus::Unbounded:
      return SolveStatus::Unbounded;
    case LpStatus::IterationLimit:
      break;
  }
  return SolveStatus::IterationLimit;
}

bool lp_path_available(const FeasibleSet& set, Norm dual_norm) {
  if (dual_norm == Norm::L2) return false;
  return set.as<VPolytope>() || (set.as<Box>() && dual_norm == Norm::LInf);
}

bool subgradient_path_available(const FeasibleSet& set, Norm dual_norm, bool needs_farthest) {
  return supports_projection(set) && (!needs_farthest || supports_farthest(set, dual_norm));
}

[[noreturn]] void unsupported(const FeasibleSet& set, Norm dual_norm, MethodChoice choice) {
  std::string method = choice == MethodChoice::Auto      ? "auto"
                       : choice == MethodChoice::Simplex ? "simplex"
                                                         : "subgradient";
  throw Error(ErrorCode::UnsupportedCombination,
              "no solver for feasible set " + std::string(set.kind_name()) + " with dual norm " +
                  std::string(to_string(dual_norm)) + " (method " + method + ")");
}

enum class Route { Lp, Subgradient };

Route choose_route(const FeasibleSet& set, Norm dual_norm, MethodChoice choice, bool lp_ok,
                   bool needs_farthest) {
  const bool sg_ok = subgradient_path_available(set, dual_norm, needs_farthest);
  switch (choice) {
    case MethodChoice::Auto:
      if (lp_ok) return Route::Lp;
      if (sg_ok) return Route::Subgradient;
      break;
    case MethodChoice::Simplex:
      if (lp_ok) return Route::Lp;
      break;
    case MethodChoice::Subgradient:
      if (sg_ok) return Route::Subgradient;
      break;
  }
  unsupported(set, dual_norm, choice);
}

bool has_point(const SolveReport& report) {
  return report.status == SolveStatus::Optimal || report.status == SolveStatus::IterationLimit;
}

}  // namespace

double evaluate(const FeasibleSet& set, const CompositeObjective& obj, std::span<const double> x) {
  const double weight = regularizer_weight(obj);
  double value = 0.0;
  if (obj.kind == ObjectiveKind::CvarRegret) {
    value = cvar_regret_nominal(set, x, obj.nominal, RiskLevel(obj.alpha));
  } else {
    value = dot(obj.nominal.mean(), x);
  }
  if (weight > 0.0) value += weight * regularizer_value(set, obj, x);
  return value;
}

Vector subgradient(const FeasibleSet& set, const CompositeObjective& obj, std::span<const double> x) {
  const std::size_t n = x.size();
  Vector g(n, 0.0);
  if (obj.kind == ObjectiveKind::CvarRegret) {
    const RiskLevel alpha(obj.alpha);
    const Vector regrets = atom_regrets(set, x, obj.nominal);
    const Vector q = cvar_tail_weights(regrets, obj.nominal.weights(), alpha);
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (q[j] == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) g[k] += q[j] * obj.nominal.atoms()[j][k];
    }
    for (double& e : g) e /= 1.0 - obj.alpha;
  } else {
    g = obj.nominal.mean();
  }
  const double weight = regularizer_weight(obj);
  if (weight > 0.0) {
    Vector reg;
    if (obj.kind == ObjectiveKind::ExpectedCost) {
      reg = norm_subgradient(x, obj.dual_norm);
    } else {
      const FarthestPoint far = farthest_distance(set, x, obj.dual_norm);
      reg = norm_subgradient(difference(x, far.witness), obj.dual_norm);
    }
    for (std::size_t k = 0; k < n; ++k) g[k] += weight * reg[k];
  }
  return g;
}

SolveReport subgradient_solve(const FeasibleSet& set, const CompositeObjective& obj,
                              const SubgradientParams& params) {
  if (params.max_iter < 1 || !(params.step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "subgradient: max_iter >= 1 and step > 0 required");
  }
  if (obj.nominal.dimension() != set.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "nominal distribution has the wrong dimension");
  }
  if (obj.kind == ObjectiveKind::CvarRegret) (void)RiskLevel(obj.alpha);
  const bool needs_farthest = obj.kind != ObjectiveKind::ExpectedCost && obj.radius > 0.0;
  if (!subgradient_path_available(set, obj.dual_norm, needs_farthest)) {
    unsupported(set, obj.dual_norm, MethodChoice::Subgradient);
  }

  Vector x;
  if (params.seed == 0) {
    x = project(set, obj.nominal.mean());
  } else {
    std::mt19937_64 rng(params.seed);
    x = project(set, sample_point(set, rng));
  }

  double diameter = 0.0;
  {
    const auto [lo, hi] = bounding_box(set);
    for (std::size_t k = 0; k < lo.size(); ++k) diameter += (hi[k] - lo[k]) * (hi[k] - lo[k]);
    diameter = std::sqrt(diameter);
  }
  const double first_step = params.step * (diameter > 0.0 ? diameter : 1.0);
  const double min_step = first_step * params.min_step_ratio;
  const std::size_t epoch = std::max<std::size_t>(params.epoch_length, 1);

  Vector best = x;
  double best_value = evaluate(set, obj, x);
  double step = first_step;
  std::size_t local = 1;
  std::size_t it = 0;
  SolveStatus status = SolveStatus::IterationLimit;

  while (it < params.max_iter) {
    ++it;
    const Vector g = subgradient(set, obj, x);
    const double glen = norm(g, Norm::L2);
    if (glen == 0.0) {
      // 0 is a subgradient at x, so x is a minimizer.
      const double value = evaluate(set, obj, x);
      if (value <= best_value) {
        best = x;
        best_value = value;
      }
      status = SolveStatus::Optimal;
      break;
    }
    const double scale = step / (std::sqrt(static_cast<double>(local)) * glen);
    Vector trial(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] - scale * g[k];
    x = project(set, trial);
    const double value = evaluate(set, obj, x);
    if (value < best_value) {
      best = x;
      best_value = value;
    }
    if (++local > epoch) {
      step *= 0.5;
      if (step < min_step) {
        status = SolveStatus::Optimal;
        break;
      }
      x = best;
      local = 1;
    }
  }

  SolveReport report;
  report.x_star = best;
  report.objective = best_value;
  report.lambda_star = obj.kind == ObjectiveKind::ExpectedCost || supports_farthest(set, obj.dual_norm)
                           ? regularizer_value(set, obj, best)
                           : kNaN;
  report.method = Method::Subgradient;
  report.iterations = it;
  report.residual = infeasibility(set, best);
  report.status = status;
  return report;
}

SolveReport solve_compiled(const CompiledProblem& problem) {
  SimplexOptions options;
  options.watch = problem.decision;
  const LpSolution sol = simplex_solve(problem.lp, options);
  SolveReport report;
  report.method = Method::Simplex;
  report.iterations = sol.iterations;
  report.status = from_lp(sol.status);
  report.residual = sol.max_violation;
  report.non_unique = sol.alternative_optima;
  if (sol.status == LpStatus::Optimal) {
    report.x_star.reserve(problem.decision.size());
    for (std::size_t idx : problem.decision) report.x_star.push_back(sol.z[idx]);
    report.objective = sol.objective + problem.objective_offset;
    report.lambda_star = sol.z[problem.regularizer];
  } else {
    report.objective = kNaN;
    report.lambda_star = kNaN;
  }
  return report;
}

SolveReport solve_drro(const FeasibleSet& set, const AmbiguitySet& amb, const SolveOptions& options) {
  const Norm dual_norm = dual(amb.ground_norm);
  const Route route = choose_route(set, dual_norm, options.method,
                                   lp_path_available(set, dual_norm), amb.radius > 0.0);
  SolveReport report;
  if (route == Route::Lp) {
    const CompiledProblem problem = set.as<VPolytope>()
                                        ? build_vrep(set, amb.nominal, amb.radius, dual_norm)
                                        : build_support_reform(set, amb.nominal, amb.radius);
    report = solve_compiled(problem);
  } else {
    report = subgradient_solve(set, {ObjectiveKind::ExpectedRegret, amb.nominal, amb.radius, dual_norm, 0.0},
                               options.subgradient);
  }
  if (has_point(report)) {
    report.objective = worst_case_expected_regret(set, report.x_star, amb);
    if (route == Route::Subgradient || amb.radius == 0.0) {
      report.lambda_star = supports_farthest(set, dual_norm)
                               ? farthest_distance(set, report.x_star, dual_norm).distance
                               : kNaN;
    }
  }
  return report;
}

SolveReport solve_dro(const FeasibleSet& set, const AmbiguitySet& amb, const SolveOptions& options) {
  const Norm dual_norm = dual(amb.ground_norm);
  const bool lp_ok = dual_norm != Norm::L2 && !set.as<NormBall>();
  const Route route = choose_route(set, dual_norm, options.method, lp_ok, false);
  SolveReport report;
  if (route == Route::Lp) {
    report = solve_compiled(build_dro(set, amb.nominal, amb.radius, dual_norm));
  } else {
    report = subgradient_solve(set, {ObjectiveKind::ExpectedCost, amb.nominal, amb.radius, dual_norm, 0.0},
                               options.subgradient);
  }
  if (has_point(report)) {
    const double reg = norm(report.x_star, dual_norm);
    report.objective = dot(amb.nominal.mean(), report.x_star) + amb.radius * reg;
    if (route == Route::Subgradient || amb.radius == 0.0) report.lambda_star = reg;
  }
  return report;
}

SolveReport solve_wcvar(const FeasibleSet& set, const AmbiguitySet& amb, RiskLevel alpha,
                        const SolveOptions& options) {
  const Norm dual_norm = dual(amb.ground_norm);
  const Route route = choose_route(set, dual_norm, options.method,
                                   lp_path_available(set, dual_norm), amb.radius > 0.0);
  SolveReport report;
  if (route == Route::Lp) {
    report = solve_compiled(build_wcvar(set, amb.nominal, amb.radius, alpha, dual_norm));
  } else {
    report = subgradient_solve(
        set, {ObjectiveKind::CvarRegret, amb.nominal, amb.radius, dual_norm, alpha.value()},
        options.subgradient);
  }
  if (has_point(report)) {
    report.objective = worst_case_cvar_regret(set, report.x_star, amb, alpha);
    if (route == Route::Subgradient || amb.radius == 0.0) {
      report.lambda_star = supports_farthest(set, dual_norm)
                               ? farthest_distance(set, report.x_star, dual_norm).distance
                               : kNaN;
    }
  }
  return report;
}

}  // namespace regretdro
