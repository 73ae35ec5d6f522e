#pragma once

#include <cstddef>
#include <cstdint>

#include "regretdro/geometry.hpp"
#include "regretdro/reformulate.hpp"
#include "regretdro/regret.hpp"
#include "regretdro/simplex.hpp"

namespace regretdro {

enum class Method { Simplex, Subgradient };
enum class MethodChoice { Auto, Simplex, Subgradient };
enum class SolveStatus { Optimal, IterationLimit, Infeasible, Unbounded };

const char* to_string(Method method) noexcept;
const char* to_string(SolveStatus status) noexcept;

struct SolveReport {
  Vector x_star;
  double objective = 0.0;
  /// Regularizer value at x_star.
  double lambda_star = 0.0;
  Method method = Method::Simplex;
  std::size_t iterations = 0;
  double residual = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  /// Another optimum differing by more than 1e-6 in x was detected.
  bool non_unique = false;
};

/// Projected subgradient on normalized subgradients, run in epochs of
/// epoch_length iterations with step lengths c/sqrt(k). Each epoch restarts
/// from the best iterate with half the previous c; the method stops once c has
/// shrunk by min_step_ratio. The first c is step times the diameter of the
/// bounding box of the set.
struct SubgradientParams {
  std::size_t max_iter = 50000;
  double step = 1.0;
  std::size_t epoch_length = 500;
  double min_step_ratio = 1e-7;
  /// 0 starts from the projected nominal mean; any other value draws a
  /// random feasible start from this seed.
  std::uint64_t seed = 0;
};

enum class ObjectiveKind { ExpectedRegret, ExpectedCost, CvarRegret };

/// Nonsmooth objective handed to the subgradient method:
///   ExpectedRegret: E[w]'x + r * L(x)
///   ExpectedCost:   E[w]'x + r * ||x||
///   CvarRegret:     CVaR_alpha(regret) + r / (1 - alpha) * L(x)
/// where L is the farthest-point distance in dual_norm.
struct CompositeObjective {
  ObjectiveKind kind = ObjectiveKind::ExpectedRegret;
  DiscreteDistribution nominal;
  double radius = 0.0;
  Norm dual_norm = Norm::LInf;
  double alpha = 0.0;
};

double evaluate(const FeasibleSet& set, const CompositeObjective& objective,
                std::span<const double> x);

Vector subgradient(const FeasibleSet& set, const CompositeObjective& objective,
                   std::span<const double> x);

/// Reports the composite objective value at the best iterate.
SolveReport subgradient_solve(const FeasibleSet& set, const CompositeObjective& objective,
                              const SubgradientParams& params = {});

/// Runs the simplex method on a compiled problem; the report carries the LP
/// optimum plus objective_offset.
SolveReport solve_compiled(const CompiledProblem& problem);

struct SolveOptions {
  MethodChoice method = MethodChoice::Auto;
  SubgradientParams subgradient;
};

/// Minimizes the worst-case expected regret. The reported objective is the
/// worst-case expected regret at x_star.
SolveReport solve_drro(const FeasibleSet& set, const AmbiguitySet& amb,
                       const SolveOptions& options = {});

/// Minimizes the worst-case expected cost E[w]'x + r*||x||_*.
SolveReport solve_dro(const FeasibleSet& set, const AmbiguitySet& amb,
                      const SolveOptions& options = {});

/// Minimizes the worst-case CVaR of regret. The reported objective is the
/// worst-case CVaR of regret at x_star.
SolveReport solve_wcvar(const FeasibleSet& set, const AmbiguitySet& amb, RiskLevel alpha,
                        const SolveOptions& options = {});

}  // namespace regretdro
