#pragma once

#include <cstddef>
#include <vector>

#include "regretdro/linear_program.hpp"

namespace regretdro {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status) noexcept;

struct SimplexOptions {
  double pivot_tol = 1e-9;
  /// Pivots smaller than this raise NumericalBreakdown.
  double breakdown_tol = 1e-12;
  std::size_t max_iterations = 1'000'000;
  /// Variables checked for alternative optima after phase two.
  std::vector<std::size_t> watch;
  double alternative_tol = 1e-6;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector z;
  double objective = 0.0;
  std::size_t iterations = 0;
  /// Largest violation of any row or bound at z.
  double max_violation = 0.0;
  /// True when a zero-reduced-cost pivot moves a watched variable by more
  /// than alternative_tol without changing the objective.
  bool alternative_optima = false;
};

/// Dense two-phase primal simplex with Bland's rule.
LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace regretdro
