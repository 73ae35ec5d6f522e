#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regretdro/geometry.hpp"
#include "regretdro/linear_program.hpp"
#include "regretdro/regret.hpp"

namespace regretdro {

/// LP plus the bookkeeping to read a decision back out of its solution.
/// The LP optimum plus objective_offset is on the regret scale for the
/// regret builders and on the cost scale for build_dro.
struct CompiledProblem {
  LinearProgram lp;
  std::vector<std::size_t> decision;
  /// Epigraph variable bounding the regularizer (lambda or mu).
  std::size_t regularizer = 0;
  double objective_offset = 0.0;
};

/// Worst-case expected regret over a V-polytope with a polyhedral dual norm:
///
///   min E[w]'x + r*lambda
///   s.t. x = sum_i theta_i v_i, theta in the simplex,
///        ||x - v_i|| <= lambda for every vertex.
///
/// LInf uses 2n rows per vertex; L1 uses absolute-value splitting with n
/// auxiliaries per vertex. Rows are vertex-major, coordinate-minor.
CompiledProblem build_vrep(const FeasibleSet& set, const DiscreteDistribution& nominal,
                           double radius, Norm dual_norm);

/// LInf-dual variant driven by the 2n support values sigma(+-e_i). Works for
/// V-polytopes and boxes.
CompiledProblem build_support_reform(const FeasibleSet& set,
                                     const DiscreteDistribution& nominal, double radius);

/// Worst-case expected cost: min E[w]'x + r*||x||.
CompiledProblem build_dro(const FeasibleSet& set, const DiscreteDistribution& nominal,
                          double radius, Norm dual_norm);

/// Worst-case CVaR of regret in epigraph form over (x, lambda, tau, u):
///
///   min tau + sum_j p_j u_j / (1 - alpha) + r/(1 - alpha) * lambda
///   s.t. u_j >= w_j'x - kappa_j - tau,  u_j >= 0,
///
/// with kappa_j = min_cost(set, w_j) folded into the row constants.
CompiledProblem build_wcvar(const FeasibleSet& set, const DiscreteDistribution& nominal,
                            double radius, RiskLevel alpha, Norm dual_norm);

struct DegeneracyReport {
  std::size_t variables = 0;
  std::size_t inequality_rows = 0;
  std::size_t equality_rows = 0;
  /// Pairs of row indices that coincide within 1e-12, rhs included. Equality
  /// rows are numbered after the inequality rows.
  std::vector<std::pair<std::size_t, std::size_t>> duplicate_rows;
  std::vector<std::string> warnings;
};

DegeneracyReport lp_degeneracy_report(const CompiledProblem& problem);

}  // namespace regretdro
