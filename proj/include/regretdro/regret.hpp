#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "regretdro/geometry.hpp"

namespace regretdro {

/// Finitely supported probability distribution over cost vectors.
///
/// Weights must be nonnegative. A total within 1e-6 of one is rescaled to sum
/// to exactly one; anything further off is rejected. Duplicate atoms are kept
/// as given.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<Vector> atoms, Vector weights);

  static DiscreteDistribution dirac(Vector point);

  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t dimension() const noexcept { return atoms_.front().size(); }
  const std::vector<Vector>& atoms() const noexcept { return atoms_; }
  const Vector& weights() const noexcept { return weights_; }

  Vector mean() const;

 private:
  std::vector<Vector> atoms_;
  Vector weights_;
};

/// Type-1 Wasserstein ball of the given radius around a nominal distribution,
/// with transport cost measured in ground_norm.
struct AmbiguitySet {
  AmbiguitySet(DiscreteDistribution nominal, double radius, Norm ground_norm);

  DiscreteDistribution nominal;
  double radius;
  Norm ground_norm;
};

/// Confidence level in [0, 1).
class RiskLevel {
 public:
  explicit RiskLevel(double alpha);
  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

/// w'x - inf_{y in set} w'y.
double regret(const FeasibleSet& set, std::span<const double> x, std::span<const double> w);

double expected_regret(const FeasibleSet& set, std::span<const double> x,
                       const DiscreteDistribution& nominal);

/// Expected nominal regret plus radius times the farthest-point regularizer
/// in the dual of the ground norm. Requires x in the set (tolerance 1e-7).
double worst_case_expected_regret(const FeasibleSet& set, std::span<const double> x,
                                  const AmbiguitySet& amb);

/// Exact CVaR of a weighted sample: average of the upper (1 - alpha) tail.
double cvar(std::span<const double> values, std::span<const double> weights, RiskLevel alpha);

/// Smallest minimizer tau of tau + E[max(v - tau, 0)] / (1 - alpha), i.e. the
/// value-at-risk of the sample.
double value_at_risk(std::span<const double> values, std::span<const double> weights,
                     RiskLevel alpha);

/// Tail weights q_j with sum q_j = 1 - alpha that realize the CVaR of the
/// sample as sum q_j v_j / (1 - alpha). Ties resolve to the lowest index.
Vector cvar_tail_weights(std::span<const double> values, std::span<const double> weights,
                         RiskLevel alpha);

Vector atom_regrets(const FeasibleSet& set, std::span<const double> x,
                    const DiscreteDistribution& nominal);

double cvar_regret_nominal(const FeasibleSet& set, std::span<const double> x,
                           const DiscreteDistribution& nominal, RiskLevel alpha);

/// Nominal CVaR of regret plus radius / (1 - alpha) times the regularizer.
double worst_case_cvar_regret(const FeasibleSet& set, std::span<const double> x,
                              const AmbiguitySet& amb, RiskLevel alpha);

/// sup_{||w|| <= 1} regret(x, w) in the ground norm, which equals the
/// farthest-point distance in the dual norm.
double robust_regret_unit_ball(const FeasibleSet& set, std::span<const double> x,
                               Norm ground_norm);

}  // namespace regretdro
