#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "regretdro/geometry.hpp"
#include "regretdro/regret.hpp"

namespace regretdro {

/// Coupling between nominal atoms (rows) and candidate points (columns).
struct TransportPlan {
  std::vector<Vector> mass;
  double cost = 0.0;
};

/// Exact type-1 Wasserstein distance between two discrete distributions via
/// the transport LP.
double w1_distance(const DiscreteDistribution& p, const DiscreteDistribution& q,
                   Norm ground_norm);

/// Candidate support points for the primal worst-case search. Round 0 holds
/// the nominal atoms and each atom displaced along +-e_i and along the
/// steepest-ascent direction of the farthest witness at radii
/// r * {1/4, 1/2, 1, 2}. Each further round doubles the density of radii on
/// a log2 scale and extends the largest radius by a factor of 16.
struct CandidateGrid {
  std::vector<Vector> points;
  std::size_t round = 0;
};

CandidateGrid make_candidate_grid(const FeasibleSet& set, std::span<const double> x,
                                  const AmbiguitySet& amb, std::size_t round);

struct PrimalBound {
  double value = 0.0;
  TransportPlan plan;
};

/// max sum_jk pi_jk f(z_k)  s.t.  sum_k pi_jk = p_j,
///                                 sum_jk pi_jk ||z_k - w_j|| <= r.
/// A lower bound on the worst-case expectation of f over the ball.
PrimalBound primal_worst_case_expectation(std::span<const double> values,
                                          const std::vector<Vector>& points,
                                          const DiscreteDistribution& nominal, double radius,
                                          Norm ground_norm);

struct CertificateOptions {
  double tol = 1e-2;
  std::size_t max_refinements = 4;
};

struct DualGapCertificate {
  double analytic = 0.0;
  double primal_lower = 0.0;
  double gap = 0.0;
  /// Optimal dual multiplier, the farthest-point distance at x.
  double lambda_star = 0.0;
  std::size_t rounds = 0;
  bool tolerance_reached = false;
};

/// Compares the closed-form worst-case expected regret at x with the primal
/// transport lower bound, refining the candidate grid until the gap is below
/// tol or the refinement budget runs out.
DualGapCertificate dual_gap_certificate(const FeasibleSet& set, std::span<const double> x,
                                        const AmbiguitySet& amb,
                                        const CertificateOptions& options = {});

/// Same check for the worst-case CVaR of regret. The primal side fixes tau at
/// the nominal value-at-risk and bounds sup E[max(R - tau, 0)].
DualGapCertificate cvar_gap_certificate(const FeasibleSet& set, std::span<const double> x,
                                        const AmbiguitySet& amb, RiskLevel alpha,
                                        const CertificateOptions& options = {.tol = 2e-2});

/// Brute-force sup of ||x - v|| over an axis-aligned grid of the set with the
/// given spacing. Only for n <= 3.
double grid_regularizer(const FeasibleSet& set, std::span<const double> x, Norm dual_norm,
                        double step);

}  // namespace regretdro
