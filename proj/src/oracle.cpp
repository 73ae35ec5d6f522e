#include "regretdro/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "regretdro/errors.hpp"
#include "regretdro/linear_program.hpp"
#include "regretdro/simplex.hpp"

namespace regretdro {

namespace {

Vector difference(std::span<const double> a, std::span<const double> b) {
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

double distance(std::span<const double> a, std::span<const double> b, Norm k) {
  return norm(difference(a, b), k);
}

}  // namespace

double w1_distance(const DiscreteDistribution& p, const DiscreteDistribution& q, Norm ground_norm) {
  if (p.dimension() != q.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "w1_distance: distributions differ in dimension");
  }
  const std::size_t m = p.size();
  const std::size_t k = q.size();
  LinearProgram lp;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < k; ++l) {
      lp.add_variable("pi" + std::to_string(j + 1) + "_" + std::to_string(l + 1), 0.0, kInf,
                      distance(p.atoms()[j], q.atoms()[l], ground_norm));
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    Vector row = lp.zero_row();
    for (std::size_t l = 0; l < k; ++l) row[j * k + l] = 1.0;
    lp.add_equality(std::move(row), p.weights()[j]);
  }
  for (std::size_t l = 0; l < k; ++l) {
    Vector row = lp.zero_row();
    for (std::size_t j = 0; j < m; ++j) row[j * k + l] = 1.0;
    lp.add_equality(std::move(row), q.weights()[l]);
  }
  const LpSolution sol = simplex_solve(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::NumericalBreakdown,
                std::string("w1_distance: transport LP ended with status ") + to_string(sol.status));
  }
  return std::max(sol.objective, 0.0);
}

CandidateGrid make_candidate_grid(const FeasibleSet& set, std::span<const double> x,
                                  const AmbiguitySet& amb, std::size_t round) {
  const std::size_t n = set.dimension();
  const DiscreteDistribution& nominal = amb.nominal;
  CandidateGrid grid;
  grid.round = round;
  grid.points = nominal.atoms();
  if (amb.radius == 0.0) return grid;

  std::vector<Vector> directions;
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    directions.push_back(e);
    e[i] = -1.0;
    directions.push_back(e);
  }
  // Moving mass along the direction that attains the dual norm of x - v*
  // raises the regret at the full Lipschitz rate.
  const Norm dual_norm = dual(amb.ground_norm);
  if (supports_farthest(set, dual_norm)) {
    const FarthestPoint far = farthest_distance(set, x, dual_norm);
    Vector d = norm_subgradient(difference(x, far.witness), dual_norm);
    const double len = norm(d, amb.ground_norm);
    if (len > 0.0) {
      for (double& e : d) e /= len;
      directions.push_back(std::move(d));
    }
  }

  const double h = std::ldexp(1.0, -static_cast<int>(round));
  const double top = 1.0 + 4.0 * static_cast<double>(round);
  Vector radii;
  for (double e = -2.0; e <= top + 1e-12; e += h) radii.push_back(amb.radius * std::exp2(e));

  for (const Vector& atom : nominal.atoms()) {
    for (const Vector& d : directions) {
      for (double rho : radii) {
        Vector z(atom);
        for (std::size_t k = 0; k < n; ++k) z[k] += rho * d[k];
        grid.points.push_back(std::move(z));
      }
    }
  }
  return grid;
}

PrimalBound primal_worst_case_expectation(std::span<const double> values,
                                          const std::vector<Vector>& points,
                                          const DiscreteDistribution& nominal, double radius,
                                          Norm ground_norm) {
  if (values.size() != points.size() || points.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "primal bound: values and points differ in length");
  }
  if (!(radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "primal bound: radius must be >= 0");
  const std::size_t m = nominal.size();
  const std::size_t k = points.size();

  std::vector<Vector> cost(m, Vector(k));
  for (std::size_t j = 0; j < m; ++j) {
    bool anchored = false;
    for (std::size_t l = 0; l < k; ++l) {
      if (points[l].size() != nominal.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "primal bound: candidate has the wrong dimension");
      }
      cost[j][l] = distance(points[l], nominal.atoms()[j], ground_norm);
      anchored = anchored || cost[j][l] == 0.0;
    }
    if (!anchored) {
      throw Error(ErrorCode::InfeasibleGrid, "primal bound: nominal atom missing from the grid");
    }
  }

  LinearProgram lp;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < k; ++l) {
      lp.add_variable("pi" + std::to_string(j + 1) + "_" + std::to_string(l + 1), 0.0, kInf,
                      -values[l]);
    }
  }
  Vector budget = lp.zero_row();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < k; ++l) budget[j * k + l] = cost[j][l];
  }
  lp.add_inequality(std::move(budget), radius);
  for (std::size_t j = 0; j < m; ++j) {
    Vector row = lp.zero_row();
    for (std::size_t l = 0; l < k; ++l) row[j * k + l] = 1.0;
    lp.add_equality(std::move(row), nominal.weights()[j]);
  }

  const LpSolution sol = simplex_solve(lp);
  if (sol.status == LpStatus::Infeasible) {
    throw Error(ErrorCode::InfeasibleGrid, "primal bound: transport LP infeasible");
  }
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::NumericalBreakdown,
                std::string("primal bound: transport LP ended with status ") + to_string(sol.status));
  }

  PrimalBound out;
  out.value = -sol.objective;
  out.plan.mass.assign(m, Vector(k, 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < k; ++l) {
      const double pi = std::max(sol.z[j * k + l], 0.0);
      out.plan.mass[j][l] = pi;
      out.plan.cost += pi * cost[j][l];
    }
  }
  return out;
}

DualGapCertificate dual_gap_certificate(const FeasibleSet& set, std::span<const double> x,
                                        const AmbiguitySet& amb, const CertificateOptions& options) {
  DualGapCertificate cert;
  cert.analytic = worst_case_expected_regret(set, x, amb);
  cert.lambda_star = supports_farthest(set, dual(amb.ground_norm))
                         ? farthest_distance(set, x, dual(amb.ground_norm)).distance
                         : std::numeric_limits<double>::quiet_NaN();
  if (amb.radius == 0.0) {
    // The ball is the nominal distribution itself.
    cert.primal_lower = cert.analytic;
    cert.gap = 0.0;
    cert.tolerance_reached = true;
    return cert;
  }
  for (std::size_t round = 0; round <= options.max_refinements; ++round) {
    const CandidateGrid grid = make_candidate_grid(set, x, amb, round);
    Vector values(grid.points.size());
    for (std::size_t l = 0; l < values.size(); ++l) values[l] = regret(set, x, grid.points[l]);
    const PrimalBound bound =
        primal_worst_case_expectation(values, grid.points, amb.nominal, amb.radius, amb.ground_norm);
    cert.primal_lower = bound.value;
    cert.gap = cert.analytic - bound.value;
    cert.rounds = round;
    if (cert.gap < options.tol) {
      cert.tolerance_reached = true;
      break;
    }
  }
  return cert;
}

DualGapCertificate cvar_gap_certificate(const FeasibleSet& set, std::span<const double> x,
                                        const AmbiguitySet& amb, RiskLevel alpha,
                                        const CertificateOptions& options) {
  DualGapCertificate cert;
  cert.analytic = worst_case_cvar_regret(set, x, amb, alpha);
  cert.lambda_star = supports_farthest(set, dual(amb.ground_norm))
                         ? farthest_distance(set, x, dual(amb.ground_norm)).distance
                         : std::numeric_limits<double>::quiet_NaN();
  if (amb.radius == 0.0) {
    cert.primal_lower = cert.analytic;
    cert.gap = 0.0;
    cert.tolerance_reached = true;
    return cert;
  }
  const Vector regrets = atom_regrets(set, x, amb.nominal);
  const double tau = value_at_risk(regrets, amb.nominal.weights(), alpha);
  const double tail = 1.0 - alpha.value();
  for (std::size_t round = 0; round <= options.max_refinements; ++round) {
    const CandidateGrid grid = make_candidate_grid(set, x, amb, round);
    Vector values(grid.points.size());
    for (std::size_t l = 0; l < values.size(); ++l) {
      values[l] = std::max(regret(set, x, grid.points[l]) - tau, 0.0);
    }
    const PrimalBound bound =
        primal_worst_case_expectation(values, grid.points, amb.nominal, amb.radius, amb.ground_norm);
    cert.primal_lower = tau + bound.value / tail;
    cert.gap = cert.analytic - cert.primal_lower;
    cert.rounds = round;
    if (cert.gap < options.tol) {
      cert.tolerance_reached = true;
      break;
    }
  }
  return cert;
}

double grid_regularizer(const FeasibleSet& set, std::span<const double> x, Norm dual_norm,
                        double step) {
  const std::size_t n = set.dimension();
  if (n > 3) throw Error(ErrorCode::DimensionTooLarge, "grid_regularizer: dimension above 3");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid_regularizer: step must be > 0");
  if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "grid_regularizer: dimension mismatch");

  const auto [lo, hi] = bounding_box(set);
  std::vector<Vector> axes(n);
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const auto count = static_cast<std::size_t>(std::floor((hi[k] - lo[k]) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) axes[k].push_back(lo[k] + static_cast<double>(i) * step);
    if (axes[k].back() < hi[k] - 1e-12) axes[k].push_back(hi[k]);
    total *= axes[k].size();
  }
  auto point_at = [&](std::size_t index) {
    Vector g(n);
    for (std::size_t k = 0; k < n; ++k) {
      g[k] = axes[k][index % axes[k].size()];
      index /= axes[k].size();
    }
    return g;
  };
  constexpr double member_tol = 1e-9;

  if (!set.as<VPolytope>()) {
    double best = -kInf;
    for (std::size_t index = 0; index < total; ++index) {
      const Vector g = point_at(index);
      const double d = distance(x, g, dual_norm);
      if (d > best && contains(set, g, member_tol)) best = d;
    }
    if (best == -kInf) throw Error(ErrorCode::InvalidArgument, "grid_regularizer: no grid point in the set");
    return best;
  }

  // Membership costs an LP here, so test points from the farthest inward.
  std::vector<std::pair<double, std::size_t>> order(total);
  for (std::size_t index = 0; index < total; ++index) {
    order[index] = {distance(x, point_at(index), dual_norm), index};
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (const auto& [d, index] : order) {
    if (contains(set, point_at(index), member_tol)) return d;
  }
  throw Error(ErrorCode::InvalidArgument, "grid_regularizer: no grid point in the set");
}

}  // namespace regretdro
