#include "regretdro/reformulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regretdro/errors.hpp"

namespace regretdro {

namespace {

void require_radius(double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "radius must be finite and >= 0");
  }
}

void require_polyhedral_dual(Norm dual_norm, const char* builder) {
  if (dual_norm == Norm::L2) {
    throw Error(ErrorCode::UnsupportedCombination,
                std::string(builder) + ": the l2 dual norm is not polyhedral; use the subgradient solver");
  }
}

void require_lp_membership(const FeasibleSet& set, const char* builder) {
  if (set.as<NormBall>()) {
    throw Error(ErrorCode::UnsupportedCombination,
                std::string(builder) + ": norm_ball membership is not LP-representable; use the subgradient solver");
  }
}

void require_nominal(const FeasibleSet& set, const DiscreteDistribution& nominal) {
  if (nominal.dimension() != set.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "nominal distribution has the wrong dimension");
  }
}

std::string indexed(const char* stem, std::size_t i) { return stem + std::to_string(i + 1); }

std::string indexed(const char* stem, std::size_t i, std::size_t k) {
  return stem + std::to_string(i + 1) + "_" + std::to_string(k + 1);
}

// Decision variables x_1..x_n; box bounds go straight onto the variables.
std::vector<std::size_t> add_decision(LinearProgram& lp, const FeasibleSet& set,
                                      std::span<const double> cost) {
  const std::size_t n = set.dimension();
  const auto* box = set.as<Box>();
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = box ? box->lower[k] : -kInf;
    const double hi = box ? box->upper[k] : kInf;
    idx[k] = lp.add_variable(indexed("x", k), lo, hi, cost[k]);
  }
  return idx;
}

std::vector<std::size_t> add_multipliers(LinearProgram& lp, const FeasibleSet& set) {
  std::vector<std::size_t> idx;
  if (const auto* poly = set.as<VPolytope>()) {
    for (std::size_t i = 0; i < poly->vertices.size(); ++i) {
      idx.push_back(lp.add_variable(indexed("theta", i), 0.0, kInf));
    }
  }
  return idx;
}

// x = sum_i theta_i v_i, sum_i theta_i = 1.
void add_membership_rows(LinearProgram& lp, const FeasibleSet& set,
                         const std::vector<std::size_t>& x, const std::vector<std::size_t>& theta) {
  const auto* poly = set.as<VPolytope>();
  if (!poly) return;
  for (std::size_t k = 0; k < x.size(); ++k) {
    Vector row = lp.zero_row();
    row[x[k]] = 1.0;
    for (std::size_t i = 0; i < theta.size(); ++i) row[theta[i]] = -poly->vertices[i][k];
    lp.add_equality(std::move(row), 0.0);
  }
  Vector row = lp.zero_row();
  for (std::size_t t : theta) row[t] = 1.0;
  lp.add_equality(std::move(row), 1.0);
}

// Auxiliaries t_ik for the L1 vertex epigraph; empty for LInf.
std::vector<std::vector<std::size_t>> add_vertex_auxiliaries(LinearProgram& lp, const VPolytope& poly,
                                                             Norm dual_norm) {
  std::vector<std::vector<std::size_t>> t;
  if (dual_norm != Norm::L1) return t;
  const std::size_t n = poly.vertices.front().size();
  t.resize(poly.vertices.size());
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    for (std::size_t k = 0; k < n; ++k) t[i].push_back(lp.add_variable(indexed("t", i, k), 0.0, kInf));
  }
  return t;
}

// ||x - v_i|| <= lambda for every vertex, vertex-major then coordinate-minor.
void add_vertex_epigraph_rows(LinearProgram& lp, const VPolytope& poly, Norm dual_norm,
                              const std::vector<std::size_t>& x, std::size_t lambda,
                              const std::vector<std::vector<std::size_t>>& t) {
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    const Vector& v = poly.vertices[i];
    for (std::size_t k = 0; k < x.size(); ++k) {
      const std::size_t bound = dual_norm == Norm::LInf ? lambda : t[i][k];
      Vector up = lp.zero_row();
      up[x[k]] = 1.0;
      up[bound] = -1.0;
      lp.add_inequality(std::move(up), v[k]);
      Vector down = lp.zero_row();
      down[x[k]] = -1.0;
      down[bound] = -1.0;
      lp.add_inequality(std::move(down), -v[k]);
    }
    if (dual_norm == Norm::L1) {
      Vector sum = lp.zero_row();
      for (std::size_t aux : t[i]) sum[aux] = 1.0;
      sum[lambda] = -1.0;
      lp.add_inequality(std::move(sum), 0.0);
    }
  }
}

// sigma(e_i) - x_i <= lambda and sigma(-e_i) + x_i <= lambda.
void add_support_rows(LinearProgram& lp, const FeasibleSet& set, const std::vector<std::size_t>& x,
                      std::size_t lambda) {
  const std::size_t n = set.dimension();
  Vector direction(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    direction[i] = 1.0;
    const double upper = support_function(set, direction);
    direction[i] = -1.0;
    const double lower = support_function(set, direction);
    direction[i] = 0.0;
    Vector a = lp.zero_row();
    a[x[i]] = -1.0;
    a[lambda] = -1.0;
    lp.add_inequality(std::move(a), -upper);
    Vector b = lp.zero_row();
    b[x[i]] = 1.0;
    b[lambda] = -1.0;
    lp.add_inequality(std::move(b), -lower);
  }
}

double expected_min_cost(const FeasibleSet& set, const DiscreteDistribution& nominal) {
  double s = 0.0;
  for (std::size_t j = 0; j < nominal.size(); ++j) {
    s += nominal.weights()[j] * min_cost(set, nominal.atoms()[j]);
  }
  return s;
}

}  // namespace

CompiledProblem build_vrep(const FeasibleSet& set, const DiscreteDistribution& nominal,
                           double radius, Norm dual_norm) {
  require_radius(radius);
  require_polyhedral_dual(dual_norm, "build_vrep");
  const auto* poly = set.as<VPolytope>();
  if (!poly) {
    throw Error(ErrorCode::UnsupportedCombination, "build_vrep: requires a vpolytope feasible set");
  }
  require_nominal(set, nominal);

  CompiledProblem out;
  LinearProgram& lp = out.lp;
  out.decision = add_decision(lp, set, nominal.mean());
  out.regularizer = lp.add_variable("lambda", 0.0, kInf, radius);
  const auto theta = add_multipliers(lp, set);
  const auto t = add_vertex_auxiliaries(lp, *poly, dual_norm);

  add_vertex_epigraph_rows(lp, *poly, dual_norm, out.decision, out.regularizer, t);
  add_membership_rows(lp, set, out.decision, theta);
  out.objective_offset = -expected_min_cost(set, nominal);
  return out;
}

CompiledProblem build_support_reform(const FeasibleSet& set,
                                     const DiscreteDistribution& nominal, double radius) {
  require_radius(radius);
  require_lp_membership(set, "build_support_reform");
  require_nominal(set, nominal);

  CompiledProblem out;
  LinearProgram& lp = out.lp;
  out.decision = add_decision(lp, set, nominal.mean());
  out.regularizer = lp.add_variable("lambda", 0.0, kInf, radius);
  const auto theta = add_multipliers(lp, set);

  add_support_rows(lp, set, out.decision, out.regularizer);
  add_membership_rows(lp, set, out.decision, theta);
  out.objective_offset = -expected_min_cost(set, nominal);
  return out;
}

CompiledProblem build_dro(const FeasibleSet& set, const DiscreteDistribution& nominal,
                          double radius, Norm dual_norm) {
  require_radius(radius);
  require_polyhedral_dual(dual_norm, "build_dro");
  require_lp_membership(set, "build_dro");
  require_nominal(set, nominal);

  const std::size_t n = set.dimension();
  CompiledProblem out;
  LinearProgram& lp = out.lp;
  out.decision = add_decision(lp, set, nominal.mean());
  out.regularizer = lp.add_variable("mu", 0.0, kInf, radius);
  const auto theta = add_multipliers(lp, set);
  std::vector<std::size_t> s;
  if (dual_norm == Norm::L1) {
    for (std::size_t k = 0; k < n; ++k) s.push_back(lp.add_variable(indexed("s", k), 0.0, kInf));
  }

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t bound = dual_norm == Norm::LInf ? out.regularizer : s[k];
    Vector up = lp.zero_row();
    up[out.decision[k]] = 1.0;
    up[bound] = -1.0;
    lp.add_inequality(std::move(up), 0.0);
    Vector down = lp.zero_row();
    down[out.decision[k]] = -1.0;
    down[bound] = -1.0;
    lp.add_inequality(std::move(down), 0.0);
  }
  if (dual_norm == Norm::L1) {
    Vector sum = lp.zero_row();
    for (std::size_t aux : s) sum[aux] = 1.0;
    sum[out.regularizer] = -1.0;
    lp.add_inequality(std::move(sum), 0.0);
  }
  add_membership_rows(lp, set, out.decision, theta);
  return out;
}

CompiledProblem build_wcvar(const FeasibleSet& set, const DiscreteDistribution& nominal,
                            double radius, RiskLevel alpha, Norm dual_norm) {
  require_radius(radius);
  require_polyhedral_dual(dual_norm, "build_wcvar");
  require_lp_membership(set, "build_wcvar");
  require_nominal(set, nominal);
  const auto* poly = set.as<VPolytope>();
  if (!poly && dual_norm != Norm::LInf) {
    throw Error(ErrorCode::UnsupportedCombination,
                "build_wcvar: a box feasible set needs the linf dual norm");
  }

  const double tail = 1.0 - alpha.value();
  const std::size_t n = set.dimension();
  CompiledProblem out;
  LinearProgram& lp = out.lp;
  out.decision = add_decision(lp, set, Vector(n, 0.0));
  out.regularizer = lp.add_variable("lambda", 0.0, kInf, radius / tail);
  const std::size_t tau = lp.add_variable("tau", -kInf, kInf, 1.0);
  std::vector<std::size_t> u;
  for (std::size_t j = 0; j < nominal.size(); ++j) {
    u.push_back(lp.add_variable(indexed("u", j), 0.0, kInf, nominal.weights()[j] / tail));
  }
  const auto theta = add_multipliers(lp, set);
  std::vector<std::vector<std::size_t>> t;
  if (poly) t = add_vertex_auxiliaries(lp, *poly, dual_norm);

  // w_j'x - tau - u_j <= kappa_j
  for (std::size_t j = 0; j < nominal.size(); ++j) {
    const Vector& w = nominal.atoms()[j];
    Vector row = lp.zero_row();
    for (std::size_t k = 0; k < n; ++k) row[out.decision[k]] = w[k];
    row[tau] = -1.0;
    row[u[j]] = -1.0;
    lp.add_inequality(std::move(row), min_cost(set, w));
  }
  if (poly) {
    add_vertex_epigraph_rows(lp, *poly, dual_norm, out.decision, out.regularizer, t);
  } else {
    add_support_rows(lp, set, out.decision, out.regularizer);
  }
  add_membership_rows(lp, set, out.decision, theta);
  return out;
}

DegeneracyReport lp_degeneracy_report(const CompiledProblem& problem) {
  const LinearProgram& lp = problem.lp;
  DegeneracyReport report;
  report.variables = lp.num_variables();
  report.inequality_rows = lp.ineq_rows.size();
  report.equality_rows = lp.eq_rows.size();

  auto same = [](const Vector& a, double ra, const Vector& b, double rb) {
    if (std::abs(ra - rb) > 1e-12) return false;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (std::abs(a[j] - b[j]) > 1e-12) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < lp.ineq_rows.size(); ++i) {
    for (std::size_t k = i + 1; k < lp.ineq_rows.size(); ++k) {
      if (same(lp.ineq_rows[i], lp.ineq_rhs[i], lp.ineq_rows[k], lp.ineq_rhs[k])) {
        report.duplicate_rows.emplace_back(i, k);
      }
    }
  }
  const std::size_t base = lp.ineq_rows.size();
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) {
    for (std::size_t k = i + 1; k < lp.eq_rows.size(); ++k) {
      if (same(lp.eq_rows[i], lp.eq_rhs[i], lp.eq_rows[k], lp.eq_rhs[k])) {
        report.duplicate_rows.emplace_back(base + i, base + k);
      }
    }
  }

  double smallest = kInf;
  double largest = 0.0;
  auto scan = [&](const std::vector<Vector>& rows) {
    for (const Vector& row : rows) {
      for (double a : row) {
        if (a == 0.0) continue;
        smallest = std::min(smallest, std::abs(a));
        largest = std::max(largest, std::abs(a));
      }
    }
  };
  scan(lp.ineq_rows);
  scan(lp.eq_rows);
  if (largest > 0.0 && largest / smallest > 1e8) {
    report.warnings.push_back("coefficient magnitudes span more than 8 orders (" +
                              format_number(smallest) + " to " + format_number(largest) + ")");
  }
  if (!report.duplicate_rows.empty()) {
    report.warnings.push_back(std::to_string(report.duplicate_rows.size()) +
                              " duplicate row pair(s)");
  }
  if (lp.ineq_rows.empty() && lp.eq_rows.empty()) report.warnings.push_back("no constraint rows");
  return report;
}

}  // namespace regretdro
