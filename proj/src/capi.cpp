#include "regretdro/regretdro.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <random>
#include <string>

#include "regretdro/errors.hpp"
#include "regretdro/geometry.hpp"
#include "regretdro/oracle.hpp"
#include "regretdro/reformulate.hpp"
#include "regretdro/regret.hpp"
#include "regretdro/solve.hpp"

struct rdro_set {
  regretdro::FeasibleSet value;
};

struct rdro_dist {
  regretdro::DiscreteDistribution value;
};

struct rdro_report {
  regretdro::SolveReport value;
};

namespace {

using regretdro::ErrorCode;
using regretdro::Vector;

thread_local std::string last_error;

rdro_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return RDRO_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch:
      return RDRO_ERR_DIMENSION_MISMATCH;
    case ErrorCode::UnsupportedCombination:
      return RDRO_ERR_UNSUPPORTED_COMBINATION;
    case ErrorCode::NotInFeasibleSet:
      return RDRO_ERR_NOT_IN_FEASIBLE_SET;
    case ErrorCode::InvalidAlpha:
      return RDRO_ERR_INVALID_ALPHA;
    case ErrorCode::NumericalBreakdown:
      return RDRO_ERR_NUMERICAL_BREAKDOWN;
    case ErrorCode::DimensionTooLarge:
      return RDRO_ERR_DIMENSION_TOO_LARGE;
    case ErrorCode::InfeasibleGrid:
      return RDRO_ERR_INFEASIBLE_GRID;
  }
  return RDRO_ERR_INTERNAL;
}

rdro_status fail(rdro_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body and translates exceptions into status codes.
template <class F>
rdro_status guarded(F&& body) {
  try {
    body();
    return RDRO_OK;
  } catch (const regretdro::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RDRO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RDRO_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw regretdro::Error(ErrorCode::InvalidArgument, message);
}

regretdro::Norm to_norm(rdro_norm k) {
  switch (k) {
    case RDRO_NORM_L1:
      return regretdro::Norm::L1;
    case RDRO_NORM_L2:
      return regretdro::Norm::L2;
    case RDRO_NORM_LINF:
      return regretdro::Norm::LInf;
  }
  throw regretdro::Error(ErrorCode::InvalidArgument, "unknown norm tag");
}

Vector copy(const double* data, std::size_t n) {
  require(data != nullptr || n == 0, "null vector argument");
  return Vector(data, data + n);
}

std::span<const double> view(const double* data, std::size_t n) {
  require(data != nullptr, "null vector argument");
  return {data, n};
}

regretdro::CompiledProblem compile(const regretdro::FeasibleSet& set,
                                   const regretdro::DiscreteDistribution& nominal,
                                   rdro_objective objective, double radius, double alpha,
                                   regretdro::Norm ground) {
  const regretdro::Norm dual_norm = regretdro::dual(ground);
  switch (objective) {
    case RDRO_OBJECTIVE_DRRO:
      if (set.as<regretdro::VPolytope>()) return regretdro::build_vrep(set, nominal, radius, dual_norm);
      if (dual_norm != regretdro::Norm::LInf) {
        throw regretdro::Error(ErrorCode::UnsupportedCombination,
                               "box regret programs need the linf dual norm");
      }
      return regretdro::build_support_reform(set, nominal, radius);
    case RDRO_OBJECTIVE_DRO:
      return regretdro::build_dro(set, nominal, radius, dual_norm);
    case RDRO_OBJECTIVE_WCVAR:
      return regretdro::build_wcvar(set, nominal, radius, regretdro::RiskLevel(alpha), dual_norm);
  }
  throw regretdro::Error(ErrorCode::InvalidArgument, "unknown objective");
}

}  // namespace

extern "C" {

const char* rdro_version(void) { return "1.0.0"; }

const char* rdro_last_error_message(void) { return last_error.c_str(); }

const char* rdro_status_name(rdro_status status) {
  switch (status) {
    case RDRO_OK:
      return "OK";
    case RDRO_ERR_INVALID_ARGUMENT:
      return "InvalidArgument";
    case RDRO_ERR_DIMENSION_MISMATCH:
      return "DimensionMismatch";
    case RDRO_ERR_UNSUPPORTED_COMBINATION:
      return "UnsupportedCombination";
    case RDRO_ERR_NOT_IN_FEASIBLE_SET:
      return "NotInFeasibleSet";
    case RDRO_ERR_INVALID_ALPHA:
      return "InvalidAlpha";
    case RDRO_ERR_NUMERICAL_BREAKDOWN:
      return "NumericalBreakdown";
    case RDRO_ERR_DIMENSION_TOO_LARGE:
      return "DimensionTooLarge";
    case RDRO_ERR_INFEASIBLE_GRID:
      return "InfeasibleGrid";
    case RDRO_ERR_BUFFER_TOO_SMALL:
      return "BufferTooSmall";
    case RDRO_ERR_INTERNAL:
      return "Internal";
  }
  return "Unknown";
}

const char* rdro_solve_status_name(rdro_solve_status status) {
  switch (status) {
    case RDRO_SOLVE_OPTIMAL:
      return "OPTIMAL";
    case RDRO_SOLVE_ITERATION_LIMIT:
      return "ITERATION_LIMIT";
    case RDRO_SOLVE_INFEASIBLE:
      return "INFEASIBLE";
    case RDRO_SOLVE_UNBOUNDED:
      return "UNBOUNDED";
  }
  return "UNKNOWN";
}

rdro_status rdro_set_create_vpolytope(size_t dim, size_t count, const double* vertices,
                                      rdro_set** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(dim > 0 && count > 0, "vpolytope needs dim > 0 and at least one vertex");
    std::vector<Vector> v;
    for (size_t i = 0; i < count; ++i) v.push_back(copy(vertices + i * dim, dim));
    *out = new rdro_set{regretdro::FeasibleSet::vpolytope(std::move(v))};
  });
}

rdro_status rdro_set_create_box(size_t dim, const double* lower, const double* upper, rdro_set** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new rdro_set{regretdro::FeasibleSet::box(copy(lower, dim), copy(upper, dim))};
  });
}

rdro_status rdro_set_create_norm_ball(size_t dim, const double* center, double radius,
                                      rdro_norm ball_norm, rdro_set** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new rdro_set{
        regretdro::FeasibleSet::norm_ball(copy(center, dim), radius, to_norm(ball_norm))};
  });
}

void rdro_set_destroy(rdro_set* set) { delete set; }

size_t rdro_set_dimension(const rdro_set* set) { return set ? set->value.dimension() : 0; }

rdro_status rdro_support_function(const rdro_set* set, const double* y, double* out) {
  return guarded([&] {
    require(set && out, "null argument");
    *out = regretdro::support_function(set->value, view(y, set->value.dimension()));
  });
}

rdro_status rdro_min_cost(const rdro_set* set, const double* w, double* out) {
  return guarded([&] {
    require(set && out, "null argument");
    *out = regretdro::min_cost(set->value, view(w, set->value.dimension()));
  });
}

rdro_status rdro_farthest_distance(const rdro_set* set, const double* x, rdro_norm dual_norm,
                                   double* distance, double* witness) {
  return guarded([&] {
    require(set && distance, "null argument");
    const auto far =
        regretdro::farthest_distance(set->value, view(x, set->value.dimension()), to_norm(dual_norm));
    *distance = far.distance;
    if (witness) std::memcpy(witness, far.witness.data(), far.witness.size() * sizeof(double));
  });
}

rdro_status rdro_contains(const rdro_set* set, const double* x, double tol, int* out) {
  return guarded([&] {
    require(set && out, "null argument");
    *out = regretdro::contains(set->value, view(x, set->value.dimension()), tol) ? 1 : 0;
  });
}

rdro_status rdro_sample_point(const rdro_set* set, uint64_t seed, double* out) {
  return guarded([&] {
    require(set && out, "null argument");
    std::mt19937_64 rng(seed);
    const Vector x = regretdro::sample_point(set->value, rng);
    std::memcpy(out, x.data(), x.size() * sizeof(double));
  });
}

rdro_status rdro_dist_create(size_t dim, size_t count, const double* atoms, const double* weights,
                             rdro_dist** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(dim > 0 && count > 0, "distribution needs dim > 0 and at least one atom");
    std::vector<Vector> a;
    for (size_t j = 0; j < count; ++j) a.push_back(copy(atoms + j * dim, dim));
    Vector w = weights ? copy(weights, count) : Vector(count, 1.0 / static_cast<double>(count));
    *out = new rdro_dist{regretdro::DiscreteDistribution(std::move(a), std::move(w))};
  });
}

void rdro_dist_destroy(rdro_dist* dist) { delete dist; }

size_t rdro_dist_dimension(const rdro_dist* dist) { return dist ? dist->value.dimension() : 0; }

rdro_status rdro_w1_distance(const rdro_dist* p, const rdro_dist* q, rdro_norm ground_norm, double* out) {
  return guarded([&] {
    require(p && q && out, "null argument");
    *out = regretdro::w1_distance(p->value, q->value, to_norm(ground_norm));
  });
}

rdro_status rdro_regret(const rdro_set* set, const double* x, const double* w, double* out) {
  return guarded([&] {
    require(set && out, "null argument");
    const size_t n = set->value.dimension();
    *out = regretdro::regret(set->value, view(x, n), view(w, n));
  });
}

rdro_status rdro_worst_case_expected_regret(const rdro_set* set, const double* x,
                                            const rdro_dist* nominal, double radius,
                                            rdro_norm ground_norm, double* out) {
  return guarded([&] {
    require(set && nominal && out, "null argument");
    const regretdro::AmbiguitySet amb(nominal->value, radius, to_norm(ground_norm));
    *out = regretdro::worst_case_expected_regret(set->value, view(x, set->value.dimension()), amb);
  });
}

rdro_status rdro_worst_case_cvar_regret(const rdro_set* set, const double* x,
                                        const rdro_dist* nominal, double radius,
                                        rdro_norm ground_norm, double alpha, double* out) {
  return guarded([&] {
    require(set && nominal && out, "null argument");
    const regretdro::AmbiguitySet amb(nominal->value, radius, to_norm(ground_norm));
    *out = regretdro::worst_case_cvar_regret(set->value, view(x, set->value.dimension()), amb,
                                             regretdro::RiskLevel(alpha));
  });
}

void rdro_solver_options_default(rdro_solver_options* options) {
  if (!options) return;
  const regretdro::SubgradientParams defaults;
  options->method = RDRO_METHOD_AUTO;
  options->max_iter = defaults.max_iter;
  options->step = defaults.step;
  options->seed = defaults.seed;
}

rdro_status rdro_solve(const rdro_set* set, const rdro_dist* nominal, rdro_objective objective,
                       double radius, double alpha, rdro_norm ground_norm,
                       const rdro_solver_options* options, rdro_report** out) {
  return guarded([&] {
    require(set && nominal && out, "null argument");
    rdro_solver_options opts;
    rdro_solver_options_default(&opts);
    if (options) opts = *options;
    regretdro::SolveOptions solve_options;
    switch (opts.method) {
      case RDRO_METHOD_AUTO:
        solve_options.method = regretdro::MethodChoice::Auto;
        break;
      case RDRO_METHOD_SIMPLEX:
        solve_options.method = regretdro::MethodChoice::Simplex;
        break;
      case RDRO_METHOD_SUBGRADIENT:
        solve_options.method = regretdro::MethodChoice::Subgradient;
        break;
      default:
        require(false, "unknown method");
    }
    solve_options.subgradient.max_iter = opts.max_iter;
    solve_options.subgradient.step = opts.step;
    solve_options.subgradient.seed = opts.seed;

    const regretdro::AmbiguitySet amb(nominal->value, radius, to_norm(ground_norm));
    regretdro::SolveReport report;
    switch (objective) {
      case RDRO_OBJECTIVE_DRRO:
        report = regretdro::solve_drro(set->value, amb, solve_options);
        break;
      case RDRO_OBJECTIVE_DRO:
        report = regretdro::solve_dro(set->value, amb, solve_options);
        break;
      case RDRO_OBJECTIVE_WCVAR:
        report = regretdro::solve_wcvar(set->value, amb, regretdro::RiskLevel(alpha), solve_options);
        break;
      default:
        require(false, "unknown objective");
    }
    *out = new rdro_report{std::move(report)};
  });
}

rdro_status rdro_regularizer_argmin(const rdro_set* set, rdro_norm ground_norm,
                                    const rdro_solver_options* options, double* x, double* value) {
  rdro_report* report = nullptr;
  rdro_dist* origin = nullptr;
  const size_t n = rdro_set_dimension(set);
  const std::vector<double> zero(n, 0.0);
  rdro_status status = rdro_dist_create(n, 1, zero.data(), nullptr, &origin);
  if (status != RDRO_OK) return status;
  // With a zero cost vector the objective reduces to the regularizer itself.
  status = rdro_solve(set, origin, RDRO_OBJECTIVE_DRRO, 1.0, 0.0, ground_norm, options, &report);
  rdro_dist_destroy(origin);
  if (status != RDRO_OK) return status;
  if (x) rdro_report_x(report, x);
  if (value) *value = rdro_report_objective(report);
  rdro_report_destroy(report);
  return RDRO_OK;
}

void rdro_report_destroy(rdro_report* report) { delete report; }

size_t rdro_report_dimension(const rdro_report* report) {
  return report ? report->value.x_star.size() : 0;
}

void rdro_report_x(const rdro_report* report, double* out) {
  if (!report || !out) return;
  std::memcpy(out, report->value.x_star.data(), report->value.x_star.size() * sizeof(double));
}

double rdro_report_objective(const rdro_report* report) {
  return report ? report->value.objective : std::nan("");
}

double rdro_report_lambda(const rdro_report* report) {
  return report ? report->value.lambda_star : std::nan("");
}

const char* rdro_report_method(const rdro_report* report) {
  return report ? regretdro::to_string(report->value.method) : "";
}

size_t rdro_report_iterations(const rdro_report* report) {
  return report ? report->value.iterations : 0;
}

double rdro_report_residual(const rdro_report* report) {
  return report ? report->value.residual : std::nan("");
}

rdro_solve_status rdro_report_status(const rdro_report* report) {
  if (!report) return RDRO_SOLVE_INFEASIBLE;
  switch (report->value.status) {
    case regretdro::SolveStatus::Optimal:
      return RDRO_SOLVE_OPTIMAL;
    case regretdro::SolveStatus::IterationLimit:
      return RDRO_SOLVE_ITERATION_LIMIT;
    case regretdro::SolveStatus::Infeasible:
      return RDRO_SOLVE_INFEASIBLE;
    case regretdro::SolveStatus::Unbounded:
      return RDRO_SOLVE_UNBOUNDED;
  }
  return RDRO_SOLVE_INFEASIBLE;
}

int rdro_report_non_unique(const rdro_report* report) {
  return report && report->value.non_unique ? 1 : 0;
}

rdro_status rdro_certify(const rdro_set* set, const double* x, const rdro_dist* nominal,
                         double radius, rdro_norm ground_norm, double alpha, double tol,
                         size_t max_refinements, rdro_certificate* out) {
  return guarded([&] {
    require(set && nominal && out, "null argument");
    const regretdro::AmbiguitySet amb(nominal->value, radius, to_norm(ground_norm));
    const auto point = view(x, set->value.dimension());
    const regretdro::CertificateOptions options{tol, max_refinements};
    const regretdro::DualGapCertificate cert =
        alpha < 0.0 ? regretdro::dual_gap_certificate(set->value, point, amb, options)
                    : regretdro::cvar_gap_certificate(set->value, point, amb,
                                                      regretdro::RiskLevel(alpha), options);
    *out = rdro_certificate{cert.analytic, cert.primal_lower, cert.gap,
                            cert.lambda_star, cert.rounds, cert.tolerance_reached ? 1 : 0};
  });
}

rdro_status rdro_builder_equivalence(const rdro_set* set, const rdro_dist* nominal, double radius,
                                     double* delta) {
  return guarded([&] {
    require(set && nominal && delta, "null argument");
    const auto vrep = regretdro::solve_compiled(
        regretdro::build_vrep(set->value, nominal->value, radius, regretdro::Norm::LInf));
    const auto support = regretdro::solve_compiled(
        regretdro::build_support_reform(set->value, nominal->value, radius));
    if (vrep.status != regretdro::SolveStatus::Optimal ||
        support.status != regretdro::SolveStatus::Optimal) {
      throw regretdro::Error(ErrorCode::NumericalBreakdown, "builder LP did not reach optimality");
    }
    *delta = std::abs(vrep.objective - support.objective);
  });
}

rdro_status rdro_export_lp(const rdro_set* set, const rdro_dist* nominal, rdro_objective objective,
                           double radius, double alpha, rdro_norm ground_norm, char* buffer,
                           size_t capacity, size_t* needed) {
  std::string text;
  const rdro_status status = guarded([&] {
    require(set && nominal, "null argument");
    text = regretdro::export_text(
        compile(set->value, nominal->value, objective, radius, alpha, to_norm(ground_norm)).lp);
  });
  if (status != RDRO_OK) return status;
  if (needed) *needed = text.size() + 1;
  if (!buffer || capacity < text.size() + 1) {
    return fail(RDRO_ERR_BUFFER_TOO_SMALL, "export buffer too small");
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return RDRO_OK;
}

}  // extern "C"
