#include "regretdro/regret.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "regretdro/errors.hpp"

namespace regretdro {

namespace {

constexpr double kWeightSumTol = 1e-6;
constexpr double kMembershipTol = 1e-7;

void require_member(const FeasibleSet& set, std::span<const double> x) {
  if (x.size() != set.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "decision has the wrong dimension");
  }
  if (!contains(set, x, kMembershipTol)) {
    throw Error(ErrorCode::NotInFeasibleSet, "decision lies outside the feasible set");
  }
}

void require_same_dimension(const FeasibleSet& set, const DiscreteDistribution& nominal) {
  if (nominal.dimension() != set.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "nominal distribution has the wrong dimension");
  }
}

void require_sample(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size() || values.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "sample values and weights differ in length");
  }
}

// Indices sorted by value, ties by index.
std::vector<std::size_t> order_by_value(std::span<const double> values, bool descending) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return descending ? values[a] > values[b] : values[a] < values[b];
  });
  return order;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Vector> atoms, Vector weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw Error(ErrorCode::InvalidArgument, "distribution: no atoms");
  if (atoms_.size() != weights_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "distribution: atom and weight counts differ");
  }
  const std::size_t n = atoms_.front().size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "distribution: zero-dimensional atoms");
  double total = 0.0;
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    if (atoms_[j].size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "distribution: atoms differ in dimension");
    }
    for (double e : atoms_[j]) {
      if (!std::isfinite(e)) throw Error(ErrorCode::InvalidArgument, "distribution: non-finite atom");
    }
    if (!(weights_[j] >= 0.0) || !std::isfinite(weights_[j])) {
      throw Error(ErrorCode::InvalidArgument, "distribution: weights must be finite and >= 0");
    }
    total += weights_[j];
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    throw Error(ErrorCode::InvalidArgument,
                "distribution: weights sum to " + std::to_string(total) + ", expected 1");
  }
  for (double& w : weights_) w /= total;
}

DiscreteDistribution DiscreteDistribution::dirac(Vector point) {
  return DiscreteDistribution({std::move(point)}, {1.0});
}

Vector DiscreteDistribution::mean() const {
  Vector m(dimension(), 0.0);
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += weights_[j] * atoms_[j][k];
  }
  return m;
}

AmbiguitySet::AmbiguitySet(DiscreteDistribution nominal_, double radius_, Norm ground_norm_)
    : nominal(std::move(nominal_)), radius(radius_), ground_norm(ground_norm_) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "ambiguity radius must be finite and >= 0");
  }
}

RiskLevel::RiskLevel(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha must lie in [0, 1)");
  }
}

double regret(const FeasibleSet& set, std::span<const double> x, std::span<const double> w) {
  if (x.size() != set.dimension() || w.size() != set.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "regret: dimension mismatch");
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) cost += w[i] * x[i];
  return cost - min_cost(set, w);
}

Vector atom_regrets(const FeasibleSet& set, std::span<const double> x,
                    const DiscreteDistribution& nominal) {
  require_same_dimension(set, nominal);
  Vector out(nominal.size());
  for (std::size_t j = 0; j < nominal.size(); ++j) out[j] = regret(set, x, nominal.atoms()[j]);
  return out;
}

double expected_regret(const FeasibleSet& set, std::span<const double> x,
                       const DiscreteDistribution& nominal) {
  const Vector r = atom_regrets(set, x, nominal);
  double s = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) s += nominal.weights()[j] * r[j];
  return s;
}

double worst_case_expected_regret(const FeasibleSet& set, std::span<const double> x,
                                  const AmbiguitySet& amb) {
  require_member(set, x);
  const double nominal = expected_regret(set, x, amb.nominal);
  if (amb.radius == 0.0) return nominal;
  return nominal + amb.radius * farthest_distance(set, x, dual(amb.ground_norm)).distance;
}

Vector cvar_tail_weights(std::span<const double> values, std::span<const double> weights,
                         RiskLevel alpha) {
  require_sample(values, weights);
  Vector q(values.size(), 0.0);
  double remaining = 1.0 - alpha.value();
  for (std::size_t j : order_by_value(values, true)) {
    if (remaining <= 0.0) break;
    q[j] = std::min(weights[j], remaining);
    remaining -= q[j];
  }
  return q;
}

double cvar(std::span<const double> values, std::span<const double> weights, RiskLevel alpha) {
  const Vector q = cvar_tail_weights(values, weights, alpha);
  double s = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) s += q[j] * values[j];
  return s / (1.0 - alpha.value());
}

double value_at_risk(std::span<const double> values, std::span<const double> weights,
                     RiskLevel alpha) {
  require_sample(values, weights);
  const std::vector<std::size_t> order = order_by_value(values, false);
  double cumulative = 0.0;
  for (std::size_t j : order) {
    cumulative += weights[j];
    if (cumulative >= alpha.value() - 1e-12) return values[j];
  }
  return values[order.back()];
}

double cvar_regret_nominal(const FeasibleSet& set, std::span<const double> x,
                           const DiscreteDistribution& nominal, RiskLevel alpha) {
  const Vector r = atom_regrets(set, x, nominal);
  return cvar(r, nominal.weights(), alpha);
}

double worst_case_cvar_regret(const FeasibleSet& set, std::span<const double> x,
                              const AmbiguitySet& amb, RiskLevel alpha) {
  require_member(set, x);
  const double nominal = cvar_regret_nominal(set, x, amb.nominal, alpha);
  if (amb.radius == 0.0) return nominal;
  const double slope = amb.radius / (1.0 - alpha.value());
  return nominal + slope * farthest_distance(set, x, dual(amb.ground_norm)).distance;
}

double robust_regret_unit_ball(const FeasibleSet& set, std::span<const double> x,
                               Norm ground_norm) {
  return farthest_distance(set, x, dual(ground_norm)).distance;
}

}  // namespace regretdro
