#include "regretdro/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regretdro/errors.hpp"
#include "regretdro/linear_program.hpp"
#include "regretdro/simplex.hpp"

namespace regretdro {

namespace {

void require_dim(const FeasibleSet& set, std::span<const double> v, const char* what) {
  if (v.size() != set.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected dimension " + std::to_string(set.dimension()) +
                    ", got " + std::to_string(v.size()));
  }
}

void require_finite(std::span<const double> v, const char* what) {
  for (double e : v) {
    if (!std::isfinite(e)) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": non-finite entry");
    }
  }
}

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

std::string unsupported_message(const FeasibleSet& set, Norm dual_norm) {
  return "farthest-point distance is not available for " + std::string(set.kind_name()) +
         " with dual norm " + std::string(to_string(dual_norm)) +
         " (supported: vpolytope with l1/l2/linf, any set with linf, l2 norm_ball with l2)";
}

double vpolytope_residual(const VPolytope& poly, std::span<const double> x) {
  // min sum(s+ + s-)  s.t.  sum_i theta_i v_i + s+ - s- = x,  sum theta = 1.
  const std::size_t n = x.size();
  const std::size_t m = poly.vertices.size();
  LinearProgram lp;
  for (std::size_t i = 0; i < m; ++i) lp.add_variable("theta" + std::to_string(i + 1), 0.0, kInf);
  for (std::size_t k = 0; k < n; ++k) lp.add_variable("sp" + std::to_string(k + 1), 0.0, kInf, 1.0);
  for (std::size_t k = 0; k < n; ++k) lp.add_variable("sm" + std::to_string(k + 1), 0.0, kInf, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    Vector row = lp.zero_row();
    for (std::size_t i = 0; i < m; ++i) row[i] = poly.vertices[i][k];
    row[m + k] = 1.0;
    row[m + n + k] = -1.0;
    lp.add_equality(std::move(row), x[k]);
  }
  Vector simplex_row = lp.zero_row();
  for (std::size_t i = 0; i < m; ++i) simplex_row[i] = 1.0;
  lp.add_equality(std::move(simplex_row), 1.0);
  const LpSolution sol = simplex_solve(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::NumericalBreakdown, "membership LP did not reach optimality");
  }
  return std::max(sol.objective, 0.0);
}

}  // namespace

double norm(std::span<const double> v, Norm k) {
  double s = 0.0;
  switch (k) {
    case Norm::L1:
      for (double e : v) s += std::abs(e);
      return s;
    case Norm::L2:
      for (double e : v) s += e * e;
      return std::sqrt(s);
    case Norm::LInf:
      for (double e : v) s = std::max(s, std::abs(e));
      return s;
  }
  return s;
}

std::string_view to_string(Norm k) noexcept {
  switch (k) {
    case Norm::L1:
      return "l1";
    case Norm::L2:
      return "l2";
    case Norm::LInf:
      return "linf";
  }
  return "?";
}

std::optional<Norm> parse_norm(std::string_view name) noexcept {
  if (name == "l1") return Norm::L1;
  if (name == "l2") return Norm::L2;
  if (name == "linf") return Norm::LInf;
  return std::nullopt;
}

Vector norm_subgradient(std::span<const double> u, Norm k) {
  Vector g(u.size(), 0.0);
  switch (k) {
    case Norm::L1:
      for (std::size_t i = 0; i < u.size(); ++i) g[i] = u[i] > 0.0 ? 1.0 : (u[i] < 0.0 ? -1.0 : 0.0);
      break;
    case Norm::L2: {
      const double len = norm(u, Norm::L2);
      if (len > 0.0) {
        for (std::size_t i = 0; i < u.size(); ++i) g[i] = u[i] / len;
      }
      break;
    }
    case Norm::LInf: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < u.size(); ++i) {
        if (std::abs(u[i]) > std::abs(u[best])) best = i;
      }
      if (!u.empty() && u[best] != 0.0) g[best] = u[best] > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  return g;
}

FeasibleSet FeasibleSet::vpolytope(std::vector<Vector> vertices) {
  if (vertices.empty()) throw Error(ErrorCode::InvalidArgument, "vpolytope: empty vertex list");
  const std::size_t n = vertices.front().size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "vpolytope: zero-dimensional vertices");
  for (const Vector& v : vertices) {
    if (v.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "vpolytope: vertices differ in dimension");
    }
    require_finite(v, "vpolytope vertex");
  }
  return FeasibleSet(VPolytope{std::move(vertices)}, n);
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) {
    throw Error(ErrorCode::DimensionMismatch, "box: lower and upper differ in dimension");
  }
  if (lower.empty()) throw Error(ErrorCode::InvalidArgument, "box: zero dimension");
  require_finite(lower, "box lower");
  require_finite(upper, "box upper");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) {
      throw Error(ErrorCode::InvalidArgument,
                  "box: lower exceeds upper at coordinate " + std::to_string(i + 1));
    }
  }
  const std::size_t n = lower.size();
  return FeasibleSet(Box{std::move(lower), std::move(upper)}, n);
}

FeasibleSet FeasibleSet::norm_ball(Vector center, double radius, Norm ball_norm) {
  if (center.empty()) throw Error(ErrorCode::InvalidArgument, "norm_ball: zero dimension");
  require_finite(center, "norm_ball center");
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "norm_ball: radius must be finite and >= 0");
  }
  const std::size_t n = center.size();
  return FeasibleSet(NormBall{std::move(center), radius, ball_norm}, n);
}

std::string_view FeasibleSet::kind_name() const noexcept {
  if (as<VPolytope>()) return "vpolytope";
  if (as<Box>()) return "box";
  return "norm_ball";
}

double support_function(const FeasibleSet& set, std::span<const double> y) {
  require_dim(set, y, "support_function");
  if (const auto* poly = set.as<VPolytope>()) {
    double best = -kInf;
    for (const Vector& v : poly->vertices) best = std::max(best, dot(v, y));
    return best;
  }
  if (const auto* box = set.as<Box>()) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      s += box->upper[i] * std::max(y[i], 0.0) + box->lower[i] * std::min(y[i], 0.0);
    }
    return s;
  }
  const auto& ball = *set.as<NormBall>();
  return dot(ball.center, y) + ball.radius * norm(y, dual(ball.ball_norm));
}

Vector support_argmax(const FeasibleSet& set, std::span<const double> y) {
  require_dim(set, y, "support_argmax");
  if (const auto* poly = set.as<VPolytope>()) {
    std::size_t best = 0;
    double best_value = dot(poly->vertices[0], y);
    for (std::size_t i = 1; i < poly->vertices.size(); ++i) {
      const double value = dot(poly->vertices[i], y);
      if (value > best_value) {
        best = i;
        best_value = value;
      }
    }
    return poly->vertices[best];
  }
  if (const auto* box = set.as<Box>()) {
    Vector x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i] > 0.0 ? box->upper[i] : box->lower[i];
    return x;
  }
  const auto& ball = *set.as<NormBall>();
  // The unit-ball maximizer of u'y is a subgradient of the dual norm at y.
  Vector x = norm_subgradient(y, dual(ball.ball_norm));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = ball.center[i] + ball.radius * x[i];
  return x;
}

double min_cost(const FeasibleSet& set, std::span<const double> w) {
  require_dim(set, w, "min_cost");
  Vector neg(w.begin(), w.end());
  for (double& e : neg) e = -e;
  return -support_function(set, neg);
}

bool supports_farthest(const FeasibleSet& set, Norm dual_norm) noexcept {
  if (set.as<VPolytope>() || dual_norm == Norm::LInf) return true;
  const auto* ball = set.as<NormBall>();
  return ball && ball->ball_norm == Norm::L2 && dual_norm == Norm::L2;
}

FarthestPoint farthest_distance_vertices(const VPolytope& poly, std::span<const double> x,
                                         Norm dual_norm) {
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    if (poly.vertices[i].size() != x.size()) {
      throw Error(ErrorCode::DimensionMismatch, "farthest_distance: dimension mismatch");
    }
    const double d = norm(difference(x, poly.vertices[i]), dual_norm);
    if (d > best_value) {
      best = i;
      best_value = d;
    }
  }
  return {best_value, poly.vertices[best]};
}

FarthestPoint farthest_distance_axes(const FeasibleSet& set, std::span<const double> x) {
  require_dim(set, x, "farthest_distance");
  const std::size_t n = x.size();
  Vector direction(n, 0.0);
  double best_value = -kInf;
  std::size_t best_axis = 0;
  bool best_upper = true;
  for (std::size_t i = 0; i < n; ++i) {
    direction[i] = 1.0;
    const double above = support_function(set, direction) - x[i];
    direction[i] = -1.0;
    const double below = support_function(set, direction) + x[i];
    direction[i] = 0.0;
    if (above > best_value) {
      best_value = above;
      best_axis = i;
      best_upper = true;
    }
    if (below > best_value) {
      best_value = below;
      best_axis = i;
      best_upper = false;
    }
  }
  direction[best_axis] = best_upper ? 1.0 : -1.0;
  return {best_value, support_argmax(set, direction)};
}

FarthestPoint farthest_distance(const FeasibleSet& set, std::span<const double> x,
                                Norm dual_norm) {
  require_dim(set, x, "farthest_distance");
  require_finite(x, "farthest_distance point");
  if (const auto* poly = set.as<VPolytope>()) {
    return farthest_distance_vertices(*poly, x, dual_norm);
  }
  if (dual_norm == Norm::LInf) return farthest_distance_axes(set, x);
  const auto* ball = set.as<NormBall>();
  if (ball && ball->ball_norm == Norm::L2 && dual_norm == Norm::L2) {
    Vector u = difference(x, ball->center);
    const double len = norm(u, Norm::L2);
    if (len > 0.0) {
      for (double& e : u) e /= len;
    } else {
      std::fill(u.begin(), u.end(), 0.0);
      u[0] = 1.0;
    }
    Vector witness(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) witness[i] = ball->center[i] - ball->radius * u[i];
    return {len + ball->radius, std::move(witness)};
  }
  throw Error(ErrorCode::UnsupportedCombination, unsupported_message(set, dual_norm));
}

double infeasibility(const FeasibleSet& set, std::span<const double> x) {
  require_dim(set, x, "contains");
  if (const auto* box = set.as<Box>()) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      worst = std::max({worst, box->lower[i] - x[i], x[i] - box->upper[i]});
    }
    return worst;
  }
  if (const auto* ball = set.as<NormBall>()) {
    return std::max(0.0, norm(difference(x, ball->center), ball->ball_norm) - ball->radius);
  }
  return vpolytope_residual(*set.as<VPolytope>(), x);
}

bool contains(const FeasibleSet& set, std::span<const double> x, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "contains: tol must be >= 0");
  for (double e : x) {
    if (!std::isfinite(e)) return false;
  }
  return infeasibility(set, x) <= tol;
}

bool supports_projection(const FeasibleSet& set) noexcept {
  if (set.as<Box>()) return true;
  const auto* ball = set.as<NormBall>();
  return ball && ball->ball_norm == Norm::L2;
}

Vector project(const FeasibleSet& set, std::span<const double> x) {
  require_dim(set, x, "project");
  if (const auto* box = set.as<Box>()) {
    Vector p(x.begin(), x.end());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], box->lower[i], box->upper[i]);
    return p;
  }
  const auto* ball = set.as<NormBall>();
  if (!ball || ball->ball_norm != Norm::L2) {
    throw Error(ErrorCode::UnsupportedCombination,
                "project: only box and l2 norm_ball sets support Euclidean projection");
  }
  Vector d = difference(x, ball->center);
  const double len = norm(d, Norm::L2);
  if (len <= ball->radius) return Vector(x.begin(), x.end());
  Vector p(x.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = ball->center[i] + d[i] * (ball->radius / len);
  return p;
}

Vector sample_point(const FeasibleSet& set, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = set.dimension();
  if (const auto* poly = set.as<VPolytope>()) {
    // Dirichlet(1, ..., 1) weights over the vertices.
    std::exponential_distribution<double> expo(1.0);
    Vector theta(poly->vertices.size());
    double total = 0.0;
    for (double& t : theta) total += (t = expo(rng));
    Vector x(n, 0.0);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) x[k] += theta[i] / total * poly->vertices[i][k];
    }
    return x;
  }
  if (const auto* box = set.as<Box>()) {
    Vector x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = box->lower[k] + unit(rng) * (box->upper[k] - box->lower[k]);
    return x;
  }
  const auto& ball = *set.as<NormBall>();
  Vector u(n);
  switch (ball.ball_norm) {
    case Norm::LInf:
      for (double& e : u) e = 2.0 * unit(rng) - 1.0;
      break;
    case Norm::L2: {
      std::normal_distribution<double> gauss;
      for (double& e : u) e = gauss(rng);
      const double len = norm(u, Norm::L2);
      const double scale = len > 0.0 ? std::pow(unit(rng), 1.0 / static_cast<double>(n)) / len : 0.0;
      for (double& e : u) e *= scale;
      break;
    }
    case Norm::L1: {
      std::exponential_distribution<double> expo(1.0);
      double total = expo(rng);
      for (double& e : u) total += (e = expo(rng));
      for (double& e : u) e = (unit(rng) < 0.5 ? -e : e) / total;
      break;
    }
  }
  for (std::size_t k = 0; k < n; ++k) u[k] = ball.center[k] + ball.radius * u[k];
  return u;
}

std::pair<Vector, Vector> bounding_box(const FeasibleSet& set) {
  const std::size_t n = set.dimension();
  if (const auto* box = set.as<Box>()) return {box->lower, box->upper};
  if (const auto* ball = set.as<NormBall>()) {
    Vector lo(ball->center), hi(ball->center);
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] -= ball->radius;
      hi[k] += ball->radius;
    }
    return {lo, hi};
  }
  const auto& poly = *set.as<VPolytope>();
  Vector lo(poly.vertices.front()), hi(poly.vertices.front());
  for (const Vector& v : poly.vertices) {
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  }
  return {lo, hi};
}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::UnsupportedCombination:
      return "UnsupportedCombination";
    case ErrorCode::NotInFeasibleSet:
      return "NotInFeasibleSet";
    case ErrorCode::InvalidAlpha:
      return "InvalidAlpha";
    case ErrorCode::NumericalBreakdown:
      return "NumericalBreakdown";
    case ErrorCode::DimensionTooLarge:
      return "DimensionTooLarge";
    case ErrorCode::InfeasibleGrid:
      return "InfeasibleGrid";
  }
  return "Unknown";
}

}  // namespace regretdro
