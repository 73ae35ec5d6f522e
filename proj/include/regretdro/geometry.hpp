#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace regretdro {

using Vector = std::vector<double>;

/// Absolute tolerance used for scalar comparisons throughout the library.
inline constexpr double kAbsTol = 1e-9;

enum class Norm { L1, L2, LInf };

/// Dual of a p-norm: L1 <-> LInf, L2 <-> L2.
constexpr Norm dual(Norm k) noexcept {
  switch (k) {
    case Norm::L1:
      return Norm::LInf;
    case Norm::LInf:
      return Norm::L1;
    case Norm::L2:
      break;
  }
  return Norm::L2;
}

double norm(std::span<const double> v, Norm k);
std::string_view to_string(Norm k) noexcept;
std::optional<Norm> parse_norm(std::string_view name) noexcept;

/// An element of the subdifferential of the norm at u. Ties in the LInf case
/// resolve to the lowest coordinate index; u = 0 yields the zero vector.
Vector norm_subgradient(std::span<const double> u, Norm k);

struct VPolytope {
  std::vector<Vector> vertices;
};

struct Box {
  Vector lower;
  Vector upper;
};

struct NormBall {
  Vector center;
  double radius = 0.0;
  Norm ball_norm = Norm::L2;
};

/// Nonempty compact feasible region. Immutable once built; the factories
/// validate the shape invariants and throw Error on violation.
class FeasibleSet {
 public:
  using Shape = std::variant<VPolytope, Box, NormBall>;

  static FeasibleSet vpolytope(std::vector<Vector> vertices);
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet norm_ball(Vector center, double radius, Norm ball_norm);

  std::size_t dimension() const noexcept { return dim_; }
  const Shape& shape() const noexcept { return shape_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&shape_);
  }

  std::string_view kind_name() const noexcept;

 private:
  FeasibleSet(Shape shape, std::size_t dim) : shape_(std::move(shape)), dim_(dim) {}

  Shape shape_;
  std::size_t dim_;
};

/// sup over the set of x'y.
double support_function(const FeasibleSet& set, std::span<const double> y);

/// A maximizer of x'y over the set. Vertex ties go to the lowest index; for a
/// box, coordinates with y_i = 0 take the lower bound.
Vector support_argmax(const FeasibleSet& set, std::span<const double> y);

/// inf over the set of w'y, i.e. -support_function(set, -w).
double min_cost(const FeasibleSet& set, std::span<const double> w);

struct FarthestPoint {
  double distance = 0.0;
  Vector witness;
};

/// Whether farthest_distance has an exact evaluation for this pair. The
/// supported matrix is: any V-polytope with any norm, any set with LInf, and
/// an L2 ball with L2.
bool supports_farthest(const FeasibleSet& set, Norm dual_norm) noexcept;

/// sup over v in the set of ||x - v|| in the given (dual) norm, plus a
/// maximizing witness. Throws UnsupportedCombination outside the supported
/// matrix; general norm maximization over a convex set is NP-hard.
FarthestPoint farthest_distance(const FeasibleSet& set, std::span<const double> x,
                                Norm dual_norm);

/// Vertex enumeration: max_i ||x - v_i||. Lowest index wins ties.
FarthestPoint farthest_distance_vertices(const VPolytope& poly, std::span<const double> x,
                                         Norm dual_norm);

/// LInf distance through 2n support-function evaluations:
/// max_i max(sigma(e_i) - x_i, sigma(-e_i) + x_i). Valid for any set.
FarthestPoint farthest_distance_axes(const FeasibleSet& set, std::span<const double> x);

/// Distance-like violation measure: 0 inside the set. For V-polytopes this is
/// the minimal L1 residual of a convex-combination fit, found by LP.
double infeasibility(const FeasibleSet& set, std::span<const double> x);

bool contains(const FeasibleSet& set, std::span<const double> x, double tol);

bool supports_projection(const FeasibleSet& set) noexcept;

/// Euclidean projection. Only boxes and L2 balls are supported.
Vector project(const FeasibleSet& set, std::span<const double> x);

/// A random point of the set (not necessarily uniform for V-polytopes).
Vector sample_point(const FeasibleSet& set, std::mt19937_64& rng);

/// Axis-aligned bounding box of the set as (lower, upper).
std::pair<Vector, Vector> bounding_box(const FeasibleSet& set);

}  // namespace regretdro
