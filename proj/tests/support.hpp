// Independent reference computations and random instance generators shared
// by the unit tests and the acceptance runner. Nothing here calls the solver
// code paths being checked.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "regretdro/geometry.hpp"
#include "regretdro/regret.hpp"

namespace testing_support {

using regretdro::FeasibleSet;
using regretdro::Norm;
using regretdro::Vector;

inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double dist(const Vector& a, const Vector& b, Norm k) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (k == Norm::L1) s += d;
    if (k == Norm::L2) s += d * d;
    if (k == Norm::LInf) s = std::max(s, d);
  }
  return k == Norm::L2 ? std::sqrt(s) : s;
}

// Membership tests written from the definitions, without the library.
inline bool in_box(const Vector& x, const Vector& lo, const Vector& hi, double tol = 1e-12) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  }
  return true;
}

inline bool in_disk(const Vector& x, const Vector& c, double rho, double tol = 1e-12) {
  return dist(x, c, Norm::L2) <= rho + tol;
}

inline bool in_triangle(const Vector& x, double tol = 1e-12) {
  return x[0] >= -tol && x[1] >= -tol && x[0] + x[1] <= 1.0 + tol;
}

struct GridResult {
  double value = std::numeric_limits<double>::infinity();
  Vector argmin;
};

// Exhaustive minimization of f over a 2-D grid restricted by member().
inline GridResult grid_min_2d(double x0, double x1, double y0, double y1, double step,
                              const std::function<bool(const Vector&)>& member,
                              const std::function<double(const Vector&)>& f) {
  GridResult best;
  const auto nx = static_cast<long>(std::floor((x1 - x0) / step + 1e-9));
  const auto ny = static_cast<long>(std::floor((y1 - y0) / step + 1e-9));
  for (long i = 0; i <= nx; ++i) {
    for (long j = 0; j <= ny; ++j) {
      const Vector p{x0 + static_cast<double>(i) * step, y0 + static_cast<double>(j) * step};
      if (!member(p)) continue;
      const double v = f(p);
      if (v < best.value) {
        best.value = v;
        best.argmin = p;
      }
    }
  }
  return best;
}

inline GridResult grid_max_2d(double x0, double x1, double y0, double y1, double step,
                              const std::function<bool(const Vector&)>& member,
                              const std::function<double(const Vector&)>& f) {
  GridResult r = grid_min_2d(x0, x1, y0, y1, step, member, [&](const Vector& p) { return -f(p); });
  r.value = -r.value;
  return r;
}

// CVaR via the variational formula min_tau tau + E[max(v - tau, 0)] / (1 - alpha),
// scanned over a tau grid.
inline double cvar_tau_grid(const Vector& values, const Vector& weights, double alpha, double step) {
  const double lo = *std::min_element(values.begin(), values.end()) - 1.0;
  const double hi = *std::max_element(values.begin(), values.end()) + 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (double tau = lo; tau <= hi + 1e-12; tau += step) {
    double tail = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) tail += weights[j] * std::max(values[j] - tau, 0.0);
    best = std::min(best, tau + tail / (1.0 - alpha));
  }
  // The scan includes every sample value's neighbourhood; also try them exactly.
  for (double tau : values) {
    double tail = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) tail += weights[j] * std::max(values[j] - tau, 0.0);
    best = std::min(best, tau + tail / (1.0 - alpha));
  }
  return best;
}

// min c'x over {x : A x <= b} in two variables by enumerating pairwise
// intersections of constraint lines. Assumes the feasible region is bounded.
inline GridResult lp2_vertex_enumeration(const Vector& c, const std::vector<Vector>& a, const Vector& b) {
  GridResult best;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double det = a[i][0] * a[j][1] - a[i][1] * a[j][0];
      if (std::abs(det) < 1e-12) continue;
      const Vector p{(b[i] * a[j][1] - a[i][1] * b[j]) / det, (a[i][0] * b[j] - b[i] * a[j][0]) / det};
      bool feasible = true;
      for (std::size_t k = 0; k < a.size(); ++k) feasible = feasible && dot(a[k], p) <= b[k] + 1e-9;
      if (feasible && dot(c, p) < best.value) {
        best.value = dot(c, p);
        best.argmin = p;
      }
    }
  }
  return best;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (double& e : v) e = u(rng);
  return v;
}

inline std::size_t random_count(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline FeasibleSet random_vpolytope(std::mt19937_64& rng, std::size_t n, std::size_t max_vertices = 6) {
  std::vector<Vector> v;
  const std::size_t m = random_count(rng, 1, max_vertices);
  for (std::size_t i = 0; i < m; ++i) v.push_back(random_vector(rng, n, -2.0, 2.0));
  return FeasibleSet::vpolytope(std::move(v));
}

inline FeasibleSet random_box(std::mt19937_64& rng, std::size_t n) {
  Vector lo = random_vector(rng, n, -2.0, 1.0);
  Vector hi(n);
  std::uniform_real_distribution<double> width(0.1, 2.0);
  for (std::size_t i = 0; i < n; ++i) hi[i] = lo[i] + width(rng);
  return FeasibleSet::box(std::move(lo), std::move(hi));
}

inline FeasibleSet random_l2_ball(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> rho(0.2, 2.0);
  return FeasibleSet::norm_ball(random_vector(rng, n, -2.0, 2.0), rho(rng), Norm::L2);
}

inline regretdro::DiscreteDistribution random_distribution(std::mt19937_64& rng, std::size_t n,
                                                           std::size_t max_atoms = 5) {
  const std::size_t m = random_count(rng, 1, max_atoms);
  std::vector<Vector> atoms;
  Vector w(m);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    atoms.push_back(random_vector(rng, n, -3.0, 3.0));
    w[j] = u(rng);
    total += w[j];
  }
  for (double& e : w) e /= total;
  return regretdro::DiscreteDistribution(std::move(atoms), std::move(w));
}

}  // namespace testing_support
