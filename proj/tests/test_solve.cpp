#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "regretdro/errors.hpp"
#include "regretdro/solve.hpp"
#include "support.hpp"

using namespace regretdro;
using testing_support::dist;

namespace {

FeasibleSet disk() { return FeasibleSet::norm_ball({1, 1}, 1, Norm::L2); }
FeasibleSet triangle() { return FeasibleSet::vpolytope({{0, 0}, {1, 0}, {0, 1}}); }
DiscreteDistribution disk_atom() { return DiscreteDistribution::dirac({-0.5, 2}); }

// For small radii the optimum lies on the circle, so a fine angular scan of
// the boundary is an exact enough oracle.
testing_support::GridResult boundary_scan(const std::function<double(const Vector&)>& f) {
  testing_support::GridResult best;
  const int steps = 2000000;
  for (int i = 0; i < steps; ++i) {
    const double t = 2 * M_PI * i / steps;
    const Vector p{1 + std::cos(t), 1 + std::sin(t)};
    const double v = f(p);
    if (v < best.value) {
      best.value = v;
      best.argmin = p;
    }
  }
  return best;
}

SolveOptions subgradient_only() {
  SolveOptions o;
  o.method = MethodChoice::Subgradient;
  return o;
}

SolveOptions simplex_only() {
  SolveOptions o;
  o.method = MethodChoice::Simplex;
  return o;
}

}  // namespace

TEST_CASE("disk instance: regret solutions at both ends of the radius range") {
  const SolveReport big = solve_drro(disk(), AmbiguitySet(disk_atom(), 10.0, Norm::L1));
  CHECK(big.method == Method::Subgradient);
  CHECK(big.status == SolveStatus::Optimal);
  CHECK(big.x_star[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(big.x_star[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(big.lambda_star == doctest::Approx(1.0).epsilon(1e-6));

  const SolveReport small = solve_drro(disk(), AmbiguitySet(disk_atom(), 0.01, Norm::L1));
  REQUIRE(small.status == SolveStatus::Optimal);
  // (1.2425, 0.0299) is the small-radius limit to four digits.
  CHECK(std::abs(small.x_star[0] - 1.2425) <= 5e-3);
  CHECK(std::abs(small.x_star[1] - 0.0299) <= 5e-3);
  const auto scan = boundary_scan([](const Vector& p) {
    return -0.5 * p[0] + 2 * p[1] + 0.01 * (1 + std::max(std::abs(p[0] - 1), std::abs(p[1] - 1)));
  });
  CHECK(dist(small.x_star, scan.argmin, Norm::L2) <= 1e-4);
  CompositeObjective obj{ObjectiveKind::ExpectedRegret, disk_atom(), 0.01, Norm::LInf, 0.0};
  CHECK(evaluate(disk(), obj, small.x_star) <= scan.value + 1e-9);
}

TEST_CASE("disk instance: cost solutions") {
  const SolveReport big = solve_dro(disk(), AmbiguitySet(disk_atom(), 10.0, Norm::L1));
  REQUIRE(big.status == SolveStatus::Optimal);
  const double corner = 1.0 - 1.0 / std::sqrt(2.0);
  CHECK(big.x_star[0] == doctest::Approx(corner).epsilon(1e-6));
  CHECK(big.x_star[1] == doctest::Approx(corner).epsilon(1e-6));

  const SolveReport small = solve_dro(disk(), AmbiguitySet(disk_atom(), 0.01, Norm::L1));
  CHECK(std::abs(small.x_star[0] - 1.2425) <= 5e-3);
  CHECK(std::abs(small.x_star[1] - 0.0299) <= 5e-3);
  const auto scan = boundary_scan([](const Vector& p) {
    return -0.5 * p[0] + 2 * p[1] + 0.01 * std::max(std::abs(p[0]), std::abs(p[1]));
  });
  CHECK(dist(small.x_star, scan.argmin, Norm::L2) <= 1e-4);
}

TEST_CASE("triangle with a huge radius sits at the center of the vertices") {
  const SolveReport s = solve_drro(triangle(), AmbiguitySet(DiscreteDistribution::dirac({1, 1}), 1e6, Norm::L1));
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.x_star[0] == doctest::Approx(0.5));
  CHECK(s.x_star[1] == doctest::Approx(0.5));
  CHECK(s.lambda_star == doctest::Approx(0.5));
}

TEST_CASE("a flat face of optima is reported as non-unique") {
  const SolveReport s = solve_drro(triangle(), AmbiguitySet(DiscreteDistribution::dirac({-1, -1}), 0.0, Norm::L1));
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.non_unique);
  CHECK(s.objective == doctest::Approx(0.0).scale(1.0));
  CHECK(s.x_star[0] + s.x_star[1] == doctest::Approx(1.0));

  const SolveReport unique =
      solve_drro(triangle(), AmbiguitySet(DiscreteDistribution::dirac({1, 2}), 0.0, Norm::L1));
  CHECK_FALSE(unique.non_unique);
}

TEST_CASE("cost problem on a symmetric box") {
  const FeasibleSet box = FeasibleSet::box({-1, -1}, {1, 1});
  const SolveReport s = solve_dro(box, AmbiguitySet(DiscreteDistribution::dirac({1, 0}), 0.5, Norm::L1));
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-0.5));
  CHECK(s.x_star[0] == doctest::Approx(-1.0));

  const SolveReport sg = solve_dro(box, AmbiguitySet(DiscreteDistribution::dirac({1, 0}), 0.5, Norm::L1),
                                   subgradient_only());
  CHECK(sg.objective == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("cvar at level zero is the expected regret") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = testing_support::random_count(rng, 1, 3);
    const FeasibleSet set = trial % 2 ? testing_support::random_box(rng, n) : testing_support::random_vpolytope(rng, n);
    const AmbiguitySet amb(testing_support::random_distribution(rng, n),
                           std::uniform_real_distribution<double>(0, 2)(rng), Norm::L1);
    const SolveReport a = solve_drro(set, amb);
    const SolveReport b = solve_wcvar(set, amb, RiskLevel(0.0));
    CHECK(std::abs(a.objective - b.objective) <= 1e-8);
  }
}

TEST_CASE("cvar on the box with two opposed atoms matches a grid scan") {
  const FeasibleSet box = FeasibleSet::box({0, 0}, {1, 1});
  const DiscreteDistribution p0({{1, -1}, {-1, 1}}, {0.5, 0.5});
  const AmbiguitySet amb(p0, 0.1, Norm::L1);
  const SolveReport s = solve_wcvar(box, amb, RiskLevel(0.5));
  const auto scan = testing_support::grid_min_2d(
      0, 1, 0, 1, 1e-3, [](const Vector&) { return true; },
      [&](const Vector& p) {
        const Vector regrets = atom_regrets(box, p, p0);
        const double c = testing_support::cvar_tau_grid(regrets, p0.weights(), 0.5, 1e-3);
        const double far = std::max({p[0], 1 - p[0], p[1], 1 - p[1]});
        return c + 0.1 / 0.5 * far;
      });
  CHECK(std::abs(s.objective - scan.value) <= 2e-3);
  CHECK(s.objective <= scan.value + 1e-9);

  const SolveReport sg = solve_wcvar(box, amb, RiskLevel(0.5), subgradient_only());
  CHECK(std::abs(sg.objective - s.objective) <= 1e-4);
}

TEST_CASE("subgradient solutions are feasible and beat random points") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t n = testing_support::random_count(rng, 1, 3);
    const bool ball = trial % 2 == 0;
    const FeasibleSet set = ball ? testing_support::random_l2_ball(rng, n) : testing_support::random_box(rng, n);
    const Norm ground = ball && trial % 4 == 0 ? Norm::L2 : Norm::L1;
    const AmbiguitySet amb(testing_support::random_distribution(rng, n),
                           std::uniform_real_distribution<double>(0, 3)(rng), ground);
    const SolveReport s = solve_drro(set, amb, subgradient_only());
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(contains(set, s.x_star, 1e-9));
    for (int k = 0; k < 200; ++k) {
      const Vector y = sample_point(set, rng);
      CHECK(s.objective <= worst_case_expected_regret(set, y, amb) + 1e-6);
    }
  }
}

TEST_CASE("simplex solutions beat random points") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = testing_support::random_count(rng, 1, 3);
    const FeasibleSet set = testing_support::random_vpolytope(rng, n);
    const AmbiguitySet amb(testing_support::random_distribution(rng, n),
                           std::uniform_real_distribution<double>(0, 3)(rng), trial % 2 ? Norm::L1 : Norm::LInf);
    const SolveReport s = solve_drro(set, amb);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.method == Method::Simplex);
    CHECK(std::abs(s.lambda_star - farthest_distance(set, s.x_star, dual(amb.ground_norm)).distance) <= 1e-6);
    for (int k = 0; k < 200; ++k) {
      const Vector y = sample_point(set, rng);
      CHECK(s.objective <= worst_case_expected_regret(set, y, amb) + 1e-7);
    }
  }
}

TEST_CASE("optimal value grows with the radius") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = testing_support::random_count(rng, 1, 3);
    const FeasibleSet set = testing_support::random_vpolytope(rng, n);
    const DiscreteDistribution p0 = testing_support::random_distribution(rng, n);
    double previous = -kInf;
    for (double r : {0.0, 0.01, 0.1, 0.5, 1.0, 4.0, 100.0}) {
      const double value = solve_drro(set, AmbiguitySet(p0, r, Norm::L1)).objective;
      CHECK(value >= previous - 1e-12);
      previous = value;
    }
  }
}

TEST_CASE("simplex and subgradient agree on boxes") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = testing_support::random_count(rng, 1, 3);
    const FeasibleSet set = testing_support::random_box(rng, n);
    const AmbiguitySet amb(testing_support::random_distribution(rng, n),
                           std::uniform_real_distribution<double>(0, 3)(rng), Norm::L1);
    const SolveReport lp = solve_drro(set, amb, simplex_only());
    const SolveReport sg = solve_drro(set, amb, subgradient_only());
    CHECK(std::abs(lp.objective - sg.objective) <= 1e-4);
  }
}

TEST_CASE("the subgradient method is deterministic for a seed") {
  const AmbiguitySet amb(disk_atom(), 0.3, Norm::L1);
  SolveOptions options = subgradient_only();
  options.subgradient.seed = 7;
  const SolveReport a = solve_drro(disk(), amb, options);
  const SolveReport b = solve_drro(disk(), amb, options);
  CHECK(a.x_star == b.x_star);
  CHECK(a.iterations == b.iterations);
  options.subgradient.seed = 0;
  const SolveReport c = solve_drro(disk(), amb, options);
  CHECK(dist(a.x_star, c.x_star, Norm::L2) <= 1e-5);
}

TEST_CASE("an iteration budget that is too small is reported") {
  SolveOptions options = subgradient_only();
  options.subgradient.max_iter = 5;
  const SolveReport s = solve_drro(disk(), AmbiguitySet(disk_atom(), 1.0, Norm::L1), options);
  CHECK(s.status == SolveStatus::IterationLimit);
  CHECK(s.iterations == 5);
  CHECK(contains(disk(), s.x_star, 1e-9));
}

TEST_CASE("unsupported solver routes throw") {
  const AmbiguitySet l2(DiscreteDistribution::dirac({1, 1}), 1.0, Norm::L2);
  const AmbiguitySet l1(DiscreteDistribution::dirac({1, 1}), 1.0, Norm::L1);
  auto code = [](auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code([&] { solve_drro(triangle(), l2); }) == ErrorCode::UnsupportedCombination);
  CHECK(code([&] { solve_drro(triangle(), l1, subgradient_only()); }) == ErrorCode::UnsupportedCombination);
  CHECK(code([&] { solve_drro(disk(), l1, simplex_only()); }) == ErrorCode::UnsupportedCombination);
  CHECK(code([&] { solve_drro(FeasibleSet::box({0, 0}, {1, 1}), l2); }) == ErrorCode::UnsupportedCombination);
  SolveOptions bad = subgradient_only();
  bad.subgradient.step = 0.0;
  CHECK(code([&] { solve_drro(disk(), l1, bad); }) == ErrorCode::InvalidArgument);
  CHECK_THROWS_AS(RiskLevel(1.0), Error);
}
