#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "regretdro/regretdro.h"

namespace {

rdro_set* make_disk() {
  const double center[2] = {1, 1};
  rdro_set* set = nullptr;
  REQUIRE(rdro_set_create_norm_ball(2, center, 1.0, RDRO_NORM_L2, &set) == RDRO_OK);
  return set;
}

rdro_set* make_triangle() {
  const double v[6] = {0, 0, 1, 0, 0, 1};
  rdro_set* set = nullptr;
  REQUIRE(rdro_set_create_vpolytope(2, 3, v, &set) == RDRO_OK);
  return set;
}

rdro_dist* make_dirac(double a, double b) {
  const double atom[2] = {a, b};
  rdro_dist* d = nullptr;
  REQUIRE(rdro_dist_create(2, 1, atom, nullptr, &d) == RDRO_OK);
  return d;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(rdro_version()) == "1.0.0");
  CHECK(std::string(rdro_status_name(RDRO_OK)) == "OK");
  CHECK(std::string(rdro_status_name(RDRO_ERR_UNSUPPORTED_COMBINATION)) == "UnsupportedCombination");
  CHECK(std::string(rdro_solve_status_name(RDRO_SOLVE_ITERATION_LIMIT)) == "ITERATION_LIMIT");
}

TEST_CASE("invalid construction reports codes and messages") {
  rdro_set* set = nullptr;
  const double lo[2] = {1, 0};
  const double hi[2] = {0, 1};
  CHECK(rdro_set_create_box(2, lo, hi, &set) == RDRO_ERR_INVALID_ARGUMENT);
  CHECK(set == nullptr);
  CHECK(std::strlen(rdro_last_error_message()) > 0);

  CHECK(rdro_set_create_box(2, nullptr, hi, &set) == RDRO_ERR_INVALID_ARGUMENT);
  CHECK(rdro_set_create_box(2, lo, hi, nullptr) == RDRO_ERR_INVALID_ARGUMENT);

  const double atoms[2] = {0, 1};
  const double weights[2] = {0.5, 0.6};
  rdro_dist* d = nullptr;
  CHECK(rdro_dist_create(1, 2, atoms, weights, &d) == RDRO_ERR_INVALID_ARGUMENT);
  CHECK(d == nullptr);

  const double c[2] = {0, 0};
  CHECK(rdro_set_create_norm_ball(2, c, -1.0, RDRO_NORM_L2, &set) == RDRO_ERR_INVALID_ARGUMENT);

  // Destroying null handles is a no-op.
  rdro_set_destroy(nullptr);
  rdro_dist_destroy(nullptr);
  rdro_report_destroy(nullptr);
}

TEST_CASE("geometry queries through handles") {
  rdro_set* tri = make_triangle();
  CHECK(rdro_set_dimension(tri) == 2);
  const double y[2] = {2, 3};
  double value = 0;
  REQUIRE(rdro_support_function(tri, y, &value) == RDRO_OK);
  CHECK(value == doctest::Approx(3.0));
  REQUIRE(rdro_min_cost(tri, y, &value) == RDRO_OK);
  CHECK(value == doctest::Approx(0.0));

  const double x[2] = {0, 0};
  double witness[2] = {0, 0};
  REQUIRE(rdro_farthest_distance(tri, x, RDRO_NORM_LINF, &value, witness) == RDRO_OK);
  CHECK(value == doctest::Approx(1.0));
  REQUIRE(rdro_farthest_distance(tri, x, RDRO_NORM_L1, &value, nullptr) == RDRO_OK);
  CHECK(value == doctest::Approx(1.0));

  int inside = 0;
  const double out_point[2] = {1, 1};
  REQUIRE(rdro_contains(tri, out_point, 1e-9, &inside) == RDRO_OK);
  CHECK(inside == 0);

  double sample[2];
  double again[2];
  REQUIRE(rdro_sample_point(tri, 5, sample) == RDRO_OK);
  REQUIRE(rdro_sample_point(tri, 5, again) == RDRO_OK);
  CHECK(sample[0] == again[0]);
  CHECK(sample[1] == again[1]);
  REQUIRE(rdro_contains(tri, sample, 1e-9, &inside) == RDRO_OK);
  CHECK(inside == 1);

  rdro_set* box = nullptr;
  const double lo[2] = {0, 0};
  const double hi[2] = {1, 1};
  REQUIRE(rdro_set_create_box(2, lo, hi, &box) == RDRO_OK);
  CHECK(rdro_farthest_distance(box, x, RDRO_NORM_L1, &value, nullptr) == RDRO_ERR_UNSUPPORTED_COMBINATION);
  rdro_set_destroy(box);
  rdro_set_destroy(tri);
}

TEST_CASE("evaluation and transport distance") {
  rdro_set* tri = make_triangle();
  rdro_dist* d = make_dirac(1, 1);
  const double x[2] = {0.5, 0.5};
  const double w[2] = {1, 1};
  double value = 0;
  REQUIRE(rdro_regret(tri, x, w, &value) == RDRO_OK);
  CHECK(value == doctest::Approx(1.0));
  REQUIRE(rdro_worst_case_expected_regret(tri, x, d, 2.0, RDRO_NORM_L1, &value) == RDRO_OK);
  CHECK(value == doctest::Approx(1.0 + 2.0 * 0.5));
  REQUIRE(rdro_worst_case_cvar_regret(tri, x, d, 2.0, RDRO_NORM_L1, 0.5, &value) == RDRO_OK);
  CHECK(value == doctest::Approx(1.0 + 2.0 / 0.5 * 0.5));
  CHECK(rdro_worst_case_cvar_regret(tri, x, d, 2.0, RDRO_NORM_L1, 1.0, &value) == RDRO_ERR_INVALID_ALPHA);

  const double outside[2] = {2, 2};
  CHECK(rdro_worst_case_expected_regret(tri, outside, d, 1.0, RDRO_NORM_L1, &value) ==
        RDRO_ERR_NOT_IN_FEASIBLE_SET);

  rdro_dist* e = make_dirac(4, 5);
  REQUIRE(rdro_w1_distance(d, e, RDRO_NORM_L2, &value) == RDRO_OK);
  CHECK(value == doctest::Approx(5.0));
  rdro_dist* one = nullptr;
  const double atom[1] = {0};
  REQUIRE(rdro_dist_create(1, 1, atom, nullptr, &one) == RDRO_OK);
  CHECK(rdro_dist_dimension(one) == 1);
  CHECK(rdro_w1_distance(d, one, RDRO_NORM_L2, &value) == RDRO_ERR_DIMENSION_MISMATCH);

  rdro_dist_destroy(one);
  rdro_dist_destroy(e);
  rdro_dist_destroy(d);
  rdro_set_destroy(tri);
}

TEST_CASE("solving the disk instance") {
  rdro_set* disk = make_disk();
  rdro_dist* d = make_dirac(-0.5, 2);
  rdro_report* report = nullptr;
  REQUIRE(rdro_solve(disk, d, RDRO_OBJECTIVE_DRRO, 10.0, 0.0, RDRO_NORM_L1, nullptr, &report) == RDRO_OK);
  REQUIRE(rdro_report_dimension(report) == 2);
  double x[2];
  rdro_report_x(report, x);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rdro_report_status(report) == RDRO_SOLVE_OPTIMAL);
  CHECK(std::string(rdro_report_method(report)) == "SUBGRADIENT");
  CHECK(rdro_report_iterations(report) > 0);
  CHECK(rdro_report_lambda(report) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rdro_report_residual(report) <= 1e-9);
  CHECK(rdro_report_non_unique(report) == 0);
  rdro_report_destroy(report);

  REQUIRE(rdro_solve(disk, d, RDRO_OBJECTIVE_DRO, 10.0, 0.0, RDRO_NORM_L1, nullptr, &report) == RDRO_OK);
  rdro_report_x(report, x);
  CHECK(x[0] == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-6));
  rdro_report_destroy(report);

  rdro_solver_options options;
  rdro_solver_options_default(&options);
  CHECK(options.method == RDRO_METHOD_AUTO);
  CHECK(options.max_iter == 50000);
  options.method = RDRO_METHOD_SIMPLEX;
  report = nullptr;
  CHECK(rdro_solve(disk, d, RDRO_OBJECTIVE_DRRO, 1.0, 0.0, RDRO_NORM_L1, &options, &report) ==
        RDRO_ERR_UNSUPPORTED_COMBINATION);
  CHECK(report == nullptr);
  CHECK(std::string(rdro_last_error_message()).find("norm_ball") != std::string::npos);

  rdro_dist_destroy(d);
  rdro_set_destroy(disk);
}

TEST_CASE("cvar objective at level zero agrees with the regret objective") {
  rdro_set* tri = make_triangle();
  const double atoms[4] = {1, -2, -1, 0.5};
  rdro_dist* d = nullptr;
  REQUIRE(rdro_dist_create(2, 2, atoms, nullptr, &d) == RDRO_OK);
  rdro_report* a = nullptr;
  rdro_report* b = nullptr;
  REQUIRE(rdro_solve(tri, d, RDRO_OBJECTIVE_DRRO, 0.7, 0.0, RDRO_NORM_L1, nullptr, &a) == RDRO_OK);
  REQUIRE(rdro_solve(tri, d, RDRO_OBJECTIVE_WCVAR, 0.7, 0.0, RDRO_NORM_L1, nullptr, &b) == RDRO_OK);
  CHECK(std::abs(rdro_report_objective(a) - rdro_report_objective(b)) <= 1e-8);
  rdro_report* bad = nullptr;
  CHECK(rdro_solve(tri, d, RDRO_OBJECTIVE_WCVAR, 0.7, 1.5, RDRO_NORM_L1, nullptr, &bad) == RDRO_ERR_INVALID_ALPHA);
  CHECK(bad == nullptr);
  rdro_report_destroy(a);
  rdro_report_destroy(b);
  rdro_dist_destroy(d);
  rdro_set_destroy(tri);
}

TEST_CASE("regularizer argmin") {
  rdro_set* tri = make_triangle();
  double x[2];
  double value = 0;
  REQUIRE(rdro_regularizer_argmin(tri, RDRO_NORM_L1, nullptr, x, &value) == RDRO_OK);
  CHECK(x[0] == doctest::Approx(0.5));
  CHECK(x[1] == doctest::Approx(0.5));
  CHECK(value == doctest::Approx(0.5));

  rdro_set* disk = make_disk();
  REQUIRE(rdro_regularizer_argmin(disk, RDRO_NORM_L1, nullptr, x, nullptr) == RDRO_OK);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-6));
  rdro_set_destroy(disk);
  rdro_set_destroy(tri);
}

TEST_CASE("certificates and builder equivalence") {
  rdro_set* disk = make_disk();
  rdro_dist* d = make_dirac(-0.5, 2);
  const double x[2] = {1, 1};
  rdro_certificate cert{};
  REQUIRE(rdro_certify(disk, x, d, 1.0, RDRO_NORM_L1, -1.0, 1e-2, 4, &cert) == RDRO_OK);
  CHECK(cert.gap < 1e-2);
  CHECK(cert.tolerance_reached == 1);
  CHECK(cert.lambda_star == doctest::Approx(1.0));
  REQUIRE(rdro_certify(disk, x, d, 0.0, RDRO_NORM_L1, 0.5, 2e-2, 4, &cert) == RDRO_OK);
  CHECK(cert.gap == 0.0);

  rdro_set* tri = make_triangle();
  double delta = 1.0;
  REQUIRE(rdro_builder_equivalence(tri, d, 0.8, &delta) == RDRO_OK);
  CHECK(delta <= 1e-8);
  CHECK(rdro_builder_equivalence(disk, d, 0.8, &delta) == RDRO_ERR_UNSUPPORTED_COMBINATION);

  rdro_set_destroy(tri);
  rdro_dist_destroy(d);
  rdro_set_destroy(disk);
}

TEST_CASE("LP export follows the buffer protocol") {
  rdro_set* tri = make_triangle();
  rdro_dist* d = make_dirac(1, 1);
  size_t needed = 0;
  CHECK(rdro_export_lp(tri, d, RDRO_OBJECTIVE_DRRO, 1.0, 0.0, RDRO_NORM_L1, nullptr, 0, &needed) ==
        RDRO_ERR_BUFFER_TOO_SMALL);
  REQUIRE(needed > 1);
  std::vector<char> small(needed - 1, 'x');
  CHECK(rdro_export_lp(tri, d, RDRO_OBJECTIVE_DRRO, 1.0, 0.0, RDRO_NORM_L1, small.data(), small.size(),
                       &needed) == RDRO_ERR_BUFFER_TOO_SMALL);
  std::vector<char> buffer(needed);
  REQUIRE(rdro_export_lp(tri, d, RDRO_OBJECTIVE_DRRO, 1.0, 0.0, RDRO_NORM_L1, buffer.data(), buffer.size(),
                         &needed) == RDRO_OK);
  const std::string text(buffer.data());
  CHECK(text.size() + 1 == needed);
  CHECK(text.rfind("minimize ", 0) == 0);
  CHECK(text.find("bound lambda 0 inf") != std::string::npos);

  rdro_set* disk = make_disk();
  CHECK(rdro_export_lp(disk, d, RDRO_OBJECTIVE_DRRO, 1.0, 0.0, RDRO_NORM_L1, buffer.data(), buffer.size(),
                       &needed) == RDRO_ERR_UNSUPPORTED_COMBINATION);
  rdro_set_destroy(disk);
  rdro_dist_destroy(d);
  rdro_set_destroy(tri);
}
