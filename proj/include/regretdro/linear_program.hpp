#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "regretdro/geometry.hpp"

namespace regretdro {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// minimize c'z  s.t.  A z <= b,  E z = d,  lo <= z <= hi.
///
/// Rows are dense over all variables, so every variable has to be declared
/// before the first row is added.
struct LinearProgram {
  Vector objective;
  std::vector<Vector> ineq_rows;
  Vector ineq_rhs;
  std::vector<Vector> eq_rows;
  Vector eq_rhs;
  Vector lower;
  Vector upper;
  std::vector<std::string> names;

  std::size_t num_variables() const noexcept { return objective.size(); }

  std::size_t add_variable(std::string name, double lo, double hi, double cost = 0.0);
  Vector zero_row() const { return Vector(num_variables(), 0.0); }
  void add_inequality(Vector row, double rhs);
  void add_equality(Vector row, double rhs);

  /// Throws InvalidArgument on inconsistent sizes, non-finite rhs, or an
  /// empty variable list.
  void validate() const;
};

/// Plain-text rendering: an objective line, one `a_1 ... a_k <= b` line per
/// inequality, one `a_1 ... a_k = d` line per equality, then `bound` lines.
/// Numbers use 17 significant digits.
std::string export_text(const LinearProgram& lp);

/// Locale-independent shortest-safe rendering with 17 significant digits.
std::string format_number(double value);

}  // namespace regretdro
