#include "regretdro/linear_program.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "regretdro/errors.hpp"

namespace regretdro {

std::size_t LinearProgram::add_variable(std::string name, double lo, double hi, double cost) {
  if (!ineq_rows.empty() || !eq_rows.empty()) {
    throw Error(ErrorCode::InvalidArgument, "LinearProgram: variables must precede rows");
  }
  if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInf || hi == -kInf) {
    throw Error(ErrorCode::InvalidArgument, "LinearProgram: invalid bounds for " + name);
  }
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  names.push_back(std::move(name));
  return objective.size() - 1;
}

void LinearProgram::add_inequality(Vector row, double rhs) {
  if (row.size() != num_variables()) {
    throw Error(ErrorCode::DimensionMismatch, "LinearProgram: inequality row has wrong width");
  }
  ineq_rows.push_back(std::move(row));
  ineq_rhs.push_back(rhs);
}

void LinearProgram::add_equality(Vector row, double rhs) {
  if (row.size() != num_variables()) {
    throw Error(ErrorCode::DimensionMismatch, "LinearProgram: equality row has wrong width");
  }
  eq_rows.push_back(std::move(row));
  eq_rhs.push_back(rhs);
}

void LinearProgram::validate() const {
  const std::size_t n = num_variables();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "LinearProgram: no variables");
  if (lower.size() != n || upper.size() != n || names.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "LinearProgram: bound or name list size mismatch");
  }
  if (ineq_rows.size() != ineq_rhs.size() || eq_rows.size() != eq_rhs.size()) {
    throw Error(ErrorCode::InvalidArgument, "LinearProgram: row/rhs count mismatch");
  }
  for (double c : objective) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "LinearProgram: non-finite cost");
  }
  auto check_rows = [n](const std::vector<Vector>& rows, const Vector& rhs) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != n) {
        throw Error(ErrorCode::InvalidArgument, "LinearProgram: row width mismatch");
      }
      if (!std::isfinite(rhs[i])) {
        throw Error(ErrorCode::InvalidArgument, "LinearProgram: non-finite right-hand side");
      }
      for (double a : rows[i]) {
        if (!std::isfinite(a)) {
          throw Error(ErrorCode::InvalidArgument, "LinearProgram: non-finite coefficient");
        }
      }
    }
  };
  check_rows(ineq_rows, ineq_rhs);
  check_rows(eq_rows, eq_rhs);
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  const auto result =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), result.ptr);
}

std::string export_text(const LinearProgram& lp) {
  lp.validate();
  std::ostringstream out;
  auto write_row = [&out](const Vector& row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ' ';
      out << format_number(row[j]);
    }
  };
  out << "minimize ";
  write_row(lp.objective);
  out << '\n';
  for (std::size_t i = 0; i < lp.ineq_rows.size(); ++i) {
    write_row(lp.ineq_rows[i]);
    out << " <= " << format_number(lp.ineq_rhs[i]) << '\n';
  }
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) {
    write_row(lp.eq_rows[i]);
    out << " = " << format_number(lp.eq_rhs[i]) << '\n';
  }
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    out << "bound " << lp.names[j] << ' ' << format_number(lp.lower[j]) << ' '
        << format_number(lp.upper[j]) << '\n';
  }
  return out.str();
}

}  // namespace regretdro
