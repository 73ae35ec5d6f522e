#include "regretdro/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regretdro/errors.hpp"

namespace regretdro {

const char* to_string(LpStatus status) noexcept {
  switch (status) {
    case LpStatus::Optimal:
      return "OPTIMAL";
    case LpStatus::Infeasible:
      return "INFEASIBLE";
    case LpStatus::Unbounded:
      return "UNBOUNDED";
    case LpStatus::IterationLimit:
      return "ITERATION_LIMIT";
  }
  return "?";
}

namespace {

// How an original variable is expressed through nonnegative columns.
struct ColumnMap {
  enum class Kind { Shift, Negate, Split } kind;
  double offset;  // lo for Shift, hi for Negate
  std::size_t col;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }
  // Row `rows_` holds reduced costs.
  double& cost(std::size_t j) { return at(rows_, j); }
  double cost(std::size_t j) const { return at(rows_, j); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t q) {
    const std::size_t width = cols_ + 1;
    double* prow = &data_[r * width];
    const double inv = 1.0 / prow[q];
    for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double* row = &data_[i * width];
      const double factor = row[q];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) row[j] -= factor * prow[j];
      row[q] = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

enum class PhaseResult { Optimal, Unbounded, IterationLimit };

class SimplexEngine {
 public:
  SimplexEngine(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp), options_(options) {
    build();
  }

  LpSolution run();

 private:
  void build();
  PhaseResult iterate();
  std::size_t ratio_test(std::size_t q) const;
  void set_costs(const Vector& costs);
  Vector structural_values() const;
  Vector original_values(const Vector& s) const;
  bool detect_alternative_optima() const;

  const LinearProgram& lp_;
  const SimplexOptions& options_;

  std::vector<ColumnMap> maps_;
  std::size_t structural_ = 0;
  std::size_t first_artificial_ = 0;
  Tableau tableau_{0, 0};
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
  std::vector<bool> enterable_;
  Vector phase2_costs_;
  std::size_t iterations_ = 0;
};

void SimplexEngine::build() {
  const std::size_t n = lp_.num_variables();
  maps_.reserve(n);
  std::vector<std::size_t> bounded;  // variables needing an explicit upper-bound row
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp_.lower[j];
    const double hi = lp_.upper[j];
    if (std::isfinite(lo)) {
      maps_.push_back({ColumnMap::Kind::Shift, lo, structural_++});
      if (std::isfinite(hi)) bounded.push_back(j);
    } else if (std::isfinite(hi)) {
      maps_.push_back({ColumnMap::Kind::Negate, hi, structural_++});
    } else {
      maps_.push_back({ColumnMap::Kind::Split, 0.0, structural_});
      structural_ += 2;
    }
  }

  // Rows over structural columns: inequalities, bound rows, then equalities.
  struct Row {
    Vector coef;
    double rhs;
    bool inequality;
  };
  std::vector<Row> rows;
  auto transform = [&](const Vector& a, double b, bool inequality) {
    Row row{Vector(structural_, 0.0), b, inequality};
    for (std::size_t j = 0; j < n; ++j) {
      const double aj = a[j];
      if (aj == 0.0) continue;
      const ColumnMap& m = maps_[j];
      switch (m.kind) {
        case ColumnMap::Kind::Shift:
          row.coef[m.col] += aj;
          row.rhs -= aj * m.offset;
          break;
        case ColumnMap::Kind::Negate:
          row.coef[m.col] -= aj;
          row.rhs -= aj * m.offset;
          break;
        case ColumnMap::Kind::Split:
          row.coef[m.col] += aj;
          row.coef[m.col + 1] -= aj;
          break;
      }
    }
    rows.push_back(std::move(row));
  };
  for (std::size_t i = 0; i < lp_.ineq_rows.size(); ++i) transform(lp_.ineq_rows[i], lp_.ineq_rhs[i], true);
  for (std::size_t j : bounded) {
    Row row{Vector(structural_, 0.0), lp_.upper[j] - lp_.lower[j], true};
    row.coef[maps_[j].col] = 1.0;
    rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < lp_.eq_rows.size(); ++i) transform(lp_.eq_rows[i], lp_.eq_rhs[i], false);

  const std::size_t m = rows.size();
  std::size_t slacks = 0;
  for (const Row& row : rows) slacks += row.inequality ? 1 : 0;
  std::vector<bool> needs_artificial(m, false);
  std::size_t artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!rows[i].inequality || rows[i].rhs < 0.0) {
      needs_artificial[i] = true;
      ++artificials;
    }
  }
  first_artificial_ = structural_ + slacks;
  const std::size_t cols = first_artificial_ + artificials;
  tableau_ = Tableau(m, cols);
  basis_.assign(m, 0);
  active_.assign(m, true);
  enterable_.assign(cols, true);
  for (std::size_t j = first_artificial_; j < cols; ++j) enterable_[j] = false;

  std::size_t slack = structural_;
  std::size_t artificial = first_artificial_;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = rows[i].rhs < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < structural_; ++j) tableau_.at(i, j) = sign * rows[i].coef[j];
    tableau_.rhs(i) = sign * rows[i].rhs;
    if (rows[i].inequality) {
      tableau_.at(i, slack) = sign;
      if (!needs_artificial[i]) basis_[i] = slack;
      ++slack;
    }
    if (needs_artificial[i]) {
      tableau_.at(i, artificial) = 1.0;
      basis_[i] = artificial++;
    }
  }

  phase2_costs_.assign(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const ColumnMap& mp = maps_[j];
    const double c = lp_.objective[j];
    switch (mp.kind) {
      case ColumnMap::Kind::Shift:
        phase2_costs_[mp.col] += c;
        break;
      case ColumnMap::Kind::Negate:
        phase2_costs_[mp.col] -= c;
        break;
      case ColumnMap::Kind::Split:
        phase2_costs_[mp.col] += c;
        phase2_costs_[mp.col + 1] -= c;
        break;
    }
  }
}

void SimplexEngine::set_costs(const Vector& costs) {
  const std::size_t cols = tableau_.cols();
  for (std::size_t j = 0; j <= cols; ++j) tableau_.cost(j) = j < cols ? costs[j] : 0.0;
  for (std::size_t i = 0; i < tableau_.rows(); ++i) {
    if (!active_[i]) continue;
    const double cb = costs[basis_[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= cols; ++j) tableau_.cost(j) -= cb * tableau_.at(i, j);
  }
}

std::size_t SimplexEngine::ratio_test(std::size_t q) const {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::size_t leave = none;
  double best = kInf;
  for (std::size_t i = 0; i < tableau_.rows(); ++i) {
    if (!active_[i]) continue;
    const double a = tableau_.at(i, q);
    if (a <= options_.pivot_tol) continue;
    const double ratio = std::max(tableau_.rhs(i), 0.0) / a;
    if (leave == none) {
      leave = i;
      best = ratio;
      continue;
    }
    const double slack = 1e-12 * std::max(1.0, std::abs(best));
    if (ratio < best - slack) {
      leave = i;
      best = ratio;
    } else if (ratio <= best + slack && basis_[i] < basis_[leave]) {
      leave = i;
      best = std::min(best, ratio);
    }
  }
  return leave;
}

PhaseResult SimplexEngine::iterate() {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  for (;;) {
    // Bland: lowest-index improving column.
    std::size_t q = none;
    for (std::size_t j = 0; j < tableau_.cols(); ++j) {
      if (enterable_[j] && tableau_.cost(j) < -options_.pivot_tol) {
        q = j;
        break;
      }
    }
    if (q == none) return PhaseResult::Optimal;
    const std::size_t r = ratio_test(q);
    if (r == none) return PhaseResult::Unbounded;
    if (iterations_ >= options_.max_iterations) return PhaseResult::IterationLimit;
    if (std::abs(tableau_.at(r, q)) < options_.breakdown_tol) {
      throw Error(ErrorCode::NumericalBreakdown, "simplex: pivot magnitude below 1e-12");
    }
    tableau_.pivot(r, q);
    basis_[r] = q;
    ++iterations_;
  }
}

Vector SimplexEngine::structural_values() const {
  Vector s(tableau_.cols(), 0.0);
  for (std::size_t i = 0; i < tableau_.rows(); ++i) {
    if (active_[i]) s[basis_[i]] = tableau_.rhs(i);
  }
  return s;
}

Vector SimplexEngine::original_values(const Vector& s) const {
  Vector z(maps_.size());
  for (std::size_t j = 0; j < maps_.size(); ++j) {
    const ColumnMap& m = maps_[j];
    switch (m.kind) {
      case ColumnMap::Kind::Shift:
        z[j] = m.offset + s[m.col];
        break;
      case ColumnMap::Kind::Negate:
        z[j] = m.offset - s[m.col];
        break;
      case ColumnMap::Kind::Split:
        z[j] = s[m.col] - s[m.col + 1];
        break;
    }
  }
  return z;
}

bool SimplexEngine::detect_alternative_optima() const {
  if (options_.watch.empty()) return false;
  std::vector<bool> is_basic(tableau_.cols(), false);
  for (std::size_t i = 0; i < tableau_.rows(); ++i) {
    if (active_[i]) is_basic[basis_[i]] = true;
  }
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  for (std::size_t q = 0; q < first_artificial_; ++q) {
    if (is_basic[q] || std::abs(tableau_.cost(q)) > options_.pivot_tol) continue;
    const std::size_t r = ratio_test(q);
    double step = 1.0;  // any positive step along an unbounded zero-cost ray
    if (r != none) step = std::max(tableau_.rhs(r), 0.0) / tableau_.at(r, q);
    if (step <= options_.pivot_tol) continue;
    Vector delta(tableau_.cols(), 0.0);
    delta[q] = step;
    for (std::size_t i = 0; i < tableau_.rows(); ++i) {
      if (active_[i]) delta[basis_[i]] = -step * tableau_.at(i, q);
    }
    Vector base(tableau_.cols(), 0.0);
    const Vector z0 = original_values(base);
    const Vector z1 = original_values(delta);
    for (std::size_t w : options_.watch) {
      if (w < z0.size() && std::abs(z1[w] - z0[w]) > options_.alternative_tol) return true;
    }
  }
  return false;
}

LpSolution SimplexEngine::run() {
  LpSolution out;
  const std::size_t m = tableau_.rows();
  const std::size_t cols = tableau_.cols();

  if (first_artificial_ < cols) {
    Vector phase1(cols, 0.0);
    for (std::size_t j = first_artificial_; j < cols; ++j) phase1[j] = 1.0;
    set_costs(phase1);
    const PhaseResult p1 = iterate();
    if (p1 == PhaseResult::IterationLimit) {
      out.status = LpStatus::IterationLimit;
      out.iterations = iterations_;
      return out;
    }
    double infeasibility = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      scale = std::max(scale, std::abs(tableau_.rhs(i)));
      if (basis_[i] >= first_artificial_) infeasibility += std::max(tableau_.rhs(i), 0.0);
    }
    if (infeasibility > 1e-8 * scale) {
      out.status = LpStatus::Infeasible;
      out.iterations = iterations_;
      return out;
    }
    // Drive remaining (zero-level) artificials out of the basis; rows where
    // that is impossible are linearly dependent and get dropped.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis_[i] < first_artificial_) continue;
      std::size_t q = cols;
      double best = options_.pivot_tol;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (std::abs(tableau_.at(i, j)) > best) {
          best = std::abs(tableau_.at(i, j));
          q = j;
        }
      }
      if (q == cols) {
        active_[i] = false;
        continue;
      }
      tableau_.rhs(i) = 0.0;
      tableau_.pivot(i, q);
      basis_[i] = q;
      ++iterations_;
    }
  }

  set_costs(phase2_costs_);
  const PhaseResult p2 = iterate();
  out.iterations = iterations_;
  const Vector s = structural_values();
  out.z = original_values(s);
  out.objective = 0.0;
  for (std::size_t j = 0; j < out.z.size(); ++j) out.objective += lp_.objective[j] * out.z[j];

  double violation = 0.0;
  for (std::size_t i = 0; i < lp_.ineq_rows.size(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < out.z.size(); ++j) lhs += lp_.ineq_rows[i][j] * out.z[j];
    violation = std::max(violation, lhs - lp_.ineq_rhs[i]);
  }
  for (std::size_t i = 0; i < lp_.eq_rows.size(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < out.z.size(); ++j) lhs += lp_.eq_rows[i][j] * out.z[j];
    violation = std::max(violation, std::abs(lhs - lp_.eq_rhs[i]));
  }
  for (std::size_t j = 0; j < out.z.size(); ++j) {
    violation = std::max({violation, lp_.lower[j] - out.z[j], out.z[j] - lp_.upper[j]});
  }
  out.max_violation = violation;

  switch (p2) {
    case PhaseResult::Optimal:
      out.status = LpStatus::Optimal;
      out.alternative_optima = detect_alternative_optima();
      break;
    case PhaseResult::Unbounded:
      out.status = LpStatus::Unbounded;
      break;
    case PhaseResult::IterationLimit:
      out.status = LpStatus::IterationLimit;
      break;
  }
  return out;
}

}  // namespace

LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();
  SimplexEngine engine(lp, options);
  return engine.run();
}

}  // namespace regretdro
