#include "credal_chain/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "credal_chain/errors.hpp"

namespace credal::lp {

namespace {

constexpr double kPivotTolerance = 1e-10;
constexpr double kReducedCostTolerance = 1e-10;
constexpr double kFeasibilityTolerance = 1e-9;

// Dense simplex tableau over the standard form
//   [A 0 I] [x s a]^T = b   (equality rows, artificial a)
//   [I I 0] [x s a]^T = u   (one row per finite upper bound, slack s)
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc, std::vector<double>& reduced) {
    const std::size_t width = cols_ + 1;
    double* prow = &data_[pr * width];
    const double inv = 1.0 / prow[pc];
    for (std::size_t c = 0; c < width; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &data_[r * width];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    const double f = reduced[pc];
    if (f != 0.0) {
      for (std::size_t c = 0; c < cols_; ++c) reduced[c] -= f * prow[c];
      reduced[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

std::vector<double> reduced_costs(Tableau& t, const std::vector<double>& cost) {
  std::vector<double> d = cost;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double cb = cost[t.basis()[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c < t.cols(); ++c) d[c] -= cb * t.at(r, c);
  }
  return d;
}

enum class Outcome { kOptimal, kUnbounded };

// Bland's rule: lowest-index improving column; ratio-test ties go to the
// lowest-index basic variable.
Outcome iterate(Tableau& t, std::vector<double>& d, const std::vector<bool>& allowed,
                std::size_t& pivots, std::size_t limit) {
  for (;;) {
    std::size_t enter = t.cols();
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (allowed[c] && d[c] > kReducedCostTolerance) {
        enter = c;
        break;
      }
    }
    if (enter == t.cols()) return Outcome::kOptimal;

    std::size_t leave = t.rows();
    double best = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotTolerance) continue;
      const double ratio = std::max(t.rhs(r), 0.0) / a;
      if (leave == t.rows() || ratio < best - 1e-12 * (1.0 + best) ||
          (ratio <= best + 1e-12 * (1.0 + best) && t.basis()[r] < t.basis()[leave])) {
        if (leave == t.rows() || ratio < best) best = ratio;
        leave = r;
      }
    }
    if (leave == t.rows()) return Outcome::kUnbounded;
    t.pivot(leave, enter, d);
    if (++pivots > limit) {
      throw SolverError("simplex: pivot limit of " + std::to_string(limit) +
                        " reached (cycling or numerical breakdown)");
    }
  }
}

}  // namespace

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "?";
}

Certificate verify(const LinearProgram& program, const std::vector<double>& x,
                   std::vector<double> duals, std::vector<double> bound_duals) {
  const std::size_t n = program.num_variables();
  const std::size_t m = program.num_constraints();
  Certificate cert;
  cert.duals = std::move(duals);
  cert.bound_duals = std::move(bound_duals);
  auto upper = [&](std::size_t j) { return program.upper.empty() ? 1.0 : program.upper[j]; };

  std::vector<double> aty(n, 0.0);
  double by = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      ax += program.equalities[r][j] * x[j];
      aty[j] += program.equalities[r][j] * cert.duals[r];
    }
    cert.primal_residual = std::max(cert.primal_residual, std::abs(ax - program.rhs[r]));
    by += program.rhs[r] * cert.duals[r];
  }
  double cx = 0.0, uw = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = upper(j);
    const double w = cert.bound_duals[j];
    cert.primal_residual = std::max({cert.primal_residual, -x[j], std::isfinite(u) ? x[j] - u : 0.0});
    const double red = program.objective[j] - aty[j] - w;
    cert.dual_residual = std::max({cert.dual_residual, red, -w});
    cert.complementarity = std::max(cert.complementarity, std::abs(x[j] * red));
    if (std::isfinite(u)) {
      cert.complementarity = std::max(cert.complementarity, std::abs(w * (u - x[j])));
      uw += u * w;
    }
    cx += program.objective[j] * x[j];
  }
  cert.duality_gap = by + uw - cx;
  return cert;
}

LpSolution solve(const LinearProgram& program) {
  const std::size_t n = program.num_variables();
  const std::size_t m = program.num_constraints();
  if (program.rhs.size() != m) throw StructuralError("lp: rhs length differs from row count");
  if (!program.upper.empty() && program.upper.size() != n) {
    throw StructuralError("lp: upper-bound length differs from variable count");
  }
  for (const auto& row : program.equalities) {
    if (row.size() != n) throw StructuralError("lp: constraint row length differs from variables");
    for (double a : row) {
      if (!std::isfinite(a)) throw StructuralError("lp: non-finite constraint coefficient");
    }
  }
  for (double c : program.objective) {
    if (!std::isfinite(c)) throw StructuralError("lp: non-finite objective coefficient");
  }

  auto upper = [&](std::size_t j) { return program.upper.empty() ? 1.0 : program.upper[j]; };
  LpSolution solution;
  std::vector<std::size_t> bounded;  // variables with a finite upper bound
  for (std::size_t j = 0; j < n; ++j) {
    const double u = upper(j);
    if (std::isnan(u) || u < 0.0) return solution;  // empty box: infeasible
    if (std::isfinite(u)) bounded.push_back(j);
  }

  const std::size_t nb = bounded.size();
  const std::size_t rows = m + nb;
  const std::size_t slack0 = n;
  const std::size_t art0 = n + nb;
  const std::size_t cols = n + nb + m;
  Tableau t(rows, cols);
  std::vector<double> sign(m, 1.0);

  for (std::size_t r = 0; r < m; ++r) {
    sign[r] = program.rhs[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = sign[r] * program.equalities[r][j];
    t.at(r, art0 + r) = 1.0;
    t.rhs(r) = sign[r] * program.rhs[r];
    t.basis()[r] = art0 + r;
  }
  for (std::size_t k = 0; k < nb; ++k) {
    const std::size_t r = m + k;
    t.at(r, bounded[k]) = 1.0;
    t.at(r, slack0 + k) = 1.0;
    t.rhs(r) = upper(bounded[k]);
    t.basis()[r] = slack0 + k;
  }

  const std::size_t limit = 200 * (rows + cols) + 1000;
  std::vector<bool> allowed(cols, true);

  // Phase 1: maximize -sum(artificials).
  std::vector<double> cost(cols, 0.0);
  for (std::size_t r = 0; r < m; ++r) cost[art0 + r] = -1.0;
  std::vector<double> d = reduced_costs(t, cost);
  iterate(t, d, allowed, solution.pivots, limit);

  double infeasibility = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (t.basis()[r] >= art0) infeasibility += std::max(t.rhs(r), 0.0);
  }
  double scale = 1.0;
  for (double b : program.rhs) scale = std::max(scale, std::abs(b));
  if (infeasibility > kFeasibilityTolerance * scale) return solution;

  // Drive zero-level artificials out of the basis where possible. A row
  // whose artificial cannot leave is redundant; it stays, pinned at zero.
  for (std::size_t r = 0; r < rows; ++r) {
    if (t.basis()[r] < art0) continue;
    t.rhs(r) = 0.0;
    std::size_t best = cols;
    for (std::size_t c = 0; c < art0; ++c) {
      if (std::abs(t.at(r, c)) > 1e-9 &&
          (best == cols || std::abs(t.at(r, c)) > std::abs(t.at(r, best)))) {
        best = c;
      }
    }
    if (best != cols) t.pivot(r, best, d);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (t.rhs(r) < 0.0 && t.rhs(r) > -kFeasibilityTolerance) t.rhs(r) = 0.0;
  }

  // Phase 2.
  std::fill(cost.begin(), cost.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = program.objective[j];
  for (std::size_t c = art0; c < cols; ++c) allowed[c] = false;
  d = reduced_costs(t, cost);
  if (iterate(t, d, allowed, solution.pivots, limit) == Outcome::kUnbounded) {
    solution.status = Status::kUnbounded;
    return solution;
  }

  solution.status = Status::kOptimal;
  solution.x.assign(n, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (t.basis()[r] < n) solution.x[t.basis()[r]] = std::max(t.rhs(r), 0.0);
  }
  solution.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) solution.objective += program.objective[j] * solution.x[j];

  // Duals sit in the reduced costs of the identity columns: pi_r = -d_r.
  std::vector<double> duals(m, 0.0), bound_duals(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) duals[r] = -d[art0 + r] * sign[r];
  for (std::size_t k = 0; k < nb; ++k) bound_duals[bounded[k]] = -d[slack0 + k];
  solution.certificate = verify(program, solution.x, std::move(duals), std::move(bound_duals));

  const Certificate& c = solution.certificate;
  if (c.primal_residual > 1e-7 || std::abs(c.duality_gap) > 1e-6 || c.dual_residual > 1e-6) {
    std::ostringstream os;
    os << "simplex: certificate check failed (primal residual " << c.primal_residual
       << ", dual residual " << c.dual_residual << ", gap " << c.duality_gap << ", "
       << rows << "x" << cols << " tableau, " << solution.pivots << " pivots)";
    throw SolverError(os.str());
  }
  return solution;
}

}  // namespace credal::lp
