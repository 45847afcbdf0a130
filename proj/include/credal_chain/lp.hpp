#pragma once

#include <limits>
#include <string>
#include <vector>

namespace credal::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// maximize c.x  subject to  A x = b,  0 <= x <= upper.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> equalities;  // one row per constraint
  std::vector<double> rhs;
  // Per-variable upper bound; empty means 1 for every variable. Entries may
  // be kInfinity when the bound is implied by the equalities.
  std::vector<double> upper;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_constraints() const { return equalities.size(); }
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status status);

// Dual of the problem above: minimize b.y + upper.w subject to
// A^T y + w >= c, w >= 0.
struct Certificate {
  std::vector<double> duals;        // y, one per equality
  std::vector<double> bound_duals;  // w, one per variable (0 for infinite bounds)
  double primal_residual = 0.0;     // max |A x - b| and bound violations
  double dual_residual = 0.0;       // max positive part of c - A^T y - w, and of -w
  double complementarity = 0.0;     // max of x_j |reduced_j| and w_j (upper_j - x_j)
  double duality_gap = 0.0;         // (b.y + upper.w) - c.x
};

struct LpSolution {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  Certificate certificate;
  std::size_t pivots = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

// Two-phase dense tableau simplex with Bland's rule. Deterministic for a
// fixed input. Throws StructuralError on inconsistent dimensions and
// SolverError when the pivot limit is hit or the certificates of an optimal
// basis fail to verify.
LpSolution solve(const LinearProgram& program);

// Recomputes the residuals of `certificate` from the problem data.
Certificate verify(const LinearProgram& program, const std::vector<double>& x,
                   std::vector<double> duals, std::vector<double> bound_duals);

}  // namespace credal::lp
