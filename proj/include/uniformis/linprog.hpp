#pragma once

// Dense two-phase simplex for the small linear programs behind hull
// membership and inwardness witnesses. All variables are >= 0.

#include <cstddef>
#include <vector>

namespace uniformis {

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct LinearProgram {
  std::size_t numVars = 0;
  std::vector<double> objective;  // minimized; empty means pure feasibility
  struct Row {
    std::vector<double> coeffs;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
  };
  std::vector<Row> rows;

  void addRow(std::vector<double> coeffs, RowSense sense, double rhs) {
    rows.push_back({std::move(coeffs), sense, rhs});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double value = 0.0;
  /// Phase-one optimum: the L1 violation of the constraints at the best
  /// point found. Zero (up to rounding) for feasible programs.
  double infeasibility = 0.0;
};

/// Bland's rule throughout, so the method cannot cycle. `feasTol` bounds the
/// phase-one residual still counted as feasible.
LpResult solveLinearProgram(const LinearProgram& lp, double feasTol = 1e-9);

}  // namespace uniformis
