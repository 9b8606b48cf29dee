#include "uniformis/linprog.hpp"

#include <cmath>
#include <limits>

#include "uniformis/core.hpp"

namespace uniformis {

namespace {

constexpr double kPivotEps = 1e-11;

struct Tableau {
  std::size_t m = 0;      // constraint rows
  std::size_t cols = 0;   // structural + slack + artificial columns
  std::vector<std::vector<double>> a;  // m rows of cols + 1 (last = rhs)
  std::vector<double> obj;             // reduced costs, cols + 1 (last = -value)
  std::vector<std::size_t> basis;

  void pivot(std::size_t row, std::size_t col) {
    auto& pr = a[row];
    const double p = pr[col];
    for (double& v : pr) v /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = a[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) a[i][j] -= f * pr[j];
    }
    const double f = obj[col];
    if (f != 0.0)
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= f * pr[j];
    basis[row] = col;
  }

  void priceOut(const std::vector<double>& cost) {
    obj.assign(cols + 1, 0.0);
    for (std::size_t j = 0; j < cols; ++j) obj[j] = cost[j];
    for (std::size_t i = 0; i < m; ++i) {
      const double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= cb * a[i][j];
    }
  }

  // Returns Optimal, Unbounded or IterationLimit.
  LpStatus run(std::size_t allowedCols, std::size_t maxIter) {
    for (std::size_t it = 0; it < maxIter; ++it) {
      std::size_t enter = allowedCols;
      for (std::size_t j = 0; j < allowedCols; ++j)
        if (obj[j] < -kPivotEps) {
          enter = j;
          break;
        }
      if (enter == allowedCols) return LpStatus::Optimal;
      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        const double c = a[i][enter];
        if (c <= kPivotEps) continue;
        const double ratio = a[i][cols] / c;
        if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && leave < m && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
    return LpStatus::IterationLimit;
  }
};

}  // namespace

LpResult solveLinearProgram(const LinearProgram& lp, double feasTol) {
  const std::size_t n = lp.numVars;
  const std::size_t m = lp.rows.size();
  if (!lp.objective.empty() && lp.objective.size() != n) throw DomainError("objective length != numVars");

  // Normalize to nonnegative right-hand sides.
  struct NormRow {
    std::vector<double> coeffs;
    RowSense sense;
    double rhs;
  };
  std::vector<NormRow> rows;
  rows.reserve(m);
  std::size_t nSlack = 0, nArt = 0;
  for (const auto& r : lp.rows) {
    if (r.coeffs.size() != n) throw DomainError("constraint row length != numVars");
    NormRow nr{r.coeffs, r.sense, r.rhs};
    if (nr.rhs < 0.0) {
      for (double& c : nr.coeffs) c = -c;
      nr.rhs = -nr.rhs;
      if (nr.sense == RowSense::LessEqual)
        nr.sense = RowSense::GreaterEqual;
      else if (nr.sense == RowSense::GreaterEqual)
        nr.sense = RowSense::LessEqual;
    }
    if (nr.sense != RowSense::Equal) ++nSlack;
    if (nr.sense != RowSense::LessEqual) ++nArt;
    rows.push_back(std::move(nr));
  }

  Tableau t;
  t.m = m;
  t.cols = n + nSlack + nArt;
  t.a.assign(m, std::vector<double>(t.cols + 1, 0.0));
  t.basis.assign(m, 0);
  const std::size_t artStart = n + nSlack;
  std::size_t s = n, art = artStart;
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = t.a[i];
    for (std::size_t j = 0; j < n; ++j) row[j] = rows[i].coeffs[j];
    row[t.cols] = rows[i].rhs;
    switch (rows[i].sense) {
      case RowSense::LessEqual:
        row[s] = 1.0;
        t.basis[i] = s++;
        break;
      case RowSense::GreaterEqual:
        row[s++] = -1.0;
        row[art] = 1.0;
        t.basis[i] = art++;
        break;
      case RowSense::Equal:
        row[art] = 1.0;
        t.basis[i] = art++;
        break;
    }
  }

  const std::size_t maxIter = 20000 + 100 * (m + t.cols);
  LpResult result;

  // Phase one: minimize the sum of artificials.
  if (nArt > 0) {
    std::vector<double> cost(t.cols, 0.0);
    for (std::size_t j = artStart; j < t.cols; ++j) cost[j] = 1.0;
    t.priceOut(cost);
    const LpStatus st = t.run(t.cols, maxIter);
    if (st == LpStatus::IterationLimit) {
      result.status = st;
      return result;
    }
    result.infeasibility = -t.obj[t.cols];
    if (result.infeasibility > feasTol) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] < artStart) continue;
      for (std::size_t j = 0; j < artStart; ++j)
        if (std::abs(t.a[i][j]) > kPivotEps) {
          t.pivot(i, j);
          break;
        }
    }
  }

  // Phase two over structural and slack columns only.
  std::vector<double> cost(t.cols, 0.0);
  if (!lp.objective.empty())
    for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];
  t.priceOut(cost);
  const LpStatus st = t.run(artStart, maxIter);
  result.status = st;
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] < n) result.x[t.basis[i]] = std::max(0.0, t.a[i][t.cols]);
  result.value = 0.0;
  if (!lp.objective.empty())
    for (std::size_t j = 0; j < n; ++j) result.value += lp.objective[j] * result.x[j];
  return result;
}

}  // namespace uniformis
