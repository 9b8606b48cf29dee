#include <random>

#include "doctest.h"
#include "uniformis/linprog.hpp"

using namespace uniformis;

TEST_CASE("small optimum") {
  // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6
  LinearProgram lp;
  lp.numVars = 2;
  lp.objective = {-1.0, -1.0};
  lp.addRow({1.0, 2.0}, RowSense::LessEqual, 4.0);
  lp.addRow({3.0, 1.0}, RowSense::LessEqual, 6.0);
  const auto r = solveLinearProgram(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(1.6));
  CHECK(r.x[1] == doctest::Approx(1.2));
  CHECK(r.value == doctest::Approx(-2.8));
}

TEST_CASE("equality and lower-bound rows, negative right-hand sides") {
  // x + y = 1, x >= 0.25, -x <= -0.5 ; min y
  LinearProgram lp;
  lp.numVars = 2;
  lp.objective = {0.0, 1.0};
  lp.addRow({1.0, 1.0}, RowSense::Equal, 1.0);
  lp.addRow({1.0, 0.0}, RowSense::GreaterEqual, 0.25);
  lp.addRow({-1.0, 0.0}, RowSense::LessEqual, -0.5);
  const auto r = solveLinearProgram(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.value == doctest::Approx(0.0));
}

TEST_CASE("infeasible and unbounded programs are reported") {
  LinearProgram bad;
  bad.numVars = 1;
  bad.addRow({1.0}, RowSense::LessEqual, -1.0);
  const auto r = solveLinearProgram(bad);
  CHECK(r.status == LpStatus::Infeasible);
  CHECK(r.infeasibility > 0.5);

  LinearProgram open;
  open.numVars = 2;
  open.objective = {-1.0, 0.0};
  open.addRow({0.0, 1.0}, RowSense::LessEqual, 1.0);
  CHECK(solveLinearProgram(open).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate program terminates") {
  // Classic cycling example for the textbook rule; Bland's rule must finish.
  LinearProgram lp;
  lp.numVars = 4;
  lp.objective = {-0.75, 150.0, -0.02, 6.0};
  lp.addRow({0.25, -60.0, -0.04, 9.0}, RowSense::LessEqual, 0.0);
  lp.addRow({0.5, -90.0, -0.02, 3.0}, RowSense::LessEqual, 0.0);
  lp.addRow({0.0, 0.0, 1.0, 0.0}, RowSense::LessEqual, 1.0);
  const auto r = solveLinearProgram(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(-0.05));
}

TEST_CASE("property: optimum of random box programs matches vertex enumeration") {
  // min c.x over 0 <= x_i <= u_i: optimum is sum of min(0, c_i u_i).
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> c(-3, 3), u(0.1, 4);
  for (int t = 0; t < 100; ++t) {
    LinearProgram lp;
    lp.numVars = 3;
    double expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double ci = c(rng), ui = u(rng);
      lp.objective.push_back(ci);
      std::vector<double> row(3, 0.0);
      row[i] = 1.0;
      lp.addRow(row, RowSense::LessEqual, ui);
      expected += std::min(0.0, ci * ui);
    }
    const auto r = solveLinearProgram(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-9));
  }
}
