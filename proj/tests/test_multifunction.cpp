#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "uniformis/multifunction.hpp"

using namespace uniformis;

namespace {

MultiFunction shift(double s) { return MultiFunction::affineBranches({AffineMap::scalar(1.0, Point{s})}); }

MultiFunction twoBranch() {
  return MultiFunction::affineBranches(
      {AffineMap::scalar(1.0 / 3, Point{0.0}), AffineMap::scalar(1.0 / 3, Point{1.0})});
}

const MultiFunction kIdentity = MultiFunction::singleValued([](const Point& x) { return x; });
const MultiFunction kZero = MultiFunction::constant(PointCloud::line({0.0}));

PointCloud lineGrid(double lo, double hi, double step) { return PointCloud::grid(Point{lo}, Point{hi}, step); }

}  // namespace

TEST_CASE("affine maps and images") {
  const auto m = AffineMap::matrix({{0.0, 1.0}, {2.0, 0.0}}, Point{1.0, 1.0});
  CHECK(m(Point{3.0, 4.0}) == Point{5.0, 7.0});
  CHECK(AffineMap::diagonal({0.5, 2.0}, Point{0.0, 0.0})(Point{2.0, 2.0}) == Point{1.0, 4.0});
  CHECK(AffineMap::scalar(0.5, Point{0.0, 0.0}).uniformScale() == 0.5);
  CHECK_FALSE(m.uniformScale().has_value());
  CHECK_THROWS_AS(AffineMap::matrix({{1.0}}, Point{0.0, 0.0}), DomainError);

  const auto T = twoBranch();
  const auto img = T(Point{3.0});
  REQUIRE(img.size() == 2);
  CHECK(img[0][0] == doctest::Approx(1.0));
  CHECK(img[1][0] == doctest::Approx(2.0));
  // 0 -> {0, 1}, 3 -> {1, 2}; the shared 1 is deduplicated
  CHECK(T.image(PointCloud::line({0, 3})).size() == 3);
  CHECK(residual(T, oracle::line(), 0, Point{3.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(MultiFunction([](const Point&) { return PointCloud::line({0}); },
                                [](const Point& x) { return x[0] >= 0; })(Point{-1.0}),
                  DomainError);
}

TEST_CASE("weak lower semicontinuity probes") {
  const auto fam = oracle::line();
  CHECK(checkWeakLowerSC(kIdentity, fam, "d", 1.0, lineGrid(-2, 2, 0.1), 0.05).passed());
  CHECK(checkWeakLowerSC(shift(1.0), fam, "d", 0.5, lineGrid(-2, 2, 0.1), 0.05).passed());

  // Sublevel set of |x| < 1 is open; every interior grid point has a probe inside.
  const auto rep = checkWeakLowerSC(kZero, fam, "d", 1.0, lineGrid(-2, 2, 0.1), 0.05);
  CHECK(rep.passed());
  CHECK(rep.empirical);
  CHECK(rep.samplesTested > 0);
  CHECK_THROWS_AS(checkWeakLowerSC(kZero, fam, "d", -1.0, lineGrid(-2, 2, 0.1), 0.05), DomainError);
}

TEST_CASE("weak semicontinuity detects a closed level set") {
  // d(x, Tx) = 0 for x <= 0 and 1 for x > 0: the sublevel set {< 0.5} = (-inf, 0] is not open.
  const MultiFunction step([](const Point& x) { return PointCloud{x[0] > 0 ? Point{x[0] + 1} : x}; });
  const auto rep = checkWeakLowerSC(step, oracle::line(), "d", 0.5, lineGrid(-1, 1, 0.25), 0.1);
  REQUIRE_FALSE(rep.passed());
  CHECK(rep.violations.front().witnesses.front()[0] == doctest::Approx(0.0));
}

TEST_CASE("weak upper semicontinuity examples") {
  const auto fam = oracle::line();
  CHECK(checkWeakUpperSC(kIdentity, fam, "d", 0.0, lineGrid(-2, 2, 0.1), 0.05).passed());
  CHECK(checkWeakUpperSC(kZero, fam, "d", 1.0, lineGrid(-2, 2, 0.1), 0.05).passed());
  const MultiFunction stepImage([](const Point& x) { return x[0] < 0 ? PointCloud::line({0}) : PointCloud{x}; });
  CHECK(checkWeakUpperSC(stepImage, fam, "d", 0.5, lineGrid(-2, 2, 0.1), 0.05).passed());
}

TEST_CASE("image residual inequality examples") {
  const auto fam = oracle::line();
  const MultiFunction half = MultiFunction::affineBranches({AffineMap::scalar(0.5, Point{0.0})});
  CHECK(checkImageResidualInequality(half, fam, "d", {{Point{0.0}, Point{4.0}}, {Point{1.0}, Point{1.0}}}).passed());
  const MultiFunction pair =
      MultiFunction::affineBranches({AffineMap::scalar(1.0, Point{1.0}), AffineMap::scalar(1.0, Point{3.0})});
  CHECK(checkImageResidualInequality(pair, fam, "d", {{Point{1.0}, Point{2.0}}}).passed());
}

TEST_CASE("property: image residual inequality holds for arbitrary multi-functions") {
  const auto fam = oracle::plane3();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-2, 2);
  // Discontinuous, many-valued, non-contractive: the inequality must still hold.
  const MultiFunction wild([](const Point& x) {
    const double s = std::floor(3 * x[0]) - x[1] * x[1];
    return PointCloud{Point{s, x[0]}, Point{-x[1], 2 * s}, Point{std::sin(7 * x[0]), 1.0}};
  });
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < 500; ++i) pairs.push_back({Point{u(rng), u(rng)}, Point{u(rng), u(rng)}});
  for (const auto& l : fam.labels()) CHECK(checkImageResidualInequality(wild, fam, l, pairs).passed());
}

TEST_CASE("F-contractive check") {
  const auto fam = oracle::line();
  const auto pairs = samplePairs(lineGrid(-2, 2, 0.25), 200, 1);
  const auto constant = checkFContractive(MultiFunction::constant(PointCloud::line({1, 4})), fam,
                                          ContractionConstants({{"d", 0.1}}), pairs);
  CHECK(constant.passed());
  CHECK(constant.worstRatio.at("d") == 0.0);

  const auto two = checkFContractive(twoBranch(), fam, ContractionConstants({{"d", 1.0 / 3}}), pairs);
  CHECK(two.passed());
  CHECK(two.worstRatio.at("d") == doctest::Approx(1.0 / 3));

  const MultiFunction doubling = MultiFunction::affineBranches({AffineMap::scalar(2.0, Point{0.0})});
  const auto bad = checkFContractive(doubling, fam, ContractionConstants({{"d", 0.9}}), pairs);
  CHECK_FALSE(bad.passed());
  CHECK(bad.worstRatio.at("d") == doctest::Approx(2.0));
}

TEST_CASE("residual set locator") {
  const auto fam = oracle::line();
  const auto grid = lineGrid(0, 1, 0.1);
  CHECK(residualSetLocator(kIdentity, fam, grid, 0.0)->size() == grid.size());
  const MultiFunction half = MultiFunction::affineBranches({AffineMap::scalar(0.5, Point{0.0})});
  const auto near = residualSetLocator(half, fam, grid, 0.05);
  REQUIRE(near.has_value());
  CHECK(near->size() == 2);
  CHECK(near->contains(Point{0.0}, 1e-12));
  CHECK(near->contains(Point{0.1}, 1e-12));
  CHECK_FALSE(residualSetLocator(shift(1.0), fam, grid, 0.5).has_value());
  CHECK_THROWS_AS(residualSetLocator(half, fam, grid, -1.0), DomainError);

  // Monotone in eta.
  double prev = 0;
  for (double eta : {0.0, 0.1, 0.2, 0.3, 0.5}) {
    const auto r = residualSetLocator(half, fam, grid, eta);
    const double n = r ? static_cast<double>(r->size()) : 0.0;
    CHECK(n >= prev);
    if (r && eta > 0.0) {
      const auto smaller = residualSetLocator(half, fam, grid, eta / 2);
      if (smaller)
        for (const auto& p : *smaller) CHECK(r->contains(p, 1e-12));
    }
    prev = n;
  }
}

TEST_CASE("invariant set iteration examples") {
  const auto universe = PointCloud::line({0, 1, 2});
  CHECK(invariantSetIterate(kIdentity, Point{1.0}, universe, 10).size() == 1);
  const MultiFunction T([](const Point& x) {
    return x[0] == 2.0 ? PointCloud::line({1}) : PointCloud::line({0});
  });
  const auto C = invariantSetIterate(T, Point{2.0}, universe, 10);
  CHECK(C.size() == 3);
  const MultiFunction toSeed = MultiFunction::constant(PointCloud::line({2}));
  CHECK(invariantSetIterate(toSeed, Point{2.0}, universe, 10).size() == 1);
  CHECK_THROWS_AS(invariantSetIterate(shift(5.0), Point{0.0}, universe, 10), DomainError);
  CHECK_THROWS_AS(invariantSetIterate(T, Point{2.0}, universe, 1), ConvergenceError);
}

TEST_CASE("property: invariant set equals the brute-force least invariant superset") {
  std::mt19937 rng(2024);
  for (int sys = 0; sys < 60; ++sys) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<std::vector<std::size_t>> table(n);
    for (auto& row : table) {
      const std::size_t k = 1 + rng() % 3;
      for (std::size_t j = 0; j < k; ++j) row.push_back(rng() % n);
    }
    const std::size_t seed = rng() % n;
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(Point{static_cast<double>(i)});
    const MultiFunction T([&table](const Point& x) {
      std::vector<Point> out;
      for (std::size_t j : table[static_cast<std::size_t>(x[0])]) out.push_back(Point{static_cast<double>(j)});
      return PointCloud(std::move(out));
    });
    const auto C = invariantSetIterate(T, pts[seed], PointCloud(pts), 100);
    std::set<std::size_t> got;
    for (const auto& p : C) got.insert(static_cast<std::size_t>(p[0]));
    CHECK(got == oracle::minimalInvariantSuperset(table, seed));
  }
}

TEST_CASE("sampled pairs are deterministic and ordered") {
  const auto grid = lineGrid(0, 1, 0.1);
  const auto a = samplePairs(grid, 20, 3), b = samplePairs(grid, 20, 3);
  CHECK(a.size() == 20);
  CHECK(a == b);
  CHECK(samplePairs(grid, 10000, 3).size() == 11 * 10 / 2);
}
