#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "uniformis/convex.hpp"

using namespace uniformis;

namespace {
const PointCloud kUnit = PointCloud::line({0.0, 1.0});
const PointCloud kTriangle{Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 1.0}};
}  // namespace

TEST_CASE("hull membership") {
  CHECK(inHull(kUnit, Point{0.5}));
  CHECK(inHull(kUnit, Point{1.0}));
  CHECK_FALSE(inHull(kUnit, Point{1.01}));
  CHECK(inHull(kTriangle, Point{0.25, 0.25}));
  CHECK(inHull(kTriangle, Point{0.5, 0.5}));
  CHECK_FALSE(inHull(kTriangle, Point{0.6, 0.6}));
  const auto w = hullWeights(kTriangle, Point{0.2, 0.3});
  REQUIRE(w.size() == 3);
  CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(0.2));
  CHECK(w[2] == doctest::Approx(0.3));
}

TEST_CASE("property: hull membership agrees with barycentric coordinates of a triangle") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int i = 0; i < 300; ++i) {
    const double x = u(rng), y = u(rng);
    const bool inside = x >= 0 && y >= 0 && x + y <= 1;
    const double margin = std::min({x, y, 1 - x - y});
    if (std::abs(margin) < 1e-6) continue;
    CHECK(inHull(kTriangle, Point{x, y}) == inside);
  }
}

TEST_CASE("inner set on the unit interval") {
  CHECK(innerSetMembership(kUnit, Point{0.0}, Point{1.2}));
  CHECK(innerSetMembership(kUnit, Point{0.0}, Point{0.7}));
  CHECK_FALSE(innerSetMembership(kUnit, Point{1.0}, Point{1.5}));
  CHECK(innerSetMembership(kUnit, Point{1.0}, Point{-7.0}));
  CHECK(innerSetMembership(kUnit, Point{0.5}, Point{100.0}));
  CHECK(innerSetMembership(kUnit, Point{0.5}, Point{-100.0}));
  CHECK_THROWS_AS(innerSetMembership(kUnit, Point{2.0}, Point{0.0}), DomainError);
  CHECK(maxRayFraction(kUnit, Point{0.0}, Point{1.2}) == doctest::Approx(1.0 / 1.2));
}

TEST_CASE("inner set in the plane") {
  // From the corner (1,0) the inner set is the cone spanned by the two edges.
  const Point corner{1.0, 0.0};
  CHECK(innerSetMembership(kTriangle, corner, Point{-1.0, 0.0}));
  CHECK(innerSetMembership(kTriangle, corner, Point{-2.0, 3.0}));
  CHECK_FALSE(innerSetMembership(kTriangle, corner, Point{2.0, 0.5}));
  CHECK_FALSE(innerSetMembership(kTriangle, corner, Point{0.5, -0.1}));
}

TEST_CASE("envelope membership") {
  const auto fam = oracle::line();
  CHECK(envelopeMembership(kUnit, Point{0.0}, Point{1.2}, fam));
  CHECK_FALSE(envelopeMembership(kUnit, Point{1.0}, Point{1.5}, fam));
  CHECK(envelopeMembership(kUnit, Point{0.5}, Point{-3.0}, fam));
  CHECK(envelopeMembership(kUnit, Point{1.0}, Point{1.0}, fam));
}

TEST_CASE("property: points of K lie in every inner set, and inner implies envelope") {
  const auto fam = oracle::plane();
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0), wide(-2.0, 3.0);
  for (int i = 0; i < 60; ++i) {
    double a = u(rng), b = u(rng);
    if (a + b > 1) a = 1 - a, b = 1 - b;
    const Point x{a, b};
    for (const auto& t : kTriangle) CHECK(innerSetMembership(kTriangle, x, t));
    const Point t{wide(rng), wide(rng)};
    if (innerSetMembership(kTriangle, x, t)) CHECK(envelopeMembership(kTriangle, x, t, fam));
  }
}

TEST_CASE("projection onto the inner set returns a witness") {
  const auto fam = oracle::line();
  const auto p = projectOntoInnerSet(kUnit, Point{0.0}, Point{1.2}, fam, {1.0});
  CHECK(p.ratio <= 1e-8);
  CHECK(p.f[0] == doctest::Approx(1.0));
  CHECK(p.c == doctest::Approx(1.2));

  const auto q = projectOntoInnerSet(kUnit, Point{1.0}, Point{1.5}, fam, {1.0});
  CHECK(q.ratio == doctest::Approx(0.5));
}
