#include <cmath>
#include <cstdlib>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "uniformis/core.hpp"

using namespace uniformis;

TEST_CASE("point arithmetic and validation") {
  const Point a{1.0, 2.0}, b{3.0, -1.0};
  CHECK((a + b) == Point{4.0, 1.0});
  CHECK((a - b) == Point{-2.0, 3.0});
  CHECK((2.0 * a) == Point{2.0, 4.0});
  CHECK(chebyshev(a, b) == 3.0);
  CHECK_THROWS_AS(Point({1.0, NAN}), DomainError);
  CHECK_THROWS_AS(Point({INFINITY}), DomainError);
  CHECK_THROWS_AS(a + Point{1.0}, DomainError);
}

TEST_CASE("built-in pseudometric kinds evaluate their formulas") {
  const Point x{1.0, 5.0, -2.0}, y{4.0, 1.0, 2.0};
  CHECK(Pseudometric::coordinateAbs("c", 1)(x, y) == 4.0);
  CHECK(Pseudometric::weightedAbs("w", {1.0, 0.5, 0.0})(x, y) == doctest::Approx(3.0 + 2.0));
  CHECK(Pseudometric::euclideanSubset("e", {0, 1})(x, y) == doctest::Approx(5.0));
  const auto m = Pseudometric::maxOf("m", {Pseudometric::coordinateAbs("a", 0), Pseudometric::coordinateAbs("b", 2)});
  CHECK(m(x, y) == 4.0);
  CHECK_THROWS_AS(Pseudometric::weightedAbs("w", {-1.0}), DomainError);
  CHECK_THROWS_AS(Pseudometric::coordinateAbs("c", 3)(x, y), DomainError);
}

TEST_CASE("family lookup and dimension checks") {
  const auto fam = oracle::plane();
  CHECK(fam.size() == 2);
  CHECK(fam.indexOf("d2") == 1);
  CHECK(fam.contains("d1"));
  CHECK_FALSE(fam.contains("zz"));
  CHECK_THROWS_AS(fam.indexOf("zz"), DomainError);
  CHECK_THROWS_AS(fam.distance("d1", Point{0.0}, Point{1.0}), DomainError);
  CHECK(fam.maxDistance(Point{0.0, 0.0}, Point{1.0, 3.0}) == 3.0);
  CHECK_THROWS_AS(PseudometricFamily(2, {}, true), DomainError);
  CHECK_THROWS_AS(PseudometricFamily(2, {Pseudometric::coordinateAbs("a", 0), Pseudometric::coordinateAbs("a", 1)}, true),
                  DomainError);
}

TEST_CASE("saturate adds a dominating member and is idempotent") {
  const auto one = saturate(oracle::line());
  CHECK(one.saturated());
  CHECK(one.size() == 2);
  CHECK(one.distance(kMaxIndexLabel, Point{0.0}, Point{2.5}) == 2.5);

  const auto fam = saturate(oracle::plane());
  CHECK(fam.distance(kMaxIndexLabel, Point{0.0, 0.0}, Point{1.0, 3.0}) == 3.0);
  const auto twice = saturate(fam);
  CHECK(twice.labels() == fam.labels());

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const Point x{u(rng), u(rng)}, y{u(rng), u(rng)};
    CHECK(twice.distances(x, y) == fam.distances(x, y));
    CHECK(fam.distance("d1", x, y) == oracle::plane().distance("d1", x, y));
    CHECK(fam.distance(kMaxIndexLabel, x, y) >= std::max(fam.distance("d1", x, y), fam.distance("d2", x, y)));
  }
}

TEST_CASE("sup metric rho truncates at one") {
  CHECK(supMetricRho(oracle::plane(), Point{0.0, 0.0}, Point{0.0, 0.0}) == 0.0);
  CHECK(supMetricRho(oracle::plane(), Point{0.0, 0.0}, Point{0.2, 0.7}) == doctest::Approx(0.7));
  CHECK(supMetricRho(oracle::line(), Point{0.0}, Point{5.0}) == 1.0);
}

TEST_CASE("property: rho is a pseudometric on sampled triples") {
  const auto fam = oracle::plane3();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 500; ++i) {
    const Point x{u(rng), u(rng)}, y{u(rng), u(rng)}, z{u(rng), u(rng)};
    CHECK(supMetricRho(fam, x, x) == 0.0);
    CHECK(supMetricRho(fam, x, y) == supMetricRho(fam, y, x));
    CHECK(supMetricRho(fam, x, z) <= supMetricRho(fam, x, y) + supMetricRho(fam, y, z) + 1e-12);
  }
}

TEST_CASE("Cauchy test on sequence tails") {
  const auto fam = oracle::line();
  std::vector<Point> constant(10, Point{3.0});
  CHECK(isCauchyAtTolerance(constant, fam, 0.01));

  std::vector<Point> halves;
  for (int n = 0; n < 20; ++n) halves.push_back(Point{std::pow(0.5, n)});
  CHECK(isCauchyAtTolerance(halves, fam, 0.1));

  std::vector<Point> alternating;
  for (int n = 0; n < 20; ++n) alternating.push_back(Point{n % 2 ? -1.0 : 1.0});
  CHECK_FALSE(isCauchyAtTolerance(alternating, fam, 0.5));

  CHECK_THROWS_AS(isCauchyAtTolerance(halves, fam, 0.0), DomainError);
  CHECK_THROWS_AS(isCauchyAtTolerance(std::vector<Point>{}, fam, 0.1), DomainError);
}

TEST_CASE("axiom checker accepts built-ins and rejects a non-metric") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<Point> samples;
  for (int i = 0; i < 30; ++i) samples.push_back(Point{u(rng), u(rng)});

  CHECK(checkPseudometricAxioms(oracle::plane3(), samples).passed());
  CHECK(checkPseudometricAxioms(saturate(oracle::plane3()), samples).passed());

  const auto squared = Pseudometric::custom("sq", [](const Point& x, const Point& y) {
    return (x[0] - y[0]) * (x[0] - y[0]);
  });
  const PseudometricFamily bad(2, {squared}, false);
  const auto rep = checkPseudometricAxioms(bad, samples);
  CHECK_FALSE(rep.passed());

  // Claimed saturation without a dominating member.
  const PseudometricFamily liar(2, {Pseudometric::coordinateAbs("a", 0), Pseudometric::coordinateAbs("b", 1)}, true,
                                true);
  CHECK_FALSE(checkPseudometricAxioms(liar, samples).passed());
}

TEST_CASE("contraction constants validate their range") {
  const ContractionConstants k({{"d1", 0.5}, {"d2", 0.25}});
  CHECK(k.sup() == 0.5);
  CHECK(k.at("d2") == 0.25);
  CHECK(k.alignedTo(oracle::plane()) == std::vector<double>{0.5, 0.25});
  CHECK_THROWS_AS(ContractionConstants({{"d", 1.0}}), DomainError);
  CHECK_THROWS_AS(ContractionConstants({{"d", -0.1}}), DomainError);
  CHECK_THROWS_AS(ContractionConstants({{"d1", 0.5}}).alignedTo(oracle::plane()), DomainError);
  CHECK(ContractionConstants::uniform(oracle::plane(), 0.3).at("d1") == 0.3);
}

TEST_CASE("float tolerance follows the environment") {
  // Read once per process; ctest runs this case with and without the variable.
  const char* env = std::getenv("UNIFORMIS_FLOAT_TOL");
  CHECK(defaultFloatTol() == (env ? std::strtod(env, nullptr) : 1e-9));
}
