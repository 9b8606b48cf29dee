#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call the routine they are meant to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "uniformis/core.hpp"
#include "uniformis/hausdorff.hpp"
#include "uniformis/multifunction.hpp"
#include "uniformis/noncompactness.hpp"

namespace oracle {

using namespace uniformis;

inline PseudometricFamily line() {
  return PseudometricFamily(1, {Pseudometric::coordinateAbs("d", 0)}, true);
}

inline PseudometricFamily plane() {
  return PseudometricFamily(2, {Pseudometric::coordinateAbs("d1", 0), Pseudometric::coordinateAbs("d2", 1)}, true);
}

/// Three members on R^2: both coordinates and the Euclidean norm.
inline PseudometricFamily plane3() {
  return PseudometricFamily(2,
                            {Pseudometric::coordinateAbs("d1", 0), Pseudometric::coordinateAbs("d2", 1),
                             Pseudometric::euclideanSubset("e", {0, 1})},
                            true);
}

/// Raw distance formula per member, not going through the library.
inline double rawDistance(const std::string& label, const Point& x, const Point& y) {
  if (label == "d" || label == "d1") return std::abs(x[0] - y[0]);
  if (label == "d2") return std::abs(x[1] - y[1]);
  if (label == "e") return std::hypot(x[0] - y[0], x[1] - y[1]);
  throw std::logic_error("unknown label " + label);
}

/// Hausdorff distance as the least candidate radius (a pairwise distance)
/// at which each cloud lies in the other's closed inflation.
inline double hausdorffByRadii(const std::string& label, const PointCloud& A, const PointCloud& B) {
  std::vector<double> radii{0.0};
  for (const auto& a : A)
    for (const auto& b : B) radii.push_back(rawDistance(label, a, b));
  std::sort(radii.begin(), radii.end());
  auto inside = [&](const PointCloud& X, const PointCloud& Y, double r) {
    for (const auto& x : X) {
      bool hit = false;
      for (const auto& y : Y) hit = hit || rawDistance(label, x, y) <= r;
      if (!hit) return false;
    }
    return true;
  };
  for (double r : radii)
    if (inside(A, B, r) && inside(B, A, r)) return r;
  return radii.back();
}

inline PointCloud randomCloud(std::mt19937& rng, std::size_t maxSize, std::size_t dim, double lo, double hi) {
  std::uniform_int_distribution<std::size_t> size(1, maxSize);
  std::uniform_real_distribution<double> coord(lo, hi);
  std::vector<Point> pts;
  const std::size_t n = size(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> c(dim);
    for (auto& v : c) v = coord(rng);
    pts.emplace_back(std::move(c));
  }
  return PointCloud(std::move(pts));
}

/// Least T-invariant superset of {seed} in a finite universe, found by
/// enumerating every subset. Universe indices stand for points; T maps an
/// index to a set of indices.
inline std::set<std::size_t> minimalInvariantSuperset(const std::vector<std::vector<std::size_t>>& T,
                                                      std::size_t seed) {
  const std::size_t n = T.size();
  std::set<std::size_t> best;
  std::size_t bestSize = n + 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (!(mask >> seed & 1)) continue;
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      if (mask >> i & 1)
        for (std::size_t j : T[i]) closed = closed && (mask >> j & 1);
    if (!closed) continue;
    const auto size = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (size < bestSize) {
      bestSize = size;
      best.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) best.insert(i);
    }
  }
  return best;
}

/// Fixed point of x -> L x + b on R^2 by Cramer's rule.
inline Point affineFixedPoint2(const std::vector<std::vector<double>>& L, const Point& b) {
  const double a11 = 1 - L[0][0], a12 = -L[0][1], a21 = -L[1][0], a22 = 1 - L[1][1];
  const double det = a11 * a22 - a12 * a21;
  return Point{(b[0] * a22 - a12 * b[1]) / det, (a11 * b[1] - a21 * b[0]) / det};
}

/// Exact minimum number of open radius-eps intervals covering points on a
/// line: left-to-right, each ball swallows everything within 2 eps of its
/// leftmost uncovered point (strictly).
inline std::size_t lineCoverNumber(std::vector<double> xs, double eps) {
  std::sort(xs.begin(), xs.end());
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < xs.size()) {
    ++count;
    const double start = xs[i];
    while (i < xs.size() && xs[i] - start < 2 * eps) ++i;
  }
  return count;
}

/// Value of alpha for trees built from exact atoms with union, scale, hull
/// and closure only: the maximum over leaves of the product of |beta| on
/// the path times the atom value.
struct LeafPath {
  double factor;
  double lo, hi;
};

inline void collectLeaves(const SetExpr& e, double factor, std::vector<LeafPath>& out) {
  switch (e.kind()) {
    case SetExprKind::Abstract:
      out.push_back({factor, e.axiom().lo, e.axiom().hi});
      return;
    case SetExprKind::Finite:
      out.push_back({factor, 0.0, 0.0});
      return;
    case SetExprKind::Scale:
      collectLeaves(e.children()[0], factor * std::abs(e.parameter()), out);
      return;
    case SetExprKind::Hull:
    case SetExprKind::Closure:
    case SetExprKind::Union:
      for (const auto& c : e.children()) collectLeaves(c, factor, out);
      return;
    default:
      throw std::logic_error("collectLeaves: unsupported node");
  }
}

inline AlphaInterval simplifiedAlpha(const SetExpr& e) {
  std::vector<LeafPath> leaves;
  collectLeaves(e, 1.0, leaves);
  AlphaInterval r{0.0, 0.0};
  for (const auto& l : leaves) {
    r.lo = std::max(r.lo, l.factor * l.lo);
    r.hi = std::max(r.hi, l.factor * l.hi);
  }
  return r;
}

}  // namespace oracle
