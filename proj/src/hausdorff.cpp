#include "uniformis/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace uniformis {

PointCloud::PointCloud(std::vector<Point> points) {
  if (points.empty()) throw DomainError("point cloud must be nonempty");
  const std::size_t d = points.front().dim();
  std::set<std::vector<double>> seen;
  points_.reserve(points.size());
  for (auto& p : points) {
    if (p.dim() != d) throw DomainError("point cloud mixes dimensions");
    if (seen.insert(p.vec()).second) points_.push_back(std::move(p));
  }
}

PointCloud PointCloud::deduplicated(std::vector<Point> points, const PseudometricFamily& family,
                                    double dedupTolerance) {
  if (!(dedupTolerance >= 0.0)) throw DomainError("dedup tolerance must be >= 0");
  if (points.empty()) throw DomainError("point cloud must be nonempty");
  std::vector<Point> kept;
  for (auto& p : points) {
    family.requireDimension(p);
    bool close = false;
    for (const auto& q : kept)
      if (family.maxDistance(p, q) <= dedupTolerance) {
        close = true;
        break;
      }
    if (!close) kept.push_back(std::move(p));
  }
  PointCloud c(std::move(kept));
  c.dedupTolerance_ = dedupTolerance;
  return c;
}

PointCloud PointCloud::line(std::initializer_list<double> xs) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back(Point{x});
  return PointCloud(std::move(pts));
}

PointCloud PointCloud::grid(const Point& lo, const Point& hi, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be > 0");
  if (lo.dim() != hi.dim()) throw DomainError("grid bounds differ in dimension");
  const std::size_t d = lo.dim();
  std::vector<std::size_t> counts(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (hi[i] < lo[i]) throw DomainError("grid upper bound below lower bound");
    counts[i] = static_cast<std::size_t>(std::floor((hi[i] - lo[i]) / step + 1e-6)) + 1;
  }
  std::vector<Point> pts;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::vector<double> c(d);
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = lo[i] + static_cast<double>(idx[i]) * step;
      // snap values that should be integers multiples cleanly (e.g. -1 + 20*0.05)
      if (std::abs(c[i]) < 1e-12 * std::max(1.0, step)) c[i] = 0.0;
    }
    pts.emplace_back(std::move(c));
    std::size_t k = d;
    while (k-- > 0) {
      if (++idx[k] < counts[k]) break;
      idx[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return PointCloud(std::move(pts));
}

std::size_t PointCloud::find(const Point& p, double tol) const {
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (points_[i].dim() == p.dim() && chebyshev(points_[i], p) <= tol) return i;
  return points_.size();
}

PointCloud PointCloud::unionWith(const PointCloud& other) const {
  std::vector<Point> pts = points_;
  pts.insert(pts.end(), other.points_.begin(), other.points_.end());
  return PointCloud(std::move(pts));
}

Entourage::Entourage(std::string idx, double r) : index(std::move(idx)), radius(r) {
  if (!(radius > 0.0)) throw DomainError("entourage radius must be > 0");
}

double distToSet(const PseudometricFamily& family, std::size_t index, const Point& a, const PointCloud& A) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : A) m = std::min(m, family.distance(index, a, x));
  return m;
}

double distToSet(const PseudometricFamily& family, std::string_view index, const Point& a,
                 const PointCloud& A) {
  return distToSet(family, family.indexOf(index), a, A);
}

double excess(const PseudometricFamily& family, std::size_t index, const PointCloud& A, const PointCloud& B) {
  double m = 0.0;
  for (const auto& x : A) m = std::max(m, distToSet(family, index, x, B));
  return m;
}

double hausdorffPseudometric(const PseudometricFamily& family, std::size_t index, const PointCloud& A,
                             const PointCloud& B) {
  return std::max(excess(family, index, A, B), excess(family, index, B, A));
}

double hausdorffPseudometric(const PseudometricFamily& family, std::string_view index, const PointCloud& A,
                             const PointCloud& B) {
  return hausdorffPseudometric(family, family.indexOf(index), A, B);
}

double hausdorffMax(const PseudometricFamily& family, const PointCloud& A, const PointCloud& B) {
  double m = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) m = std::max(m, hausdorffPseudometric(family, i, A, B));
  return m;
}

namespace {

// Every point of A has a partner in B with distance < eps (or <= 0 when eps == 0).
bool inflatedInto(const PseudometricFamily& family, std::size_t index, const PointCloud& A, const PointCloud& B,
                  double eps, bool closedAtZero) {
  for (const auto& a : A) {
    bool hit = false;
    for (const auto& b : B) {
      const double d = family.distance(index, a, b);
      if (closedAtZero ? d <= 0.0 : d < eps) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

}  // namespace

bool mutuallyInflated(const PseudometricFamily& family, std::size_t index, const PointCloud& A,
                      const PointCloud& B, double eps) {
  return inflatedInto(family, index, A, B, eps, false) && inflatedInto(family, index, B, A, eps, false);
}

double hausdorffViaInflation(const PseudometricFamily& family, std::size_t index, const PointCloud& A,
                             const PointCloud& B, double tol) {
  if (!(tol > 0.0)) throw DomainError("bisection tolerance must be > 0");
  // Inclusion for every eps > 0 means the infimum is 0.
  if (inflatedInto(family, index, A, B, 0.0, true) && inflatedInto(family, index, B, A, 0.0, true)) return 0.0;

  double seed = 0.0;
  for (const auto& a : A)
    for (const auto& b : B) seed = std::max(seed, family.distance(index, a, b));
  // Every nearest-partner distance is <= seed, so seed + tol is strictly enough.
  double lo = 0.0;
  double hi = seed + tol;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mutuallyInflated(family, index, A, B, mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double hausdorffViaInflation(const PseudometricFamily& family, std::string_view index, const PointCloud& A,
                             const PointCloud& B, double tol) {
  return hausdorffViaInflation(family, family.indexOf(index), A, B, tol);
}

bool entourageContains(const PseudometricFamily& family, const Entourage& U, const PointCloud& A,
                       const PointCloud& B) {
  return mutuallyInflated(family, family.indexOf(U.index), A, B, U.radius);
}

}  // namespace uniformis
