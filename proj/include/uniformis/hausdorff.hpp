#pragma once

// Finite point clouds and the Hausdorff pseudometrics H^lambda between them.

#include <cstddef>
#include <string>
#include <vector>

#include "uniformis/core.hpp"

namespace uniformis {

/// Nonempty finite set of points of a common dimension. Exact duplicates
/// are dropped on construction (first occurrence kept), so the cloud has set
/// semantics; `deduplicated` additionally merges points closer than a
/// tolerance under the family's largest member.
class PointCloud {
 public:
  explicit PointCloud(std::vector<Point> points);
  PointCloud(std::initializer_list<Point> points) : PointCloud(std::vector<Point>(points)) {}

  static PointCloud deduplicated(std::vector<Point> points, const PseudometricFamily& family,
                                 double dedupTolerance);
  /// Points of a 1-D cloud given by their coordinates.
  static PointCloud line(std::initializer_list<double> xs);
  /// Regular grid lo, lo + step, ..., up to hi (inclusive within step/1e6) in each coordinate.
  static PointCloud grid(const Point& lo, const Point& hi, double step);

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.front().dim(); }
  double dedupTolerance() const { return dedupTolerance_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  /// Index of a point within chebyshev distance `tol`, or size() if none.
  std::size_t find(const Point& p, double tol) const;
  bool contains(const Point& p, double tol) const { return find(p, tol) < size(); }

  /// Union with set semantics, this cloud's points first.
  PointCloud unionWith(const PointCloud& other) const;

 private:
  std::vector<Point> points_;
  double dedupTolerance_ = 0.0;
};

/// U(lambda, eps) = {(x, y) : d_lambda(x, y) < eps}.
struct Entourage {
  Entourage(std::string index, double radius);
  std::string index;
  double radius;
};

/// d_lambda(a, A) = min over x in A of d_lambda(a, x).
double distToSet(const PseudometricFamily& family, std::size_t index, const Point& a, const PointCloud& A);
double distToSet(const PseudometricFamily& family, std::string_view index, const Point& a,
                 const PointCloud& A);

/// sup over A of d_lambda(x, B): how far A sticks out of B.
double excess(const PseudometricFamily& family, std::size_t index, const PointCloud& A, const PointCloud& B);

/// H^lambda(A, B) = max(excess(A, B), excess(B, A)).
double hausdorffPseudometric(const PseudometricFamily& family, std::size_t index, const PointCloud& A,
                             const PointCloud& B);
double hausdorffPseudometric(const PseudometricFamily& family, std::string_view index, const PointCloud& A,
                             const PointCloud& B);

/// max over members of H^lambda(A, B).
double hausdorffMax(const PseudometricFamily& family, const PointCloud& A, const PointCloud& B);

/// A is inside the open eps-inflation of B and vice versa.
bool mutuallyInflated(const PseudometricFamily& family, std::size_t index, const PointCloud& A,
                      const PointCloud& B, double eps);

/// The same distance computed as the infimum of radii eps for which the two
/// clouds sit in each other's open eps-inflations, located by bisection.
/// Independent of the max-min formula; agrees with it within `tol`.
double hausdorffViaInflation(const PseudometricFamily& family, std::size_t index, const PointCloud& A,
                             const PointCloud& B, double tol);
double hausdorffViaInflation(const PseudometricFamily& family, std::string_view index, const PointCloud& A,
                             const PointCloud& B, double tol);

/// (A, B) in H_U for U = U(lambda, eps): every point of either cloud is
/// strictly within eps of the other. Ties at exactly eps are outside.
bool entourageContains(const PseudometricFamily& family, const Entourage& U, const PointCloud& A,
                       const PointCloud& B);

}  // namespace uniformis
