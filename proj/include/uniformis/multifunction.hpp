#pragma once

// Multi-functions with finite images and empirical checkers for their
// semi-continuity, contractivity and invariant sets.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uniformis/core.hpp"
#include "uniformis/hausdorff.hpp"

namespace uniformis {

/// x -> L x + b with L a dense square matrix (row-major).
class AffineMap {
 public:
  static AffineMap scalar(double scale, Point offset);
  static AffineMap diagonal(std::vector<double> scales, Point offset);
  static AffineMap matrix(std::vector<std::vector<double>> rows, Point offset);

  Point operator()(const Point& x) const;
  std::size_t dim() const { return offset_.dim(); }
  const Point& offset() const { return offset_; }
  const std::vector<std::vector<double>>& linear() const { return linear_; }
  /// s when L = s * I.
  std::optional<double> uniformScale() const;

 private:
  AffineMap(std::vector<std::vector<double>> rows, Point offset);
  std::vector<std::vector<double>> linear_;
  Point offset_;
};

using PointMap = std::function<Point(const Point&)>;

/// T : D -> finite nonempty subsets of R^n.
class MultiFunction {
 public:
  using ImageFn = std::function<PointCloud(const Point&)>;
  using DomainFn = std::function<bool(const Point&)>;

  explicit MultiFunction(ImageFn image, DomainFn domain = {}, bool imagesCompact = true);

  /// T(x) = {A_1 x, ..., A_m x}, one point per branch, in branch order.
  static MultiFunction affineBranches(std::vector<AffineMap> branches);
  /// T(x) = cloud for every x.
  static MultiFunction constant(PointCloud cloud);
  /// T(x) = {f(x)}.
  static MultiFunction singleValued(PointMap f);

  PointCloud operator()(const Point& x) const;
  bool inDomain(const Point& x) const { return !domain_ || domain_(x); }
  bool imagesCompact() const { return imagesCompact_; }
  /// T(A) = union of T(a) over a in A.
  PointCloud image(const PointCloud& A) const;

  /// Branches when built by affineBranches, else empty.
  const std::vector<AffineMap>& branches() const { return branches_; }

 private:
  ImageFn image_;
  DomainFn domain_;
  bool imagesCompact_ = true;
  std::vector<AffineMap> branches_;
};

/// d_lambda(x, T(x)).
double residual(const MultiFunction& T, const PseudometricFamily& family, std::size_t index, const Point& x);
/// max over lambda of d_lambda(x, T(x)).
double maxResidual(const MultiFunction& T, const PseudometricFamily& family, const Point& x);

enum class CheckKind {
  WeakLower,
  WeakUpper,
  ResidualLipschitz,  // |d(u,Tu) - d(v,Tv)| <= d(u,v) + H(Tv,Tu)
  FContractive,
  SetContraction,
  ResidualDescent,
  Axioms
};

std::string_view checkKindName(CheckKind kind);

struct Violation {
  std::vector<Point> witnesses;
  std::vector<double> values;
  std::string detail;
};

/// Outcome of a sampled check. `empirical` marks checks whose verdict is
/// limited by the sample (never a certificate).
struct CheckReport {
  CheckKind kind = CheckKind::WeakLower;
  std::vector<Violation> violations;
  std::size_t samplesTested = 0;
  bool empirical = true;
  std::map<std::string, double> worstRatio;  // per index, where meaningful
  std::string note;

  bool passed() const { return violations.empty(); }
};

using SemicontinuityReport = CheckReport;

struct ProbeOptions {
  std::size_t levels = 6;  // probe radii r, r/2, ..., r/2^(levels-1)
  double tol = defaultFloatTol();
};

/// Samples openness of {x in D : d_lambda(x, T(x)) < alpha} around each grid
/// point inside it: some probe shell of radius <= probeRadius must stay in
/// the set. alpha = 0 gives the empty set, which passes vacuously.
CheckReport checkWeakLowerSC(const MultiFunction& T, const PseudometricFamily& family, std::string_view index,
                             double alpha, const PointCloud& grid, double probeRadius, ProbeOptions opts = {});

/// Same for {x in D : d_lambda(x, T(x)) > alpha}.
CheckReport checkWeakUpperSC(const MultiFunction& T, const PseudometricFamily& family, std::string_view index,
                             double alpha, const PointCloud& grid, double probeRadius, ProbeOptions opts = {});

/// |d(u,Tu) - d(v,Tv)| <= d(u,v) + H(T(v),T(u)) on every pair. This holds for
/// every multi-function, so a violation means a numerical or modeling bug.
CheckReport checkImageResidualInequality(const MultiFunction& T, const PseudometricFamily& family,
                                         std::string_view index,
                                         const std::vector<std::pair<Point, Point>>& samplePairs,
                                         double tol = defaultFloatTol());

/// H^lambda(Tx, Ty) <= k_lambda d_lambda(x, y) for every lambda with a
/// constant and every pair. worstRatio holds the largest observed H/d.
CheckReport checkFContractive(const MultiFunction& T, const PseudometricFamily& family,
                              const ContractionConstants& k,
                              const std::vector<std::pair<Point, Point>>& samplePairs,
                              double tol = defaultFloatTol());

/// Grid points whose residual max_lambda d_lambda(x, Tx) is <= eta
/// (approximate fixed points). nullopt when none qualifies.
std::optional<PointCloud> residualSetLocator(const MultiFunction& T, const PseudometricFamily& family,
                                             const PointCloud& grid, double eta, double tol = defaultFloatTol());

/// Least C with x0 in C and T(C) inside C, by iterating C <- {x0} u T(C)
/// within a finite universe. Image points are matched to universe points
/// within `tol` (chebyshev); an image outside the universe is a DomainError,
/// failure to stabilize within maxIter a ConvergenceError.
PointCloud invariantSetIterate(const MultiFunction& T, const Point& seed, const PointCloud& universe,
                               std::size_t maxIter, double tol = defaultFloatTol());

/// Ordered pairs (grid[i], grid[j]), i < j, subsampled deterministically to at
/// most maxPairs using the seed.
std::vector<std::pair<Point, Point>> samplePairs(const PointCloud& grid, std::size_t maxPairs, unsigned seed);

}  // namespace uniformis
