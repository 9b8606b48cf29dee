#pragma once

// Convex-hull geometry for inwardness: the inner set
//   I_K(x) = x + {c (y - x) : y in hull(K), c >= 1}
// and its per-seminorm envelope. All decisions reduce to linear programs.

#include <cstddef>
#include <vector>

#include "uniformis/core.hpp"
#include "uniformis/hausdorff.hpp"

namespace uniformis {

/// Convex-combination weights of `y` over the points of K, or empty when y
/// is outside hull(K) by more than `tol` (L1 residual of the equations).
std::vector<double> hullWeights(const PointCloud& K, const Point& y, double tol = defaultFloatTol());
bool inHull(const PointCloud& K, const Point& y, double tol = defaultFloatTol());

/// Largest s in [0, 1] with x + s (t - x) in hull(K). Throws DomainError
/// when x itself is outside hull(K) beyond tol.
double maxRayFraction(const PointCloud& K, const Point& x, const Point& t, double tol = defaultFloatTol());

/// t in I_K(x). Exact up to LP rounding in every dimension: t is in the inner
/// set iff the segment from x towards t leaves x inside hull(K).
bool innerSetMembership(const PointCloud& K, const Point& x, const Point& t, double tol = defaultFloatTol());

/// Closest point of I_K(x) to t in the scaled max-seminorm sense.
struct InnerProjection {
  Point z;             // x + c (f - x)
  Point f;             // point of hull(K)
  double c = 1.0;      // >= 1
  double ratio = 0.0;  // max_lambda |t - z|_lambda / scale_lambda
  std::vector<double> residuals;  // |t - z|_lambda per member
  std::size_t cuttingRounds = 0;
  bool converged = true;  // cutting-plane gap closed to tol
};

/// Minimizes max_lambda |t - z|_lambda / scale[lambda] over z in I_K(x).
/// Members with scale 0 become hard constraints |t - z|_lambda = 0. Needs a
/// seminorm-induced family; seminorms enter through subgradient cuts, so
/// polyhedral ones are handled exactly and Euclidean ones to within `tol`.
/// Among minimizers, the one with the smallest c is returned.
InnerProjection projectOntoInnerSet(const PointCloud& K, const Point& x, const Point& t,
                                    const PseudometricFamily& family, const std::vector<double>& scale,
                                    double tol = defaultFloatTol());

inline const std::vector<double>& defaultEtaSchedule() {
  static const std::vector<double> schedule{1.0, 0.5, 0.25, 0.125, 1e-3};
  return schedule;
}

/// t in the envelope of I_K(x): some z in I_K(x) has |t - z|_lambda <=
/// eta |t - x|_lambda for every lambda and every eta of the schedule.
bool envelopeMembership(const PointCloud& K, const Point& x, const Point& t, const PseudometricFamily& family,
                        const std::vector<double>& etaSchedule = defaultEtaSchedule(),
                        double tol = defaultFloatTol());

}  // namespace uniformis
