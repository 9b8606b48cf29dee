#pragma once

// Fixed-point iterations: Picard for contractions, Nadler for set-valued
// contractions, Caristi-potential descent, and a solver for weakly inward
// maps on a convex hull.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uniformis/core.hpp"
#include "uniformis/hausdorff.hpp"
#include "uniformis/multifunction.hpp"

namespace uniformis {

/// eps_n for step n (n >= 1); must be summable.
using SlackSchedule = std::function<double(std::size_t)>;

struct SolverConfig {
  double tol = 1e-9;
  std::size_t maxIter = 10000;
  SlackSchedule slack;  // empty: tol * 2^-n
  double floatTol = defaultFloatTol();

  void validate() const;
  double slackAt(std::size_t n) const;
};

enum class Termination { Converged, MaxIter, Stalled };

std::string_view terminationName(Termination t);

struct SolverTrace {
  std::vector<std::string> labels;
  std::vector<Point> iterates;
  /// residuals[n][l] = d_l(x_n, x_{n+1}); one entry fewer than iterates.
  std::vector<std::vector<double>> residuals;
  Termination termination = Termination::MaxIter;
  bool aPrioriBoundSatisfied = true;
  double finalResidual = 0.0;  // max_l d_l(x*, T x*) at the returned point
  std::vector<double> slacks;  // Nadler: eps_n per step
  std::vector<double> stepRho;  // Nadler: rho(x_n, x_{n+1})
  /// Caristi: potentials[n][l] = phi_l(x_n).
  std::vector<std::vector<double>> potentials;
  /// Named post-hoc property checks, e.g. "a-priori-bound", "telescoping".
  std::map<std::string, bool> checks;
  std::vector<std::string> notes;

  bool converged() const { return termination == Termination::Converged; }
  std::size_t steps() const { return residuals.size(); }
};

struct SolveResult {
  Point point;
  SolverTrace trace;
};

/// x_{n+1} = f(x_n), stopping once max_l d_l(x_n, x_{n+1}) k/(1-k) <= tol
/// (k = k.sup()) and the new iterate has residual <= tol. On max-iter the
/// iterate with the smallest residual is returned.
SolveResult picardSolve(const PointMap& f, const PseudometricFamily& family, const ContractionConstants& k,
                        const Point& x0, const SolverConfig& cfg = {});

/// Picks the index of x_{n+1} within T(x_n).
using SelectionPolicy = std::function<std::size_t(const Point& x, const PointCloud& image)>;

/// Nearest image point in rho = min(1, max_l d_l); ties to the smaller
/// untruncated distance, then the lowest index.
std::size_t rhoNearestSelection(const PseudometricFamily& family, const Point& x, const PointCloud& image);

/// Selection always taking the given branch (clamped to the last one).
SelectionPolicy fixedBranchSelection(std::size_t branch);

/// Set-valued iteration x_{n+1} in T(x_n). Stops when max_l d_l(x_n, T x_n)
/// <= tol; flags a stall when that residual has not decreased over the last
/// 10 iterations. The slack bound rho(x_n, x_{n+1}) <= H_rho(T x_{n-1}, T x_n)
/// + eps_n is checked and recorded under "nadler-slack".
SolveResult nadlerSolve(const MultiFunction& T, const PseudometricFamily& family, const ContractionConstants& k,
                        const Point& x0, const SolverConfig& cfg = {}, SelectionPolicy policy = {});

struct SelectionGap {
  Point choice;
  std::size_t index = 0;
  std::vector<double> gaps;  // d_l(x, y) - d_l(x, T x) per member
  bool simultaneous = false;  // every gap within tol of 0
};

/// y in T(x) minimizing max_l gap_l; ties to the lowest index.
SelectionGap metricSelection(const MultiFunction& T, const PseudometricFamily& family, const Point& x,
                             double tol = defaultFloatTol());

/// phi_l per member label with declared lower bounds.
class PotentialFamily {
 public:
  using Fn = std::function<double(const Point&)>;

  void add(std::string label, Fn fn, double lowerBound);
  bool has(std::string_view label) const;
  double lowerBound(std::string_view label) const;
  /// Throws ContractViolation when phi drops below its declared bound - tol.
  double operator()(std::string_view label, const Point& x, double tol = defaultFloatTol()) const;
  std::vector<std::string> labels() const;
  /// Throws DomainError unless every family label has a potential.
  void requireCovers(const PseudometricFamily& family) const;

 private:
  struct Entry {
    Fn fn;
    double lower;
  };
  std::map<std::string, Entry, std::less<>> entries_;
};

enum class CaristiStep {
  MaxProgress,      // admissible image point with the largest min-progress
  MetricSelection,  // only the metricSelection point, if admissible
};

/// Steps to y in T(x) with d_l(x, y) <= phi_l(x) - phi_l(y) for every l and
/// min_l (phi_l(x) - phi_l(y)) >= tol. With no admissible y the run ends:
/// converged when max_l d_l(x, T x) <= tol, stalled otherwise. Checks
/// "telescoping" and "monotone" are recorded.
SolveResult caristiDescent(const MultiFunction& T, const PseudometricFamily& family, const PotentialFamily& phi,
                           const Point& x0, const SolverConfig& cfg = {},
                           CaristiStep step = CaristiStep::MaxProgress);

/// phi_l(x) = d_l(x, T x) / (1 - k_l), lower bound 0, for every member.
PotentialFamily caristiContractionPotentials(const MultiFunction& T, const PseudometricFamily& family,
                                             const ContractionConstants& k);

struct ResidualDescentReport {
  CheckReport check;
  std::optional<SolveResult> descent;  // run only when the check passes
};

/// d_l(f x, T f x) <= d_l(x, T x) + r_l d_l(x, f x) on every sample and
/// member (r_l < 0 required for each). On success runs caristiDescent on f
/// from samples[0] with phi_l(x) = -d_l(x, T x) / r_l.
ResidualDescentReport checkResidualDescent(const PointMap& f, const MultiFunction& T,
                                           const PseudometricFamily& family, const std::map<std::string, double>& r,
                                           const std::vector<Point>& samples, const SolverConfig& cfg = {});

/// 0.9 (1 - k) / (1 + k): below the threshold where k < (1 - e) / (1 + e)
/// stops holding.
double inwardEpsilon(double k);

struct InwardnessWitness {
  Point x;
  Point f;     // point of hull(K)
  double c = 1.0;
  bool direct = false;  // T(x) already in hull(K)
  double ratio = 0.0;   // max_l |T x - x - c (f - x)|_l / (eps_l |T x - x|_l)
  std::map<std::string, double> residuals;
  std::map<std::string, double> epsilons;
};

/// Witness (f, c) for T(x): f in hull(K), c >= 1, minimizing the scaled
/// residual. Accepted iff ratio <= 1 (+ floatTol).
InwardnessWitness inwardnessWitness(const Point& Tx, const PointCloud& K, const Point& x,
                                    const PseudometricFamily& family, const ContractionConstants& k,
                                    double floatTol = defaultFloatTol());

class InwardnessError : public ContractViolation {
 public:
  InwardnessError(const std::string& what, InwardnessWitness best)
      : ContractViolation(what), best_(std::move(best)) {}
  const Point& iterate() const { return best_.x; }
  const InwardnessWitness& bestWitness() const { return best_; }

 private:
  InwardnessWitness best_;
};

struct InwardSolveResult {
  Point point;
  SolverTrace trace;
  std::vector<InwardnessWitness> witnesses;  // one per step
};

/// x <- f(x) with f from the witness, until max_l |T x - x|_l <= tol. Needs
/// a seminorm-induced family and x0 in hull(K). Throws InwardnessError when
/// no acceptable witness exists. Check "step-inequality" records
///   |f - T f|_l <= |T x - x|_l + (k_l - (1 - e_l)/(1 + e_l)) |x - f|_l.
InwardSolveResult inwardSolve(const PointMap& T, const PointCloud& K, const PseudometricFamily& family,
                              const ContractionConstants& k, const Point& x0, const SolverConfig& cfg = {});

}  // namespace uniformis
