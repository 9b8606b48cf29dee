#pragma once

// The potential-induced order u <= v iff d_l(u, v) <= phi_l(u) - phi_l(v)
// for every l, and Bishop-Phelps / Ekeland searches over finite candidate
// sets. Maximality is always relative to the candidates.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "uniformis/core.hpp"
#include "uniformis/hausdorff.hpp"
#include "uniformis/solvers.hpp"

namespace uniformis {

class OrderContext {
 public:
  /// Requires a separating family and a potential for every member.
  OrderContext(PseudometricFamily family, PotentialFamily potentials, double tol = defaultFloatTol());

  const PseudometricFamily& family() const { return family_; }
  const PotentialFamily& potentials() const { return potentials_; }
  double tol() const { return tol_; }
  /// phi_l(x) in family order.
  std::vector<double> phi(const Point& x) const;

 private:
  PseudometricFamily family_;
  PotentialFamily potentials_;
  double tol_;
};

/// d_l(u, v) <= phi_l(u) - phi_l(v) + tol for every l.
bool precedes(const OrderContext& ctx, const Point& u, const Point& v);

/// Candidates v with no w (max_l d_l(v, w) > tol) such that v precedes w.
/// Brute force, O(n^2).
PointCloud maximalElements(const OrderContext& ctx, const PointCloud& candidates);

/// One strictness check phi_m(x*) < phi_m(x) + d_m(x, x*) against x.
struct StrictnessCheck {
  Point candidate;
  bool holds = false;
  std::string index;    // a member where the strict inequality holds
  double margin = 0.0;  // best phi_m(x) + d_m(x, x*) - phi_m(x*)
};

struct BishopPhelpsReport {
  Point x0;
  Point xStar;
  std::size_t upSetSize = 0;
  std::size_t maximalCount = 0;
  /// phi_l(x*) + d_l(x0, x*) <= phi_l(x0) per member (with tol).
  std::map<std::string, bool> upperCondition;
  std::vector<StrictnessCheck> strictness;  // one per candidate not within tol of x*
  double minMargin = 0.0;
  bool agreesWithOracle = false;  // x* in maximalElements(up-set)
  bool passed = false;
};

/// Restricts candidates to {v : x0 precedes v} and returns a maximal element
/// of that up-set: the one with the smallest max_l d_l(x0, .), then the
/// lowest index. x0 must be a candidate (within tol).
BishopPhelpsReport bishopPhelpsSearch(const OrderContext& ctx, const Point& x0, const PointCloud& candidates);

struct EkelandReport {
  Point x0;
  Point xStar;
  std::size_t restrictedSize = 0;  // |Y|
  std::map<std::string, bool> potentialDrop;  // phi_l(x*) <= phi_l(x0)
  std::map<std::string, bool> withinDelta;    // d_l(x0, x*) <= delta_l
  std::vector<StrictnessCheck> strictness;    // against every candidate
  double minMargin = 0.0;
  bool agreesWithOracle = false;  // x* in maximalElements(up-set within Y)
  bool passed = false;
};

/// Raised when phi_l(x0) > min over candidates of phi_l + delta_l.
class HypothesisError : public ContractViolation {
 public:
  HypothesisError(const std::string& what, std::string index) : ContractViolation(what), index_(std::move(index)) {}
  const std::string& index() const { return index_; }

 private:
  std::string index_;
};

/// Checks the near-minimality hypothesis on the candidates, restricts to
/// Y = {x : phi_l(x) <= phi_l(x0) for all l}, runs bishopPhelpsSearch inside
/// Y and verifies the three conclusions.
EkelandReport ekelandSearch(const OrderContext& ctx, const Point& x0, const std::map<std::string, double>& delta,
                            const PointCloud& candidates);

}  // namespace uniformis
