#pragma once

// Interval bounds on the non-compactness measure alpha, propagated through
// set expressions, plus a partition-based empirical proxy on finite clouds.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uniformis/core.hpp"
#include "uniformis/hausdorff.hpp"
#include "uniformis/multifunction.hpp"

namespace uniformis {

/// [lo, hi] with 0 <= lo <= hi; hi may be +inf.
struct AlphaInterval {
  double lo = 0.0;
  double hi = 0.0;

  static AlphaInterval exact(double v) { return {v, v}; }
  static AlphaInterval unbounded(double lo = 0.0);
  /// Throws DomainError unless 0 <= lo <= hi and lo finite.
  void validate() const;
  bool operator==(const AlphaInterval&) const = default;
};

std::string describe(const AlphaInterval& a);

enum class SetExprKind { Finite, Abstract, Ball, Union, Sum, Scale, Hull, Closure, Thicken, Subset };

std::string_view setExprKindName(SetExprKind kind);

/// Immutable expression tree over sets. Nodes are shared, so copies are cheap.
class SetExpr {
 public:
  static SetExpr finite(PointCloud cloud);
  static SetExpr abstractAtom(std::string name, AlphaInterval alpha);
  static SetExpr ball(double radius);
  static SetExpr unionOf(std::vector<SetExpr> children);
  static SetExpr sum(SetExpr left, SetExpr right);
  static SetExpr scale(double beta, SetExpr child);
  static SetExpr hull(SetExpr child);
  static SetExpr closure(SetExpr child);
  static SetExpr thicken(SetExpr child, double eps);
  /// child, with the user axiom child ⊆ superset.
  static SetExpr subset(SetExpr child, SetExpr superset);

  SetExprKind kind() const;
  const std::vector<SetExpr>& children() const;
  /// Ball radius, scale factor or thickening epsilon.
  double parameter() const;
  const std::string& name() const;
  const AlphaInterval& axiom() const;
  const PointCloud& cloud() const;

  std::size_t depth() const;
  std::size_t nodeCount() const;
  /// Compact one-line rendering, e.g. "scale(0.5, atom A)".
  std::string describe() const;

 private:
  struct Node;
  explicit SetExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// One rule application. `rules` has the primary rule first.
struct DerivationStep {
  std::vector<std::string> rules;
  std::string node;
  AlphaInterval result;
  std::size_t depth = 0;
};

struct AlphaDerivation {
  AlphaInterval interval;
  std::vector<DerivationStep> trace;  // post-order, root last
};

namespace rules {
inline constexpr std::string_view kFinite = "finite-precompact";
inline constexpr std::string_view kAxiom = "axiom";
inline constexpr std::string_view kBall = "ball-cover";
inline constexpr std::string_view kUnion = "union-max";
inline constexpr std::string_view kClosure = "closure-invariance";
inline constexpr std::string_view kThicken = "thickening";
inline constexpr std::string_view kMonotone = "monotonicity";
inline constexpr std::string_view kSumUpper = "sum-subadditivity";
inline constexpr std::string_view kSumLower = "sum-lower-derived";
inline constexpr std::string_view kScale = "scale-homogeneity";
inline constexpr std::string_view kHull = "hull-invariance";
inline constexpr std::string_view kSubset = "subset-monotone";
}  // namespace rules

/// Structural recursion:
///   finite [0,0]; atom its axiom; ball(r) [0,2r]; union [max lo, max hi];
///   scale(b) |b|*[lo,hi]; hull, closure unchanged; thicken(e) [lo, hi+e];
///   sum [max(lo_l,lo_r), hi_l+hi_r]; subset [lo, min(hi, hi_superset)].
AlphaDerivation alphaBounds(const SetExpr& expr);

enum class SetOperatorKind { Input, Scale, Translate, Hull, Closure, UnionFinite, Union, Unsupported };

/// A set-to-set operator A -> T(A) built from rules whose alpha transfer
/// factor is known.
class SetOperator {
 public:
  static SetOperator input();
  static SetOperator scale(double beta, SetOperator child);
  static SetOperator translate(Point offset, SetOperator child);
  static SetOperator hull(SetOperator child);
  static SetOperator closure(SetOperator child);
  static SetOperator unionWithFinite(SetOperator child, PointCloud fixed);
  static SetOperator unionOf(std::vector<SetOperator> children);
  /// Placeholder for anything outside the rule set; always refused.
  static SetOperator unsupported(std::string name, std::vector<SetOperator> children = {});

  SetOperatorKind kind() const { return kind_; }
  const std::vector<SetOperator>& children() const { return children_; }
  double beta() const { return beta_; }
  const std::optional<Point>& offset() const { return offset_; }
  const std::optional<PointCloud>& fixed() const { return fixed_; }
  const std::string& name() const { return name_; }
  std::string describe() const;

  /// The expression T(input) for a given input set.
  SetExpr apply(const SetExpr& inputSet) const;

 private:
  SetOperatorKind kind_ = SetOperatorKind::Input;
  double beta_ = 1.0;
  std::optional<Point> offset_;
  std::optional<PointCloud> fixed_;
  std::string name_;
  std::vector<SetOperator> children_;
};

struct KscVerdict {
  bool certified = false;
  double factor = 0.0;  // composed transfer factor; inf when unsupported
  double k = 0.0;
  std::vector<DerivationStep> trace;  // result.hi holds the node factor
  std::string blockingNode;           // empty when certified
  std::string reason;
};

/// Certifies alpha(T(A)) <= k alpha(A) by composing transfer factors:
/// scale |b|, translate 1, hull 1, closure 1, union with finite 1, union max.
/// Only the composed root factor is compared with k. A refusal names an
/// unsupported node, or else the deepest node on the max-factor chain from the
/// root that still carries the root factor.
KscVerdict certifyKSetContraction(const SetOperator& op, double k);

/// Rules a certificate may cite.
const std::vector<std::string_view>& certificateRules();

/// Number of open d_lambda-balls of radius eps used to cover the cloud.
/// Members that reduce to |w . (x - y)| are covered exactly by a sweep;
/// others by greedy max-coverage over cloud points and pairwise midpoints
/// (ties to the lowest candidate index), an upper bound.
std::size_t greedyCoverNumber(const PointCloud& cloud, const PseudometricFamily& family, std::size_t index,
                              double eps);
std::size_t greedyCoverNumber(const PointCloud& cloud, const PseudometricFamily& family, std::string_view index,
                              double eps);

/// Least delta such that the cloud splits into at most `budget` groups of
/// d_lambda-diameter <= delta. Computed exactly: delta ranges over pairwise
/// distances, and each candidate is decided by a sorted sweep (members that
/// only see one direction) or a backtracking partition search. On the line this
/// equals 2 eps* for the least eps at which `budget` balls of radius eps cover.
/// Exact search means A subset B gives alpha(A) <= alpha(B), and
/// alpha(A u B, rA + rB) <= max(alpha(A, rA), alpha(B, rB)). The search throws
/// ConvergenceError if it exceeds its node limit.
double empiricalAlpha(const PointCloud& cloud, const PseudometricFamily& family, std::size_t index,
                      std::size_t budget);
double empiricalAlpha(const PointCloud& cloud, const PseudometricFamily& family, std::string_view index,
                      std::size_t budget);
/// Max over all members.
double empiricalAlphaMax(const PointCloud& cloud, const PseudometricFamily& family, std::size_t budget);

/// For every cloud A and every lambda with a constant:
///   empiricalAlpha_lambda(T(A)) <= k_lambda empiricalAlpha_lambda(A) + tol
/// at the same budget. worstRatio holds the largest lhs - k * rhs. The note
/// records the outcome of a sampled F-contractive pre-check.
CheckReport checkSetContraction(const MultiFunction& T, const PseudometricFamily& family,
                                const ContractionConstants& k, const std::vector<PointCloud>& clouds,
                                std::size_t budget, double tol);

}  // namespace uniformis
