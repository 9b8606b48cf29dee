#pragma once

// Uniform spaces presented by finite families of pseudometrics on R^n.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uniformis {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: dimension mismatch, empty inputs, unknown index, etc.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A runtime-checked hypothesis or contract of an algorithm does not hold.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An iteration did not reach its stopping condition.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Absolute tolerance used for floating comparisons when none is passed.
/// 1e-9 unless the environment variable UNIFORMIS_FLOAT_TOL holds a
/// positive number.
double defaultFloatTol();

/// Dense point of R^n with finite coordinates.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }
  const std::vector<double>& vec() const { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point& a, const Point& b) { return a.coords_ <=> b.coords_; }

  friend Point operator+(const Point& a, const Point& b);
  friend Point operator-(const Point& a, const Point& b);
  friend Point operator*(double s, const Point& a);

 private:
  std::vector<double> coords_;
};

/// Max-norm of a - b; coordinatewise closeness used for point identity.
double chebyshev(const Point& a, const Point& b);

std::string describe(const Point& p);

enum class PseudometricKind { CoordinateAbs, WeightedAbs, EuclideanSubset, Max, Custom };

/// One member d_lambda of a family. The built-in kinds are induced by
/// seminorms (d(x,y) = |x - y|_lambda); custom ones are opaque procedures.
class Pseudometric {
 public:
  using DistanceFn = std::function<double(const Point&, const Point&)>;

  /// |x_coord - y_coord|
  static Pseudometric coordinateAbs(std::string label, std::size_t coord);
  /// sum_i w_i |x_i - y_i|, w_i >= 0
  static Pseudometric weightedAbs(std::string label, std::vector<double> weights);
  /// Euclidean distance restricted to the listed coordinates.
  static Pseudometric euclideanSubset(std::string label, std::vector<std::size_t> coords);
  /// Pointwise maximum of the given members.
  static Pseudometric maxOf(std::string label, std::vector<Pseudometric> parts);
  /// User procedure; must be a pseudometric, which is only checked by sampling.
  static Pseudometric custom(std::string label, DistanceFn fn, std::size_t minDimension = 1);

  const std::string& label() const { return label_; }
  PseudometricKind kind() const { return kind_; }
  std::size_t minDimension() const { return minDim_; }

  double operator()(const Point& x, const Point& y) const;

  bool isSeminormInduced() const;
  /// |v|_lambda. Throws DomainError for custom members.
  double seminorm(std::span<const double> v) const;
  /// A functional g with g.v = |v|_lambda and |g.w| <= |w|_lambda for all w.
  std::vector<double> subgradient(std::span<const double> v, std::size_t dim) const;
  /// w such that d(x, y) = |w.(x - y)|, when the member only sees one direction.
  std::optional<std::vector<double>> lineFunctional(std::size_t dim) const;

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::size_t>& coordinates() const { return coords_; }

 private:
  Pseudometric() = default;

  std::string label_;
  PseudometricKind kind_ = PseudometricKind::Custom;
  std::vector<double> weights_;        // WeightedAbs
  std::vector<std::size_t> coords_;    // CoordinateAbs (one entry), EuclideanSubset
  std::shared_ptr<const std::vector<Pseudometric>> parts_;  // Max
  DistanceFn fn_;                      // Custom
  std::size_t minDim_ = 1;
};

/// Finite indexed family {d_lambda} on R^dimension.
class PseudometricFamily {
 public:
  PseudometricFamily(std::size_t dimension, std::vector<Pseudometric> members, bool separating,
                     bool saturated = false);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return members_.size(); }
  bool separating() const { return separating_; }
  bool saturated() const { return saturated_; }
  bool seminormInduced() const;

  const Pseudometric& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Pseudometric>& members() const { return members_; }
  std::vector<std::string> labels() const;
  const std::string& label(std::size_t i) const { return members_[i].label(); }

  bool contains(std::string_view label) const;
  /// Throws DomainError on an unknown label.
  std::size_t indexOf(std::string_view label) const;

  void requireDimension(const Point& p) const;

  double distance(std::size_t index, const Point& x, const Point& y) const;
  double distance(std::string_view label, const Point& x, const Point& y) const;
  /// max over all members
  double maxDistance(const Point& x, const Point& y) const;
  std::vector<double> distances(const Point& x, const Point& y) const;

  /// Seminorm of v under member `index`; requires seminormInduced members.
  double seminorm(std::size_t index, std::span<const double> v) const;

 private:
  std::size_t dimension_;
  std::vector<Pseudometric> members_;
  bool separating_;
  bool saturated_;
};

inline constexpr std::string_view kMaxIndexLabel = "__max";

/// Adds a top member `__max` dominating every original member. Idempotent.
PseudometricFamily saturate(const PseudometricFamily& family);

/// min(1, max_lambda d_lambda(x, y)): the truncated metric used to reduce
/// set-valued contractions on a uniform space to a single metric.
double supMetricRho(const PseudometricFamily& family, const Point& x, const Point& y);

/// True when some tail of `seq` has d_lambda-diameter < eps for every lambda.
/// The tail must hold at least max(2, ceil(n/2)) terms so that a finite
/// sample cannot pass on its last element alone.
bool isCauchyAtTolerance(std::span<const Point> seq, const PseudometricFamily& family, double eps);

struct AxiomReport {
  std::size_t pointsTested = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Checks zero self-distance, symmetry, triangle inequality per member and,
/// when the family claims saturation, the domination condition on all pairs.
AxiomReport checkPseudometricAxioms(const PseudometricFamily& family, std::span<const Point> samples,
                                    double tol = defaultFloatTol());

/// Per-index contraction constants 0 <= k_lambda < 1.
class ContractionConstants {
 public:
  ContractionConstants() = default;
  explicit ContractionConstants(std::map<std::string, double> perIndex);
  static ContractionConstants uniform(const PseudometricFamily& family, double k);

  const std::map<std::string, double>& perIndex() const { return perIndex_; }
  double sup() const { return sup_; }
  double at(std::string_view label) const;
  /// Values in family order; throws DomainError when a member has no constant.
  std::vector<double> alignedTo(const PseudometricFamily& family) const;

 private:
  std::map<std::string, double> perIndex_;
  double sup_ = 0.0;
};

}  // namespace uniformis
