#include "uniformis/multifunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace uniformis {

// ---------------------------------------------------------------------------
// AffineMap

AffineMap::AffineMap(std::vector<std::vector<double>> rows, Point offset)
    : linear_(std::move(rows)), offset_(std::move(offset)) {
  const std::size_t n = offset_.dim();
  if (linear_.size() != n) throw DomainError("affine map: matrix rows must match offset dimension");
  for (const auto& r : linear_) {
    if (r.size() != n) throw DomainError("affine map: matrix must be square");
    for (double v : r)
      if (!std::isfinite(v)) throw DomainError("affine map: non-finite coefficient");
  }
}

AffineMap AffineMap::scalar(double scale, Point offset) {
  std::vector<double> d(offset.dim(), scale);
  return diagonal(std::move(d), std::move(offset));
}

AffineMap AffineMap::diagonal(std::vector<double> scales, Point offset) {
  const std::size_t n = offset.dim();
  if (scales.size() != n) throw DomainError("affine map: diagonal length must match offset dimension");
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = scales[i];
  return AffineMap(std::move(rows), std::move(offset));
}

AffineMap AffineMap::matrix(std::vector<std::vector<double>> rows, Point offset) {
  return AffineMap(std::move(rows), std::move(offset));
}

Point AffineMap::operator()(const Point& x) const {
  const std::size_t n = dim();
  if (x.dim() != n) throw DomainError("affine map: dimension mismatch");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = offset_[i];
    for (std::size_t j = 0; j < n; ++j) s += linear_[i][j] * x[j];
    y[i] = s;
  }
  return Point(std::move(y));
}

std::optional<double> AffineMap::uniformScale() const {
  const double s = linear_[0][0];
  for (std::size_t i = 0; i < linear_.size(); ++i)
    for (std::size_t j = 0; j < linear_.size(); ++j)
      if (linear_[i][j] != (i == j ? s : 0.0)) return std::nullopt;
  return s;
}

// ---------------------------------------------------------------------------
// MultiFunction

MultiFunction::MultiFunction(ImageFn image, DomainFn domain, bool imagesCompact)
    : image_(std::move(image)), domain_(std::move(domain)), imagesCompact_(imagesCompact) {
  if (!image_) throw DomainError("multi-function needs an image procedure");
}

MultiFunction MultiFunction::affineBranches(std::vector<AffineMap> branches) {
  if (branches.empty()) throw DomainError("affine multi-function needs at least one branch");
  const std::size_t n = branches.front().dim();
  for (const auto& b : branches)
    if (b.dim() != n) throw DomainError("affine branches differ in dimension");
  auto shared = std::make_shared<const std::vector<AffineMap>>(branches);
  MultiFunction T([shared](const Point& x) {
    std::vector<Point> pts;
    pts.reserve(shared->size());
    for (const auto& b : *shared) pts.push_back(b(x));
    return PointCloud(std::move(pts));
  });
  T.branches_ = std::move(branches);
  return T;
}

MultiFunction MultiFunction::constant(PointCloud cloud) {
  return MultiFunction([cloud = std::move(cloud)](const Point&) { return cloud; });
}

MultiFunction MultiFunction::singleValued(PointMap f) {
  if (!f) throw DomainError("single-valued map must be callable");
  return MultiFunction([f = std::move(f)](const Point& x) { return PointCloud({f(x)}); });
}

PointCloud MultiFunction::operator()(const Point& x) const {
  if (!inDomain(x)) throw DomainError("point " + describe(x) + " is outside the operator's domain");
  return image_(x);
}

PointCloud MultiFunction::image(const PointCloud& A) const {
  std::vector<Point> pts;
  for (const auto& a : A) {
    const PointCloud img = (*this)(a);
    pts.insert(pts.end(), img.begin(), img.end());
  }
  return PointCloud(std::move(pts));
}

double residual(const MultiFunction& T, const PseudometricFamily& family, std::size_t index, const Point& x) {
  return distToSet(family, index, x, T(x));
}

double maxResidual(const MultiFunction& T, const PseudometricFamily& family, const Point& x) {
  const PointCloud img = T(x);
  double m = 0.0;
  for (std::size_t l = 0; l < family.size(); ++l) m = std::max(m, distToSet(family, l, x, img));
  return m;
}

std::string_view checkKindName(CheckKind kind) {
  switch (kind) {
    case CheckKind::WeakLower: return "weak-lower";
    case CheckKind::WeakUpper: return "weak-upper";
    case CheckKind::ResidualLipschitz: return "image-residual-inequality";
    case CheckKind::FContractive: return "f-contractive";
    case CheckKind::SetContraction: return "set-contraction";
    case CheckKind::ResidualDescent: return "residual-descent";
    case CheckKind::Axioms: return "axioms";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Weak semi-continuity probes

namespace {

std::vector<std::vector<double>> probeDirections(std::size_t dim) {
  std::vector<std::vector<double>> dirs;
  if (dim <= 3) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<double> d(dim);
      std::size_t c = code;
      bool zero = true;
      for (std::size_t i = 0; i < dim; ++i) {
        d[i] = static_cast<double>(c % 3) - 1.0;
        c /= 3;
        zero = zero && d[i] == 0.0;
      }
      if (!zero) dirs.push_back(std::move(d));
    }
  } else {
    for (std::size_t i = 0; i < dim; ++i)
      for (double s : {1.0, -1.0}) {
        std::vector<double> d(dim, 0.0);
        d[i] = s;
        dirs.push_back(std::move(d));
      }
  }
  return dirs;
}

template <class InSet>
CheckReport probeOpenness(CheckKind kind, const MultiFunction& T, const PseudometricFamily& family,
                          std::size_t index, const PointCloud& grid, double probeRadius, const ProbeOptions& opts,
                          InSet inSet) {
  if (!(probeRadius > 0.0)) throw DomainError("probe radius must be > 0");
  if (opts.levels == 0) throw DomainError("at least one probe level required");
  CheckReport report;
  report.kind = kind;
  report.empirical = true;
  const auto dirs = probeDirections(grid.dim());
  for (const auto& x : grid) {
    if (!T.inDomain(x)) continue;
    const double rx = residual(T, family, index, x);
    if (!inSet(rx)) continue;
    ++report.samplesTested;
    bool open = false;
    Point worst = x;
    double worstValue = rx;
    double r = probeRadius;
    for (std::size_t level = 0; level < opts.levels && !open; ++level, r *= 0.5) {
      bool all = true;
      for (const auto& d : dirs) {
        std::vector<double> c(x.dim());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = x[i] + r * d[i];
        Point p(std::move(c));
        if (!T.inDomain(p)) continue;
        const double rp = residual(T, family, index, p);
        if (!inSet(rp)) {
          all = false;
          worst = p;
          worstValue = rp;
          break;
        }
      }
      open = all;
    }
    if (!open)
      report.violations.push_back({{x, worst},
                                   {rx, worstValue},
                                   "every probe shell down to radius " + std::to_string(r * 2.0) +
                                       " leaves the set"});
  }
  report.note = "empirical: grid and probe-radius limited, not a certificate";
  return report;
}

}  // namespace

CheckReport checkWeakLowerSC(const MultiFunction& T, const PseudometricFamily& family, std::string_view index,
                             double alpha, const PointCloud& grid, double probeRadius, ProbeOptions opts) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  return probeOpenness(CheckKind::WeakLower, T, family, family.indexOf(index), grid, probeRadius, opts,
                       [alpha](double v) { return v < alpha; });
}

CheckReport checkWeakUpperSC(const MultiFunction& T, const PseudometricFamily& family, std::string_view index,
                             double alpha, const PointCloud& grid, double probeRadius, ProbeOptions opts) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  return probeOpenness(CheckKind::WeakUpper, T, family, family.indexOf(index), grid, probeRadius, opts,
                       [alpha](double v) { return v > alpha; });
}

CheckReport checkImageResidualInequality(const MultiFunction& T, const PseudometricFamily& family,
                                         std::string_view index,
                                         const std::vector<std::pair<Point, Point>>& pairs, double tol) {
  const std::size_t l = family.indexOf(index);
  CheckReport report;
  report.kind = CheckKind::ResidualLipschitz;
  report.empirical = false;
  double worst = 0.0;
  for (const auto& [u, v] : pairs) {
    const PointCloud Tu = T(u), Tv = T(v);
    const double lhs = std::abs(distToSet(family, l, u, Tu) - distToSet(family, l, v, Tv));
    const double rhs = family.distance(l, u, v) + hausdorffPseudometric(family, l, Tv, Tu);
    ++report.samplesTested;
    worst = std::max(worst, lhs - rhs);
    if (lhs > rhs + tol) report.violations.push_back({{u, v}, {lhs, rhs}, "lhs exceeds rhs"});
  }
  report.worstRatio[family.label(l)] = worst;
  report.note = "worstRatio holds max(lhs - rhs)";
  return report;
}

CheckReport checkFContractive(const MultiFunction& T, const PseudometricFamily& family,
                              const ContractionConstants& k, const std::vector<std::pair<Point, Point>>& pairs,
                              double tol) {
  CheckReport report;
  report.kind = CheckKind::FContractive;
  report.empirical = true;
  std::vector<std::size_t> idx;
  for (const auto& [label, kl] : k.perIndex()) {
    idx.push_back(family.indexOf(label));
    report.worstRatio[label] = 0.0;
  }
  for (const auto& [x, y] : pairs) {
    const PointCloud Tx = T(x), Ty = T(y);
    ++report.samplesTested;
    for (std::size_t l : idx) {
      const std::string& label = family.label(l);
      const double kl = k.at(label);
      const double H = hausdorffPseudometric(family, l, Tx, Ty);
      const double d = family.distance(l, x, y);
      double ratio = 0.0;
      if (d > tol)
        ratio = H / d;
      else if (H > tol)
        ratio = std::numeric_limits<double>::infinity();
      report.worstRatio[label] = std::max(report.worstRatio[label], ratio);
      if (H > kl * d + tol)
        report.violations.push_back({{x, y}, {H, d, ratio}, label + ": H exceeds k * d"});
    }
  }
  report.note = "values: H, d, H/d";
  return report;
}

std::optional<PointCloud> residualSetLocator(const MultiFunction& T, const PseudometricFamily& family,
                                             const PointCloud& grid, double eta, double tol) {
  if (!(eta >= 0.0)) throw DomainError("eta must be >= 0");
  std::vector<Point> hits;
  for (const auto& x : grid)
    if (T.inDomain(x) && maxResidual(T, family, x) <= eta + tol) hits.push_back(x);
  if (hits.empty()) return std::nullopt;
  return PointCloud(std::move(hits));
}

PointCloud invariantSetIterate(const MultiFunction& T, const Point& seed, const PointCloud& universe,
                               std::size_t maxIter, double tol) {
  const std::size_t n = universe.size();
  const std::size_t s = universe.find(seed, tol);
  if (s == n) throw DomainError("seed " + describe(seed) + " is not in the universe");

  // images as universe indices, computed lazily
  std::vector<std::optional<std::vector<std::size_t>>> imageOf(n);
  auto imageIdx = [&](std::size_t i) -> const std::vector<std::size_t>& {
    if (!imageOf[i]) {
      std::vector<std::size_t> ids;
      for (const auto& y : T(universe[i])) {
        const std::size_t j = universe.find(y, tol);
        if (j == n)
          throw DomainError("T maps " + describe(universe[i]) + " to " + describe(y) + " outside the universe");
        ids.push_back(j);
      }
      imageOf[i] = std::move(ids);
    }
    return *imageOf[i];
  };

  std::vector<bool> current(n, false);
  current[s] = true;
  for (std::size_t it = 0; it < maxIter; ++it) {
    std::vector<bool> next(n, false);
    next[s] = true;
    for (std::size_t i = 0; i < n; ++i)
      if (current[i])
        for (std::size_t j : imageIdx(i)) next[j] = true;
    if (next == current) {
      std::vector<Point> pts;
      for (std::size_t i = 0; i < n; ++i)
        if (current[i]) pts.push_back(universe[i]);
      return PointCloud(std::move(pts));
    }
    current = std::move(next);
  }
  throw ConvergenceError("invariant set did not stabilize within " + std::to_string(maxIter) + " iterations");
}

std::vector<std::pair<Point, Point>> samplePairs(const PointCloud& grid, std::size_t maxPairs, unsigned seed) {
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) all.emplace_back(i, j);
  if (all.size() > maxPairs) {
    std::mt19937 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(maxPairs);
    std::sort(all.begin(), all.end());
  }
  std::vector<std::pair<Point, Point>> out;
  out.reserve(all.size());
  for (auto [i, j] : all) out.emplace_back(grid[i], grid[j]);
  return out;
}

}  // namespace uniformis
