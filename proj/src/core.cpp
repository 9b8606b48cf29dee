#include "uniformis/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

namespace uniformis {

double defaultFloatTol() {
  static const double tol = [] {
    if (const char* env = std::getenv("UNIFORMIS_FLOAT_TOL")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end != env && std::isfinite(v) && v > 0.0) return v;
    }
    return 1e-9;
  }();
  return tol;
}

// ---------------------------------------------------------------------------
// Point

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DomainError("point must have dimension >= 1");
  for (double c : coords_)
    if (!std::isfinite(c)) throw DomainError("point coordinates must be finite");
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

namespace {

void requireSameDim(const Point& a, const Point& b) {
  if (a.dim() != b.dim())
    throw DomainError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                      std::to_string(b.dim()));
}

}  // namespace

Point operator+(const Point& a, const Point& b) {
  requireSameDim(a, b);
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return Point(std::move(r));
}

Point operator-(const Point& a, const Point& b) {
  requireSameDim(a, b);
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return Point(std::move(r));
}

Point operator*(double s, const Point& a) {
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = s * a[i];
  return Point(std::move(r));
}

double chebyshev(const Point& a, const Point& b) {
  requireSameDim(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::string describe(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Pseudometric

Pseudometric Pseudometric::coordinateAbs(std::string label, std::size_t coord) {
  Pseudometric m;
  m.label_ = std::move(label);
  m.kind_ = PseudometricKind::CoordinateAbs;
  m.coords_ = {coord};
  m.minDim_ = coord + 1;
  return m;
}

Pseudometric Pseudometric::weightedAbs(std::string label, std::vector<double> weights) {
  if (weights.empty()) throw DomainError("weighted_abs needs at least one weight");
  for (double w : weights)
    if (!std::isfinite(w) || w < 0.0) throw DomainError("weighted_abs weights must be finite and >= 0");
  Pseudometric m;
  m.label_ = std::move(label);
  m.kind_ = PseudometricKind::WeightedAbs;
  m.minDim_ = weights.size();
  m.weights_ = std::move(weights);
  return m;
}

Pseudometric Pseudometric::euclideanSubset(std::string label, std::vector<std::size_t> coords) {
  if (coords.empty()) throw DomainError("euclidean_subset needs at least one coordinate");
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  Pseudometric m;
  m.label_ = std::move(label);
  m.kind_ = PseudometricKind::EuclideanSubset;
  m.minDim_ = *std::max_element(coords.begin(), coords.end()) + 1;
  m.coords_ = std::move(coords);
  return m;
}

Pseudometric Pseudometric::maxOf(std::string label, std::vector<Pseudometric> parts) {
  if (parts.empty()) throw DomainError("max of an empty set of pseudometrics");
  Pseudometric m;
  m.label_ = std::move(label);
  m.kind_ = PseudometricKind::Max;
  for (const auto& p : parts) m.minDim_ = std::max(m.minDim_, p.minDimension());
  m.parts_ = std::make_shared<const std::vector<Pseudometric>>(std::move(parts));
  return m;
}

Pseudometric Pseudometric::custom(std::string label, DistanceFn fn, std::size_t minDimension) {
  if (!fn) throw DomainError("custom pseudometric needs a distance procedure");
  Pseudometric m;
  m.label_ = std::move(label);
  m.kind_ = PseudometricKind::Custom;
  m.fn_ = std::move(fn);
  m.minDim_ = minDimension;
  return m;
}

double Pseudometric::operator()(const Point& x, const Point& y) const {
  requireSameDim(x, y);
  if (x.dim() < minDim_)
    throw DomainError("pseudometric '" + label_ + "' needs dimension >= " + std::to_string(minDim_));
  switch (kind_) {
    case PseudometricKind::CoordinateAbs:
      return std::abs(x[coords_[0]] - y[coords_[0]]);
    case PseudometricKind::WeightedAbs: {
      double s = 0.0;
      for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * std::abs(x[i] - y[i]);
      return s;
    }
    case PseudometricKind::EuclideanSubset: {
      double s = 0.0;
      for (std::size_t c : coords_) {
        const double d = x[c] - y[c];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case PseudometricKind::Max: {
      double m = 0.0;
      for (const auto& p : *parts_) m = std::max(m, p(x, y));
      return m;
    }
    case PseudometricKind::Custom:
      return fn_(x, y);
  }
  return 0.0;
}

bool Pseudometric::isSeminormInduced() const {
  if (kind_ == PseudometricKind::Custom) return false;
  if (kind_ == PseudometricKind::Max)
    return std::all_of(parts_->begin(), parts_->end(), [](const auto& p) { return p.isSeminormInduced(); });
  return true;
}

double Pseudometric::seminorm(std::span<const double> v) const {
  if (v.size() < minDim_) throw DomainError("vector too short for pseudometric '" + label_ + "'");
  switch (kind_) {
    case PseudometricKind::CoordinateAbs:
      return std::abs(v[coords_[0]]);
    case PseudometricKind::WeightedAbs: {
      double s = 0.0;
      for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * std::abs(v[i]);
      return s;
    }
    case PseudometricKind::EuclideanSubset: {
      double s = 0.0;
      for (std::size_t c : coords_) s += v[c] * v[c];
      return std::sqrt(s);
    }
    case PseudometricKind::Max: {
      double m = 0.0;
      for (const auto& p : *parts_) m = std::max(m, p.seminorm(v));
      return m;
    }
    case PseudometricKind::Custom:
      break;
  }
  throw DomainError("pseudometric '" + label_ + "' is not induced by a seminorm");
}

std::vector<double> Pseudometric::subgradient(std::span<const double> v, std::size_t dim) const {
  std::vector<double> g(dim, 0.0);
  auto sign = [](double a) { return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); };
  switch (kind_) {
    case PseudometricKind::CoordinateAbs:
      g[coords_[0]] = sign(v[coords_[0]]);
      return g;
    case PseudometricKind::WeightedAbs:
      for (std::size_t i = 0; i < weights_.size(); ++i) g[i] = weights_[i] * sign(v[i]);
      return g;
    case PseudometricKind::EuclideanSubset: {
      const double n = seminorm(v);
      if (n > 0.0)
        for (std::size_t c : coords_) g[c] = v[c] / n;
      return g;
    }
    case PseudometricKind::Max: {
      const Pseudometric* best = nullptr;
      double m = -1.0;
      for (const auto& p : *parts_) {
        const double n = p.seminorm(v);
        if (n > m) {
          m = n;
          best = &p;
        }
      }
      return best->subgradient(v, dim);
    }
    case PseudometricKind::Custom:
      break;
  }
  throw DomainError("pseudometric '" + label_ + "' is not induced by a seminorm");
}

std::optional<std::vector<double>> Pseudometric::lineFunctional(std::size_t dim) const {
  std::vector<double> w(dim, 0.0);
  switch (kind_) {
    case PseudometricKind::CoordinateAbs:
      w[coords_[0]] = 1.0;
      return w;
    case PseudometricKind::WeightedAbs: {
      std::size_t nonzero = 0;
      for (std::size_t i = 0; i < weights_.size(); ++i)
        if (weights_[i] > 0.0) {
          w[i] = weights_[i];
          ++nonzero;
        }
      if (nonzero <= 1) return w;
      return std::nullopt;
    }
    case PseudometricKind::EuclideanSubset: {
      if (coords_.size() != 1) return std::nullopt;
      w[coords_[0]] = 1.0;
      return w;
    }
    case PseudometricKind::Max: {
      // max of members that all see the same direction (up to scale) is
      // the largest of them
      std::optional<std::vector<double>> best;
      double bestScale = -1.0;
      for (const auto& p : *parts_) {
        auto f = p.lineFunctional(dim);
        if (!f) return std::nullopt;
        if (!best) {
          best = f;
          bestScale = std::sqrt(std::inner_product(f->begin(), f->end(), f->begin(), 0.0));
          continue;
        }
        const double na = bestScale;
        const double nb = std::sqrt(std::inner_product(f->begin(), f->end(), f->begin(), 0.0));
        const double dot = std::abs(std::inner_product(f->begin(), f->end(), best->begin(), 0.0));
        if (na > 0.0 && nb > 0.0 && std::abs(dot - na * nb) > 1e-12 * na * nb) return std::nullopt;
        if (nb > na) {
          best = f;
          bestScale = nb;
        }
      }
      return best;
    }
    case PseudometricKind::Custom:
      break;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// PseudometricFamily

PseudometricFamily::PseudometricFamily(std::size_t dimension, std::vector<Pseudometric> members,
                                       bool separating, bool saturated)
    : dimension_(dimension), members_(std::move(members)), separating_(separating), saturated_(saturated) {
  if (dimension_ == 0) throw DomainError("family dimension must be >= 1");
  if (members_.empty()) throw DomainError("pseudometric family needs a nonempty index set");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].label().empty()) throw DomainError("pseudometric labels must be nonempty");
    if (members_[i].minDimension() > dimension_)
      throw DomainError("pseudometric '" + members_[i].label() + "' exceeds family dimension");
    for (std::size_t j = 0; j < i; ++j)
      if (members_[j].label() == members_[i].label())
        throw DomainError("duplicate pseudometric label '" + members_[i].label() + "'");
  }
}

bool PseudometricFamily::seminormInduced() const {
  return std::all_of(members_.begin(), members_.end(), [](const auto& m) { return m.isSeminormInduced(); });
}

std::vector<std::string> PseudometricFamily::labels() const {
  std::vector<std::string> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.label());
  return out;
}

bool PseudometricFamily::contains(std::string_view label) const {
  return std::any_of(members_.begin(), members_.end(), [&](const auto& m) { return m.label() == label; });
}

std::size_t PseudometricFamily::indexOf(std::string_view label) const {
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i].label() == label) return i;
  throw DomainError("unknown pseudometric index '" + std::string(label) + "'");
}

void PseudometricFamily::requireDimension(const Point& p) const {
  if (p.dim() != dimension_)
    throw DomainError("point dimension " + std::to_string(p.dim()) + " does not match family dimension " +
                      std::to_string(dimension_));
}

double PseudometricFamily::distance(std::size_t index, const Point& x, const Point& y) const {
  if (index >= members_.size()) throw DomainError("pseudometric index out of range");
  requireDimension(x);
  requireDimension(y);
  return members_[index](x, y);
}

double PseudometricFamily::distance(std::string_view label, const Point& x, const Point& y) const {
  return distance(indexOf(label), x, y);
}

double PseudometricFamily::maxDistance(const Point& x, const Point& y) const {
  requireDimension(x);
  requireDimension(y);
  double m = 0.0;
  for (const auto& d : members_) m = std::max(m, d(x, y));
  return m;
}

std::vector<double> PseudometricFamily::distances(const Point& x, const Point& y) const {
  requireDimension(x);
  requireDimension(y);
  std::vector<double> out;
  out.reserve(members_.size());
  for (const auto& d : members_) out.push_back(d(x, y));
  return out;
}

double PseudometricFamily::seminorm(std::size_t index, std::span<const double> v) const {
  if (v.size() != dimension_) throw DomainError("vector dimension does not match family dimension");
  return members_.at(index).seminorm(v);
}

PseudometricFamily saturate(const PseudometricFamily& family) {
  if (family.contains(kMaxIndexLabel)) return family;
  std::vector<Pseudometric> members = family.members();
  members.push_back(Pseudometric::maxOf(std::string(kMaxIndexLabel), family.members()));
  return PseudometricFamily(family.dimension(), std::move(members), family.separating(), true);
}

double supMetricRho(const PseudometricFamily& family, const Point& x, const Point& y) {
  return std::min(1.0, family.maxDistance(x, y));
}

bool isCauchyAtTolerance(std::span<const Point> seq, const PseudometricFamily& family, double eps) {
  if (!(eps > 0.0)) throw DomainError("Cauchy tolerance must be > 0");
  if (seq.empty()) throw DomainError("sequence must be nonempty");
  const std::size_t n = seq.size();
  if (n == 1) return true;
  const std::size_t minTail = std::max<std::size_t>(2, (n + 1) / 2);
  // tail diameters grow as the start index decreases; scan from the end
  double diam = 0.0;
  for (std::size_t start = n; start-- > 0;) {
    for (std::size_t j = start + 1; j < n; ++j) diam = std::max(diam, family.maxDistance(seq[start], seq[j]));
    if (diam >= eps) return false;
    if (n - start >= minTail) return true;
  }
  return true;
}

AxiomReport checkPseudometricAxioms(const PseudometricFamily& family, std::span<const Point> samples,
                                    double tol) {
  AxiomReport report;
  report.pointsTested = samples.size();
  auto fail = [&](std::string msg) {
    if (report.failures.size() < 32) report.failures.push_back(std::move(msg));
  };
  const std::size_t m = family.size();
  const std::size_t n = samples.size();
  // d[l][i*n + j]
  std::vector<std::vector<double>> d(m, std::vector<double>(n * n));
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[l][i * n + j] = family.distance(l, samples[i], samples[j]);

  for (std::size_t l = 0; l < m; ++l) {
    const auto& dl = d[l];
    const std::string& lab = family.label(l);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(dl[i * n + i]) > tol) fail(lab + ": nonzero self-distance at " + describe(samples[i]));
      for (std::size_t j = 0; j < n; ++j) {
        if (dl[i * n + j] < -tol) fail(lab + ": negative distance");
        if (std::abs(dl[i * n + j] - dl[j * n + i]) > tol) fail(lab + ": asymmetric");
        for (std::size_t k = 0; k < n; ++k)
          if (dl[i * n + k] > dl[i * n + j] + dl[j * n + k] + tol) fail(lab + ": triangle inequality fails");
      }
    }
  }
  if (family.saturated()) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) {
        bool dominated = false;
        for (std::size_t c = 0; c < m && !dominated; ++c) {
          bool ok = true;
          for (std::size_t p = 0; p < n * n && ok; ++p)
            ok = d[c][p] + tol >= std::max(d[a][p], d[b][p]);
          dominated = ok;
        }
        if (!dominated) fail("no member dominates " + family.label(a) + " and " + family.label(b));
      }
  }
  return report;
}

// ---------------------------------------------------------------------------
// ContractionConstants

ContractionConstants::ContractionConstants(std::map<std::string, double> perIndex)
    : perIndex_(std::move(perIndex)) {
  if (perIndex_.empty()) throw DomainError("contraction constants need at least one index");
  for (const auto& [label, k] : perIndex_) {
    if (!(k >= 0.0 && k < 1.0))
      throw DomainError("contraction constant for '" + label + "' must lie in [0, 1)");
    sup_ = std::max(sup_, k);
  }
}

ContractionConstants ContractionConstants::uniform(const PseudometricFamily& family, double k) {
  std::map<std::string, double> m;
  for (const auto& l : family.labels()) m[l] = k;
  return ContractionConstants(std::move(m));
}

double ContractionConstants::at(std::string_view label) const {
  auto it = perIndex_.find(std::string(label));
  if (it == perIndex_.end()) throw DomainError("no contraction constant for index '" + std::string(label) + "'");
  return it->second;
}

std::vector<double> ContractionConstants::alignedTo(const PseudometricFamily& family) const {
  std::vector<double> out;
  out.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) out.push_back(at(family.label(i)));
  return out;
}

}  // namespace uniformis
