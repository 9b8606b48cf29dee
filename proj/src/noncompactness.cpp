#include "uniformis/noncompactness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace uniformis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// |b| * v with 0 * inf = 0
double scaled(double absBeta, double v) { return absBeta == 0.0 ? 0.0 : absBeta * v; }

}  // namespace

AlphaInterval AlphaInterval::unbounded(double lo) { return {lo, kInf}; }

void AlphaInterval::validate() const {
  if (!std::isfinite(lo) || lo < 0.0) throw DomainError("alpha interval: lo must be finite and >= 0");
  if (std::isnan(hi) || hi < lo) throw DomainError("alpha interval: hi must be >= lo");
}

std::string describe(const AlphaInterval& a) { return "[" + fmt(a.lo) + ", " + fmt(a.hi) + "]"; }

std::string_view setExprKindName(SetExprKind kind) {
  switch (kind) {
    case SetExprKind::Finite: return "finite";
    case SetExprKind::Abstract: return "atom";
    case SetExprKind::Ball: return "ball";
    case SetExprKind::Union: return "union";
    case SetExprKind::Sum: return "sum";
    case SetExprKind::Scale: return "scale";
    case SetExprKind::Hull: return "hull";
    case SetExprKind::Closure: return "closure";
    case SetExprKind::Thicken: return "thicken";
    case SetExprKind::Subset: return "subset";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// SetExpr

struct SetExpr::Node {
  SetExprKind kind = SetExprKind::Finite;
  std::vector<SetExpr> children;
  double parameter = 0.0;
  std::string name;
  AlphaInterval axiom;
  std::optional<PointCloud> cloud;
};

SetExpr SetExpr::finite(PointCloud cloud) {
  auto n = std::make_shared<Node>();
  n->kind = SetExprKind::Finite;
  n->cloud = std::move(cloud);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::abstractAtom(std::string name, AlphaInterval alpha) {
  alpha.validate();
  auto n = std::make_shared<Node>();
  n->kind = SetExprKind::Abstract;
  n->name = std::move(name);
  n->axiom = alpha;
  return SetExpr(std::move(n));
}

SetExpr SetExpr::ball(double radius) {
  if (!std::isfinite(radius) || radius <= 0.0) throw DomainError("ball radius must be finite and > 0");
  auto n = std::make_shared<Node>();
  n->kind = SetExprKind::Ball;
  n->parameter = radius;
  return SetExpr(std::move(n));
}

SetExpr SetExpr::unionOf(std::vector<SetExpr> children) {
  if (children.empty()) throw DomainError("union needs at least one operand");
  auto n = std::make_shared<Node>();
  n->kind = SetExprKind::Union;
  n->children = std::move(children);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::sum(SetExpr left, SetExpr right) {
  auto n = std::make_shared<Node>();
  n->kind = SetExprKind::Sum;
  n->children = {std::move(left), std::move(right)};
  return SetExpr(std::move(n));
}

SetExpr SetExpr::scale(double beta, SetExpr child) {
  if (!std::isfinite(beta)) throw DomainError("scale factor must be finite");
  auto n = std::make_shared<Node>();
  n->kind = SetExprKind::Scale;
  n->parameter = beta;
  n->children = {std::move(child)};
  return SetExpr(std::move(n));
}

SetExpr SetExpr::hull(SetExpr child) {
  auto n = std::make_shared<Node>();
  n->kind = SetExprKind::Hull;
  n->children = {std::move(child)};
  return SetExpr(std::move(n));
}

SetExpr SetExpr::closure(SetExpr child) {
  auto n = std::make_shared<Node>();
  n->kind = SetExprKind::Closure;
  n->children = {std::move(child)};
  return SetExpr(std::move(n));
}

SetExpr SetExpr::thicken(SetExpr child, double eps) {
  if (!std::isfinite(eps) || eps <= 0.0) throw DomainError("thickening epsilon must be finite and > 0");
  auto n = std::make_shared<Node>();
  n->kind = SetExprKind::Thicken;
  n->parameter = eps;
  n->children = {std::move(child)};
  return SetExpr(std::move(n));
}

SetExpr SetExpr::subset(SetExpr child, SetExpr superset) {
  auto n = std::make_shared<Node>();
  n->kind = SetExprKind::Subset;
  n->children = {std::move(child), std::move(superset)};
  return SetExpr(std::move(n));
}

SetExprKind SetExpr::kind() const { return node_->kind; }
const std::vector<SetExpr>& SetExpr::children() const { return node_->children; }
double SetExpr::parameter() const { return node_->parameter; }
const std::string& SetExpr::name() const { return node_->name; }
const AlphaInterval& SetExpr::axiom() const { return node_->axiom; }

const PointCloud& SetExpr::cloud() const {
  if (!node_->cloud) throw DomainError("not a finite atom");
  return *node_->cloud;
}

std::size_t SetExpr::depth() const {
  std::size_t d = 0;
  for (const auto& c : children()) d = std::max(d, c.depth());
  return d + 1;
}

std::size_t SetExpr::nodeCount() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.nodeCount();
  return n;
}

std::string SetExpr::describe() const {
  switch (kind()) {
    case SetExprKind::Finite: return "finite(" + std::to_string(cloud().size()) + " pts)";
    case SetExprKind::Abstract: return "atom " + name() + " " + uniformis::describe(axiom());
    case SetExprKind::Ball: return "ball(" + fmt(parameter()) + ")";
    case SetExprKind::Union: {
      std::string s = "union(";
      for (std::size_t i = 0; i < children().size(); ++i) s += (i ? ", " : "") + children()[i].describe();
      return s + ")";
    }
    case SetExprKind::Sum: return "sum(" + children()[0].describe() + ", " + children()[1].describe() + ")";
    case SetExprKind::Scale: return "scale(" + fmt(parameter()) + ", " + children()[0].describe() + ")";
    case SetExprKind::Hull: return "hull(" + children()[0].describe() + ")";
    case SetExprKind::Closure: return "closure(" + children()[0].describe() + ")";
    case SetExprKind::Thicken: return "thicken(" + children()[0].describe() + ", " + fmt(parameter()) + ")";
    case SetExprKind::Subset:
      return "subset(" + children()[0].describe() + " in " + children()[1].describe() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// alphaBounds

namespace {

AlphaInterval derive(const SetExpr& e, std::size_t depth, std::vector<DerivationStep>& trace) {
  std::vector<AlphaInterval> kids;
  for (const auto& c : e.children()) kids.push_back(derive(c, depth + 1, trace));

  AlphaInterval r;
  std::vector<std::string> used;
  switch (e.kind()) {
    case SetExprKind::Finite:
      r = {0.0, 0.0};
      used = {std::string(rules::kFinite)};
      break;
    case SetExprKind::Abstract:
      r = e.axiom();
      used = {std::string(rules::kAxiom)};
      break;
    case SetExprKind::Ball:
      r = {0.0, 2.0 * e.parameter()};
      used = {std::string(rules::kBall)};
      break;
    case SetExprKind::Union:
      r = {0.0, 0.0};
      for (const auto& k : kids) {
        r.lo = std::max(r.lo, k.lo);
        r.hi = std::max(r.hi, k.hi);
      }
      used = {std::string(rules::kUnion)};
      break;
    case SetExprKind::Sum:
      r = {std::max(kids[0].lo, kids[1].lo), kids[0].hi + kids[1].hi};
      used = {std::string(rules::kSumUpper), std::string(rules::kSumLower)};
      break;
    case SetExprKind::Scale: {
      const double b = std::abs(e.parameter());
      r = {scaled(b, kids[0].lo), scaled(b, kids[0].hi)};
      used = {std::string(rules::kScale)};
      break;
    }
    case SetExprKind::Hull:
      r = kids[0];
      used = {std::string(rules::kHull)};
      break;
    case SetExprKind::Closure:
      r = kids[0];
      used = {std::string(rules::kClosure)};
      break;
    case SetExprKind::Thicken:
      r = {kids[0].lo, kids[0].hi + e.parameter()};
      used = {std::string(rules::kThicken), std::string(rules::kMonotone)};
      break;
    case SetExprKind::Subset:
      r = {kids[0].lo, std::min(kids[0].hi, kids[1].hi)};
      used = {std::string(rules::kSubset)};
      if (r.hi < r.lo)
        throw DomainError("inconsistent subset axiom: " + e.children()[0].describe() + " has alpha >= " +
                          fmt(r.lo) + " but its superset has alpha <= " + fmt(kids[1].hi));
      break;
  }
  trace.push_back({std::move(used), e.describe(), r, depth});
  return r;
}

}  // namespace

AlphaDerivation alphaBounds(const SetExpr& expr) {
  AlphaDerivation out;
  out.interval = derive(expr, 0, out.trace);
  return out;
}

// ---------------------------------------------------------------------------
// SetOperator

SetOperator SetOperator::input() { return SetOperator(); }

SetOperator SetOperator::scale(double beta, SetOperator child) {
  if (!std::isfinite(beta)) throw DomainError("scale factor must be finite");
  SetOperator op;
  op.kind_ = SetOperatorKind::Scale;
  op.beta_ = beta;
  op.children_ = {std::move(child)};
  return op;
}

SetOperator SetOperator::translate(Point offset, SetOperator child) {
  SetOperator op;
  op.kind_ = SetOperatorKind::Translate;
  op.offset_ = std::move(offset);
  op.children_ = {std::move(child)};
  return op;
}

SetOperator SetOperator::hull(SetOperator child) {
  SetOperator op;
  op.kind_ = SetOperatorKind::Hull;
  op.children_ = {std::move(child)};
  return op;
}

SetOperator SetOperator::closure(SetOperator child) {
  SetOperator op;
  op.kind_ = SetOperatorKind::Closure;
  op.children_ = {std::move(child)};
  return op;
}

SetOperator SetOperator::unionWithFinite(SetOperator child, PointCloud fixed) {
  SetOperator op;
  op.kind_ = SetOperatorKind::UnionFinite;
  op.fixed_ = std::move(fixed);
  op.children_ = {std::move(child)};
  return op;
}

SetOperator SetOperator::unionOf(std::vector<SetOperator> children) {
  if (children.empty()) throw DomainError("operator union needs at least one operand");
  SetOperator op;
  op.kind_ = SetOperatorKind::Union;
  op.children_ = std::move(children);
  return op;
}

SetOperator SetOperator::unsupported(std::string name, std::vector<SetOperator> children) {
  SetOperator op;
  op.kind_ = SetOperatorKind::Unsupported;
  op.name_ = std::move(name);
  op.children_ = std::move(children);
  return op;
}

std::string SetOperator::describe() const {
  switch (kind_) {
    case SetOperatorKind::Input: return "A";
    case SetOperatorKind::Scale: return fmt(beta_) + "*" + children_[0].describe();
    case SetOperatorKind::Translate: return children_[0].describe() + " + " + uniformis::describe(*offset_);
    case SetOperatorKind::Hull: return "hull(" + children_[0].describe() + ")";
    case SetOperatorKind::Closure: return "closure(" + children_[0].describe() + ")";
    case SetOperatorKind::UnionFinite:
      return children_[0].describe() + " u F(" + std::to_string(fixed_->size()) + " pts)";
    case SetOperatorKind::Union: {
      std::string s = "(";
      for (std::size_t i = 0; i < children_.size(); ++i) s += (i ? " u " : "") + children_[i].describe();
      return s + ")";
    }
    case SetOperatorKind::Unsupported: return name_ + "(...)";
  }
  return "?";
}

SetExpr SetOperator::apply(const SetExpr& inputSet) const {
  switch (kind_) {
    case SetOperatorKind::Input: return inputSet;
    case SetOperatorKind::Scale: return SetExpr::scale(beta_, children_[0].apply(inputSet));
    case SetOperatorKind::Translate:
      return SetExpr::sum(children_[0].apply(inputSet), SetExpr::finite(PointCloud({*offset_})));
    case SetOperatorKind::Hull: return SetExpr::hull(children_[0].apply(inputSet));
    case SetOperatorKind::Closure: return SetExpr::closure(children_[0].apply(inputSet));
    case SetOperatorKind::UnionFinite:
      return SetExpr::unionOf({children_[0].apply(inputSet), SetExpr::finite(*fixed_)});
    case SetOperatorKind::Union: {
      std::vector<SetExpr> parts;
      for (const auto& c : children_) parts.push_back(c.apply(inputSet));
      return SetExpr::unionOf(std::move(parts));
    }
    case SetOperatorKind::Unsupported: break;
  }
  throw DomainError("operator node '" + name_ + "' has no set-expression form");
}

const std::vector<std::string_view>& certificateRules() {
  static const std::vector<std::string_view> allowed{rules::kFinite,   rules::kUnion,    rules::kClosure,
                                                     rules::kThicken,  rules::kMonotone, rules::kSumUpper,
                                                     rules::kSumLower, rules::kScale,    rules::kHull};
  return allowed;
}

namespace {

struct Refusal {
  std::string node;
  std::string reason;
};

double composeFactor(const SetOperator& op, std::size_t depth, std::vector<DerivationStep>& trace,
                     std::optional<Refusal>& refusal) {
  std::vector<double> kids;
  for (const auto& c : op.children()) {
    kids.push_back(composeFactor(c, depth + 1, trace, refusal));
    if (refusal) return kInf;
  }
  double f = 1.0;
  std::vector<std::string> used;
  switch (op.kind()) {
    case SetOperatorKind::Input:
      break;
    case SetOperatorKind::Scale:
      f = scaled(std::abs(op.beta()), kids[0]);
      used = {std::string(rules::kScale)};
      break;
    case SetOperatorKind::Translate:
      f = kids[0];
      used = {std::string(rules::kSumUpper), std::string(rules::kFinite)};
      break;
    case SetOperatorKind::Hull:
      f = kids[0];
      used = {std::string(rules::kHull)};
      break;
    case SetOperatorKind::Closure:
      f = kids[0];
      used = {std::string(rules::kClosure)};
      break;
    case SetOperatorKind::UnionFinite:
      f = kids[0];
      used = {std::string(rules::kUnion), std::string(rules::kFinite)};
      break;
    case SetOperatorKind::Union:
      f = *std::max_element(kids.begin(), kids.end());
      used = {std::string(rules::kUnion)};
      break;
    case SetOperatorKind::Unsupported:
      refusal = Refusal{op.describe(), "'" + op.name() + "' is outside the certifiable rule set"};
      return kInf;
  }
  trace.push_back({std::move(used), op.describe(), {0.0, f}, depth});
  return f;
}

// Follow the largest-factor child from the root; the blocking node is the
// deepest node on that path that still carries the root's factor.
const SetOperator& blockingNode(const SetOperator& op, double rootFactor) {
  const SetOperator* node = &op;
  while (!node->children().empty()) {
    const SetOperator* best = nullptr;
    double bestF = -1.0;
    for (const auto& c : node->children()) {
      std::vector<DerivationStep> scratch;
      std::optional<Refusal> none;
      const double f = composeFactor(c, 0, scratch, none);
      if (f > bestF) bestF = f, best = &c;
    }
    if (bestF != rootFactor) break;
    node = best;
  }
  return *node;
}

}  // namespace

KscVerdict certifyKSetContraction(const SetOperator& op, double k) {
  if (!std::isfinite(k) || k < 0.0) throw DomainError("k must be finite and >= 0");
  KscVerdict v;
  v.k = k;
  std::optional<Refusal> refusal;
  v.factor = composeFactor(op, 0, v.trace, refusal);
  if (refusal) {
    v.certified = false;
    v.blockingNode = refusal->node;
    v.reason = refusal->reason;
    return v;
  }
  if (v.factor > k) {
    v.certified = false;
    v.blockingNode = blockingNode(op, v.factor).describe();
    v.reason = "transfer factor " + fmt(v.factor) + " exceeds k = " + fmt(k);
    return v;
  }
  v.certified = true;
  v.reason = "alpha(T(A)) <= " + fmt(v.factor) + " alpha(A)";
  return v;
}

// ---------------------------------------------------------------------------
// Empirical covers

namespace {

std::size_t sweepCover(std::vector<double> v, double eps) {
  std::sort(v.begin(), v.end());
  std::size_t count = 0;
  for (std::size_t i = 0; i < v.size();) {
    const double start = v[i];
    ++count;
    while (i < v.size() && v[i] - start < 2.0 * eps) ++i;
  }
  return count;
}

std::size_t greedyCover(const PointCloud& cloud, const Pseudometric& d, const std::vector<Point>& centers,
                        double eps) {
  const std::size_t n = cloud.size();
  std::vector<bool> covered(n, false);
  std::size_t remaining = n, count = 0;
  while (remaining > 0) {
    std::size_t best = 0, bestGain = 0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      std::size_t gain = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (!covered[i] && d(centers[c], cloud[i]) < eps) ++gain;
      if (gain > bestGain) {
        bestGain = gain;
        best = c;
      }
    }
    if (bestGain == 0) break;  // cannot happen: each point covers itself
    for (std::size_t i = 0; i < n; ++i)
      if (!covered[i] && d(centers[best], cloud[i]) < eps) {
        covered[i] = true;
        --remaining;
      }
    ++count;
  }
  return count;
}

struct Coverer {
  const PointCloud& cloud;
  const Pseudometric& d;
  std::optional<std::vector<double>> projected;
  std::vector<Point> centers;

  Coverer(const PointCloud& c, const Pseudometric& m) : cloud(c), d(m) {
    if (auto w = d.lineFunctional(cloud.dim())) {
      std::vector<double> v;
      for (const auto& p : cloud) {
        double s = 0.0;
        for (std::size_t j = 0; j < p.dim(); ++j) s += (*w)[j] * p[j];
        v.push_back(s);
      }
      projected = std::move(v);
      return;
    }
    centers = cloud.points();
    for (std::size_t i = 0; i < cloud.size(); ++i)
      for (std::size_t j = i + 1; j < cloud.size(); ++j) centers.push_back(0.5 * (cloud[i] + cloud[j]));
  }

  std::size_t count(double eps) const {
    if (projected) return sweepCover(*projected, eps);
    return greedyCover(cloud, d, centers, eps);
  }

  double diameter() const {
    if (projected) {
      auto [lo, hi] = std::minmax_element(projected->begin(), projected->end());
      return *hi - *lo;
    }
    double m = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i)
      for (std::size_t j = i + 1; j < cloud.size(); ++j) m = std::max(m, d(cloud[i], cloud[j]));
    return m;
  }
};

}  // namespace

std::size_t greedyCoverNumber(const PointCloud& cloud, const PseudometricFamily& family, std::size_t index,
                              double eps) {
  if (!(eps > 0.0)) throw DomainError("cover radius must be > 0");
  if (index >= family.size()) throw DomainError("pseudometric index out of range");
  family.requireDimension(cloud[0]);
  return Coverer(cloud, family[index]).count(eps);
}

std::size_t greedyCoverNumber(const PointCloud& cloud, const PseudometricFamily& family, std::string_view index,
                              double eps) {
  return greedyCoverNumber(cloud, family, family.indexOf(index), eps);
}

namespace {

// Can the vertices be split into `parts` groups with no "far" pair inside a
// group? Backtracking colouring of the far graph, most-constrained vertex first.
class PartitionSearch {
 public:
  PartitionSearch(const std::vector<std::vector<double>>& dist, double delta, std::size_t parts)
      : n_(dist.size()), parts_(parts), far_(n_, std::vector<char>(n_, 0)), colour_(n_, -1) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) far_[i][j] = dist[i][j] > delta;
  }

  bool run() { return place(0, 0); }

 private:
  static constexpr std::size_t kNodeLimit = 20'000'000;

  bool place(std::size_t done, std::size_t used) {
    if (done == n_) return true;
    if (++nodes_ > kNodeLimit)
      throw ConvergenceError("exact partition search gave up after " + std::to_string(kNodeLimit) + " nodes");
    std::size_t pick = n_, bestSat = 0, bestDeg = 0;
    for (std::size_t v = 0; v < n_; ++v) {
      if (colour_[v] >= 0) continue;
      std::vector<char> seen(parts_, 0);
      std::size_t sat = 0, deg = 0;
      for (std::size_t u = 0; u < n_; ++u) {
        if (!far_[v][u]) continue;
        if (colour_[u] >= 0) {
          if (!seen[colour_[u]]) seen[colour_[u]] = 1, ++sat;
        } else {
          ++deg;
        }
      }
      if (pick == n_ || sat > bestSat || (sat == bestSat && deg > bestDeg)) pick = v, bestSat = sat, bestDeg = deg;
    }
    const std::size_t limit = std::min(used + 1, parts_);
    for (std::size_t c = 0; c < limit; ++c) {
      bool ok = true;
      for (std::size_t u = 0; u < n_ && ok; ++u) ok = !(far_[pick][u] && colour_[u] == static_cast<int>(c));
      if (!ok) continue;
      colour_[pick] = static_cast<int>(c);
      if (place(done + 1, std::max(used, c + 1))) return true;
      colour_[pick] = -1;
    }
    return false;
  }

  std::size_t n_, parts_;
  std::vector<std::vector<char>> far_;
  std::vector<int> colour_;
  std::size_t nodes_ = 0;
};

std::size_t sweepGroups(const std::vector<double>& sorted, double delta) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double start = sorted[i];
    ++count;
    while (i < sorted.size() && sorted[i] - start <= delta) ++i;
  }
  return count;
}

// Smallest candidate value accepted by a predicate that is monotone in it.
template <class Pred>
double leastAccepted(std::vector<double> candidates, Pred ok) {
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::size_t lo = 0, hi = candidates.size() - 1;  // the largest (the diameter) is always accepted
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (ok(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

}  // namespace

double empiricalAlpha(const PointCloud& cloud, const PseudometricFamily& family, std::size_t index,
                      std::size_t budget) {
  if (budget < 1) throw DomainError("budget must be >= 1");
  if (index >= family.size()) throw DomainError("pseudometric index out of range");
  family.requireDimension(cloud[0]);
  const Pseudometric& d = family[index];
  const std::size_t n = cloud.size();
  std::vector<double> candidates{0.0};

  if (auto w = d.lineFunctional(cloud.dim())) {
    std::vector<double> v;
    for (const auto& p : cloud) {
      double s = 0.0;
      for (std::size_t j = 0; j < p.dim(); ++j) s += (*w)[j] * p[j];
      v.push_back(s);
    }
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) candidates.push_back(v[j] - v[i]);
    return leastAccepted(std::move(candidates), [&](double delta) { return sweepGroups(v, delta) <= budget; });
  }

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i][j] = dist[j][i] = d(cloud[i], cloud[j]);
      candidates.push_back(dist[i][j]);
    }
  return leastAccepted(std::move(candidates),
                       [&](double delta) { return PartitionSearch(dist, delta, budget).run(); });
}

double empiricalAlpha(const PointCloud& cloud, const PseudometricFamily& family, std::string_view index,
                      std::size_t budget) {
  return empiricalAlpha(cloud, family, family.indexOf(index), budget);
}

double empiricalAlphaMax(const PointCloud& cloud, const PseudometricFamily& family, std::size_t budget) {
  double m = 0.0;
  for (std::size_t l = 0; l < family.size(); ++l) m = std::max(m, empiricalAlpha(cloud, family, l, budget));
  return m;
}

CheckReport checkSetContraction(const MultiFunction& T, const PseudometricFamily& family,
                                const ContractionConstants& k, const std::vector<PointCloud>& clouds,
                                std::size_t budget, double tol) {
  CheckReport report;
  report.kind = CheckKind::SetContraction;
  report.empirical = true;
  std::vector<std::size_t> idx;
  for (const auto& [label, kl] : k.perIndex()) {
    idx.push_back(family.indexOf(label));
    report.worstRatio[label] = -kInf;
  }

  bool fOk = true;
  std::size_t seed = 0;
  for (const auto& A : clouds) {
    const auto pairs = samplePairs(A, 200, static_cast<unsigned>(seed++));
    if (!checkFContractive(T, family, k, pairs, defaultFloatTol()).passed()) fOk = false;

    const PointCloud TA = T.image(A);
    ++report.samplesTested;
    for (std::size_t l : idx) {
      const std::string& label = family.label(l);
      const double lhs = empiricalAlpha(TA, family, l, budget);
      const double rhs = empiricalAlpha(A, family, l, budget);
      const double slack = lhs - k.at(label) * rhs;
      report.worstRatio[label] = std::max(report.worstRatio[label], slack);
      if (slack > tol) {
        std::vector<Point> witness(A.begin(), A.end());
        report.violations.push_back({std::move(witness),
                                     {lhs, rhs, slack},
                                     label + ": empirical alpha of T(A) exceeds k * alpha(A) + tol"});
      }
    }
  }
  report.note = std::string("empirical, non-certifying; worstRatio holds max(lhs - k * rhs); ") +
                "F-contractive pre-check " + (fOk ? "passed" : "FAILED");
  return report;
}

}  // namespace uniformis
