#include "uniformis/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace uniformis {

OrderContext::OrderContext(PseudometricFamily family, PotentialFamily potentials, double tol)
    : family_(std::move(family)), potentials_(std::move(potentials)), tol_(tol) {
  if (!family_.separating())
    throw DomainError("the potential order needs a separating family (otherwise it is only a preorder)");
  potentials_.requireCovers(family_);
  if (!(tol_ >= 0.0)) throw DomainError("order tolerance must be >= 0");
}

std::vector<double> OrderContext::phi(const Point& x) const {
  std::vector<double> v(family_.size());
  for (std::size_t l = 0; l < family_.size(); ++l) v[l] = potentials_(family_.label(l), x, tol_);
  return v;
}

namespace {

bool precedesWith(const OrderContext& ctx, const Point& u, const std::vector<double>& pu, const Point& v,
                  const std::vector<double>& pv) {
  const auto& fam = ctx.family();
  for (std::size_t l = 0; l < fam.size(); ++l)
    if (fam.distance(l, u, v) > pu[l] - pv[l] + ctx.tol()) return false;
  return true;
}

StrictnessCheck strictAgainst(const OrderContext& ctx, const Point& xStar, const std::vector<double>& pStar,
                              const Point& x) {
  const auto& fam = ctx.family();
  const std::vector<double> px = ctx.phi(x);
  StrictnessCheck c;
  c.candidate = x;
  c.margin = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < fam.size(); ++l) {
    const double m = px[l] + fam.distance(l, x, xStar) - pStar[l];
    if (m > c.margin) {
      c.margin = m;
      c.index = fam.label(l);
    }
  }
  c.holds = c.margin > ctx.tol();
  return c;
}

struct Search {
  std::size_t pick = 0;  // index into candidates
  std::vector<std::size_t> upSet;
  std::vector<std::size_t> maxima;
  bool agreesWithOracle = false;
};

Search searchMaximal(const OrderContext& ctx, const Point& x0, const PointCloud& candidates) {
  const auto& fam = ctx.family();
  const std::size_t n = candidates.size();
  if (candidates.find(x0, ctx.tol()) == n) throw DomainError("x0 = " + describe(x0) + " is not a candidate");
  std::vector<std::vector<double>> phis(n);
  for (std::size_t i = 0; i < n; ++i) phis[i] = ctx.phi(candidates[i]);
  const std::vector<double> p0 = ctx.phi(x0);

  Search s;
  for (std::size_t i = 0; i < n; ++i)
    if (precedesWith(ctx, x0, p0, candidates[i], phis[i])) s.upSet.push_back(i);

  // v precedes w forces sum phi(w) <= sum phi(v) + L tol, so only that prefix can dominate v.
  std::vector<double> total(n);
  for (std::size_t i = 0; i < n; ++i) total[i] = std::accumulate(phis[i].begin(), phis[i].end(), 0.0);
  std::vector<std::size_t> order = s.upSet;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return total[a] < total[b]; });
  const double slack = static_cast<double>(fam.size()) * ctx.tol();
  for (std::size_t a = 0; a < order.size(); ++a) {
    const std::size_t v = order[a];
    bool dominated = false;
    for (std::size_t b = 0; b < order.size() && !dominated; ++b) {
      const std::size_t w = order[b];
      if (total[w] > total[v] + slack) break;
      if (w == v || fam.maxDistance(candidates[v], candidates[w]) <= ctx.tol()) continue;
      dominated = precedesWith(ctx, candidates[v], phis[v], candidates[w], phis[w]);
    }
    if (!dominated) s.maxima.push_back(v);
  }
  if (s.maxima.empty()) throw ContractViolation("no maximal element found in the up-set");
  std::sort(s.maxima.begin(), s.maxima.end());

  s.pick = s.maxima.front();
  double best = fam.maxDistance(x0, candidates[s.pick]);
  for (std::size_t i : s.maxima) {
    const double d = fam.maxDistance(x0, candidates[i]);
    if (d < best) {
      best = d;
      s.pick = i;
    }
  }

  std::vector<Point> up;
  for (std::size_t i : s.upSet) up.push_back(candidates[i]);
  s.agreesWithOracle = maximalElements(ctx, PointCloud(std::move(up))).contains(candidates[s.pick], 0.0);
  return s;
}

}  // namespace

bool precedes(const OrderContext& ctx, const Point& u, const Point& v) {
  return precedesWith(ctx, u, ctx.phi(u), v, ctx.phi(v));
}

PointCloud maximalElements(const OrderContext& ctx, const PointCloud& candidates) {
  const auto& fam = ctx.family();
  std::vector<Point> out;
  for (const auto& v : candidates) {
    bool dominated = false;
    for (const auto& w : candidates) {
      if (fam.maxDistance(v, w) <= ctx.tol()) continue;
      if (precedes(ctx, v, w)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(v);
  }
  if (out.empty()) throw ContractViolation("no maximal element among the candidates");
  return PointCloud(std::move(out));
}

BishopPhelpsReport bishopPhelpsSearch(const OrderContext& ctx, const Point& x0, const PointCloud& candidates) {
  const auto& fam = ctx.family();
  fam.requireDimension(x0);
  const Search s = searchMaximal(ctx, x0, candidates);

  BishopPhelpsReport r;
  r.x0 = x0;
  r.xStar = candidates[s.pick];
  r.upSetSize = s.upSet.size();
  r.maximalCount = s.maxima.size();
  r.agreesWithOracle = s.agreesWithOracle;

  const std::vector<double> p0 = ctx.phi(x0), pStar = ctx.phi(r.xStar);
  bool ok = true;
  for (std::size_t l = 0; l < fam.size(); ++l) {
    const bool c = pStar[l] + fam.distance(l, x0, r.xStar) <= p0[l] + ctx.tol();
    r.upperCondition[fam.label(l)] = c;
    ok = ok && c;
  }
  r.minMargin = std::numeric_limits<double>::infinity();
  for (const auto& x : candidates) {
    if (fam.maxDistance(x, r.xStar) <= ctx.tol()) continue;
    StrictnessCheck c = strictAgainst(ctx, r.xStar, pStar, x);
    r.minMargin = std::min(r.minMargin, c.margin);
    ok = ok && c.holds;
    r.strictness.push_back(std::move(c));
  }
  r.passed = ok && r.agreesWithOracle;
  return r;
}

EkelandReport ekelandSearch(const OrderContext& ctx, const Point& x0, const std::map<std::string, double>& delta,
                            const PointCloud& candidates) {
  const auto& fam = ctx.family();
  fam.requireDimension(x0);
  std::vector<double> d(fam.size());
  for (std::size_t l = 0; l < fam.size(); ++l) {
    const auto it = delta.find(fam.label(l));
    if (it == delta.end()) throw DomainError("no delta for index '" + fam.label(l) + "'");
    if (!(it->second > 0.0)) throw DomainError("delta for index '" + fam.label(l) + "' must be > 0");
    d[l] = it->second;
  }
  for (const auto& [label, v] : delta) fam.indexOf(label);

  const std::vector<double> p0 = ctx.phi(x0);
  std::vector<std::vector<double>> phis;
  for (const auto& c : candidates) phis.push_back(ctx.phi(c));
  for (std::size_t l = 0; l < fam.size(); ++l) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& p : phis) inf = std::min(inf, p[l]);
    if (p0[l] > inf + d[l] + ctx.tol())
      throw HypothesisError("near-minimality fails for index '" + fam.label(l) + "': phi(x0) = " +
                                std::to_string(p0[l]) + " > " + std::to_string(inf) + " + " + std::to_string(d[l]),
                            fam.label(l));
  }

  std::vector<Point> Y;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool in = true;
    for (std::size_t l = 0; l < fam.size() && in; ++l) in = phis[i][l] <= p0[l] + ctx.tol();
    if (in) Y.push_back(candidates[i]);
  }
  const PointCloud restricted(std::move(Y));
  const Search s = searchMaximal(ctx, x0, restricted);

  EkelandReport r;
  r.x0 = x0;
  r.xStar = restricted[s.pick];
  r.restrictedSize = restricted.size();
  r.agreesWithOracle = s.agreesWithOracle;
  const std::vector<double> pStar = ctx.phi(r.xStar);
  bool ok = true;
  for (std::size_t l = 0; l < fam.size(); ++l) {
    const bool drop = pStar[l] <= p0[l] + ctx.tol();
    const bool near = fam.distance(l, x0, r.xStar) <= d[l] + ctx.tol();
    r.potentialDrop[fam.label(l)] = drop;
    r.withinDelta[fam.label(l)] = near;
    ok = ok && drop && near;
  }
  r.minMargin = std::numeric_limits<double>::infinity();
  for (const auto& x : candidates) {
    if (fam.maxDistance(x, r.xStar) <= ctx.tol()) continue;
    StrictnessCheck c = strictAgainst(ctx, r.xStar, pStar, x);
    r.minMargin = std::min(r.minMargin, c.margin);
    ok = ok && c.holds;
    r.strictness.push_back(std::move(c));
  }
  r.passed = ok && r.agreesWithOracle;
  return r;
}

}  // namespace uniformis
