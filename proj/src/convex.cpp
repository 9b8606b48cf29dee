#include "uniformis/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "uniformis/linprog.hpp"

namespace uniformis {

std::vector<double> hullWeights(const PointCloud& K, const Point& y, double tol) {
  if (y.dim() != K.dim()) throw DomainError("hull membership: dimension mismatch");
  const std::size_t m = K.size(), d = K.dim();
  LinearProgram lp;
  lp.numVars = m;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> row(m);
    for (std::size_t i = 0; i < m; ++i) row[i] = K[i][j];
    lp.addRow(std::move(row), RowSense::Equal, y[j]);
  }
  lp.addRow(std::vector<double>(m, 1.0), RowSense::Equal, 1.0);
  const LpResult r = solveLinearProgram(lp, tol);
  if (r.status != LpStatus::Optimal) return {};
  return r.x;
}

bool inHull(const PointCloud& K, const Point& y, double tol) { return !hullWeights(K, y, tol).empty(); }

double maxRayFraction(const PointCloud& K, const Point& x, const Point& t, double tol) {
  if (x.dim() != K.dim() || t.dim() != K.dim()) throw DomainError("inner set: dimension mismatch");
  const std::size_t m = K.size(), d = K.dim();
  // variables: hull weights (m), then s
  LinearProgram lp;
  lp.numVars = m + 1;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> row(m + 1);
    for (std::size_t i = 0; i < m; ++i) row[i] = K[i][j];
    row[m] = -(t[j] - x[j]);
    lp.addRow(std::move(row), RowSense::Equal, x[j]);
  }
  std::vector<double> sum(m + 1, 1.0);
  sum[m] = 0.0;
  lp.addRow(std::move(sum), RowSense::Equal, 1.0);
  std::vector<double> cap(m + 1, 0.0);
  cap[m] = 1.0;
  lp.addRow(std::move(cap), RowSense::LessEqual, 1.0);
  lp.objective.assign(m + 1, 0.0);
  lp.objective[m] = -1.0;
  const LpResult r = solveLinearProgram(lp, tol);
  if (r.status == LpStatus::Infeasible) throw DomainError("base point " + describe(x) + " lies outside hull(K)");
  if (r.status != LpStatus::Optimal) throw ConvergenceError("ray fraction LP did not finish");
  return std::clamp(r.x[m], 0.0, 1.0);
}

bool innerSetMembership(const PointCloud& K, const Point& x, const Point& t, double tol) {
  if (!inHull(K, x, tol)) throw DomainError("inner set: base point " + describe(x) + " is not in the hull");
  const double s = maxRayFraction(K, x, t, tol);
  const double len = chebyshev(t, x);
  if (len <= tol) return true;
  return s * len > tol;
}

namespace {

struct Cut {
  std::size_t member;
  std::vector<double> h;
};

double dot(const std::vector<double>& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

InnerProjection projectOntoInnerSet(const PointCloud& K, const Point& x, const Point& t,
                                    const PseudometricFamily& family, const std::vector<double>& scale,
                                    double tol) {
  if (!family.seminormInduced())
    throw DomainError("inner-set projection needs seminorm-induced pseudometrics");
  if (scale.size() != family.size()) throw DomainError("one scale per pseudometric required");
  family.requireDimension(x);
  family.requireDimension(t);
  if (K.dim() != family.dimension()) throw DomainError("hull points do not match family dimension");
  if (!inHull(K, x, tol)) throw DomainError("base point " + describe(x) + " lies outside hull(K)");

  const std::size_t d = family.dimension();
  const double xScale = 1.0 + chebyshev(x, Point(std::vector<double>(d, 0.0)));
  std::vector<std::vector<double>> gens;
  for (const auto& p : K) {
    std::vector<double> g(d);
    double norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      g[j] = p[j] - x[j];
      norm = std::max(norm, std::abs(g[j]));
    }
    if (norm > 1e-14 * xScale) gens.push_back(std::move(g));
  }
  const std::size_t q = gens.size();
  std::vector<double> tx(d);
  for (std::size_t j = 0; j < d; ++j) tx[j] = t[j] - x[j];

  std::vector<Cut> cuts;
  std::set<std::pair<std::size_t, std::vector<double>>> seen;
  auto addCut = [&](std::size_t member, std::vector<double> h) {
    if (std::all_of(h.begin(), h.end(), [](double v) { return v == 0.0; })) return false;
    if (!seen.insert({member, h}).second) return false;
    cuts.push_back({member, std::move(h)});
    return true;
  };
  for (std::size_t l = 0; l < family.size(); ++l) {
    for (std::size_t j = 0; j < d; ++j)
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> e(d, 0.0);
        e[j] = sgn;
        addCut(l, family[l].subgradient(e, d));
      }
    addCut(l, family[l].subgradient(tx, d));
  }

  auto residualAt = [&](const std::vector<double>& mu) {
    std::vector<double> v = tx;
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < d; ++j) v[j] -= mu[i] * gens[i][j];
    return v;
  };
  auto trueRatio = [&](const std::vector<double>& v, std::vector<double>& norms) {
    double worst = 0.0;
    norms.assign(family.size(), 0.0);
    for (std::size_t l = 0; l < family.size(); ++l) {
      norms[l] = family[l].seminorm(v);
      double ratio;
      if (scale[l] > 0.0)
        ratio = norms[l] / scale[l];
      else
        ratio = norms[l] <= tol ? 0.0 : std::numeric_limits<double>::infinity();
      worst = std::max(worst, ratio);
    }
    return worst;
  };

  InnerProjection out{x, x, 1.0, 0.0, {}, 0, true};
  constexpr std::size_t kMaxRounds = 400;
  int phase = 1;
  double bound = 0.0;  // phase-two cap on r
  std::vector<double> mu(q, 0.0);
  double ratio = std::numeric_limits<double>::infinity();
  std::vector<double> norms;

  for (std::size_t round = 0; round < kMaxRounds; ++round) {
    out.cuttingRounds = round + 1;
    LinearProgram lp;
    lp.numVars = q + 1;  // mu, r
    for (const auto& c : cuts) {
      std::vector<double> row(q + 1);
      for (std::size_t i = 0; i < q; ++i) row[i] = -dot(c.h, gens[i]);
      row[q] = -scale[c.member];
      lp.addRow(std::move(row), RowSense::LessEqual, -dot(c.h, tx));
    }
    lp.objective.assign(q + 1, 0.0);
    if (phase == 1) {
      lp.objective[q] = 1.0;
    } else {
      for (std::size_t i = 0; i < q; ++i) lp.objective[i] = 1.0;
      std::vector<double> cap(q + 1, 0.0);
      cap[q] = 1.0;
      lp.addRow(std::move(cap), RowSense::LessEqual, bound);
    }
    const LpResult r = solveLinearProgram(lp, tol * 1e-3);
    if (r.status == LpStatus::Infeasible) {
      if (phase == 1) {
        // a zero-scale member cannot be matched exactly
        std::vector<double> v = tx;
        out.ratio = trueRatio(v, norms);
        out.residuals = norms;
        out.converged = true;
        return out;
      }
      phase = 1;  // cap too tight after new cuts; fall back
      continue;
    }
    if (r.status != LpStatus::Optimal) {
      out.converged = false;
      break;
    }
    mu.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(q));
    const double lower = r.x[q];
    const std::vector<double> v = residualAt(mu);
    ratio = trueRatio(v, norms);

    const double target = phase == 1 ? lower : bound;
    bool added = false;
    if (ratio > target + tol) {
      for (std::size_t l = 0; l < family.size(); ++l) {
        const double allowed = scale[l] * target;
        if (norms[l] > allowed + tol * std::max(1.0, scale[l])) added |= addCut(l, family[l].subgradient(v, d));
      }
      if (added) continue;
      out.converged = false;
    }
    if (phase == 1) {
      phase = 2;
      bound = ratio + tol;
      continue;
    }
    break;
  }
  if (out.cuttingRounds >= kMaxRounds) out.converged = false;

  double s = 0.0;
  for (double v : mu) s += v;
  std::vector<double> z(d), f(d);
  for (std::size_t j = 0; j < d; ++j) {
    double vj = 0.0;
    for (std::size_t i = 0; i < q; ++i) vj += mu[i] * gens[i][j];
    z[j] = x[j] + vj;
    f[j] = s > 1.0 ? x[j] + vj / s : z[j];
  }
  out.z = Point(std::move(z));
  out.f = Point(std::move(f));
  out.c = std::max(1.0, s);
  out.ratio = ratio;
  out.residuals = norms;
  return out;
}

bool envelopeMembership(const PointCloud& K, const Point& x, const Point& t, const PseudometricFamily& family,
                        const std::vector<double>& etaSchedule, double tol) {
  if (etaSchedule.empty()) throw DomainError("eta schedule must be nonempty");
  for (std::size_t i = 0; i < etaSchedule.size(); ++i) {
    if (!(etaSchedule[i] > 0.0)) throw DomainError("eta schedule entries must be > 0");
    if (i > 0 && etaSchedule[i] > etaSchedule[i - 1]) throw DomainError("eta schedule must be decreasing");
  }
  family.requireDimension(x);
  family.requireDimension(t);
  if (family.maxDistance(t, x) <= tol) {
    if (!inHull(K, x, tol)) throw DomainError("base point " + describe(x) + " lies outside hull(K)");
    return true;
  }
  std::vector<double> scale(family.size());
  for (std::size_t l = 0; l < family.size(); ++l) scale[l] = family.distance(l, t, x);
  const InnerProjection p = projectOntoInnerSet(K, x, t, family, scale, tol);
  return p.ratio <= etaSchedule.back() + tol;
}

}  // namespace uniformis
