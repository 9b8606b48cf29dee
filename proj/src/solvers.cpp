#include "uniformis/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uniformis/convex.hpp"

namespace uniformis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kStallWindow = 10;

double maxOf(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// H under rho = min(1, max_l d_l)
double hausdorffRho(const PseudometricFamily& family, const PointCloud& A, const PointCloud& B) {
  auto excessRho = [&](const PointCloud& P, const PointCloud& Q) {
    double e = 0.0;
    for (const auto& p : P) {
      double m = kInf;
      for (const auto& q : Q) m = std::min(m, supMetricRho(family, p, q));
      e = std::max(e, m);
    }
    return e;
  };
  return std::max(excessRho(A, B), excessRho(B, A));
}

SolverTrace startTrace(const PseudometricFamily& family, const Point& x0) {
  family.requireDimension(x0);
  SolverTrace t;
  t.labels = family.labels();
  t.iterates.push_back(x0);
  return t;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw DomainError("solver tol must be > 0");
  if (maxIter < 1) throw DomainError("solver maxIter must be >= 1");
  if (!(floatTol >= 0.0)) throw DomainError("float tolerance must be >= 0");
}

double SolverConfig::slackAt(std::size_t n) const {
  if (slack) {
    const double e = slack(n);
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("slack schedule entries must be finite and > 0");
    return e;
  }
  return tol * std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n, 1000)));
}

std::string_view terminationName(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIter: return "max-iter";
    case Termination::Stalled: return "stalled";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Picard

SolveResult picardSolve(const PointMap& f, const PseudometricFamily& family, const ContractionConstants& k,
                        const Point& x0, const SolverConfig& cfg) {
  cfg.validate();
  if (!f) throw DomainError("picard: map must be callable");
  SolverTrace trace = startTrace(family, x0);
  const double ks = k.sup();
  const double factor = ks / (1.0 - ks);

  Point x = x0;
  Point fx = f(x);
  family.requireDimension(fx);
  std::size_t best = 0;
  double bestResidual = kInf;
  std::vector<double> maxSteps;
  bool done = false;

  for (std::size_t n = 0; n < cfg.maxIter; ++n) {
    std::vector<double> step = family.distances(x, fx);
    const double m = maxOf(step);
    if (m < bestResidual) {
      bestResidual = m;
      best = n;
    }
    trace.residuals.push_back(std::move(step));
    trace.iterates.push_back(fx);
    maxSteps.push_back(m);

    x = fx;
    fx = f(x);
    family.requireDimension(fx);
    if (m * factor <= cfg.tol) {
      const double r = family.maxDistance(x, fx);
      if (r <= cfg.tol) {
        trace.finalResidual = r;
        done = true;
        break;
      }
    }
  }

  Point out = x;
  if (done) {
    trace.termination = Termination::Converged;
  } else {
    trace.termination = Termination::MaxIter;
    out = trace.iterates[best];
    trace.finalResidual = bestResidual;
    trace.notes.push_back("max-iter reached; returning the iterate with the smallest step");
  }

  // per-step contraction ratios
  bool perStep = true;
  for (std::size_t n = 1; n < trace.residuals.size(); ++n)
    for (std::size_t l = 0; l < family.size(); ++l) {
      const auto it = k.perIndex().find(family.label(l));
      const double kl = it == k.perIndex().end() ? ks : it->second;
      if (trace.residuals[n][l] > kl * trace.residuals[n - 1][l] + cfg.floatTol) perStep = false;
    }
  trace.checks["per-step-contraction"] = perStep;

  if (trace.converged()) {
    const double d0 = maxSteps.empty() ? 0.0 : maxSteps.front();
    bool ok = true;
    double kn = 1.0;
    for (const auto& xn : trace.iterates) {
      if (family.maxDistance(xn, out) > kn / (1.0 - ks) * d0 + cfg.tol) ok = false;
      kn *= ks;
    }
    trace.aPrioriBoundSatisfied = ok;
    trace.checks["a-priori-bound"] = ok;
  }
  return {out, std::move(trace)};
}

// ---------------------------------------------------------------------------
// Nadler

std::size_t rhoNearestSelection(const PseudometricFamily& family, const Point& x, const PointCloud& image) {
  std::size_t best = 0;
  double bestRho = kInf, bestRaw = kInf;
  for (std::size_t i = 0; i < image.size(); ++i) {
    const double raw = family.maxDistance(x, image[i]);
    const double rho = std::min(1.0, raw);
    if (rho < bestRho || (rho == bestRho && raw < bestRaw)) {
      best = i;
      bestRho = rho;
      bestRaw = raw;
    }
  }
  return best;
}

SelectionPolicy fixedBranchSelection(std::size_t branch) {
  return [branch](const Point&, const PointCloud& image) { return std::min(branch, image.size() - 1); };
}

SolveResult nadlerSolve(const MultiFunction& T, const PseudometricFamily& family, const ContractionConstants& k,
                        const Point& x0, const SolverConfig& cfg, SelectionPolicy policy) {
  cfg.validate();
  SolverTrace trace = startTrace(family, x0);
  if (!policy)
    policy = [&family](const Point& x, const PointCloud& img) { return rhoNearestSelection(family, x, img); };

  Point x = x0;
  PointCloud Tx = T(x);
  std::optional<PointCloud> prevImage;
  std::vector<double> history;
  bool slackOk = true;

  for (std::size_t n = 0;; ++n) {
    double r = 0.0;
    for (std::size_t l = 0; l < family.size(); ++l) r = std::max(r, distToSet(family, l, x, Tx));
    history.push_back(r);
    if (r <= cfg.tol) {
      trace.termination = Termination::Converged;
      trace.finalResidual = r;
      break;
    }
    if (history.size() > kStallWindow && r >= history[history.size() - 1 - kStallWindow]) {
      trace.termination = Termination::Stalled;
      trace.finalResidual = r;
      trace.notes.push_back("residual did not decrease over " + std::to_string(kStallWindow) + " iterations");
      break;
    }
    if (n >= cfg.maxIter) {
      trace.termination = Termination::MaxIter;
      trace.finalResidual = r;
      break;
    }

    const std::size_t pick = policy(x, Tx);
    if (pick >= Tx.size()) throw DomainError("selection policy returned an index outside the image");
    const Point y = Tx[pick];
    const double rho = supMetricRho(family, x, y);
    if (prevImage) {
      const double eps = cfg.slackAt(n);
      trace.slacks.push_back(eps);
      if (rho > hausdorffRho(family, *prevImage, Tx) + eps + cfg.floatTol) slackOk = false;
    }
    trace.stepRho.push_back(rho);
    trace.residuals.push_back(family.distances(x, y));
    trace.iterates.push_back(y);
    prevImage = std::move(Tx);
    x = y;
    Tx = T(x);
  }
  trace.checks["nadler-slack"] = slackOk;
  bool stepOk = true;
  for (std::size_t n = 1; n < trace.stepRho.size(); ++n)
    if (trace.stepRho[n] > k.sup() * trace.stepRho[n - 1] + trace.slacks[n - 1] + cfg.floatTol) stepOk = false;
  trace.checks["step-bound"] = stepOk;
  // Same inequality in the untruncated max_lambda d_lambda. The truncation at 1
  // breaks the rho version for steps longer than 1; this one does not.
  bool supOk = true;
  for (std::size_t n = 1; n < trace.residuals.size(); ++n) {
    const auto maxOf = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
    if (maxOf(trace.residuals[n]) > k.sup() * maxOf(trace.residuals[n - 1]) + trace.slacks[n - 1] + cfg.floatTol)
      supOk = false;
  }
  trace.checks["step-bound-sup"] = supOk;
  return {x, std::move(trace)};
}

SelectionGap metricSelection(const MultiFunction& T, const PseudometricFamily& family, const Point& x,
                             double tol) {
  const PointCloud img = T(x);
  std::vector<double> base(family.size());
  for (std::size_t l = 0; l < family.size(); ++l) base[l] = distToSet(family, l, x, img);
  SelectionGap out;
  double bestMax = kInf;
  for (std::size_t i = 0; i < img.size(); ++i) {
    std::vector<double> gaps(family.size());
    for (std::size_t l = 0; l < family.size(); ++l) gaps[l] = family.distance(l, x, img[i]) - base[l];
    const double m = maxOf(gaps);
    if (m < bestMax - tol) {
      bestMax = m;
      out.choice = img[i];
      out.index = i;
      out.gaps = std::move(gaps);
    }
  }
  out.simultaneous = bestMax <= tol;
  return out;
}

// ---------------------------------------------------------------------------
// Potentials and Caristi descent

void PotentialFamily::add(std::string label, Fn fn, double lowerBound) {
  if (!fn) throw DomainError("potential for '" + label + "' must be callable");
  if (!std::isfinite(lowerBound)) throw DomainError("potential lower bound must be finite");
  entries_[std::move(label)] = Entry{std::move(fn), lowerBound};
}

bool PotentialFamily::has(std::string_view label) const { return entries_.find(label) != entries_.end(); }

double PotentialFamily::lowerBound(std::string_view label) const {
  const auto it = entries_.find(label);
  if (it == entries_.end()) throw DomainError("no potential for index '" + std::string(label) + "'");
  return it->second.lower;
}

double PotentialFamily::operator()(std::string_view label, const Point& x, double tol) const {
  const auto it = entries_.find(label);
  if (it == entries_.end()) throw DomainError("no potential for index '" + std::string(label) + "'");
  const double v = it->second.fn(x);
  if (!std::isfinite(v)) throw ContractViolation("potential '" + std::string(label) + "' is not finite at " + describe(x));
  if (v < it->second.lower - tol)
    throw ContractViolation("potential '" + std::string(label) + "' = " + std::to_string(v) + " at " + describe(x) +
                            " is below its declared lower bound " + std::to_string(it->second.lower));
  return v;
}

std::vector<std::string> PotentialFamily::labels() const {
  std::vector<std::string> out;
  for (const auto& [l, e] : entries_) out.push_back(l);
  return out;
}

void PotentialFamily::requireCovers(const PseudometricFamily& family) const {
  for (std::size_t l = 0; l < family.size(); ++l)
    if (!has(family.label(l))) throw DomainError("no potential for index '" + family.label(l) + "'");
}

SolveResult caristiDescent(const MultiFunction& T, const PseudometricFamily& family, const PotentialFamily& phi,
                           const Point& x0, const SolverConfig& cfg, CaristiStep stepRule) {
  cfg.validate();
  phi.requireCovers(family);
  SolverTrace trace = startTrace(family, x0);
  const std::size_t L = family.size();
  auto potentials = [&](const Point& p) {
    std::vector<double> v(L);
    for (std::size_t l = 0; l < L; ++l) v[l] = phi(family.label(l), p, cfg.floatTol);
    return v;
  };

  Point x = x0;
  std::vector<double> px = potentials(x);
  trace.potentials.push_back(px);
  bool finished = false;

  for (std::size_t n = 0; n < cfg.maxIter; ++n) {
    const PointCloud img = T(x);
    std::vector<std::size_t> candidates;
    if (stepRule == CaristiStep::MetricSelection)
      candidates.push_back(metricSelection(T, family, x, cfg.floatTol).index);
    else
      for (std::size_t i = 0; i < img.size(); ++i) candidates.push_back(i);

    std::optional<std::size_t> pick;
    double bestProgress = -kInf;
    std::vector<double> pickPotentials;
    for (std::size_t i : candidates) {
      const Point& y = img[i];
      const std::vector<double> py = potentials(y);
      bool ok = true;
      double progress = kInf;
      for (std::size_t l = 0; l < L && ok; ++l) {
        const double drop = px[l] - py[l];
        progress = std::min(progress, drop);
        if (family.distance(l, x, y) > drop + cfg.floatTol) ok = false;
      }
      if (!ok || progress < cfg.tol) continue;
      if (progress > bestProgress) {
        bestProgress = progress;
        pick = i;
        pickPotentials = py;
      }
    }
    if (!pick) {
      finished = true;
      break;
    }
    const Point y = img[*pick];
    trace.residuals.push_back(family.distances(x, y));
    trace.iterates.push_back(y);
    trace.potentials.push_back(pickPotentials);
    x = y;
    px = std::move(pickPotentials);
  }

  trace.finalResidual = maxResidual(T, family, x);
  if (!finished)
    trace.termination = Termination::MaxIter;
  else if (trace.finalResidual <= cfg.tol)
    trace.termination = Termination::Converged;
  else {
    trace.termination = Termination::Stalled;
    trace.notes.push_back("no image point makes progress >= tol; residual " + std::to_string(trace.finalResidual));
  }

  bool telescoping = true, monotone = true;
  std::vector<double> path(L, 0.0);
  for (std::size_t n = 0; n < trace.residuals.size(); ++n)
    for (std::size_t l = 0; l < L; ++l) {
      path[l] += trace.residuals[n][l];
      const std::string& lab = family.label(l);
      if (path[l] > trace.potentials[0][l] - phi.lowerBound(lab) + cfg.floatTol) telescoping = false;
      if (trace.potentials[n + 1][l] > trace.potentials[n][l] + cfg.floatTol) monotone = false;
    }
  trace.checks["telescoping"] = telescoping;
  trace.checks["monotone"] = monotone;
  return {x, std::move(trace)};
}

PotentialFamily caristiContractionPotentials(const MultiFunction& T, const PseudometricFamily& family,
                                             const ContractionConstants& k) {
  PotentialFamily phi;
  const std::vector<double> ks = k.alignedTo(family);
  for (std::size_t l = 0; l < family.size(); ++l) {
    const double div = 1.0 - ks[l];
    phi.add(family.label(l), [T, family, l, div](const Point& x) { return residual(T, family, l, x) / div; }, 0.0);
  }
  return phi;
}

ResidualDescentReport checkResidualDescent(const PointMap& f, const MultiFunction& T,
                                           const PseudometricFamily& family, const std::map<std::string, double>& r,
                                           const std::vector<Point>& samples, const SolverConfig& cfg) {
  cfg.validate();
  if (!f) throw DomainError("residual descent: map must be callable");
  if (samples.empty()) throw DomainError("residual descent: samples must be nonempty");
  std::vector<double> rs(family.size());
  for (std::size_t l = 0; l < family.size(); ++l) {
    const auto it = r.find(family.label(l));
    if (it == r.end()) throw DomainError("no r for index '" + family.label(l) + "'");
    if (!(it->second < 0.0)) throw DomainError("r for index '" + family.label(l) + "' must be < 0");
    rs[l] = it->second;
  }
  for (const auto& [label, v] : r) family.indexOf(label);

  ResidualDescentReport out;
  out.check.kind = CheckKind::ResidualDescent;
  out.check.empirical = true;
  for (const auto& x : samples) {
    const Point fx = f(x);
    ++out.check.samplesTested;
    for (std::size_t l = 0; l < family.size(); ++l) {
      const double lhs = residual(T, family, l, fx);
      const double rhs = residual(T, family, l, x) + rs[l] * family.distance(l, x, fx);
      if (lhs > rhs + cfg.floatTol)
        out.check.violations.push_back({{x, fx}, {lhs, rhs}, family.label(l) + ": d(fx, T fx) exceeds bound"});
    }
  }
  out.check.note = "values: lhs, rhs";
  if (!out.check.passed()) return out;

  PotentialFamily phi;
  for (std::size_t l = 0; l < family.size(); ++l) {
    const double rl = rs[l];
    phi.add(family.label(l), [T, family, l, rl](const Point& p) { return -residual(T, family, l, p) / rl; }, 0.0);
  }
  out.descent = caristiDescent(MultiFunction::singleValued(f), family, phi, samples.front(), cfg);
  return out;
}

// ---------------------------------------------------------------------------
// Inward solver

double inwardEpsilon(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw DomainError("contraction constant must be in [0, 1)");
  return 0.9 * (1.0 - k) / (1.0 + k);
}

InwardnessWitness inwardnessWitness(const Point& Tx, const PointCloud& K, const Point& x,
                                    const PseudometricFamily& family, const ContractionConstants& k,
                                    double floatTol) {
  const std::vector<double> ks = k.alignedTo(family);
  InwardnessWitness w;
  w.x = x;
  std::vector<double> scale(family.size());
  for (std::size_t l = 0; l < family.size(); ++l) {
    const double e = inwardEpsilon(ks[l]);
    w.epsilons[family.label(l)] = e;
    scale[l] = e * family.distance(l, Tx, x);
  }
  if (inHull(K, Tx, floatTol)) {
    w.f = Tx;
    w.c = 1.0;
    w.direct = true;
    w.ratio = 0.0;
    for (std::size_t l = 0; l < family.size(); ++l) w.residuals[family.label(l)] = 0.0;
    return w;
  }
  const InnerProjection p = projectOntoInnerSet(K, x, Tx, family, scale, floatTol);
  w.f = p.f;
  w.c = p.c;
  w.ratio = p.ratio;
  for (std::size_t l = 0; l < family.size(); ++l) w.residuals[family.label(l)] = p.residuals[l];
  return w;
}

InwardSolveResult inwardSolve(const PointMap& T, const PointCloud& K, const PseudometricFamily& family,
                              const ContractionConstants& k, const Point& x0, const SolverConfig& cfg) {
  cfg.validate();
  if (!T) throw DomainError("inward solve: map must be callable");
  if (!family.seminormInduced()) throw DomainError("inward solve needs seminorm-induced pseudometrics");
  if (!inHull(K, x0, cfg.floatTol)) throw DomainError("x0 = " + describe(x0) + " is outside hull(K)");
  const std::vector<double> ks = k.alignedTo(family);

  InwardSolveResult out;
  out.trace = startTrace(family, x0);
  bool stepOk = true;
  Point x = x0;
  bool done = false;
  for (std::size_t n = 0; n < cfg.maxIter; ++n) {
    const Point Tx = T(x);
    family.requireDimension(Tx);
    const double r = family.maxDistance(Tx, x);
    if (r <= cfg.tol) {
      out.trace.finalResidual = r;
      done = true;
      break;
    }
    InwardnessWitness w = inwardnessWitness(Tx, K, x, family, k, cfg.floatTol);
    if (w.ratio > 1.0 + cfg.floatTol)
      throw InwardnessError("T is not weakly inward at " + describe(x) + ": best witness ratio " +
                                std::to_string(w.ratio) + " > 1",
                            std::move(w));
    const Point f = w.f;
    const Point Tf = T(f);
    for (std::size_t l = 0; l < family.size(); ++l) {
      const double e = inwardEpsilon(ks[l]);
      const double lhs = family.distance(l, f, Tf);
      const double rhs = family.distance(l, Tx, x) + (ks[l] - (1.0 - e) / (1.0 + e)) * family.distance(l, x, f);
      if (lhs > rhs + cfg.floatTol) stepOk = false;
    }
    out.witnesses.push_back(std::move(w));
    out.trace.residuals.push_back(family.distances(x, f));
    out.trace.iterates.push_back(f);
    x = f;
  }
  out.trace.checks["step-inequality"] = stepOk;
  if (done) {
    out.trace.termination = Termination::Converged;
  } else {
    out.trace.termination = Termination::MaxIter;
    out.trace.finalResidual = family.maxDistance(T(x), x);
  }
  out.point = x;
  return out;
}

}  // namespace uniformis
