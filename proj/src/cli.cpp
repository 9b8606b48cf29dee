#include "uniformis/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "uniformis/convex.hpp"
#include "uniformis/core.hpp"
#include "uniformis/hausdorff.hpp"
#include "uniformis/io.hpp"
#include "uniformis/multifunction.hpp"
#include "uniformis/noncompactness.hpp"
#include "uniformis/solvers.hpp"
#include "uniformis/trace.hpp"
#include "uniformis/variational.hpp"

namespace uniformis::cli {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string pt(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.dim(); ++i) s += (i ? ", " : "") + num(p[i]);
  return s + ")";
}

const char* passFail(bool ok) { return ok ? "PASS" : "FAIL"; }

struct Globals {
  std::optional<double> tol;
  std::size_t maxIter = 10000;
  unsigned seed = 1;
  std::string tracePath;
  bool quiet = false;
};

class Context {
 public:
  Context(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {
    if (g.tracePath == "-") {
      writer_ = TraceWriter(&out);
    } else if (!g.tracePath.empty()) {
      file_ = std::make_unique<std::ofstream>(g.tracePath);
      if (!*file_) throw DomainError("cannot open trace file '" + g.tracePath + "'");
      writer_ = TraceWriter(file_.get());
    }
  }

  std::ostream& say() { return g_.quiet ? null_ : out_; }
  std::ostream& err() { return err_; }
  TraceWriter& trace() { return writer_; }
  const Globals& globals() const { return g_; }

  SolverConfig solverConfig() const {
    SolverConfig c;
    if (g_.tol) c.tol = *g_.tol;
    c.maxIter = g_.maxIter;
    return c;
  }
  double checkTol() const { return g_.tol.value_or(defaultFloatTol()); }

 private:
  const Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
  std::ostringstream null_;
  std::unique_ptr<std::ofstream> file_;
  TraceWriter writer_;
};

Point pointIn(const std::string& text, const PseudometricFamily& fam, const std::string& what) {
  Point p = parsePoint(text);
  if (p.dim() != fam.dimension())
    throw DomainError(what + " has dimension " + std::to_string(p.dim()) + ", space has " +
                      std::to_string(fam.dimension()));
  return p;
}

ContractionConstants resolveK(const std::string& flag, const OperatorSpec& op, const PseudometricFamily& fam) {
  if (!flag.empty()) return ContractionConstants(parseIndexedValues(flag, fam));
  if (op.k) return contractionFromJson(*op.k, fam, "operator k");
  throw DomainError("contraction constants needed: pass --k or add \"k\" to the operator file");
}

void emitTrace(Context& ctx, const std::string& command, const SolverTrace& t, const Point& x) {
  for (const auto& r : traceRecords(command, t, x)) ctx.trace().write(r);
}

void printSolve(Context& ctx, const SolverTrace& t, const Point& x) {
  auto& o = ctx.say();
  o << "termination: " << terminationName(t.termination) << "\n";
  o << "x* = " << pt(x) << "\n";
  o << "residual = " << num(t.finalResidual) << "\n";
  o << "steps = " << t.steps() << "\n";
  for (const auto& [name, ok] : t.checks) o << "check " << name << ": " << passFail(ok) << "\n";
  for (const auto& n : t.notes) o << "note: " << n << "\n";
}

int solveExit(const SolverTrace& t) { return t.converged() ? kOk : kNoConvergence; }

void printReport(Context& ctx, const CheckReport& r) {
  auto& o = ctx.say();
  o << checkKindName(r.kind) << ": " << passFail(r.passed()) << " (" << r.samplesTested << " samples"
    << (r.empirical ? ", empirical" : "") << ")\n";
  for (const auto& [label, w] : r.worstRatio) o << "  worst[" << label << "] = " << num(w) << "\n";
  const std::size_t shown = std::min<std::size_t>(r.violations.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& v = r.violations[i];
    o << "  violation:";
    for (std::size_t j = 0; j < std::min<std::size_t>(v.witnesses.size(), 4); ++j) o << " " << pt(v.witnesses[j]);
    if (v.witnesses.size() > 4) o << " ...";
    o << " values";
    for (double d : v.values) o << " " << num(d);
    o << " (" << v.detail << ")\n";
  }
  if (r.violations.size() > shown) o << "  ... " << r.violations.size() - shown << " more\n";
  if (!r.note.empty()) o << "  note: " << r.note << "\n";

  TraceRecord rec;
  rec.type = "summary";
  rec.command = "check";
  rec.termination = r.passed() ? "passed" : "failed";
  rec.steps = r.samplesTested;
  rec.checks[std::string(checkKindName(r.kind))] = r.passed();
  rec.values = r.worstRatio;
  rec.values["violations"] = static_cast<double>(r.violations.size());
  if (!r.note.empty()) rec.notes.push_back(r.note);
  ctx.trace().write(rec);
}

void printDerivation(Context& ctx, const std::vector<DerivationStep>& trace, bool factors) {
  for (const auto& s : trace) {
    auto& o = ctx.say();
    o << std::string(2 * (s.depth + 1), ' ') << "[";
    for (std::size_t i = 0; i < s.rules.size(); ++i) o << (i ? ", " : "") << s.rules[i];
    o << "] " << s.node << " -> ";
    if (factors)
      o << "factor " << num(s.result.hi) << "\n";
    else
      o << describe(s.result) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Subcommand handlers. Each loads every input before computing anything.

struct HausdorffArgs {
  std::string space, a, b, index;
};

int runHausdorff(Context& ctx, const HausdorffArgs& args) {
  const PseudometricFamily fam = parseSpace(loadDocument(args.space));
  const PointCloud A = parseCloud(loadDocument(args.a), fam.dimension());
  const PointCloud B = parseCloud(loadDocument(args.b), fam.dimension());
  std::vector<std::size_t> idx;
  if (args.index.empty())
    for (std::size_t l = 0; l < fam.size(); ++l) idx.push_back(l);
  else
    idx.push_back(fam.indexOf(args.index));

  bool agree = true;
  TraceRecord rec;
  rec.type = "summary";
  rec.command = "hausdorff";
  for (std::size_t l : idx) {
    const double h = hausdorffPseudometric(fam, l, A, B);
    const double o = hausdorffViaInflation(fam, l, A, B, 1e-9);
    const bool ok = std::abs(h - o) <= 1e-6;
    agree = agree && ok;
    ctx.say() << "H^" << fam.label(l) << "(A, B) = " << num(h) << "\n";
    ctx.say() << "  inflation oracle = " << num(o) << " (" << (ok ? "agrees" : "DISAGREES") << ")\n";
    rec.values[fam.label(l)] = h;
    rec.values["oracle." + fam.label(l)] = o;
  }
  rec.checks["oracle-agreement"] = agree;
  ctx.trace().write(rec);
  return agree ? kOk : kViolation;
}

int runAlpha(Context& ctx, const std::string& exprPath) {
  const SetExpr e = parseSetExpr(loadDocument(exprPath));
  const AlphaDerivation d = alphaBounds(e);
  ctx.say() << "alpha in " << describe(d.interval) << "\n";
  printDerivation(ctx, d.trace, false);
  TraceRecord rec;
  rec.type = "summary";
  rec.command = "alpha";
  rec.values["lo"] = d.interval.lo;
  rec.values["hi"] = d.interval.hi;
  for (const auto& s : d.trace) rec.notes.push_back(s.rules.front() + ": " + s.node + " -> " + describe(s.result));
  ctx.trace().write(rec);
  return kOk;
}

int runCertify(Context& ctx, const std::string& opPath, double k) {
  const SetOperator op = parseSetOperator(loadDocument(opPath));
  const KscVerdict v = certifyKSetContraction(op, k);
  if (v.certified) {
    ctx.say() << "certified: T(A) = " << op.describe() << " is a " << num(k) << "-set contraction (factor "
              << num(v.factor) << ")\n";
  } else {
    ctx.say() << "refused: blocking node " << v.blockingNode << ": " << v.reason << "\n";
  }
  printDerivation(ctx, v.trace, true);
  TraceRecord rec;
  rec.type = "summary";
  rec.command = "certify-ksc";
  rec.checks["certified"] = v.certified;
  rec.values["factor"] = v.factor;
  rec.values["k"] = k;
  if (!v.certified) rec.notes.push_back("blocking node: " + v.blockingNode);
  ctx.trace().write(rec);
  return kOk;
}

struct CheckArgs {
  std::string what, space, op, index, grid, k, hull, x, t;
  double alpha = 0.0;
  double probe = 0.05;
  std::size_t levels = 6;
  std::size_t pairs = 1000;
};

int runCheck(Context& ctx, const CheckArgs& a) {
  const PseudometricFamily fam = parseSpace(loadDocument(a.space));
  const double tol = ctx.checkTol();

  if (a.what == "inward") {
    if (a.hull.empty() || a.x.empty() || a.t.empty()) throw DomainError("check inward needs --hull, --x and --t");
    const PointCloud K = parseCloud(loadDocument(a.hull), fam.dimension());
    const Point x = pointIn(a.x, fam, "--x"), t = pointIn(a.t, fam, "--t");
    const bool inner = innerSetMembership(K, x, t, tol);
    const bool env = envelopeMembership(K, x, t, fam, defaultEtaSchedule(), tol);
    ctx.say() << "t in I_K(x): " << (inner ? "yes" : "no") << "\n";
    ctx.say() << "t in envelope of I_K(x): " << (env ? "yes" : "no") << "\n";
    TraceRecord rec;
    rec.type = "summary";
    rec.command = "check";
    rec.checks["inner-set"] = inner;
    rec.checks["envelope"] = env;
    ctx.trace().write(rec);
    return kOk;
  }

  if (a.op.empty() || a.grid.empty()) throw DomainError("check " + a.what + " needs --operator and --grid");
  const OperatorSpec op = parseOperator(loadDocument(a.op), fam.dimension());
  const PointCloud grid = parseCloud(loadDocument(a.grid), fam.dimension());

  CheckReport report;
  if (a.what == "weak-lsc" || a.what == "weak-usc") {
    if (a.index.empty()) throw DomainError("check " + a.what + " needs --index");
    ProbeOptions po;
    po.levels = a.levels;
    po.tol = tol;
    report = a.what == "weak-lsc" ? checkWeakLowerSC(op.T, fam, a.index, a.alpha, grid, a.probe, po)
                                  : checkWeakUpperSC(op.T, fam, a.index, a.alpha, grid, a.probe, po);
  } else if (a.what == "image-residual" || a.what == "thm4") {
    const auto pairs = samplePairs(grid, a.pairs, ctx.globals().seed);
    std::vector<std::string> labels = a.index.empty() ? fam.labels() : std::vector<std::string>{a.index};
    report.kind = CheckKind::ResidualLipschitz;
    report.empirical = false;
    for (const auto& l : labels) {
      CheckReport r = checkImageResidualInequality(op.T, fam, l, pairs, tol);
      report.samplesTested += r.samplesTested;
      report.worstRatio.insert(r.worstRatio.begin(), r.worstRatio.end());
      report.violations.insert(report.violations.end(), r.violations.begin(), r.violations.end());
      report.note = r.note;
    }
  } else if (a.what == "fcontractive") {
    const auto pairs = samplePairs(grid, a.pairs, ctx.globals().seed);
    report = checkFContractive(op.T, fam, resolveK(a.k, op, fam), pairs, tol);
  } else {
    throw DomainError("unknown check '" + a.what + "'");
  }
  printReport(ctx, report);
  return report.passed() ? kOk : kViolation;
}

struct SolveArgs {
  std::string space, op, x0, k, potentials, hull, selection = "max-progress";
  std::optional<std::size_t> branch;
};

int runPicard(Context& ctx, const SolveArgs& a) {
  const PseudometricFamily fam = parseSpace(loadDocument(a.space));
  const OperatorSpec op = parseOperator(loadDocument(a.op), fam.dimension());
  const Point x0 = pointIn(a.x0, fam, "--x0");
  const ContractionConstants k = resolveK(a.k, op, fam);
  const SolveResult r = picardSolve(op.map(), fam, k, x0, ctx.solverConfig());
  emitTrace(ctx, "solve-picard", r.trace, r.point);
  printSolve(ctx, r.trace, r.point);
  return solveExit(r.trace);
}

int runNadler(Context& ctx, const SolveArgs& a) {
  const PseudometricFamily fam = parseSpace(loadDocument(a.space));
  const OperatorSpec op = parseOperator(loadDocument(a.op), fam.dimension());
  const Point x0 = pointIn(a.x0, fam, "--x0");
  const ContractionConstants k = resolveK(a.k, op, fam);
  SelectionPolicy policy;
  if (a.branch) policy = fixedBranchSelection(*a.branch);
  const SolveResult r = nadlerSolve(op.T, fam, k, x0, ctx.solverConfig(), policy);
  emitTrace(ctx, "solve-nadler", r.trace, r.point);
  printSolve(ctx, r.trace, r.point);
  return solveExit(r.trace);
}

int runCaristi(Context& ctx, const SolveArgs& a) {
  const PseudometricFamily fam = parseSpace(loadDocument(a.space));
  const OperatorSpec op = parseOperator(loadDocument(a.op), fam.dimension());
  if (a.potentials.empty()) throw DomainError("solve-caristi needs --potentials");
  const PotentialFamily phi = parsePotentials(loadDocument(a.potentials), fam);
  const Point x0 = pointIn(a.x0, fam, "--x0");
  CaristiStep step = CaristiStep::MaxProgress;
  if (a.selection == "metric")
    step = CaristiStep::MetricSelection;
  else if (a.selection != "max-progress")
    throw DomainError("--selection must be max-progress or metric");
  const SolveResult r = caristiDescent(op.T, fam, phi, x0, ctx.solverConfig(), step);
  emitTrace(ctx, "solve-caristi", r.trace, r.point);
  printSolve(ctx, r.trace, r.point);
  return solveExit(r.trace);
}

int runInward(Context& ctx, const SolveArgs& a) {
  const PseudometricFamily fam = parseSpace(loadDocument(a.space));
  const OperatorSpec op = parseOperator(loadDocument(a.op), fam.dimension());
  if (a.hull.empty()) throw DomainError("solve-inward needs --hull");
  const PointCloud K = parseCloud(loadDocument(a.hull), fam.dimension());
  const Point x0 = pointIn(a.x0, fam, "--x0");
  const ContractionConstants k = resolveK(a.k, op, fam);
  try {
    const InwardSolveResult r = inwardSolve(op.map(), K, fam, k, x0, ctx.solverConfig());
    emitTrace(ctx, "solve-inward", r.trace, r.point);
    for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
      const auto& w = r.witnesses[i];
      TraceRecord rec;
      rec.type = "witness";
      rec.step = i;
      rec.x = w.f.vec();
      rec.residuals = w.residuals;
      rec.values["c"] = w.c;
      rec.values["ratio"] = w.ratio;
      ctx.trace().write(rec);
    }
    printSolve(ctx, r.trace, r.point);
    if (!r.witnesses.empty()) {
      const auto& w = r.witnesses.front();
      ctx.say() << "first witness: f = " << pt(w.f) << ", c = " << num(w.c) << (w.direct ? " (direct)" : "")
                << "\n";
    }
    return solveExit(r.trace);
  } catch (const InwardnessError& e) {
    const auto& w = e.bestWitness();
    ctx.say() << "termination: infeasible-witness\n";
    ctx.say() << "iterate = " << pt(e.iterate()) << "\n";
    ctx.say() << "best witness: f = " << pt(w.f) << ", c = " << num(w.c) << ", ratio = " << num(w.ratio) << "\n";
    TraceRecord rec;
    rec.type = "summary";
    rec.command = "solve-inward";
    rec.termination = "infeasible-witness";
    rec.x = e.iterate().vec();
    rec.values["ratio"] = w.ratio;
    rec.notes.push_back(e.what());
    ctx.trace().write(rec);
    ctx.err() << "error: " << e.what() << "\n";
    return kViolation;
  }
}

struct VariationalArgs {
  std::string space, potentials, x0, grid, delta;
};

void printStrictness(Context& ctx, const std::vector<StrictnessCheck>& checks, double minMargin) {
  std::size_t failed = 0;
  for (const auto& c : checks)
    if (!c.holds) ++failed;
  ctx.say() << "strict inequality vs " << checks.size() << " candidates: " << passFail(failed == 0)
            << " (min margin " << num(minMargin) << ")\n";
  std::size_t shown = 0;
  for (const auto& c : checks)
    if (!c.holds && shown++ < 10) ctx.say() << "  fails at " << pt(c.candidate) << " margin " << num(c.margin) << "\n";
}

int runBishopPhelps(Context& ctx, const VariationalArgs& a) {
  const PseudometricFamily fam = parseSpace(loadDocument(a.space));
  const PotentialFamily phi = parsePotentials(loadDocument(a.potentials), fam);
  const PointCloud grid = parseCloud(loadDocument(a.grid), fam.dimension());
  const Point x0 = pointIn(a.x0, fam, "--x0");
  const OrderContext oc(fam, phi, ctx.checkTol());
  const BishopPhelpsReport r = bishopPhelpsSearch(oc, x0, grid);
  ctx.say() << "x* = " << pt(r.xStar) << " (maximal among " << r.upSetSize << " candidates above x0)\n";
  for (const auto& [l, ok] : r.upperCondition)
    ctx.say() << "phi_" << l << "(x*) + d_" << l << "(x0, x*) <= phi_" << l << "(x0): " << passFail(ok) << "\n";
  printStrictness(ctx, r.strictness, r.minMargin);
  ctx.say() << "brute-force oracle agreement: " << passFail(r.agreesWithOracle) << "\n";
  TraceRecord rec;
  rec.type = "summary";
  rec.command = "bishop-phelps";
  rec.x = r.xStar.vec();
  for (const auto& [l, ok] : r.upperCondition) rec.checks["upper." + l] = ok;
  rec.checks["oracle"] = r.agreesWithOracle;
  rec.values["min-margin"] = r.minMargin;
  rec.termination = r.passed ? "passed" : "failed";
  ctx.trace().write(rec);
  return r.passed ? kOk : kViolation;
}

int runEkeland(Context& ctx, const VariationalArgs& a) {
  const PseudometricFamily fam = parseSpace(loadDocument(a.space));
  const PotentialFamily phi = parsePotentials(loadDocument(a.potentials), fam);
  const PointCloud grid = parseCloud(loadDocument(a.grid), fam.dimension());
  const Point x0 = pointIn(a.x0, fam, "--x0");
  if (a.delta.empty()) throw DomainError("ekeland needs --delta");
  const auto delta = parseIndexedValues(a.delta, fam);
  const OrderContext oc(fam, phi, ctx.checkTol());
  const EkelandReport r = ekelandSearch(oc, x0, delta, grid);
  ctx.say() << "x* = " << pt(r.xStar) << " (|Y| = " << r.restrictedSize << ")\n";
  for (const auto& [l, ok] : r.potentialDrop) ctx.say() << "phi_" << l << "(x*) <= phi_" << l << "(x0): " << passFail(ok) << "\n";
  for (const auto& [l, ok] : r.withinDelta) ctx.say() << "d_" << l << "(x0, x*) <= delta_" << l << ": " << passFail(ok) << "\n";
  printStrictness(ctx, r.strictness, r.minMargin);
  ctx.say() << "brute-force oracle agreement: " << passFail(r.agreesWithOracle) << "\n";
  TraceRecord rec;
  rec.type = "summary";
  rec.command = "ekeland";
  rec.x = r.xStar.vec();
  for (const auto& [l, ok] : r.potentialDrop) rec.checks["drop." + l] = ok;
  for (const auto& [l, ok] : r.withinDelta) rec.checks["delta." + l] = ok;
  rec.checks["oracle"] = r.agreesWithOracle;
  rec.values["min-margin"] = r.minMargin;
  rec.termination = r.passed ? "passed" : "failed";
  ctx.trace().write(rec);
  return r.passed ? kOk : kViolation;
}

// ---------------------------------------------------------------------------
// Demos: bundled inputs, expected outcome checked within a stated tolerance.

Document embedded(const char* name, const char* text) { return {parseJsonText(text, name), name}; }

const char* kLine1 = R"({"dimension": 1, "separating": true,
  "pseudometrics": [{"label": "d", "kind": "coordinate_abs", "params": {"coord": 0}}]})";
const char* kPlane = R"({"dimension": 2, "separating": true,
  "pseudometrics": [{"label": "d1", "kind": "coordinate_abs", "params": {"coord": 0}},
                    {"label": "d2", "kind": "coordinate_abs", "params": {"coord": 1}}]})";

struct DemoResult {
  bool pass = false;
  std::string detail;
};

struct Demo {
  const char* name;
  const char* description;
  std::function<DemoResult(Context&)> run;
};

const std::vector<Demo>& demos() {
  static const std::vector<Demo> list{
      {"hausdorff-basic", "H(A, B) for A = {0, 1}, B = {0} on R equals 1 and matches the inflation oracle",
       [](Context&) {
         const auto fam = parseSpace(embedded("space", kLine1));
         const auto A = parseCloud(embedded("a", R"({"points": [[0], [1]]})"));
         const auto B = parseCloud(embedded("b", R"({"points": [[0]]})"));
         const double h = hausdorffPseudometric(fam, "d", A, B), o = hausdorffViaInflation(fam, "d", A, B, 1e-9);
         return DemoResult{std::abs(h - 1.0) <= 1e-12 && std::abs(o - h) <= 1e-6,
                           "H = " + num(h) + ", oracle = " + num(o)};
       }},
      {"alpha-scale", "alpha bounds of scale(0.5, atom [2, 2]) are [1, 1]",
       [](Context&) {
         const auto e = parseSetExpr(
             embedded("expr", R"({"op": "scale", "beta": 0.5, "arg": {"op": "atom", "name": "A", "alpha": [2, 2]}})"));
         const auto d = alphaBounds(e);
         return DemoResult{d.interval == AlphaInterval{1.0, 1.0}, "interval " + describe(d.interval)};
       }},
      {"certify-hull-scale", "0.5 co(A) + v is certified as a 0.5-set contraction",
       [](Context&) {
         const auto op = parseSetOperator(embedded(
             "op", R"({"op": "translate", "offset": [1], "arg": {"op": "scale", "beta": 0.5, "arg": {"op": "hull"}}})"));
         const auto v = certifyKSetContraction(op, 0.5);
         return DemoResult{v.certified && v.factor == 0.5, "factor " + num(v.factor)};
       }},
      {"picard-affine", "Picard on f(x) = (x + 1)/2 from 0 reaches 1",
       [](Context& ctx) {
         const auto fam = parseSpace(embedded("space", kLine1));
         const auto op = parseOperator(
             embedded("op", R"({"kind": "affine_branches", "branches": [{"scale": 0.5, "offset": [0.5]}], "k": 0.5})"),
             1);
         const auto r = picardSolve(op.map(), fam, contractionFromJson(*op.k, fam), Point{0.0}, ctx.solverConfig());
         return DemoResult{r.trace.converged() && std::abs(r.point[0] - 1.0) <= 1e-7, "x* = " + pt(r.point)};
       }},
      {"picard-plane", "Picard on f(x) = (x1/2 + 1, x2/3) under {d1, d2} reaches (2, 0)",
       [](Context& ctx) {
         const auto fam = parseSpace(embedded("space", kPlane));
         const auto op = parseOperator(
             embedded("op", R"({"kind": "affine_branches", "branches": [{"scale": [0.5, 0.3333333333333333], "offset": [1, 0]}],
                                "k": {"d1": 0.5, "d2": 0.3333333333333333}})"),
             2);
         const auto r = picardSolve(op.map(), fam, contractionFromJson(*op.k, fam), Point{0.0, 0.0}, ctx.solverConfig());
         const bool ok = r.trace.converged() && std::abs(r.point[0] - 2.0) <= 1e-7 && std::abs(r.point[1]) <= 1e-7;
         return DemoResult{ok, "x* = " + pt(r.point)};
       }},
      {"nadler-two-branch", "Nadler on T(x) = {x/3, x/3 + 1} from 3 converges into {0, 1.5}; both forced branches too",
       [](Context& ctx) {
         const auto fam = parseSpace(embedded("space", kLine1));
         const auto op = parseOperator(embedded("op", R"({"kind": "affine_branches", "k": 0.3333333333333333,
             "branches": [{"scale": 0.3333333333333333, "offset": [0]}, {"scale": 0.3333333333333333, "offset": [1]}]})"),
                                       1);
         const auto k = contractionFromJson(*op.k, fam);
         const auto cfg = ctx.solverConfig();
         const auto any = nadlerSolve(op.T, fam, k, Point{3.0}, cfg);
         const auto b0 = nadlerSolve(op.T, fam, k, Point{3.0}, cfg, fixedBranchSelection(0));
         const auto b1 = nadlerSolve(op.T, fam, k, Point{3.0}, cfg, fixedBranchSelection(1));
         const double x = any.point[0];
         const bool ok = any.trace.converged() && (std::abs(x) <= 1e-7 || std::abs(x - 1.5) <= 1e-7) &&
                         std::abs(b0.point[0]) <= 1e-7 && std::abs(b1.point[0] - 1.5) <= 1e-7 &&
                         b0.trace.checks.at("step-bound-sup") && b1.trace.checks.at("step-bound-sup");
         const bool rhoBound = b0.trace.checks.at("step-bound") && b1.trace.checks.at("step-bound");
         return DemoResult{ok, "fixed point " + num(x) + "; branches " + num(b0.point[0]) + ", " + num(b1.point[0]) +
                                   "; step bound in sup d: holds; in rho = min(1, sup d): " +
                                   (rhoBound ? "holds" : "fails where steps exceed 1")};
       }},
      {"caristi-plane", "Caristi descent with T(x) = x/2 and phi = 2 d(., 0) reaches (0, 0)",
       [](Context& ctx) {
         const auto fam = parseSpace(embedded("space", kPlane));
         const auto op = parseOperator(embedded("op", R"({"kind": "affine_branches", "branches": [{"scale": 0.5}]})"), 2);
         const auto phi = parsePotentials(
             embedded("potentials", R"({"potentials": {"*": {"kind": "abs", "scale": 2, "center": [0, 0]}}})"), fam);
         const auto r = caristiDescent(op.T, fam, phi, Point{1.0, 2.0}, ctx.solverConfig());
         const bool ok = r.trace.converged() && fam.maxDistance(r.point, Point{0.0, 0.0}) <= 1e-6 &&
                         r.trace.checks.at("telescoping") && r.trace.checks.at("monotone");
         return DemoResult{ok, "x* = " + pt(r.point)};
       }},
      {"residual-descent", "d(fx, T fx) <= d(x, Tx) - d(x, fx)/4 for f = T = x/2, then descent to 0",
       [](Context& ctx) {
         const auto fam = parseSpace(embedded("space", kLine1));
         const PointMap f = [](const Point& x) { return 0.5 * x; };
         const auto grid = parseCloud(embedded("grid", R"({"grid": {"lo": [-2], "hi": [2], "step": 0.25}})"));
         std::vector<Point> samples{Point{1.0}};
         samples.insert(samples.end(), grid.begin(), grid.end());
         const auto rep = checkResidualDescent(f, MultiFunction::singleValued(f), fam, {{"d", -0.25}}, samples,
                                               ctx.solverConfig());
         const bool ok = rep.check.passed() && rep.descent && std::abs(rep.descent->point[0]) <= 1e-6;
         return DemoResult{ok, rep.descent ? "fixed point " + pt(rep.descent->point) : "check failed"};
       }},
      {"bishop-phelps-abs", "phi = |x|, x0 = 0.3 on the grid [-1, 1] step 0.1 gives x* = 0",
       [](Context& ctx) {
         const auto fam = parseSpace(embedded("space", kLine1));
         const auto phi = parsePotentials(embedded("potentials", R"({"potentials": {"d": {"kind": "abs"}}})"), fam);
         const auto grid = parseCloud(embedded("grid", R"({"grid": {"lo": [-1], "hi": [1], "step": 0.1}})"));
         const OrderContext oc(fam, phi, ctx.checkTol());
         const auto r = bishopPhelpsSearch(oc, Point{0.3}, grid);
         return DemoResult{r.passed && std::abs(r.xStar[0]) <= 1e-12, "x* = " + pt(r.xStar)};
       }},
      {"ekeland-abs", "phi = |x|, x0 = 0.3, delta = 0.3 on the grid [-1, 1] step 0.05 gives x* = 0",
       [](Context& ctx) {
         const auto fam = parseSpace(embedded("space", kLine1));
         const auto phi = parsePotentials(embedded("potentials", R"({"potentials": {"d": {"kind": "abs"}}})"), fam);
         const auto grid = parseCloud(embedded("grid", R"({"grid": {"lo": [-1], "hi": [1], "step": 0.05}})"));
         const OrderContext oc(fam, phi, ctx.checkTol());
         const auto r = ekelandSearch(oc, Point{0.3}, {{"d", 0.3}}, grid);
         return DemoResult{r.passed && std::abs(r.xStar[0]) <= 1e-12 && r.strictness.size() == 40,
                           "x* = " + pt(r.xStar) + ", strictness checked against " +
                               std::to_string(r.strictness.size()) + " other candidates"};
       }},
      {"inward-interval", "K = [0, 1], T(x) = 1.2 - x/2: witness (1, 1.2) at 0, converges to 0.8",
       [](Context& ctx) {
         const auto fam = parseSpace(embedded("space", kLine1));
         const auto op = parseOperator(
             embedded("op", R"({"kind": "affine_branches", "branches": [{"scale": -0.5, "offset": [1.2]}], "k": 0.5})"), 1);
         const auto K = parseCloud(embedded("hull", R"({"points": [[0], [1]]})"));
         const auto r = inwardSolve(op.map(), K, fam, contractionFromJson(*op.k, fam), Point{0.0}, ctx.solverConfig());
         const auto& w = r.witnesses.front();
         const bool ok = r.trace.converged() && std::abs(r.point[0] - 0.8) <= 1e-7 && std::abs(w.f[0] - 1.0) <= 1e-9 &&
                         std::abs(w.c - 1.2) <= 1e-9 && r.trace.checks.at("step-inequality");
         return DemoResult{ok, "x* = " + pt(r.point) + ", witness f = " + pt(w.f) + ", c = " + num(w.c)};
       }},
      {"invariant-set", "universe {0, 1, 2}, T(0) = {0}, T(1) = {0}, T(2) = {1}, seed 2 gives C = {0, 1, 2}",
       [](Context&) {
         const MultiFunction T([](const Point& x) {
           if (x[0] == 2.0) return PointCloud{Point{1.0}};
           return PointCloud{Point{0.0}};
         });
         const auto C = invariantSetIterate(T, Point{2.0}, PointCloud::line({0, 1, 2}), 100);
         return DemoResult{C.size() == 3, "C has " + std::to_string(C.size()) + " points"};
       }},
      {"set-contraction-constant", "constant-image T passes the empirical set-contraction check",
       [](Context&) {
         const auto fam = parseSpace(embedded("space", kLine1));
         const auto op = parseOperator(embedded("op", R"({"kind": "constant", "cloud": {"points": [[0], [5]]}})"), 1);
         std::vector<PointCloud> clouds;
         for (int s = 0; s < 5; ++s) clouds.push_back(PointCloud::grid(Point{0.0}, Point{3.0}, 0.1 + 0.05 * s));
         const auto rep = checkSetContraction(op.T, fam, ContractionConstants({{"d", 0.5}}), clouds, 2, 1e-6);
         return DemoResult{rep.passed(), "worst slack " + num(rep.worstRatio.at("d"))};
       }},
  };
  return list;
}

int runDemo(Context& ctx, const std::string& name) {
  const auto& list = demos();
  if (name.empty() || name == "list") {
    for (const auto& d : list) ctx.say() << d.name << "  " << d.description << "\n";
    return kOk;
  }
  // older name kept working
  const std::string wanted = name == "inward-theorem-tt" ? "inward-interval" : name;
  std::vector<const Demo*> chosen;
  for (const auto& d : list)
    if (wanted == "all" || wanted == d.name) chosen.push_back(&d);
  if (chosen.empty()) throw DomainError("unknown demo '" + name + "' (try `demo list`)");
  bool all = true;
  for (const Demo* d : chosen) {
    const DemoResult r = d->run(ctx);
    all = all && r.pass;
    ctx.say() << passFail(r.pass) << " " << d->name << ": " << r.detail << "\n";
    TraceRecord rec;
    rec.type = "summary";
    rec.command = "demo";
    rec.termination = r.pass ? "passed" : "failed";
    rec.checks[d->name] = r.pass;
    rec.notes.push_back(r.detail);
    ctx.trace().write(rec);
  }
  return all ? kOk : kViolation;
}

}  // namespace

std::vector<std::string> demoNames() {
  std::vector<std::string> out;
  for (const auto& d : demos()) out.push_back(d.name);
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analysis on uniform spaces: Hausdorff pseudometrics, non-compactness bounds, fixed points"};
  app.name("uniformis");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "Residual / comparison tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", g.maxIter, "Iteration cap for solvers")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for sampled checks");
  app.add_option("--trace", g.tracePath, "Write JSON-lines trace records to PATH ('-' for stdout)");
  app.add_flag("--quiet", g.quiet, "Suppress human-readable output");

  std::function<int(Context&)> action;

  HausdorffArgs ha;
  auto* hs = app.add_subcommand("hausdorff", "Hausdorff pseudometric between two clouds");
  hs->add_option("--space", ha.space)->required();
  hs->add_option("--a", ha.a)->required();
  hs->add_option("--b", ha.b)->required();
  hs->add_option("--index", ha.index, "Pseudometric label (default: all)");
  hs->callback([&] { action = [&](Context& c) { return runHausdorff(c, ha); }; });

  std::string exprPath;
  auto* al = app.add_subcommand("alpha", "Interval bounds on alpha for a set expression");
  al->add_option("--expr", exprPath)->required();
  al->callback([&] { action = [&](Context& c) { return runAlpha(c, exprPath); }; });

  std::string opPath;
  double kscK = 0.0;
  auto* ck = app.add_subcommand("certify-ksc", "Certify a k-set contraction by composing transfer factors");
  ck->add_option("--op", opPath)->required();
  ck->add_option("--k", kscK)->required()->check(CLI::NonNegativeNumber);
  ck->callback([&] { action = [&](Context& c) { return runCertify(c, opPath, kscK); }; });

  CheckArgs ca;
  auto* ch = app.add_subcommand("check", "Empirical property checks for multi-functions");
  ch->add_option("--what", ca.what)->required()->check(
      CLI::IsMember({"weak-lsc", "weak-usc", "image-residual", "thm4", "fcontractive", "inward"}));
  ch->add_option("--space", ca.space)->required();
  ch->add_option("--operator", ca.op);
  ch->add_option("--grid", ca.grid);
  ch->add_option("--index", ca.index);
  ch->add_option("--alpha", ca.alpha);
  ch->add_option("--probe", ca.probe, "Largest probe radius");
  ch->add_option("--levels", ca.levels, "Probe radii halvings");
  ch->add_option("--pairs", ca.pairs, "Maximum sampled pairs");
  ch->add_option("--k", ca.k, "Contraction constants: k or label=k,...");
  ch->add_option("--hull", ca.hull);
  ch->add_option("--x", ca.x);
  ch->add_option("--t", ca.t);
  ch->callback([&] { action = [&](Context& c) { return runCheck(c, ca); }; });

  SolveArgs sa;
  auto addSolve = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--space", sa.space)->required();
    s->add_option("--operator", sa.op)->required();
    s->add_option("--x0", sa.x0)->required();
    return s;
  };
  auto* sp = addSolve("solve-picard", "Picard iteration for a contraction");
  sp->add_option("--k", sa.k);
  sp->callback([&] { action = [&](Context& c) { return runPicard(c, sa); }; });
  auto* sn = addSolve("solve-nadler", "Set-valued iteration for a contractive multi-function");
  sn->add_option("--k", sa.k);
  sn->add_option("--branch", sa.branch, "Always select this branch");
  sn->callback([&] { action = [&](Context& c) { return runNadler(c, sa); }; });
  auto* sc = addSolve("solve-caristi", "Descent on a Caristi potential family");
  sc->add_option("--potentials", sa.potentials)->required();
  sc->add_option("--selection", sa.selection)->check(CLI::IsMember({"max-progress", "metric"}));
  sc->callback([&] { action = [&](Context& c) { return runCaristi(c, sa); }; });
  auto* si = addSolve("solve-inward", "Fixed point of a weakly inward contraction on hull(K)");
  si->add_option("--k", sa.k);
  si->add_option("--hull", sa.hull)->required();
  si->callback([&] { action = [&](Context& c) { return runInward(c, sa); }; });

  VariationalArgs va;
  auto* bp = app.add_subcommand("bishop-phelps", "Maximal element above x0 among candidates");
  bp->add_option("--space", va.space)->required();
  bp->add_option("--potentials", va.potentials)->required();
  bp->add_option("--x0", va.x0)->required();
  bp->add_option("--grid", va.grid)->required();
  bp->callback([&] { action = [&](Context& c) { return runBishopPhelps(c, va); }; });
  auto* ek = app.add_subcommand("ekeland", "Ekeland point near an approximate minimizer");
  ek->add_option("--space", va.space)->required();
  ek->add_option("--potentials", va.potentials)->required();
  ek->add_option("--x0", va.x0)->required();
  ek->add_option("--grid", va.grid)->required();
  ek->add_option("--delta", va.delta)->required();
  ek->callback([&] { action = [&](Context& c) { return runEkeland(c, va); }; });

  std::string demoName;
  auto* dm = app.add_subcommand("demo", "Run a bundled end-to-end example ('list' or 'all')");
  dm->add_option("name", demoName)->required();
  dm->callback([&] { action = [&](Context& c) { return runDemo(c, demoName); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    Context ctx(g, out, err);
    return action(ctx);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return kViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace uniformis::cli
