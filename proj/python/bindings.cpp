#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "uniformis/cli.hpp"
#include "uniformis/hausdorff.hpp"
#include "uniformis/io.hpp"
#include "uniformis/multifunction.hpp"
#include "uniformis/noncompactness.hpp"
#include "uniformis/solvers.hpp"
#include "uniformis/variational.hpp"

namespace py = pybind11;
using namespace uniformis;

namespace {

using Coords = std::vector<double>;
using Coordss = std::vector<Coords>;

Point toPoint(const Coords& c) { return Point(c); }

PointCloud toCloud(const Coordss& pts) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.emplace_back(p);
  return PointCloud(std::move(out));
}

Coordss fromCloud(const PointCloud& c) {
  Coordss out;
  for (const auto& p : c) out.push_back(p.vec());
  return out;
}

Document doc(const std::string& text, const std::string& what) { return {parseJsonText(text, what), what}; }

py::list steps(const std::vector<DerivationStep>& trace) {
  py::list out;
  for (const auto& s : trace) {
    py::dict d;
    d["rules"] = s.rules;
    d["node"] = s.node;
    d["lo"] = s.result.lo;
    d["hi"] = s.result.hi;
    d["depth"] = s.depth;
    out.append(d);
  }
  return out;
}

py::dict solveDict(const Point& x, const SolverTrace& t) {
  py::dict d;
  d["point"] = x.vec();
  d["termination"] = std::string(terminationName(t.termination));
  d["converged"] = t.converged();
  d["steps"] = t.steps();
  d["residual"] = t.finalResidual;
  Coordss its;
  for (const auto& p : t.iterates) its.push_back(p.vec());
  d["iterates"] = its;
  d["checks"] = t.checks;
  d["notes"] = t.notes;
  if (!t.stepRho.empty()) d["step_rho"] = t.stepRho;
  if (!t.potentials.empty()) d["potentials"] = t.potentials;
  return d;
}

py::dict checkDict(const CheckReport& r) {
  py::dict d;
  d["kind"] = std::string(checkKindName(r.kind));
  d["passed"] = r.passed();
  d["empirical"] = r.empirical;
  d["samples"] = r.samplesTested;
  d["violations"] = r.violations.size();
  d["worst"] = r.worstRatio;
  d["note"] = r.note;
  return d;
}

py::list strictnessList(const std::vector<StrictnessCheck>& v) {
  py::list out;
  for (const auto& s : v) {
    py::dict d;
    d["candidate"] = s.candidate.vec();
    d["holds"] = s.holds;
    d["index"] = s.index;
    d["margin"] = s.margin;
    out.append(d);
  }
  return out;
}

ContractionConstants constantsFor(const OperatorSpec& op, const PseudometricFamily& fam, std::optional<double> k) {
  if (k) return ContractionConstants::uniform(fam, *k);
  if (!op.k) throw DomainError("no contraction constant: pass k or put \"k\" in the operator");
  return contractionFromJson(*op.k, fam);
}

}  // namespace

PYBIND11_MODULE(_uniformis, m) {
  m.doc() = "Analysis on uniform spaces given by finite families of pseudometrics";

  static py::exception<Error> error(m, "Error");
  static py::exception<DomainError> domainError(m, "DomainError", error.ptr());
  static py::exception<InputError> inputError(m, "InputError", domainError.ptr());
  static py::exception<ConvergenceError> convergenceError(m, "ConvergenceError", error.ptr());
  static py::exception<ContractViolation> contractViolation(m, "ContractViolation", error.ptr());
  static py::exception<HypothesisError> hypothesisError(m, "HypothesisError", contractViolation.ptr());
  static py::exception<InwardnessError> inwardnessError(m, "InwardnessError", contractViolation.ptr());
  // most derived first
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      py::set_error(inputError, e.what());
    } catch (const HypothesisError& e) {
      py::set_error(hypothesisError, e.what());
    } catch (const InwardnessError& e) {
      py::set_error(inwardnessError, e.what());
    } catch (const ContractViolation& e) {
      py::set_error(contractViolation, e.what());
    } catch (const ConvergenceError& e) {
      py::set_error(convergenceError, e.what());
    } catch (const DomainError& e) {
      py::set_error(domainError, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<PseudometricFamily>(m, "Space")
      .def_static(
          "from_json", [](const std::string& text) { return parseSpace(doc(text, "<space>")); }, py::arg("text"))
      .def_static("from_file", [](const std::string& path) { return parseSpace(loadDocument(path)); }, py::arg("path"))
      .def_property_readonly("dimension", &PseudometricFamily::dimension)
      .def_property_readonly("labels", &PseudometricFamily::labels)
      .def_property_readonly("separating", &PseudometricFamily::separating)
      .def_property_readonly("saturated", &PseudometricFamily::saturated)
      .def(
          "distance",
          [](const PseudometricFamily& f, const std::string& label, const Coords& x, const Coords& y) {
            return f.distance(label, toPoint(x), toPoint(y));
          },
          py::arg("label"), py::arg("x"), py::arg("y"))
      .def("rho", [](const PseudometricFamily& f, const Coords& x, const Coords& y) {
        return supMetricRho(f, toPoint(x), toPoint(y));
      })
      .def("__len__", &PseudometricFamily::size);

  py::class_<OperatorSpec>(m, "Operator")
      .def_static(
          "from_json", [](const std::string& text, std::size_t dim) { return parseOperator(doc(text, "<operator>"), dim); },
          py::arg("text"), py::arg("dimension"))
      .def("image", [](const OperatorSpec& op, const Coords& x) { return fromCloud(op.T(toPoint(x))); })
      .def("image_of_cloud", [](const OperatorSpec& op, const Coordss& a) { return fromCloud(op.T.image(toCloud(a))); })
      .def_property_readonly("single_valued", &OperatorSpec::singleValued);

  m.def(
      "hausdorff",
      [](const PseudometricFamily& f, const std::string& label, const Coordss& a, const Coordss& b) {
        return hausdorffPseudometric(f, label, toCloud(a), toCloud(b));
      },
      py::arg("space"), py::arg("label"), py::arg("a"), py::arg("b"));
  m.def(
      "hausdorff_via_inflation",
      [](const PseudometricFamily& f, const std::string& label, const Coordss& a, const Coordss& b, double tol) {
        return hausdorffViaInflation(f, label, toCloud(a), toCloud(b), tol);
      },
      py::arg("space"), py::arg("label"), py::arg("a"), py::arg("b"), py::arg("tol") = 1e-9);

  m.def(
      "alpha_bounds",
      [](const std::string& text) {
        const auto d = alphaBounds(parseSetExpr(doc(text, "<expr>")));
        py::dict out;
        out["lo"] = d.interval.lo;
        out["hi"] = d.interval.hi;
        out["trace"] = steps(d.trace);
        return out;
      },
      py::arg("expr_json"));
  m.def(
      "certify_ksc",
      [](const std::string& text, double k) {
        const auto v = certifyKSetContraction(parseSetOperator(doc(text, "<op>")), k);
        py::dict out;
        out["certified"] = v.certified;
        out["factor"] = v.factor;
        out["k"] = v.k;
        out["blocking_node"] = v.blockingNode;
        out["reason"] = v.reason;
        out["trace"] = steps(v.trace);
        return out;
      },
      py::arg("op_json"), py::arg("k"));
  m.def(
      "empirical_alpha",
      [](const PseudometricFamily& f, const std::string& label, const Coordss& a, std::size_t budget) {
        return empiricalAlpha(toCloud(a), f, label, budget);
      },
      py::arg("space"), py::arg("label"), py::arg("cloud"), py::arg("budget"));
  m.def(
      "greedy_cover_number",
      [](const PseudometricFamily& f, const std::string& label, const Coordss& a, double eps) {
        return greedyCoverNumber(toCloud(a), f, label, eps);
      },
      py::arg("space"), py::arg("label"), py::arg("cloud"), py::arg("eps"));

  m.def(
      "check_image_residual",
      [](const OperatorSpec& op, const PseudometricFamily& f, const Coordss& grid, std::size_t maxPairs, unsigned seed,
         double tol) {
        py::dict out;
        for (const auto& l : f.labels())
          out[py::str(l)] = checkDict(
              checkImageResidualInequality(op.T, f, l, samplePairs(toCloud(grid), maxPairs, seed), tol));
        return out;
      },
      py::arg("operator"), py::arg("space"), py::arg("grid"), py::arg("max_pairs") = 1000, py::arg("seed") = 1,
      py::arg("tol") = 1e-9);
  m.def(
      "invariant_set",
      [](const OperatorSpec& op, const Coords& seed, const Coordss& universe, std::size_t maxIter) {
        return fromCloud(invariantSetIterate(op.T, toPoint(seed), toCloud(universe), maxIter));
      },
      py::arg("operator"), py::arg("seed"), py::arg("universe"), py::arg("max_iter") = 1000);

  m.def(
      "solve_picard",
      [](const PseudometricFamily& f, const OperatorSpec& op, const Coords& x0, std::optional<double> k, double tol,
         std::size_t maxIter) {
        SolverConfig cfg;
        cfg.tol = tol;
        cfg.maxIter = maxIter;
        const auto r = picardSolve(op.map(), f, constantsFor(op, f, k), toPoint(x0), cfg);
        return solveDict(r.point, r.trace);
      },
      py::arg("space"), py::arg("operator"), py::arg("x0"), py::arg("k") = py::none(), py::arg("tol") = 1e-9,
      py::arg("max_iter") = 10000);
  m.def(
      "solve_nadler",
      [](const PseudometricFamily& f, const OperatorSpec& op, const Coords& x0, std::optional<std::size_t> branch,
         std::optional<double> k, double tol, std::size_t maxIter) {
        SolverConfig cfg;
        cfg.tol = tol;
        cfg.maxIter = maxIter;
        const auto r = nadlerSolve(op.T, f, constantsFor(op, f, k), toPoint(x0), cfg,
                                   branch ? fixedBranchSelection(*branch) : SelectionPolicy{});
        return solveDict(r.point, r.trace);
      },
      py::arg("space"), py::arg("operator"), py::arg("x0"), py::arg("branch") = py::none(), py::arg("k") = py::none(),
      py::arg("tol") = 1e-9, py::arg("max_iter") = 10000);
  m.def(
      "solve_caristi",
      [](const PseudometricFamily& f, const OperatorSpec& op, const std::string& potentials, const Coords& x0,
         double tol, std::size_t maxIter) {
        SolverConfig cfg;
        cfg.tol = tol;
        cfg.maxIter = maxIter;
        const auto r = caristiDescent(op.T, f, parsePotentials(doc(potentials, "<potentials>"), f), toPoint(x0), cfg);
        return solveDict(r.point, r.trace);
      },
      py::arg("space"), py::arg("operator"), py::arg("potentials_json"), py::arg("x0"), py::arg("tol") = 1e-9,
      py::arg("max_iter") = 10000);
  m.def(
      "solve_inward",
      [](const PseudometricFamily& f, const OperatorSpec& op, const Coordss& hull, const Coords& x0,
         std::optional<double> k, double tol, std::size_t maxIter) {
        SolverConfig cfg;
        cfg.tol = tol;
        cfg.maxIter = maxIter;
        const auto r = inwardSolve(op.map(), toCloud(hull), f, constantsFor(op, f, k), toPoint(x0), cfg);
        py::dict d = solveDict(r.point, r.trace);
        py::list ws;
        for (const auto& w : r.witnesses) {
          py::dict e;
          e["x"] = w.x.vec();
          e["f"] = w.f.vec();
          e["c"] = w.c;
          e["direct"] = w.direct;
          e["residuals"] = w.residuals;
          ws.append(e);
        }
        d["witnesses"] = ws;
        return d;
      },
      py::arg("space"), py::arg("operator"), py::arg("hull"), py::arg("x0"), py::arg("k") = py::none(),
      py::arg("tol") = 1e-9, py::arg("max_iter") = 10000);

  m.def(
      "bishop_phelps",
      [](const PseudometricFamily& f, const std::string& potentials, const Coords& x0, const Coordss& grid) {
        const auto phi = parsePotentials(doc(potentials, "<potentials>"), f);
        const OrderContext ctx(f, phi);
        const auto r = bishopPhelpsSearch(ctx, toPoint(x0), toCloud(grid));
        py::dict d;
        d["x_star"] = r.xStar.vec();
        d["up_set_size"] = r.upSetSize;
        d["upper_condition"] = r.upperCondition;
        d["strictness"] = strictnessList(r.strictness);
        d["min_margin"] = r.minMargin;
        d["agrees_with_oracle"] = r.agreesWithOracle;
        d["passed"] = r.passed;
        return d;
      },
      py::arg("space"), py::arg("potentials_json"), py::arg("x0"), py::arg("grid"));
  m.def(
      "ekeland",
      [](const PseudometricFamily& f, const std::string& potentials, const Coords& x0,
         const std::map<std::string, double>& delta, const Coordss& grid) {
        const auto phi = parsePotentials(doc(potentials, "<potentials>"), f);
        const OrderContext ctx(f, phi);
        const auto r = ekelandSearch(ctx, toPoint(x0), delta, toCloud(grid));
        py::dict d;
        d["x_star"] = r.xStar.vec();
        d["restricted_size"] = r.restrictedSize;
        d["potential_drop"] = r.potentialDrop;
        d["within_delta"] = r.withinDelta;
        d["strictness"] = strictnessList(r.strictness);
        d["min_margin"] = r.minMargin;
        d["agrees_with_oracle"] = r.agreesWithOracle;
        d["passed"] = r.passed;
        return d;
      },
      py::arg("space"), py::arg("potentials_json"), py::arg("x0"), py::arg("delta"), py::arg("grid"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
  m.def("demo_names", &cli::demoNames);
}
