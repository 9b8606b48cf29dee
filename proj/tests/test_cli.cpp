#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "uniformis/cli.hpp"
#include "uniformis/trace.hpp"

using namespace uniformis;

namespace {

std::string data(const std::string& name) {
  const char* dir = std::getenv("UNIFORMIS_DATA_DIR");
  return std::string(dir ? dir : "data") + "/" + name;
}

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<TraceRecord> records(const std::string& text) {
  std::vector<TraceRecord> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line.front() == '{') out.push_back(parseTraceRecord(line));
  return out;
}

}  // namespace

TEST_CASE("hausdorff command prints the distance and oracle agreement") {
  const auto r = run({"hausdorff", "--space", data("line.json"), "--a", data("cloud_a.json"), "--b",
                      data("cloud_b.json"), "--index", "d"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("H^d(A, B) = 1\n") != std::string::npos);
  CHECK(r.out.find("agrees") != std::string::npos);
}

TEST_CASE("alpha command prints the interval and rule trace") {
  const auto r = run({"alpha", "--expr", data("scale_expr.json")});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("alpha in [1, 1]") != std::string::npos);
  CHECK(r.out.find("scale-homogeneity") != std::string::npos);
  CHECK(r.out.find("axiom") != std::string::npos);
}

TEST_CASE("certify-ksc verdicts") {
  auto r = run({"certify-ksc", "--op", data("hull_scale_op.json"), "--k", "0.5"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("certified") == 0);
  r = run({"certify-ksc", "--op", data("identity_op.json"), "--k", "0.9"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("refused") == 0);
}

TEST_CASE("solve-picard converges and streams a trace") {
  const auto r = run({"solve-picard", "--space", data("line.json"), "--operator", data("half_plus_half.json"), "--x0",
                      "0", "--tol", "1e-9", "--trace", "-", "--quiet"});
  CHECK(r.code == cli::kOk);
  const auto recs = records(r.out);
  REQUIRE(recs.size() > 2);
  CHECK(recs.front().type == "iter");
  const auto& s = recs.back();
  CHECK(s.type == "summary");
  CHECK(s.termination == "converged");
  REQUIRE(s.x.size() == 1);
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(s.checks.at("a-priori-bound"));
}

TEST_CASE("global flags work before and after the subcommand; trace file is written") {
  const std::string path = "cli_trace_test.jsonl";
  auto r = run({"--max-iter", "3", "solve-picard", "--space", data("line.json"), "--operator",
                data("half_plus_half.json"), "--x0", "0"});
  CHECK(r.code == cli::kNoConvergence);
  r = run({"solve-picard", "--space", data("line.json"), "--operator", data("half_plus_half.json"), "--x0", "0",
           "--trace", path, "--max-iter", "3"});
  CHECK(r.code == cli::kNoConvergence);
  CHECK(r.out.find("termination: max-iter") != std::string::npos);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto recs = records(buf.str());
  REQUIRE(recs.size() == 4);
  CHECK(recs.back().termination == "max-iter");
  std::remove(path.c_str());
}

TEST_CASE("solve-nadler with a forced branch") {
  const auto r = run({"solve-nadler", "--space", data("line.json"), "--operator", data("two_branch.json"), "--x0", "3",
                      "--branch", "1"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("x* = (1.5") != std::string::npos);
  CHECK(r.out.find("check step-bound: PASS") != std::string::npos);
}

TEST_CASE("solve-caristi and solve-inward") {
  auto r = run({"solve-caristi", "--space", data("plane.json"), "--operator", data("halving_plane.json"), "--potentials",
                data("caristi_potentials.json"), "--x0", "1,2"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("check telescoping: PASS") != std::string::npos);

  r = run({"solve-inward", "--space", data("line.json"), "--operator", data("inward_map.json"), "--hull",
           data("unit_interval.json"), "--x0", "0"});
  CHECK(r.code == cli::kOk);
  const auto at = r.out.find("x* = (");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(r.out.substr(at + 6)) == doctest::Approx(0.8).epsilon(1e-7));

  r = run({"solve-inward", "--space", data("line.json"), "--operator", data("shift_map.json"), "--hull",
           data("unit_interval.json"), "--x0", "1"});
  CHECK(r.code == cli::kViolation);
  CHECK(r.out.find("infeasible-witness") != std::string::npos);
}

TEST_CASE("check subcommands") {
  auto r = run({"check", "--what", "fcontractive", "--space", data("line.json"), "--operator", data("doubling.json"),
                "--grid", data("grid_line.json"), "--k", "0.9"});
  CHECK(r.code == cli::kViolation);
  CHECK(r.out.find("f-contractive: FAIL") != std::string::npos);

  r = run({"check", "--what", "image-residual", "--space", data("line.json"), "--operator", data("two_branch.json"), "--grid",
           data("grid_line.json")});
  CHECK(r.code == cli::kOk);

  r = run({"check", "--what", "weak-lsc", "--space", data("line.json"), "--operator", data("constant_map.json"),
           "--grid", data("grid_line.json"), "--index", "d", "--alpha", "1", "--probe", "0.05"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("empirical") != std::string::npos);

  r = run({"check", "--what", "inward", "--space", data("line.json"), "--hull", data("unit_interval.json"), "--x", "0",
           "--t", "1.2"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("t in I_K(x): yes") != std::string::npos);

  r = run({"check", "--what", "weak-lsc", "--space", data("line.json")});
  CHECK(r.code == cli::kUsage);
}

TEST_CASE("variational commands") {
  auto r = run({"bishop-phelps", "--space", data("line.json"), "--potentials", data("abs_potential.json"), "--x0", "0.3",
                "--grid", data("grid_line.json")});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("x* = (0)") != std::string::npos);

  r = run({"ekeland", "--space", data("line.json"), "--potentials", data("abs_potential.json"), "--x0", "0.3",
           "--delta", "0.3", "--grid", data("grid_ekeland.json")});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("strict inequality vs 40 candidates: PASS") != std::string::npos);

  r = run({"ekeland", "--space", data("line.json"), "--potentials", data("abs_potential.json"), "--x0", "2", "--delta",
           "0.5", "--grid", data("grid_wide.json")});
  CHECK(r.code == cli::kViolation);
  CHECK(r.err.find("'d'") != std::string::npos);
}

TEST_CASE("demos") {
  auto r = run({"demo", "list"});
  CHECK(r.code == cli::kOk);
  for (const auto& name : cli::demoNames()) CHECK(r.out.find(name) != std::string::npos);
  for (const auto& name : cli::demoNames()) {
    r = run({"demo", name});
    INFO(name << ": " << r.out << r.err);
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("PASS " + name) == 0);
  }
  r = run({"demo", "all", "--trace", "-", "--quiet"});
  CHECK(r.code == cli::kOk);
  CHECK(records(r.out).size() == cli::demoNames().size());
  CHECK(run({"demo", "no-such-demo"}).code == cli::kUsage);
  // older spellings still accepted
  CHECK(run({"demo", "inward-theorem-tt"}).out.find("PASS inward-interval") == 0);
  CHECK(run({"check", "--what", "thm4", "--space", data("line.json"), "--operator", data("two_branch.json"), "--grid",
             data("grid_line.json")})
            .code == cli::kOk);
}

TEST_CASE("usage and input errors exit 1 and fail fast") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"hausdorff", "--space", data("line.json")}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);

  const auto bad = run({"hausdorff", "--space", data("broken.json"), "--a", data("cloud_a.json"), "--b",
                        data("cloud_b.json")});
  CHECK(bad.code == cli::kUsage);
  CHECK(bad.err.find("broken.json:4:") != std::string::npos);
  CHECK(bad.out.empty());

  // The operator is broken; no iteration may run before that is noticed.
  const auto late = run({"solve-picard", "--space", data("line.json"), "--operator", data("broken.json"), "--x0", "0",
                         "--trace", "-"});
  CHECK(late.code == cli::kUsage);
  CHECK(late.out.empty());
  CHECK(run({"solve-picard", "--space", data("line.json"), "--operator", data("half_plus_half.json"), "--x0",
             "0,1"})
            .code == cli::kUsage);
}
