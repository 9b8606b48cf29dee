#include "uniformis/trace.hpp"

#include <cmath>
#include <limits>

namespace uniformis {

namespace {

using nlohmann::json;

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double readNum(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw DomainError("trace record field '" + field + "' is not a number");
}

bool sameNum(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

bool TraceRecord::operator==(const TraceRecord& o) const {
  auto sameVec = [](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!sameNum(a[i], b[i])) return false;
    return true;
  };
  auto sameMap = [](const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
    if (a.size() != b.size()) return false;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
      if (ia->first != ib->first || !sameNum(ia->second, ib->second)) return false;
    return true;
  };
  const bool sameResidual =
      residual.has_value() == o.residual.has_value() && (!residual || sameNum(*residual, *o.residual));
  return type == o.type && command == o.command && step == o.step && sameVec(x, o.x) &&
         sameMap(residuals, o.residuals) && termination == o.termination && sameResidual && steps == o.steps &&
         checks == o.checks && sameMap(values, o.values) && notes == o.notes;
}

json toJson(const TraceRecord& r) {
  json j;
  j["type"] = r.type;
  if (!r.command.empty()) j["command"] = r.command;
  if (r.step) j["step"] = *r.step;
  if (!r.x.empty()) {
    json x = json::array();
    for (double v : r.x) x.push_back(num(v));
    j["x"] = std::move(x);
  }
  if (!r.residuals.empty()) {
    json m = json::object();
    for (const auto& [k, v] : r.residuals) m[k] = num(v);
    j["residuals"] = std::move(m);
  }
  if (!r.termination.empty()) j["termination"] = r.termination;
  if (r.residual) j["residual"] = num(*r.residual);
  if (r.steps) j["steps"] = *r.steps;
  if (!r.checks.empty()) j["checks"] = r.checks;
  if (!r.values.empty()) {
    json m = json::object();
    for (const auto& [k, v] : r.values) m[k] = num(v);
    j["values"] = std::move(m);
  }
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

TraceRecord traceRecordFromJson(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw DomainError("trace record needs a string 'type'");
  TraceRecord r;
  try {
    r.type = j["type"].get<std::string>();
    if (j.contains("command")) r.command = j["command"].get<std::string>();
    if (j.contains("step")) r.step = j["step"].get<std::size_t>();
    if (j.contains("x"))
      for (const auto& v : j["x"]) r.x.push_back(readNum(v, "x"));
    if (j.contains("residuals"))
      for (const auto& [k, v] : j["residuals"].items()) r.residuals[k] = readNum(v, "residuals");
    if (j.contains("termination")) r.termination = j["termination"].get<std::string>();
    if (j.contains("residual")) r.residual = readNum(j["residual"], "residual");
    if (j.contains("steps")) r.steps = j["steps"].get<std::size_t>();
    if (j.contains("checks")) r.checks = j["checks"].get<std::map<std::string, bool>>();
    if (j.contains("values"))
      for (const auto& [k, v] : j["values"].items()) r.values[k] = readNum(v, "values");
    if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed trace record: ") + e.what());
  }
  return r;
}

std::string formatTraceRecord(const TraceRecord& r) { return toJson(r).dump(); }

TraceRecord parseTraceRecord(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("malformed trace line: ") + e.what());
  }
  return traceRecordFromJson(j);
}

std::vector<TraceRecord> traceRecords(const std::string& command, const SolverTrace& trace, const Point& result) {
  std::vector<TraceRecord> out;
  for (std::size_t n = 0; n < trace.residuals.size(); ++n) {
    TraceRecord r;
    r.type = "iter";
    r.step = n;
    r.x = trace.iterates[n + 1].vec();
    for (std::size_t l = 0; l < trace.labels.size(); ++l) r.residuals[trace.labels[l]] = trace.residuals[n][l];
    if (n + 1 < trace.potentials.size())
      for (std::size_t l = 0; l < trace.labels.size(); ++l)
        r.values["phi." + trace.labels[l]] = trace.potentials[n + 1][l];
    if (n < trace.stepRho.size()) r.values["rho"] = trace.stepRho[n];
    out.push_back(std::move(r));
  }
  TraceRecord s;
  s.type = "summary";
  s.command = command;
  s.termination = std::string(terminationName(trace.termination));
  s.residual = trace.finalResidual;
  s.steps = trace.steps();
  s.x = result.vec();
  s.checks = trace.checks;
  s.notes = trace.notes;
  out.push_back(std::move(s));
  return out;
}

void TraceWriter::write(const TraceRecord& r) {
  if (out_) (*out_) << formatTraceRecord(r) << '\n';
}

}  // namespace uniformis
