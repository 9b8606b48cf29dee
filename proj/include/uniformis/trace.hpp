#pragma once

// Line-delimited JSON trace records emitted by the solvers and checkers.
//
//   {"type":"iter","step":3,"x":[..],"residuals":{"d1":..}}
//   {"type":"summary","command":"solve-picard","termination":"converged",
//    "residual":..,"steps":..,"x":[..],"checks":{..},"notes":[..],"values":{..}}
//
// Non-finite numbers are written as the strings "inf", "-inf" and "nan".

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "uniformis/solvers.hpp"

namespace uniformis {

struct TraceRecord {
  std::string type;  // "iter", "summary", "witness", "violation", ...
  std::string command;
  std::optional<std::size_t> step;
  std::vector<double> x;
  std::map<std::string, double> residuals;
  std::string termination;
  std::optional<double> residual;
  std::optional<std::size_t> steps;
  std::map<std::string, bool> checks;
  std::map<std::string, double> values;
  std::vector<std::string> notes;

  bool operator==(const TraceRecord& other) const;
};

nlohmann::json toJson(const TraceRecord& r);
/// Throws DomainError on a malformed record.
TraceRecord traceRecordFromJson(const nlohmann::json& j);

/// Single-line serialization and its inverse.
std::string formatTraceRecord(const TraceRecord& r);
TraceRecord parseTraceRecord(const std::string& line);

/// Per-iteration records for a solver trace, then one summary record.
std::vector<TraceRecord> traceRecords(const std::string& command, const SolverTrace& trace, const Point& result);

/// Writes records as they come; a null stream discards them.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream* out = nullptr) : out_(out) {}
  void write(const TraceRecord& r);
  bool enabled() const { return out_ != nullptr; }

 private:
  std::ostream* out_;
};

}  // namespace uniformis
