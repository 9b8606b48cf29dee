#pragma once

// JSON input documents: spaces, clouds, multi-functions, set expressions,
// set operators and potentials. Errors carry the source and either the
// line/column of a syntax error or the JSON pointer of a bad field.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "uniformis/core.hpp"
#include "uniformis/hausdorff.hpp"
#include "uniformis/multifunction.hpp"
#include "uniformis/noncompactness.hpp"
#include "uniformis/solvers.hpp"

namespace uniformis {

using Json = nlohmann::json;

class InputError : public DomainError {
 public:
  InputError(std::string source, std::string location, const std::string& message)
      : DomainError(source + ":" + location + ": " + message),
        source_(std::move(source)),
        location_(std::move(location)) {}
  const std::string& source() const { return source_; }
  /// "line:col" for syntax errors, a JSON pointer otherwise.
  const std::string& location() const { return location_; }

 private:
  std::string source_;
  std::string location_;
};

/// Parses JSON text; syntax errors become InputError with line:column.
Json parseJsonText(std::string_view text, const std::string& source = "<input>");
Json loadJsonFile(const std::string& path);

/// Field-level readers take the document's source name for diagnostics.
struct Document {
  Json json;
  std::string source;
};
Document loadDocument(const std::string& path);

/// {"dimension": n, "separating": b, "saturate": b?,
///  "pseudometrics": [{"label", "kind", "params"}]}
/// kinds: coordinate_abs {coord}, weighted_abs {weights},
///        euclidean_subset {coords}, max {of: [labels]}.
PseudometricFamily parseSpace(const Document& doc);

/// {"points": [[..], ..]} or {"grid": {"lo": [..], "hi": [..], "step": s}},
/// or a bare array of points.
PointCloud parseCloud(const Document& doc, std::optional<std::size_t> dimension = std::nullopt);

/// Multi-function (operator) document:
///   {"kind": "affine_branches", "branches": [{"scale": s | [diag] | [[matrix]], "offset": [..]}],
///    "domain": {"lo": [..], "hi": [..]}?, "k": number | {label: k}?}
///   {"kind": "constant", "cloud": <cloud>}
struct OperatorSpec {
  MultiFunction T;
  std::vector<AffineMap> branches;
  std::optional<PointCloud> constant;
  std::optional<Json> k;  // as written; resolved against a family later

  bool singleValued() const;
  /// The map x -> the single image point; throws DomainError otherwise.
  PointMap map() const;
};
OperatorSpec parseOperator(const Document& doc, std::size_t dimension);

/// {"op": "finite"|"atom"|"ball"|"union"|"sum"|"scale"|"hull"|"closure"|"thicken"|"subset", ...}
SetExpr parseSetExpr(const Document& doc);

/// {"op": "input"|"scale"|"translate"|"hull"|"closure"|"union_finite"|"union", ...};
/// any other op becomes an unsupported node.
SetOperator parseSetOperator(const Document& doc);

/// {"potentials": {label | "*": {"kind": "abs"|"affine"|"quadratic"|"constant", ...}}}
///   abs:       a d_label(x, center) + b        (a >= 0, lower bound b)
///   affine:    w . x + b                       (needs "lower_bound")
///   quadratic: a |x - center|_2^2 + b          (a >= 0, lower bound b)
///   constant:  b
/// "lower_bound" overrides the default bound. "*" covers unlisted labels.
PotentialFamily parsePotentials(const Document& doc, const PseudometricFamily& family);

/// "1,2.5" -> Point{1, 2.5}.
Point parsePoint(std::string_view text);

/// "0.3" (every member) or "d1=0.3,d2=0.5" (each member required).
std::map<std::string, double> parseIndexedValues(std::string_view text, const PseudometricFamily& family);

/// Contraction constants from a number or {label: k} object.
ContractionConstants contractionFromJson(const Json& j, const PseudometricFamily& family,
                                         const std::string& source = "<k>");

}  // namespace uniformis
