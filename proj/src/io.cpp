#include "uniformis/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace uniformis {

namespace {

// Cursor into a document: knows where it is for error messages.
class Node {
 public:
  Node(const Json& j, const std::string& source, std::string path = "")
      : j_(j), source_(source), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(source_, path_.empty() ? "/" : path_, msg);
  }

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }
  const std::string& source() const { return source_; }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Node at(const char* key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) fail(std::string("missing field '") + key + "'");
    return Node(j_.at(key), source_, path_ + "/" + key);
  }

  Node at(std::size_t i) const { return Node(j_.at(i), source_, path_ + "/" + std::to_string(i)); }

  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  void requireObject() const {
    if (!j_.is_object()) fail("expected an object");
  }

  double number() const {
    if (j_.is_string()) {
      const std::string s = j_.get<std::string>();
      if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
      fail("expected a number, got string '" + s + "'");
    }
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }

  double finiteNumber() const {
    const double v = number();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  std::size_t index() const {
    if (!j_.is_number_integer() || j_.get<long long>() < 0) fail("expected a nonnegative integer");
    return j_.get<std::size_t>();
  }

  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  std::vector<double> numbers() const {
    std::vector<double> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).finiteNumber());
    return v;
  }

  Point point(std::optional<std::size_t> dim = std::nullopt) const {
    std::vector<double> v = numbers();
    if (v.empty()) fail("a point needs at least one coordinate");
    if (dim && v.size() != *dim)
      fail("point has dimension " + std::to_string(v.size()) + ", expected " + std::to_string(*dim));
    return Point(std::move(v));
  }

  std::vector<Point> points(std::optional<std::size_t> dim = std::nullopt) const {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < size(); ++i) {
      const Node p = at(i);
      if (p.json().is_number()) {
        pts.push_back(Point{p.finiteNumber()});
        if (dim && *dim != 1) p.fail("scalar point in a space of dimension " + std::to_string(*dim));
      } else {
        pts.push_back(p.point(dim));
      }
    }
    if (pts.empty()) fail("a cloud needs at least one point");
    return pts;
  }

 private:
  const Json& j_;
  const std::string& source_;
  std::string path_;
};

template <class F>
auto guarded(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const DomainError& e) {
    n.fail(e.what());
  }
}

PointCloud cloudFrom(const Node& n, std::optional<std::size_t> dim) {
  if (n.json().is_array()) return guarded(n, [&] { return PointCloud(n.points(dim)); });
  n.requireObject();
  if (n.has("points")) {
    const Node p = n.at("points");
    return guarded(p, [&] { return PointCloud(p.points(dim)); });
  }
  if (n.has("grid")) {
    const Node g = n.at("grid");
    const Point lo = g.at("lo").point(dim), hi = g.at("hi").point(dim);
    const double step = g.at("step").finiteNumber();
    return guarded(g, [&] { return PointCloud::grid(lo, hi, step); });
  }
  n.fail("a cloud needs 'points' or 'grid'");
}

Pseudometric memberFrom(const Node& m, const std::vector<Pseudometric>& earlier) {
  const std::string label = m.at("label").string();
  const std::string kind = m.at("kind").string();
  const Node params = m.has("params") ? m.at("params") : m;
  return guarded(m, [&]() -> Pseudometric {
    if (kind == "coordinate_abs") return Pseudometric::coordinateAbs(label, params.at("coord").index());
    if (kind == "weighted_abs") return Pseudometric::weightedAbs(label, params.at("weights").numbers());
    if (kind == "euclidean_subset") {
      const Node c = params.at("coords");
      std::vector<std::size_t> coords;
      for (std::size_t i = 0; i < c.size(); ++i) coords.push_back(c.at(i).index());
      return Pseudometric::euclideanSubset(label, std::move(coords));
    }
    if (kind == "max") {
      const Node of = params.at("of");
      std::vector<Pseudometric> parts;
      for (std::size_t i = 0; i < of.size(); ++i) {
        const std::string ref = of.at(i).string();
        auto it = std::find_if(earlier.begin(), earlier.end(), [&](const Pseudometric& p) { return p.label() == ref; });
        if (it == earlier.end()) of.at(i).fail("unknown pseudometric '" + ref + "' (must be listed earlier)");
        parts.push_back(*it);
      }
      return Pseudometric::maxOf(label, std::move(parts));
    }
    m.at("kind").fail("unknown pseudometric kind '" + kind +
                      "' (expected coordinate_abs, weighted_abs, euclidean_subset or max)");
  });
}

AffineMap affineFrom(const Node& b, std::size_t dim) {
  const Point offset = b.has("offset") ? b.at("offset").point(dim) : Point(std::vector<double>(dim, 0.0));
  const Node s = b.at("scale");
  return guarded(s, [&]() -> AffineMap {
    if (s.json().is_number()) return AffineMap::scalar(s.finiteNumber(), offset);
    if (!s.json().is_array()) s.fail("scale must be a number, a diagonal or a matrix");
    if (s.size() > 0 && s.json()[0].is_array()) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < s.size(); ++i) rows.push_back(s.at(i).numbers());
      return AffineMap::matrix(std::move(rows), offset);
    }
    return AffineMap::diagonal(s.numbers(), offset);
  });
}

SetExpr exprFrom(const Node& n) {
  const std::string op = n.at("op").string();
  auto single = [&]() -> SetExpr {
    if (n.has("arg")) return exprFrom(n.at("arg"));
    const Node a = n.at("args");
    if (a.size() != 1) a.fail("'" + op + "' takes exactly one operand");
    return exprFrom(a.at(std::size_t{0}));
  };
  return guarded(n, [&]() -> SetExpr {
    if (op == "finite") return SetExpr::finite(cloudFrom(n, std::nullopt));
    if (op == "atom") {
      const std::string name = n.has("name") ? n.at("name").string() : "A";
      const Node a = n.at("alpha");
      AlphaInterval iv;
      if (a.json().is_array()) {
        if (a.size() != 2) a.fail("alpha must be [lo, hi]");
        const Node hi = a.at(std::size_t{1});
        iv = {a.at(std::size_t{0}).finiteNumber(), hi.json().is_null() ? std::numeric_limits<double>::infinity() : hi.number()};
      } else {
        iv = AlphaInterval::exact(a.finiteNumber());
      }
      return SetExpr::abstractAtom(name, iv);
    }
    if (op == "ball") return SetExpr::ball(n.at("radius").finiteNumber());
    if (op == "union") {
      const Node a = n.at("args");
      std::vector<SetExpr> kids;
      for (std::size_t i = 0; i < a.size(); ++i) kids.push_back(exprFrom(a.at(i)));
      return SetExpr::unionOf(std::move(kids));
    }
    if (op == "sum") {
      const Node a = n.at("args");
      if (a.size() != 2) a.fail("sum takes exactly two operands");
      return SetExpr::sum(exprFrom(a.at(std::size_t{0})), exprFrom(a.at(std::size_t{1})));
    }
    if (op == "scale") return SetExpr::scale(n.at("beta").finiteNumber(), single());
    if (op == "hull") return SetExpr::hull(single());
    if (op == "closure") return SetExpr::closure(single());
    if (op == "thicken") return SetExpr::thicken(single(), n.at("eps").finiteNumber());
    if (op == "subset") return SetExpr::subset(single(), exprFrom(n.at("superset")));
    n.at("op").fail("unknown set operation '" + op + "'");
  });
}

SetOperator operatorFrom(const Node& n) {
  const std::string op = n.at("op").string();
  auto single = [&]() -> SetOperator {
    if (n.has("arg")) return operatorFrom(n.at("arg"));
    if (n.has("args")) {
      const Node a = n.at("args");
      if (a.size() != 1) a.fail("'" + op + "' takes exactly one operand");
      return operatorFrom(a.at(std::size_t{0}));
    }
    return SetOperator::input();
  };
  return guarded(n, [&]() -> SetOperator {
    if (op == "input") return SetOperator::input();
    if (op == "scale") return SetOperator::scale(n.at("beta").finiteNumber(), single());
    if (op == "translate") return SetOperator::translate(n.at("offset").point(), single());
    if (op == "hull") return SetOperator::hull(single());
    if (op == "closure") return SetOperator::closure(single());
    if (op == "union_finite") return SetOperator::unionWithFinite(single(), cloudFrom(n, std::nullopt));
    if (op == "union") {
      const Node a = n.at("args");
      std::vector<SetOperator> kids;
      for (std::size_t i = 0; i < a.size(); ++i) kids.push_back(operatorFrom(a.at(i)));
      return SetOperator::unionOf(std::move(kids));
    }
    std::vector<SetOperator> kids;
    if (n.has("args") && n.json().at("args").is_array()) {
      const Node a = n.at("args");
      for (std::size_t i = 0; i < a.size(); ++i) kids.push_back(operatorFrom(a.at(i)));
    } else if (n.has("arg")) {
      kids.push_back(operatorFrom(n.at("arg")));
    }
    return SetOperator::unsupported(op, std::move(kids));
  });
}

PotentialFamily::Fn potentialFrom(const Node& p, const PseudometricFamily& family, std::size_t member,
                                  double& lower) {
  const std::string kind = p.at("kind").string();
  const std::size_t dim = family.dimension();
  const double b = p.has("offset") ? p.at("offset").finiteNumber() : 0.0;
  auto center = [&] { return p.has("center") ? p.at("center").point(dim) : Point(std::vector<double>(dim, 0.0)); };
  PotentialFamily::Fn fn;
  if (kind == "abs") {
    const double a = p.has("scale") ? p.at("scale").finiteNumber() : 1.0;
    if (a < 0.0) p.at("scale").fail("abs potential needs scale >= 0");
    const Point c = center();
    const Pseudometric d = family[member];
    fn = [a, b, c, d](const Point& x) { return a * d(x, c) + b; };
    lower = b;
  } else if (kind == "quadratic") {
    const double a = p.has("scale") ? p.at("scale").finiteNumber() : 1.0;
    if (a < 0.0) p.at("scale").fail("quadratic potential needs scale >= 0");
    const Point c = center();
    fn = [a, b, c](const Point& x) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.dim(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
      return a * s + b;
    };
    lower = b;
  } else if (kind == "affine") {
    const Point w = p.at("weights").point(dim);
    fn = [w, b](const Point& x) {
      double s = b;
      for (std::size_t i = 0; i < x.dim(); ++i) s += w[i] * x[i];
      return s;
    };
    if (!p.has("lower_bound")) p.fail("affine potential needs an explicit 'lower_bound'");
  } else if (kind == "constant") {
    fn = [b](const Point&) { return b; };
    lower = b;
  } else {
    p.at("kind").fail("unknown potential kind '" + kind + "' (expected abs, affine, quadratic or constant)");
  }
  if (p.has("lower_bound")) lower = p.at("lower_bound").finiteNumber();
  return fn;
}

std::string lineColumn(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

double parseDouble(std::string_view s, const std::string& what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw DomainError("cannot parse '" + std::string(s) + "' as a number in " + what);
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

}  // namespace

Json parseJsonText(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw InputError(source, lineColumn(text, e.byte), msg);
  }
}

Json loadJsonFile(const std::string& path) { return loadDocument(path).json; }

Document loadDocument(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "0:0", "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return {parseJsonText(ss.str(), path), path};
}

PseudometricFamily parseSpace(const Document& doc) {
  const Node root(doc.json, doc.source);
  root.requireObject();
  const Node dimNode = root.at("dimension");
  const std::size_t dim = dimNode.index();
  if (dim == 0) dimNode.fail("dimension must be >= 1");
  const bool separating = root.has("separating") ? root.at("separating").boolean() : false;
  const Node list = root.at("pseudometrics");
  std::vector<Pseudometric> members;
  for (std::size_t i = 0; i < list.size(); ++i) {
    members.push_back(memberFrom(list.at(i), members));
    if (members.back().minDimension() > dim)
      list.at(i).fail("pseudometric '" + members.back().label() + "' reads coordinates beyond dimension " +
                      std::to_string(dim));
  }
  PseudometricFamily fam = guarded(list, [&] { return PseudometricFamily(dim, members, separating); });
  if (root.has("saturate") && root.at("saturate").boolean()) fam = saturate(fam);
  return fam;
}

PointCloud parseCloud(const Document& doc, std::optional<std::size_t> dimension) {
  return cloudFrom(Node(doc.json, doc.source), dimension);
}

bool OperatorSpec::singleValued() const {
  return (branches.size() == 1) || (constant && constant->size() == 1);
}

PointMap OperatorSpec::map() const {
  if (!singleValued()) throw DomainError("operator is not single-valued");
  if (!branches.empty()) {
    const AffineMap a = branches.front();
    return [a](const Point& x) { return a(x); };
  }
  const Point c = (*constant)[0];
  return [c](const Point&) { return c; };
}

OperatorSpec parseOperator(const Document& doc, std::size_t dimension) {
  const Node root(doc.json, doc.source);
  root.requireObject();
  const std::string kind = root.at("kind").string();
  std::optional<Json> k;
  if (root.has("k")) k = doc.json.at("k");

  MultiFunction::DomainFn domain;
  if (root.has("domain")) {
    const Node d = root.at("domain");
    const Point lo = d.at("lo").point(dimension), hi = d.at("hi").point(dimension);
    domain = [lo, hi](const Point& x) {
      for (std::size_t i = 0; i < x.dim(); ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
      return true;
    };
  }

  if (kind == "affine_branches") {
    const Node list = root.at("branches");
    std::vector<AffineMap> branches;
    for (std::size_t i = 0; i < list.size(); ++i) branches.push_back(affineFrom(list.at(i), dimension));
    if (branches.empty()) list.fail("at least one branch required");
    MultiFunction T = MultiFunction::affineBranches(branches);
    if (domain) {
      auto shared = std::make_shared<const std::vector<AffineMap>>(branches);
      T = MultiFunction(
          [shared](const Point& x) {
            std::vector<Point> pts;
            for (const auto& b : *shared) pts.push_back(b(x));
            return PointCloud(std::move(pts));
          },
          domain);
    }
    return {std::move(T), std::move(branches), std::nullopt, std::move(k)};
  }
  if (kind == "constant") {
    PointCloud c = cloudFrom(root.at("cloud"), dimension);
    MultiFunction T = domain ? MultiFunction([c](const Point&) { return c; }, domain) : MultiFunction::constant(c);
    return {std::move(T), {}, std::move(c), std::move(k)};
  }
  root.at("kind").fail("unknown operator kind '" + kind + "' (expected affine_branches or constant)");
}

SetExpr parseSetExpr(const Document& doc) { return exprFrom(Node(doc.json, doc.source)); }

SetOperator parseSetOperator(const Document& doc) { return operatorFrom(Node(doc.json, doc.source)); }

PotentialFamily parsePotentials(const Document& doc, const PseudometricFamily& family) {
  const Node root(doc.json, doc.source);
  const Node map = root.has("potentials") ? root.at("potentials") : root;
  map.requireObject();
  for (const auto& [key, v] : doc.json.is_object() && doc.json.contains("potentials") ? doc.json.at("potentials").items()
                                                                                     : doc.json.items()) {
    if (key != "*" && !family.contains(key)) map.fail("potential for unknown index '" + key + "'");
  }
  PotentialFamily phi;
  for (std::size_t l = 0; l < family.size(); ++l) {
    const std::string& label = family.label(l);
    const char* key = map.has(label.c_str()) ? label.c_str() : "*";
    if (!map.has(key)) map.fail("no potential for index '" + label + "' and no '*' default");
    const Node p = map.at(key);
    double lower = 0.0;
    PotentialFamily::Fn fn = potentialFrom(p, family, l, lower);
    phi.add(label, std::move(fn), lower);
  }
  return phi;
}

Point parsePoint(std::string_view text) {
  std::vector<double> v;
  for (auto part : split(text, ',')) v.push_back(parseDouble(part, "point '" + std::string(text) + "'"));
  return Point(std::move(v));
}

std::map<std::string, double> parseIndexedValues(std::string_view text, const PseudometricFamily& family) {
  std::map<std::string, double> out;
  if (text.find('=') == std::string_view::npos) {
    const double v = parseDouble(text, "'" + std::string(text) + "'");
    for (const auto& l : family.labels()) out[l] = v;
    return out;
  }
  for (auto part : split(text, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw DomainError("expected label=value in '" + std::string(text) + "'");
    std::string label(part.substr(0, eq));
    while (!label.empty() && label.front() == ' ') label.erase(label.begin());
    while (!label.empty() && label.back() == ' ') label.pop_back();
    family.indexOf(label);
    out[label] = parseDouble(part.substr(eq + 1), "'" + std::string(text) + "'");
  }
  for (const auto& l : family.labels())
    if (!out.count(l)) throw DomainError("no value for index '" + l + "' in '" + std::string(text) + "'");
  return out;
}

ContractionConstants contractionFromJson(const Json& j, const PseudometricFamily& family, const std::string& source) {
  const Node n(j, source);
  return guarded(n, [&] {
    if (j.is_number()) return ContractionConstants::uniform(family, n.finiteNumber());
    n.requireObject();
    std::map<std::string, double> m;
    for (const auto& [key, v] : j.items()) {
      family.indexOf(key);
      m[key] = Node(v, source, "/" + key).finiteNumber();
    }
    return ContractionConstants(std::move(m));
  });
}

}  // namespace uniformis
