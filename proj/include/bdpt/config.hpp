#pragma once

// Experiment configs and JSON encoding. Rationals travel as "p/q" strings;
// function tables are nested arrays with axis 1 outermost.

#include "bdpt/bloat.hpp"
#include "bdpt/grid.hpp"
#include "bdpt/hard_functions.hpp"
#include "bdpt/metric.hpp"
#include "bdpt/random.hpp"
#include "bdpt/rational.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bdpt {

using Json = nlohmann::json;

class ConfigError : public ParseError {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : ParseError("config field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// ------------------------------------------------------------- primitives

inline Json to_json(const Rational& r) { return to_string(r); }
inline Json to_json(const ExtRational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field, "expected an integer or a \"p/q\" string");
}

inline ExtRational ext_rational_from_json(const Json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) return ExtRational(j.get<long long>());
    if (j.is_string()) return parse_ext_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field, "expected an integer, \"p/q\", \"inf\" or \"-inf\"");
}

inline Json rationals_to_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline Json point_to_json(const Point& p) { return Json(p); }

inline Point point_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of coordinates");
  Point p;
  for (const auto& c : j) {
    if (!c.is_number_integer()) throw ConfigError(field, "coordinates must be integers");
    p.push_back(c.get<int>());
  }
  return p;
}

/// Nested arrays, axis 1 outermost.
inline Json table_to_json(const Shape& shape, const std::vector<Rational>& values) {
  std::function<Json(std::size_t, std::size_t)> rec = [&](std::size_t axis, std::size_t offset) -> Json {
    Json a = Json::array();
    for (int t = 0; t < shape.side(axis); ++t) {
      const std::size_t at = offset + static_cast<std::size_t>(t) * shape.stride(axis);
      a.push_back(axis + 1 == shape.dims() ? Json(to_string(values[at])) : rec(axis + 1, at));
    }
    return a;
  };
  return rec(0, 0);
}

inline std::vector<int> table_sides(const Json& j) {
  std::vector<int> sides;
  const Json* cur = &j;
  while (cur->is_array()) {
    if (cur->empty()) throw ConfigError("function.table", "empty array");
    sides.push_back(static_cast<int>(cur->size()));
    cur = &(*cur)[0];
  }
  return sides;
}

inline std::vector<Rational> table_from_json(const Json& j, const Shape& shape) {
  std::vector<Rational> out;
  out.reserve(shape.size());
  std::function<void(const Json&, std::size_t)> rec = [&](const Json& node, std::size_t axis) {
    if (!node.is_array() || node.size() != static_cast<std::size_t>(shape.side(axis))) {
      throw ConfigError("function.table", "nesting does not match shape at axis " + std::to_string(axis + 1));
    }
    for (const auto& child : node) {
      if (axis + 1 == shape.dims()) {
        out.push_back(rational_from_json(child, "function.table"));
      } else {
        rec(child, axis + 1);
      }
    }
  };
  rec(j, 0);
  return out;
}

// ----------------------------------------------------------- distributions

struct DistributionSpec {
  enum class Kind { explicit_masses, uniform, p_biased, zipf };
  Kind kind = Kind::uniform;
  Rational param;                              // p or s
  std::vector<std::vector<Rational>> marginals;  // explicit only
  long long zipf_denominator = 1'000'000;

  bool operator==(const DistributionSpec&) const = default;
};

inline DistributionSpec distribution_spec_from_json(const Json& j) {
  DistributionSpec s;
  if (j.is_string()) {
    const std::string t = j.get<std::string>();
    if (t == "uniform") {
      s.kind = DistributionSpec::Kind::uniform;
    } else if (t.rfind("p-biased:", 0) == 0) {
      s.kind = DistributionSpec::Kind::p_biased;
      s.param = rational_from_json(t.substr(9), "distribution");
      if (s.param < 0 || s.param > 1) throw ConfigError("distribution", "p must lie in [0,1]");
    } else if (t.rfind("zipf:", 0) == 0) {
      s.kind = DistributionSpec::Kind::zipf;
      s.param = rational_from_json(t.substr(5), "distribution");
      if (s.param < 0) throw ConfigError("distribution", "zipf exponent must be nonnegative");
    } else {
      throw ConfigError("distribution", "unknown token '" + t + "'");
    }
    return s;
  }
  if (j.is_object() && j.contains("zipf")) {
    s.kind = DistributionSpec::Kind::zipf;
    s.param = rational_from_json(j["zipf"], "distribution.zipf");
    if (j.contains("denominator")) s.zipf_denominator = j["denominator"].get<long long>();
    if (s.zipf_denominator < 1) throw ConfigError("distribution.denominator", "must be positive");
    return s;
  }
  if (j.is_array()) {
    s.kind = DistributionSpec::Kind::explicit_masses;
    for (std::size_t r = 0; r < j.size(); ++r) {
      const std::string f = "distribution[" + std::to_string(r) + "]";
      if (!j[r].is_array()) throw ConfigError(f, "expected an array of masses");
      std::vector<Rational> m;
      for (const auto& x : j[r]) m.push_back(rational_from_json(x, f));
      s.marginals.push_back(std::move(m));
    }
    if (s.marginals.empty()) throw ConfigError("distribution", "no marginals");
    return s;
  }
  throw ConfigError("distribution", "expected a token or an array of marginals");
}

inline Json to_json(const DistributionSpec& s) {
  switch (s.kind) {
    case DistributionSpec::Kind::uniform:
      return "uniform";
    case DistributionSpec::Kind::p_biased:
      return "p-biased:" + to_string(s.param);
    case DistributionSpec::Kind::zipf:
      if (s.zipf_denominator == 1'000'000) return "zipf:" + to_string(s.param);
      return Json{{"zipf", to_string(s.param)}, {"denominator", s.zipf_denominator}};
    case DistributionSpec::Kind::explicit_masses: {
      Json a = Json::array();
      for (const auto& m : s.marginals) a.push_back(rationals_to_json(m));
      return a;
    }
  }
  return nullptr;
}

/// Masses ∝ k^-s, truncated to multiples of 1/denominator, then renormalized.
inline std::vector<Rational> zipf_marginal(int n, const Rational& s, long long denominator) {
  const double ex = s.convert_to<double>();
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0;
  for (int k = 1; k <= n; ++k) total += w[static_cast<std::size_t>(k - 1)] = std::pow(static_cast<double>(k), -ex);
  std::vector<Rational> m;
  Rational sum = 0;
  for (double x : w) {
    m.emplace_back(static_cast<long long>(std::floor(x / total * static_cast<double>(denominator))), denominator);
    sum += m.back();
  }
  if (sum == 0) throw ConfigError("distribution", "zipf denominator too small");
  for (auto& x : m) x /= sum;
  return m;
}

inline ProductDistribution make_distribution(const DistributionSpec& s, const std::vector<int>& sides) {
  switch (s.kind) {
    case DistributionSpec::Kind::explicit_masses: {
      ProductDistribution d(s.marginals);
      if (!sides.empty() && d.sides() != sides) throw ConfigError("distribution", "marginal lengths differ from shape");
      return d;
    }
    case DistributionSpec::Kind::uniform: {
      std::vector<std::vector<Rational>> m;
      for (int n : sides) m.emplace_back(static_cast<std::size_t>(n), Rational(1, n));
      return ProductDistribution(std::move(m));
    }
    case DistributionSpec::Kind::p_biased:
      for (int n : sides) {
        if (n != 2) throw ConfigError("distribution", "p-biased needs every side equal to 2");
      }
      return ProductDistribution::p_biased(sides.size(), s.param);
    case DistributionSpec::Kind::zipf: {
      std::vector<std::vector<Rational>> m;
      for (int n : sides) m.push_back(zipf_marginal(n, s.param, s.zipf_denominator));
      return ProductDistribution(std::move(m));
    }
  }
  throw ConfigError("distribution", "unreachable");
}

// ---------------------------------------------------------------- families

struct AxisSpec {
  enum class Kind { monotone, lipschitz, explicit_bounds };
  Kind kind = Kind::monotone;
  Rational c;
  std::vector<ExtRational> lower, upper;

  bool operator==(const AxisSpec&) const = default;
};

struct FamilySpec {
  std::optional<AxisSpec> all;  // token applied to every axis
  std::vector<AxisSpec> axes;

  bool operator==(const FamilySpec&) const = default;
};

inline AxisSpec axis_spec_from_json(const Json& j, const std::string& field) {
  AxisSpec a;
  if (j.is_string()) {
    const std::string t = j.get<std::string>();
    if (t == "monotone") return a;
    if (t.rfind("lipschitz:", 0) == 0) {
      a.kind = AxisSpec::Kind::lipschitz;
      a.c = rational_from_json(t.substr(10), field);
      if (a.c <= 0) throw ConfigError(field, "Lipschitz constant must be positive");
      return a;
    }
    throw ConfigError(field, "unknown family token '" + t + "'");
  }
  if (j.is_object() && j.contains("lower") && j.contains("upper")) {
    a.kind = AxisSpec::Kind::explicit_bounds;
    for (const auto& x : j["lower"]) a.lower.push_back(ext_rational_from_json(x, field + ".lower"));
    for (const auto& x : j["upper"]) a.upper.push_back(ext_rational_from_json(x, field + ".upper"));
    if (a.lower.size() != a.upper.size()) throw ConfigError(field, "lower and upper lengths differ");
    return a;
  }
  throw ConfigError(field, "expected a token or {\"lower\": [...], \"upper\": [...]}");
}

inline FamilySpec family_spec_from_json(const Json& j) {
  FamilySpec f;
  if (j.is_string()) {
    f.all = axis_spec_from_json(j, "family");
  } else if (j.is_array()) {
    for (std::size_t r = 0; r < j.size(); ++r) f.axes.push_back(axis_spec_from_json(j[r], "family[" + std::to_string(r) + "]"));
  } else {
    throw ConfigError("family", "expected a token or a per-axis array");
  }
  return f;
}

inline Json to_json(const AxisSpec& a) {
  switch (a.kind) {
    case AxisSpec::Kind::monotone:
      return "monotone";
    case AxisSpec::Kind::lipschitz:
      return "lipschitz:" + to_string(a.c);
    case AxisSpec::Kind::explicit_bounds: {
      Json lo = Json::array(), up = Json::array();
      for (const auto& x : a.lower) lo.push_back(to_string(x));
      for (const auto& x : a.upper) up.push_back(to_string(x));
      return Json{{"lower", lo}, {"upper", up}};
    }
  }
  return nullptr;
}

inline Json to_json(const FamilySpec& f) {
  if (f.all) return to_json(*f.all);
  Json a = Json::array();
  for (const auto& x : f.axes) a.push_back(to_json(x));
  return a;
}

inline BoundingFamily make_family(const FamilySpec& f, const std::vector<int>& sides) {
  std::vector<BoundingFamily::Axis> axes;
  for (std::size_t r = 0; r < sides.size(); ++r) {
    const AxisSpec& a = f.all ? *f.all : (r < f.axes.size() ? f.axes[r] : throw ConfigError("family", "fewer axes than the shape"));
    const std::string field = "family[" + std::to_string(r) + "]";
    switch (a.kind) {
      case AxisSpec::Kind::monotone:
        axes.push_back(BoundingFamily::monotone_axis(sides[r]));
        break;
      case AxisSpec::Kind::lipschitz:
        axes.push_back(BoundingFamily::lipschitz_axis(sides[r], a.c));
        break;
      case AxisSpec::Kind::explicit_bounds:
        if (a.lower.size() + 1 != static_cast<std::size_t>(sides[r])) {
          throw ConfigError(field, "bound vectors need length n_r - 1");
        }
        axes.push_back({a.lower, a.upper});
        break;
    }
  }
  if (!f.all && f.axes.size() != sides.size()) throw ConfigError("family", "axis count differs from the shape");
  try {
    return BoundingFamily(std::move(axes));
  } catch (const std::exception& e) {
    throw ConfigError("family", e.what());
  }
}

// --------------------------------------------------------------- functions

struct FunctionSpec {
  enum class Kind { table, generator, hard };
  Kind kind = Kind::generator;
  std::vector<Rational> table;  // row-major, axis 1 outermost
  std::vector<int> table_sides;
  std::string name = "sum";  // generator: sum | reverse | constant | random; hard: line | hypercube | aggregate
  std::uint64_t seed = 0;
  int range = 3;
  int index = 1;  // hard: level j, segment a, or map number

  bool operator==(const FunctionSpec&) const = default;
};

inline FunctionSpec function_spec_from_json(const Json& j) {
  FunctionSpec f;
  if (j.is_array()) {
    f.kind = FunctionSpec::Kind::table;
    f.table_sides = table_sides(j);
    f.table = table_from_json(j, Shape(f.table_sides));
    return f;
  }
  if (!j.is_object()) throw ConfigError("function", "expected a table or an object");
  if (j.contains("table")) {
    f.kind = FunctionSpec::Kind::table;
    f.table_sides = table_sides(j["table"]);
    f.table = table_from_json(j["table"], Shape(f.table_sides));
  } else if (j.contains("generator")) {
    f.kind = FunctionSpec::Kind::generator;
    f.name = j["generator"].get<std::string>();
    if (f.name != "sum" && f.name != "reverse" && f.name != "constant" && f.name != "random") {
      throw ConfigError("function.generator", "unknown generator '" + f.name + "'");
    }
    if (j.contains("seed")) f.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("range")) f.range = j["range"].get<int>();
    if (f.range < 1) throw ConfigError("function.range", "must be positive");
  } else if (j.contains("hard")) {
    f.kind = FunctionSpec::Kind::hard;
    f.name = j["hard"].get<std::string>();
    if (f.name != "line" && f.name != "hypercube" && f.name != "aggregate") {
      throw ConfigError("function.hard", "unknown hard family '" + f.name + "'");
    }
    if (j.contains("index")) f.index = j["index"].get<int>();
    if (f.index < 1) throw ConfigError("function.index", "must be at least 1");
  } else {
    throw ConfigError("function", "needs one of table, generator, hard");
  }
  return f;
}

inline Json to_json(const FunctionSpec& f) {
  switch (f.kind) {
    case FunctionSpec::Kind::table:
      return Json{{"table", table_to_json(Shape(f.table_sides), f.table)}};
    case FunctionSpec::Kind::generator: {
      Json j{{"generator", f.name}};
      if (f.name == "random") {
        j["seed"] = f.seed;
        j["range"] = f.range;
      }
      return j;
    }
    case FunctionSpec::Kind::hard:
      return Json{{"hard", f.name}, {"index", f.index}};
  }
  return nullptr;
}

// ------------------------------------------------------------------ config

struct ExperimentConfig {
  std::vector<int> shape;
  DistributionSpec distribution;
  FamilySpec family{AxisSpec{}, {}};
  FunctionSpec function;
  Rational epsilon = Rational(1, 4);
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::string tester = "hypergrid";  // line | hypergrid | distribution-free
  std::string tree = "median";       // median | optimal | balanced
  std::optional<std::size_t> bruteforce_cap;
  std::size_t bloat_cap = kBloatCap;
  long long const_factor = kDefaultConstFactor;
  Json extra = Json::object();  // subcommand-specific blocks (sweep, bench, hard)

  bool operator==(const ExperimentConfig&) const = default;
};

inline ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  ExperimentConfig c;
  try {
    if (j.contains("distribution")) c.distribution = distribution_spec_from_json(j["distribution"]);
    if (j.contains("family")) c.family = family_spec_from_json(j["family"]);
    if (j.contains("function")) c.function = function_spec_from_json(j["function"]);
    if (j.contains("shape")) {
      if (!j["shape"].is_array() || j["shape"].empty()) throw ConfigError("shape", "expected a non-empty array");
      for (const auto& x : j["shape"]) {
        if (!x.is_number_integer() || x.get<int>() < 1) throw ConfigError("shape", "sides must be positive integers");
        c.shape.push_back(x.get<int>());
      }
    } else if (c.distribution.kind == DistributionSpec::Kind::explicit_masses) {
      for (const auto& m : c.distribution.marginals) c.shape.push_back(static_cast<int>(m.size()));
    } else if (c.function.kind == FunctionSpec::Kind::table) {
      c.shape = c.function.table_sides;
    }
    if (j.contains("epsilon")) c.epsilon = rational_from_json(j["epsilon"], "epsilon");
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("trials")) c.trials = j["trials"].get<std::size_t>();
    if (j.contains("tester")) c.tester = j["tester"].get<std::string>();
    if (j.contains("tree")) c.tree = j["tree"].get<std::string>();
    if (j.contains("caps")) {
      const Json& caps = j["caps"];
      if (caps.contains("bruteforce")) c.bruteforce_cap = caps["bruteforce"].get<std::size_t>();
      if (caps.contains("bloat")) c.bloat_cap = caps["bloat"].get<std::size_t>();
    }
    if (j.contains("const_factor")) c.const_factor = j["const_factor"].get<long long>();
    for (const char* k : {"sweep", "bench", "hard"}) {
      if (j.contains(k)) c.extra[k] = j[k];
    }
  } catch (const Json::exception& e) {
    throw ConfigError("<root>", e.what());
  }
  if (c.tester != "line" && c.tester != "hypergrid" && c.tester != "distribution-free") {
    throw ConfigError("tester", "expected line, hypergrid or distribution-free");
  }
  if (c.tree != "median" && c.tree != "optimal" && c.tree != "balanced") {
    throw ConfigError("tree", "expected median, optimal or balanced");
  }
  if (c.epsilon <= 0 || c.epsilon > 1) throw ConfigError("epsilon", "must lie in (0, 1]");
  if (c.trials < 1) throw ConfigError("trials", "must be at least 1");
  return c;
}

inline Json to_json(const ExperimentConfig& c) {
  Json j;
  if (!c.shape.empty()) j["shape"] = c.shape;
  j["distribution"] = to_json(c.distribution);
  j["family"] = to_json(c.family);
  j["function"] = to_json(c.function);
  j["epsilon"] = to_string(c.epsilon);
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["tester"] = c.tester;
  j["tree"] = c.tree;
  Json caps{{"bloat", c.bloat_cap}};
  if (c.bruteforce_cap) caps["bruteforce"] = *c.bruteforce_cap;
  j["caps"] = caps;
  j["const_factor"] = c.const_factor;
  for (auto it = c.extra.begin(); it != c.extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

inline std::size_t effective_bruteforce_cap(const ExperimentConfig& c) {
  return c.bruteforce_cap ? std::min<std::size_t>(*c.bruteforce_cap, 64) : brute_force_cap();
}

// ---------------------------------------------------------- materialization

inline std::vector<int> config_sides(const ExperimentConfig& c) {
  if (c.shape.empty()) throw ConfigError("shape", "missing and not derivable from distribution or table");
  return c.shape;
}

inline ProductDistribution config_distribution(const ExperimentConfig& c) {
  try {
    return make_distribution(c.distribution, config_sides(c));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("distribution", e.what());
  }
}

inline BoundingFamily config_family(const ExperimentConfig& c) { return make_family(c.family, config_sides(c)); }

inline SearchTree make_tree(const std::string& kind, const std::vector<Rational>& marginal) {
  if (kind == "optimal") return build_optimal_bst(marginal).tree;
  if (kind == "balanced") return build_balanced_bst(static_cast<int>(marginal.size()));
  return build_median_bst(marginal);
}

inline GridFunction config_function(const ExperimentConfig& c) {
  const Shape shape(config_sides(c));
  const FunctionSpec& f = c.function;
  switch (f.kind) {
    case FunctionSpec::Kind::table:
      if (f.table_sides != shape.sides()) throw ConfigError("function.table", "table shape differs from shape");
      return GridFunction(shape, f.table);
    case FunctionSpec::Kind::generator: {
      std::vector<Rational> v(shape.size());
      Rng rng = derive_stream(f.seed, 0);
      std::uniform_int_distribution<int> pick(0, f.range - 1);
      for (std::size_t idx = 0; idx < shape.size(); ++idx) {
        long long s = 0;
        for (std::size_t r = 0; r < shape.dims(); ++r) {
          const int x = shape.coord(idx, r);
          s += f.name == "reverse" ? shape.side(r) + 1 - x : x;
        }
        if (f.name == "constant") s = 0;
        if (f.name == "random") s = pick(rng);
        v[idx] = s;
      }
      return GridFunction(shape, std::move(v));
    }
    case FunctionSpec::Kind::hard: {
      ProductDistribution dist = config_distribution(c);
      if (f.name == "line") {
        if (shape.dims() != 1) throw ConfigError("function.hard", "the line family needs d = 1");
        LineHardFamily fam = line_hard_family(dist.marginal(0), std::min(c.epsilon, Rational(49, 100)));
        if (f.index > static_cast<int>(fam.levels.size())) throw ConfigError("function.index", "level beyond tree height");
        return fam.function(f.index);
      }
      if (f.name == "hypercube") {
        HypercubeFamily fam = hypercube_hard_family(dist);
        if (static_cast<std::size_t>(f.index) > fam.count()) throw ConfigError("function.index", "no such segment");
        return fam.function(static_cast<std::size_t>(f.index));
      }
      UsefulMapBatch batch = build_useful_maps(dist, c.epsilon, c.const_factor);
      if (static_cast<std::size_t>(f.index) > batch.maps.size()) throw ConfigError("function.index", "no such useful map");
      return aggregate_hard_function(batch.maps[static_cast<std::size_t>(f.index - 1)], batch.families).g;
    }
  }
  throw ConfigError("function", "unreachable");
}

}  // namespace bdpt
