#pragma once

// Subcommand bodies shared by the CLI binary and the end-to-end tests.
// Each returns the rendered output plus an exit code: 0 accept/ok,
// 1 reject/check failed. Errors propagate as exceptions (exit 2 upstream).

#include "bdpt/bloat.hpp"
#include "bdpt/config.hpp"
#include "bdpt/distance.hpp"
#include "bdpt/hard_functions.hpp"
#include "bdpt/search_tree.hpp"
#include "bdpt/testers.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

namespace bdpt {

struct CommandResult {
  std::string output;
  int exit_code = 0;
};

inline CommandResult json_result(const Json& j, int code) { return {j.dump(2) + "\n", code}; }

inline std::vector<SearchTree> config_trees(const ExperimentConfig& c, const ProductDistribution& dist) {
  std::vector<SearchTree> trees;
  for (const auto& m : dist.marginals()) trees.push_back(make_tree(c.tree, m));
  return trees;
}

inline Json points_to_json(const std::vector<Point>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(point_to_json(p));
  return a;
}

// ---------------------------------------------------------------- test

inline CommandResult cmd_test(const ExperimentConfig& c) {
  const ProductDistribution dist = config_distribution(c);
  const BoundingFamily family = config_family(c);
  const GridFunction f = config_function(c);
  const Quasimetric q(family);
  Rng rng = derive_stream(c.seed, 0);
  TestRun run;
  if (c.tester == "line") {
    if (f.shape().dims() != 1) throw ConfigError("tester", "the line tester needs d = 1");
    run = line_tester(make_tree(c.tree, dist.marginal(0)), f, q, dist, c.epsilon, rng);
  } else if (c.tester == "hypergrid") {
    run = hypergrid_tester(config_trees(c, dist), f, q, dist, c.epsilon, rng);
  } else {
    PointSource hidden = [&](Rng& g) { return dist.sample(g); };
    run = distribution_free_tester(f, q, hidden, c.epsilon, rng);
  }
  Json j;
  j["command"] = "test";
  j["tester"] = c.tester;
  j["tree"] = c.tester == "distribution-free" ? "balanced" : c.tree;
  j["epsilon"] = to_string(c.epsilon);
  j["seed"] = c.seed;
  j["verdict"] = run.reject ? "reject" : "accept";
  j["queries"] = run.queries_used;
  j["budget"] = run.budget;
  j["steps"] = run.steps_run;
  j["steps_planned"] = run.steps_planned;
  j["aborted"] = run.aborted;
  j["witness"] = run.witness ? Json::array({point_to_json(run.witness->first), point_to_json(run.witness->second)})
                             : Json(nullptr);
  return json_result(j, run.reject ? 1 : 0);
}

// ------------------------------------------------------------ distance

inline CommandResult cmd_distance(const ExperimentConfig& c) {
  const ProductDistribution dist = config_distribution(c);
  const GridFunction f = config_function(c);
  const Quasimetric q(config_family(c));
  const std::size_t cap = effective_bruteforce_cap(c);
  DistanceReport rep = f.shape().dims() == 1 ? exact_distance_line(f, q, dist.marginal(0))
                                             : exact_distance_bruteforce(f, q, dist, true, cap);
  Json j;
  j["command"] = "distance";
  j["method"] = f.shape().dims() == 1 ? "line-dp" : "subset-search";
  j["dist"] = to_string(rep.dist);
  j["fix_set"] = points_to_json(rep.fix_set);
  j["witness"] = rep.witness ? table_to_json(rep.witness->shape(), rep.witness->values()) : Json(nullptr);
  return json_result(j, 0);
}

// -------------------------------------------------------------- dimred

inline Json dimred_to_json(const DimensionReductionReport& r) {
  return Json{{"dist", to_string(r.dist)},
              {"per_axis", rationals_to_json(r.per_axis)},
              {"sum", to_string(r.sum)},
              {"lower_ok", r.lower_ok},
              {"upper_ok", r.upper_ok}};
}

inline constexpr std::size_t kSweepCap = 1'000'000;

inline CommandResult cmd_dimred(const ExperimentConfig& c) {
  const ProductDistribution dist = config_distribution(c);
  const Quasimetric q(config_family(c));
  const std::size_t cap = effective_bruteforce_cap(c);
  Json j;
  j["command"] = "dimred";
  if (!c.extra.contains("sweep")) {
    const GridFunction f = config_function(c);
    auto rep = check_dimension_reduction(f, q, dist, dist.point_masses(), cap);
    j["report"] = dimred_to_json(rep);
    return json_result(j, rep.lower_ok && rep.upper_ok ? 0 : 1);
  }
  const Json& sw = c.extra["sweep"];
  const int range = sw.value("range", 3);
  const Shape shape(config_sides(c));
  if (range < 1) throw ConfigError("sweep.range", "must be positive");
  if (shape.size() > cap) {
    throw SizeError("sweep grid has " + std::to_string(shape.size()) + " points, above the cap of " + std::to_string(cap));
  }
  double count_d = std::pow(static_cast<double>(range), static_cast<double>(shape.size()));
  if (count_d > static_cast<double>(kSweepCap)) throw SizeError("sweep would enumerate more than 10^6 functions");
  const std::size_t count = static_cast<std::size_t>(std::llround(count_d));
  DenseMetric dense(q);
  const auto masses = dist.point_masses();
  std::size_t lower_fail = 0, upper_fail = 0;
  Rational worst = 1;  // smallest Σ/dist seen with dist > 0
  std::vector<int> digits(shape.size(), 0);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Rational> v(digits.begin(), digits.end());
    GridFunction f(shape, std::move(v));
    auto rep = check_dimension_reduction(f, dense, dist, masses, cap);
    if (!rep.lower_ok) ++lower_fail;
    if (!rep.upper_ok) ++upper_fail;
    if (rep.dist > 0) worst = std::min(worst, Rational(rep.sum / rep.dist));
    for (std::size_t p = 0; p < digits.size(); ++p) {
      if (++digits[p] < range) break;
      digits[p] = 0;
    }
  }
  j["functions"] = count;
  j["range"] = range;
  j["lower_failures"] = lower_fail;
  j["upper_failures"] = upper_fail;
  j["min_sum_over_dist"] = to_string(worst);
  return json_result(j, lower_fail + upper_fail == 0 ? 0 : 1);
}

// --------------------------------------------------------------- bloat

inline CommandResult cmd_bloat(const ExperimentConfig& c) {
  const ProductDistribution dist = config_distribution(c);
  const GridFunction f = config_function(c);
  const Quasimetric q(config_family(c));
  BloatMap bm = BloatMap::rationalize(dist, c.bloat_cap);
  Json j;
  j["command"] = "bloat";
  j["N"] = bm.common_denominator_n();
  Json axes = Json::array();
  for (std::size_t r = 0; r < dist.dims(); ++r) {
    Json phi = Json::array();
    for (int t = 1; t <= bm.common_denominator_n(); ++t) phi.push_back(bm.phi(r, t));
    axes.push_back(Json{{"weights", bm.weights(r)}, {"phi", phi}});
  }
  j["axes"] = axes;
  BloatReport rep = verify_bloat_equivalence(f, q, dist, effective_bruteforce_cap(c));
  j["dist_source"] = to_string(rep.dist_source);
  j["dist_bloated"] = to_string(rep.dist_bloated);
  j["equal"] = rep.equal;
  j["method"] = rep.used_bruteforce ? "subset-search" : "line-dp";
  j["lines_checked"] = rep.lines_checked;
  j["line_failures"] = rep.line_failures;
  return json_result(j, rep.equal && rep.line_failures == 0 ? 0 : 1);
}

// ---------------------------------------------------------------- hard

inline Json line_family_to_json(const LineHardFamily& fam) {
  Json levels = Json::array();
  for (const auto& lv : fam.levels) {
    Json ivs = Json::array();
    for (const auto& iv : lv.intervals) {
      ivs.push_back(Json{{"interval", {iv.a, iv.b}},
                         {"node", iv.node},
                         {"left", {iv.a, iv.m}},
                         {"right", {iv.m + 1, iv.b}},
                         {"left_mass", to_string(iv.left_mass)},
                         {"right_mass", to_string(iv.right_mass)}});
    }
    levels.push_back(Json{{"j", lv.j}, {"beta", to_string(lv.beta)}, {"intervals", ivs},
                          {"values", rationals_to_json(lv.values)}});
  }
  return Json{{"tree", fam.tree.dump(fam.masses)},
              {"l_eps", fam.l_eps},
              {"levels", levels},
              {"reference", rationals_to_json(fam.reference)}};
}

inline Json probe_to_json(const StabilityProbe& p) {
  Json m = Json::array();
  for (const auto& x : p.perturbed.marginals()) m.push_back(rationals_to_json(x));
  return Json{{"name", p.name},
              {"perturbed", m},
              {"tv", to_string(p.tv)},
              {"delta_star", to_string(p.delta_star)},
              {"delta_star_perturbed", to_string(p.delta_star_perturbed)},
              {"ratio", p.ratio ? Json(to_string(*p.ratio)) : Json(nullptr)}};
}

inline CommandResult cmd_hard(const ExperimentConfig& c) {
  const ProductDistribution dist = config_distribution(c);
  const Json hard = c.extra.contains("hard") ? c.extra["hard"] : Json::object();
  const std::string kind = hard.value("kind", dist.dims() == 1 ? "line" : "useful-maps");
  Json j;
  j["command"] = "hard";
  j["kind"] = kind;
  if (kind == "line") {
    Json axes = Json::array();
    for (const auto& m : dist.marginals()) axes.push_back(line_family_to_json(line_hard_family(m, c.epsilon)));
    j["axes"] = axes;
  } else if (kind == "hypercube") {
    HypercubeFamily fam = hypercube_hard_family(dist);
    j["theta"] = rationals_to_json(fam.theta);
    j["theta_total"] = to_string(fam.theta_total);
    j["nontrivial"] = fam.nontrivial;
    Json segs = Json::array();
    for (std::size_t a = 1; a <= fam.count(); ++a) {
      const auto& s = fam.segments[a - 1];
      std::vector<std::size_t> coords;
      for (auto r : s.coords) coords.push_back(r + 1);
      segs.push_back(Json{{"a", a},
                          {"coords", coords},
                          {"type", s.or_type ? "or" : "and"},
                          {"theta_sum", to_string(s.theta_sum)},
                          {"g", table_to_json(fam.shape, fam.g[a - 1])},
                          {"fiber_cover_bound", to_string(fiber_cover_bound(fam, dist, a))}});
    }
    j["segments"] = segs;
    j["h"] = table_to_json(fam.shape, fam.h);
  } else if (kind == "projection") {
    CubeProjection p = project_to_hypercube(dist);
    Json cube = Json::array();
    for (const auto& m : p.cube.marginals()) cube.push_back(rationals_to_json(m));
    j["thresholds"] = p.thresholds;
    j["theta"] = rationals_to_json(p.theta);
    j["cube"] = cube;
  } else if (kind == "useful-maps") {
    UsefulMapBatch b = build_useful_maps(dist, c.epsilon, c.const_factor);
    j["eps_prime"] = to_string(b.eps_prime);
    Json maps = Json::array();
    for (const auto& m : b.maps) {
      Json rec = Json::array();
      for (const auto& [r, lvl] : m.psi) rec.push_back(Json{{"axis", r + 1}, {"level", lvl}});
      maps.push_back(Json{{"psi", rec}, {"mass", to_string(m.mass)}});
    }
    j["maps"] = maps;
  } else if (kind == "stability") {
    Json probes = Json::array();
    if (dist.dims() == 1) probes.push_back(probe_to_json(level_truncation_probe(dist.marginal(0), c.epsilon)));
    probes.push_back(probe_to_json(concentration_probe(dist, hard.value("axis", 1) - 1)));
    j["probes"] = probes;
  } else {
    throw ConfigError("hard.kind", "expected line, hypercube, projection, useful-maps or stability");
  }
  return json_result(j, 0);
}

// --------------------------------------------------------------- bench

struct BenchRow {
  std::string id;
  std::size_t d = 0;
  int n = 0;
  Rational epsilon;
  Rational delta_star;
  double entropy = 0;
  double mean_queries = 0;  // per tester step
  double ci_low = 0;
  double ci_high = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  Rational expected_step_queries;
};

inline Json default_bench_cases() {
  // μ_r = 1/√d on {1,2}^d: Σθ = √d while Σ H tracks √d log d
  return Json::array({Json{{"id", "p-biased-d4"}, {"shape", {2, 2, 2, 2}}, {"distribution", "p-biased:1/2"}},
                      Json{{"id", "p-biased-d9"}, {"shape", std::vector<int>(9, 2)}, {"distribution", "p-biased:1/3"}},
                      Json{{"id", "p-biased-d16"}, {"shape", std::vector<int>(16, 2)}, {"distribution", "p-biased:1/4"}}});
}

inline std::vector<BenchRow> run_bench(const ExperimentConfig& c) {
  const Json bench = c.extra.contains("bench") ? c.extra["bench"] : Json::object();
  const Json cases = bench.contains("cases") ? bench["cases"] : default_bench_cases();
  std::vector<BenchRow> rows;
  std::size_t case_no = 0;
  for (const auto& cs : cases) {
    ExperimentConfig cc = c;
    cc.shape.clear();
    const std::string field = "bench.cases[" + std::to_string(case_no) + "]";
    if (!cs.contains("shape") || !cs.contains("distribution")) throw ConfigError(field, "needs shape and distribution");
    for (const auto& x : cs["shape"]) cc.shape.push_back(x.get<int>());
    cc.distribution = distribution_spec_from_json(cs["distribution"]);
    const ProductDistribution dist = config_distribution(cc);
    const Shape shape(cc.shape);
    const GridFunction f(shape, std::vector<Rational>(shape.size(), Rational(0)));
    const Quasimetric q(config_family(cc));
    const auto trees = config_trees(cc, dist);

    BenchRow row;
    row.id = cs.value("id", "case-" + std::to_string(case_no));
    row.d = shape.dims();
    row.n = *std::max_element(cc.shape.begin(), cc.shape.end());
    row.epsilon = c.epsilon;
    row.trials = c.trials;
    row.seed = c.seed;
    row.delta_star = total_delta_star(dist);
    for (const auto& m : dist.marginals()) row.entropy += entropy_bits(m);
    row.expected_step_queries = expected_step_queries_grid(trees, dist);

    // per-run mean queries per step; runs are independent so a normal
    // interval over them is the honest one
    double sum = 0, sum_sq = 0;
    for (std::size_t t = 0; t < c.trials; ++t) {
      Rng rng = derive_stream(c.seed ^ mix64(case_no + 1), t);
      TestRun run = hypergrid_tester(trees, f, q, dist, c.epsilon, rng);
      const double per = run.steps_run ? static_cast<double>(run.queries_used) / static_cast<double>(run.steps_run) : 0.0;
      sum += per;
      sum_sq += per * per;
    }
    const double k = static_cast<double>(c.trials);
    row.mean_queries = sum / k;
    const double var = c.trials > 1 ? std::max(0.0, (sum_sq - k * row.mean_queries * row.mean_queries) / (k - 1)) : 0.0;
    const double half = 1.959963984540054 * std::sqrt(var / k);
    row.ci_low = row.mean_queries - half;
    row.ci_high = row.mean_queries + half;
    rows.push_back(row);
    ++case_no;
  }
  return rows;
}

inline std::string fixed6(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << x;
  return os.str();
}

inline CommandResult cmd_bench(const ExperimentConfig& c, const std::string& format) {
  auto rows = run_bench(c);
  if (format == "json") {
    Json a = Json::array();
    for (const auto& r : rows) {
      a.push_back(Json{{"distribution_id", r.id},
                       {"d", r.d},
                       {"n", r.n},
                       {"epsilon", to_string(r.epsilon)},
                       {"delta_star", to_string(r.delta_star)},
                       {"entropy", fixed6(r.entropy)},
                       {"mean_queries", fixed6(r.mean_queries)},
                       {"expected_step_queries", to_string(r.expected_step_queries)},
                       {"ci_low", fixed6(r.ci_low)},
                       {"ci_high", fixed6(r.ci_high)},
                       {"trials", r.trials},
                       {"seed", r.seed}});
    }
    return json_result(Json{{"command", "bench"}, {"rows", a}}, 0);
  }
  std::ostringstream os;
  os << "distribution_id,d,n,epsilon,delta_star,entropy,mean_queries,ci_low,ci_high,trials,seed\n";
  for (const auto& r : rows) {
    os << r.id << ',' << r.d << ',' << r.n << ',' << to_string(r.epsilon) << ',' << to_string(r.delta_star) << ','
       << fixed6(r.entropy) << ',' << fixed6(r.mean_queries) << ',' << fixed6(r.ci_low) << ',' << fixed6(r.ci_high)
       << ',' << r.trials << ',' << r.seed << '\n';
  }
  return {os.str(), 0};
}

// -------------------------------------------------------------- axioms

inline CommandResult cmd_axioms(const ExperimentConfig& c) {
  const Quasimetric q(config_family(c));
  AxiomReport rep = verify_metric_axioms(q);
  Json j{{"command", "axioms"},
         {"points", q.shape().size()},
         {"identity_failures", rep.identity_failures},
         {"triangle_failures", rep.triangle_failures},
         {"linearity_failures", rep.linearity_failures},
         {"projection_failures", rep.projection_failures},
         {"samples", rep.samples},
         {"ok", rep.ok()}};
  return json_result(j, rep.ok() ? 0 : 1);
}

inline CommandResult run_command(const std::string& name, const ExperimentConfig& c, const std::string& format) {
  if (name == "test") return cmd_test(c);
  if (name == "distance") return cmd_distance(c);
  if (name == "dimred") return cmd_dimred(c);
  if (name == "bloat") return cmd_bloat(c);
  if (name == "hard") return cmd_hard(c);
  if (name == "bench") return cmd_bench(c, format);
  if (name == "axioms") return cmd_axioms(c);
  throw DomainError("unknown subcommand '" + name + "'");
}

}  // namespace bdpt
