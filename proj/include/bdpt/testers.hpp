#pragma once

// BST testers for the line and the hypergrid, the distribution-free variant,
// and exact / Monte Carlo rejection probabilities.

#include "bdpt/grid.hpp"
#include "bdpt/metric.hpp"
#include "bdpt/random.hpp"
#include "bdpt/search_tree.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace bdpt {

struct TraceEntry {
  Point sample;
  std::size_t axis = 0;
  std::vector<int> path;  // keys along the axis, sample first
};

struct TestRun {
  bool reject = false;
  std::size_t queries_used = 0;
  std::optional<std::pair<Point, Point>> witness;
  bool aborted = false;
  std::size_t steps_run = 0;
  std::size_t steps_planned = 0;
  std::size_t budget = 0;  // hard query cap
  std::vector<TraceEntry> trace;
  std::vector<Point> queried;  // in query order, with repeats
};

namespace detail {

// One BST step on the r-line through x: query the root path of x_r and look
// for a violating pair on it. Returns false when the cap would be crossed.
inline bool run_line_step(const SearchTree& tree, const GridFunction& f, const Quasimetric& axis_metric,
                          const Point& x, std::size_t r, std::size_t cap, TestRun& run) {
  const int v = x[r];
  TraceEntry entry{x, r, {}};
  if (v == tree.root()) {
    run.trace.push_back(std::move(entry));
    return true;
  }
  std::vector<int> path = tree.root_path(v);
  if (run.queries_used + path.size() > cap) return false;
  run.queries_used += path.size();
  const Shape& s = f.shape();
  const std::size_t base = s.index(x);
  std::vector<std::size_t> idx(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    idx[i] = s.with_coord(base, r, path[i]);
    Point q = x;
    q[r] = path[i];
    run.queried.push_back(std::move(q));
  }
  if (!run.reject) {
    for (std::size_t i = 0; i < path.size() && !run.reject; ++i) {
      for (std::size_t j = 0; j < path.size(); ++j) {
        if (i == j) continue;
        const ExtRational d = axis_metric.axis_distance(0, path[i], path[j]);
        if (!d.is_positive_infinity() && f[idx[i]] - f[idx[j]] > d.value()) {
          Point a = x, b = x;
          a[r] = path[i];
          b[r] = path[j];
          run.reject = true;
          run.witness.emplace(std::move(a), std::move(b));
          break;
        }
      }
    }
  }
  entry.path = std::move(path);
  run.trace.push_back(std::move(entry));
  return true;
}

inline std::size_t ceil_div_to_size(const Rational& value) {
  return ceil_to_integer(value).convert_to<std::size_t>();
}

inline void check_epsilon(const Rational& eps) {
  if (eps <= 0 || eps > 1) throw DomainError("epsilon must lie in (0,1]");
}

}  // namespace detail

/// Sample source for the hypergrid testers; the axis is drawn separately.
using PointSource = std::function<Point(Rng&)>;

inline std::size_t line_tester_steps(const Rational& eps) { return detail::ceil_div_to_size(Rational(2 / eps)); }
inline std::size_t line_tester_cap(const Rational& delta, const Rational& eps) {
  return detail::ceil_div_to_size(Rational(24 * delta / eps));
}
inline std::size_t hypergrid_tester_steps(std::size_t d, const Rational& eps) {
  return detail::ceil_div_to_size(Rational(8 * Rational(static_cast<long long>(d)) / eps));
}
inline std::size_t hypergrid_tester_cap(const Rational& sum_delta, const Rational& eps) {
  return detail::ceil_div_to_size(Rational(100 * sum_delta / eps));
}
inline std::size_t distribution_free_cap(const std::vector<int>& sides, const Rational& eps) {
  long long logs = 0;
  for (int n : sides) {
    int bits = 0;
    while ((1LL << bits) < n) ++bits;
    logs += bits;
  }
  return detail::ceil_div_to_size(Rational(100 * Rational(logs) / eps));
}

/// One BST step on a line function.
inline TestRun line_tester_step(const SearchTree& tree, const GridFunction& f, const Quasimetric& q,
                                const ProductDistribution& dist, Rng& rng) {
  if (f.shape().dims() != 1 || tree.size() != f.shape().side(0)) throw DomainError("line tester needs a 1D function");
  TestRun run;
  run.steps_planned = 1;
  run.budget = static_cast<std::size_t>(tree.size());
  Point x = dist.sample(rng);
  detail::run_line_step(tree, f, q, x, 0, run.budget, run);
  run.steps_run = 1;
  return run;
}

/// ceil(2/ε) BST steps with the hard cap ceil(24Δ(T;D)/ε); aborting accepts.
inline TestRun line_tester(const SearchTree& tree, const GridFunction& f, const Quasimetric& q,
                           const ProductDistribution& dist, const Rational& eps, Rng& rng) {
  detail::check_epsilon(eps);
  if (f.shape().dims() != 1 || tree.size() != f.shape().side(0)) throw DomainError("line tester needs a 1D function");
  TestRun run;
  run.steps_planned = line_tester_steps(eps);
  run.budget = line_tester_cap(expected_depth(tree, dist.marginal(0)), eps);
  for (std::size_t s = 0; s < run.steps_planned; ++s) {
    Point x = dist.sample(rng);
    if (!detail::run_line_step(tree, f, q, x, 0, run.budget, run)) {
      run.aborted = true;
      break;
    }
    ++run.steps_run;
  }
  return run;
}

namespace detail {

inline TestRun hypergrid_run(const std::vector<SearchTree>& trees, const GridFunction& f, const Quasimetric& q,
                             const PointSource& source, std::size_t steps, std::size_t cap, Rng& rng) {
  const std::size_t d = f.shape().dims();
  if (trees.size() != d) throw DomainError("need one search tree per axis");
  std::vector<Quasimetric> axis_metrics;
  for (std::size_t r = 0; r < d; ++r) axis_metrics.push_back(q.axis_metric(r));
  TestRun run;
  run.steps_planned = steps;
  run.budget = cap;
  std::uniform_int_distribution<std::size_t> pick_axis(0, d - 1);
  for (std::size_t s = 0; s < steps; ++s) {
    Point x = source(rng);
    const std::size_t r = pick_axis(rng);
    if (!run_line_step(trees[r], f, axis_metrics[r], x, r, cap, run)) {
      run.aborted = true;
      break;
    }
    ++run.steps_run;
  }
  return run;
}

}  // namespace detail

/// Sample x ~ D, pick an axis uniformly, run the line step on that r-line.
inline TestRun hypergrid_tester_step(const std::vector<SearchTree>& trees, const GridFunction& f,
                                     const Quasimetric& q, const ProductDistribution& dist, Rng& rng) {
  PointSource src = [&](Rng& g) { return dist.sample(g); };
  std::size_t longest = 0;
  for (const auto& t : trees) longest = std::max<std::size_t>(longest, static_cast<std::size_t>(t.height()) + 1);
  return detail::hypergrid_run(trees, f, q, src, 1, longest, rng);
}

/// ceil(8d/ε) steps with the hard cap ceil(100 ΣΔ(T_r;D_r)/ε).
inline TestRun hypergrid_tester(const std::vector<SearchTree>& trees, const GridFunction& f, const Quasimetric& q,
                                const ProductDistribution& dist, const Rational& eps, Rng& rng) {
  detail::check_epsilon(eps);
  Rational sum = 0;
  for (std::size_t r = 0; r < trees.size(); ++r) sum += expected_depth(trees[r], dist.marginal(r));
  PointSource src = [&](Rng& g) { return dist.sample(g); };
  return detail::hypergrid_run(trees, f, q, src, hypergrid_tester_steps(f.shape().dims(), eps),
                               hypergrid_tester_cap(sum, eps), rng);
}

/// Balanced trees on every axis; only samples from `source` are used.
inline TestRun distribution_free_tester(const GridFunction& f, const Quasimetric& q, const PointSource& source,
                                        const Rational& eps, Rng& rng) {
  detail::check_epsilon(eps);
  std::vector<SearchTree> trees;
  for (int n : f.shape().sides()) trees.push_back(build_balanced_bst(n));
  return detail::hypergrid_run(trees, f, q, source, hypergrid_tester_steps(f.shape().dims(), eps),
                               distribution_free_cap(f.shape().sides(), eps), rng);
}

namespace detail {

inline bool line_pair_violates(const std::vector<Rational>& v, const Quasimetric& m, int a, int b) {
  const ExtRational d = m.axis_distance(0, a, b);
  return !d.is_positive_infinity() && v[static_cast<std::size_t>(a - 1)] - v[static_cast<std::size_t>(b - 1)] > d.value();
}

inline bool path_has_violation(const std::vector<int>& path, const std::vector<Rational>& v, const Quasimetric& m,
                               bool ancestors_of_first_only) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    for (std::size_t j = i + 1; j < path.size(); ++j) {
      if (line_pair_violates(v, m, path[i], path[j]) || line_pair_violates(v, m, path[j], path[i])) return true;
    }
    if (ancestors_of_first_only) break;
  }
  return false;
}

}  // namespace detail

/// Pr[one BST step rejects]: mass of non-root v whose root path holds any
/// violating pair.
inline Rational exact_rejection_prob_line(const SearchTree& tree, const std::vector<Rational>& values,
                                          const Quasimetric& q, const std::vector<Rational>& masses) {
  Rational total = 0;
  for (int v = 1; v <= tree.size(); ++v) {
    if (v == tree.root() || masses[static_cast<std::size_t>(v - 1)] == 0) continue;
    if (detail::path_has_violation(tree.root_path(v), values, q, false)) total += masses[static_cast<std::size_t>(v - 1)];
  }
  return total;
}

/// μ(X), X = non-root v violating with some ancestor on its root path.
inline Rational ancestor_violation_mass(const SearchTree& tree, const std::vector<Rational>& values,
                                        const Quasimetric& q, const std::vector<Rational>& masses) {
  Rational total = 0;
  for (int v = 1; v <= tree.size(); ++v) {
    if (v == tree.root() || masses[static_cast<std::size_t>(v - 1)] == 0) continue;
    if (detail::path_has_violation(tree.root_path(v), values, q, true)) total += masses[static_cast<std::size_t>(v - 1)];
  }
  return total;
}

/// (1/d) Σ_r Σ_ℓ μ_{D_-r}(ℓ) · Pr[line step on ℓ rejects].
inline Rational exact_rejection_prob_grid(const std::vector<SearchTree>& trees, const GridFunction& f,
                                          const Quasimetric& q, const ProductDistribution& dist) {
  const Shape& s = f.shape();
  Rational total = 0;
  for (std::size_t r = 0; r < s.dims(); ++r) {
    const Quasimetric axis = q.axis_metric(r);
    for (std::size_t base : s.line_bases(r)) {
      Point p = s.point(base);
      Rational lm = dist.line_mass(r, p);
      if (lm == 0) continue;
      std::vector<Rational> vals;
      for (std::size_t idx : s.line_indices(base, r)) vals.push_back(f[idx]);
      total += lm * exact_rejection_prob_line(trees[r], vals, axis, dist.marginal(r));
    }
  }
  return total / static_cast<long long>(s.dims());
}

/// E[queries of one line step] = Σ_{non-root v} μ(v)(depth(v)+1).
inline Rational expected_step_queries_line(const SearchTree& tree, const std::vector<Rational>& masses) {
  Rational total = 0;
  for (int v = 1; v <= tree.size(); ++v) {
    if (v != tree.root()) total += masses[static_cast<std::size_t>(v - 1)] * (tree.depth(v) + 1);
  }
  return total;
}

inline Rational expected_step_queries_grid(const std::vector<SearchTree>& trees, const ProductDistribution& dist) {
  Rational total = 0;
  for (std::size_t r = 0; r < trees.size(); ++r) total += expected_step_queries_line(trees[r], dist.marginal(r));
  return total / static_cast<long long>(trees.size());
}

struct Estimate {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double mean = 0;
  double ci_low = 0;
  double ci_high = 0;
};

/// Wilson score interval at 95%.
inline Estimate wilson_interval(std::size_t successes, std::size_t trials) {
  Estimate e;
  e.successes = successes;
  e.trials = trials;
  if (trials == 0) return e;
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  e.mean = p;
  e.ci_low = std::max(0.0, centre - half);
  e.ci_high = std::min(1.0, centre + half);
  return e;
}

/// Monte Carlo estimate of Pr[trial(rng) = true]; trial t uses the stream
/// derive_stream(seed, t), so any thread count gives the same answer.
inline Estimate estimate_rejection_prob(const std::function<bool(Rng&)>& trial, std::size_t trials,
                                        std::uint64_t seed, unsigned threads = 1) {
  if (trials == 0) throw DomainError("need at least one trial");
  threads = std::max(1u, threads);
  std::vector<std::size_t> hits(threads, 0);
  auto work = [&](unsigned w) {
    for (std::size_t t = w; t < trials; t += threads) {
      Rng rng = derive_stream(seed, t);
      if (trial(rng)) ++hits[w];
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  std::size_t total = 0;
  for (auto h : hits) total += h;
  return wilson_interval(total, trials);
}

}  // namespace bdpt
