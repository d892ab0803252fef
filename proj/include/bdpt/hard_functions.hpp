#pragma once

// Lower-bound constructions: the line family g_j over median-tree levels, the
// hypercube family g_a, projection of [n]^d onto {1,2}^d, aggregation of line
// functions through useful maps, the monotonicity -> bounded-derivative
// reduction, sampling truncation and capture counting.

#include "bdpt/distance.hpp"
#include "bdpt/grid.hpp"
#include "bdpt/metric.hpp"
#include "bdpt/random.hpp"
#include "bdpt/rational.hpp"
#include "bdpt/search_tree.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bdpt {

// ---------------------------------------------------------------- line family

/// Subtree interval [a,b] of a depth-(j-1) node, split into [a,m] | [m+1,b].
struct HardInterval {
  int a = 0;
  int b = 0;
  int node = 0;
  int m = 0;
  Rational left_mass;
  Rational right_mass;
};

struct LineHardLevel {
  int j = 0;
  Rational beta;  // μ(depth ≥ j)
  std::vector<HardInterval> intervals;
  std::vector<Rational> values;  // g_j(1..n)
};

struct LineHardFamily {
  SearchTree tree;
  std::vector<Rational> masses;
  std::vector<LineHardLevel> levels;  // levels[j-1] is level j
  int l_eps = 0;                      // largest ℓ with β_ℓ ≥ 2ε, 0 if none
  std::vector<Rational> reference;    // h(i) = 3i

  const LineHardLevel& level(int j) const { return levels.at(static_cast<std::size_t>(j - 1)); }
  Rational beta(int j) const { return j >= 1 && j <= static_cast<int>(levels.size()) ? level(j).beta : Rational(0); }
  GridFunction function(int j) const { return GridFunction::line(level(j).values); }
};

inline Rational interval_mass(const std::vector<Rational>& masses, int a, int b) {
  Rational s = 0;
  for (int k = a; k <= b; ++k) s += masses[static_cast<std::size_t>(k - 1)];
  return s;
}

inline LineHardFamily line_hard_family(const std::vector<Rational>& masses, const Rational& eps) {
  if (masses.empty()) throw DomainError("line_hard_family needs n >= 1");
  if (eps <= 0 || eps >= Rational(1, 2)) throw DomainError("line_hard_family needs 0 < eps < 1/2");
  const int n = static_cast<int>(masses.size());
  LineHardFamily fam;
  fam.tree = build_median_bst(masses);
  fam.masses = masses;
  const SearchTree& t = fam.tree;
  std::vector<Rational> beta = level_mass_profile(t, masses);

  for (int j = 1; j <= t.height(); ++j) {
    LineHardLevel lv;
    lv.j = j;
    lv.beta = beta[static_cast<std::size_t>(j - 1)];
    lv.values.resize(static_cast<std::size_t>(n));
    for (int x = 1; x <= n; ++x) lv.values[static_cast<std::size_t>(x - 1)] = 2 * x;
    for (int u = 1; u <= n; ++u) {
      if (t.depth(u) != j - 1) continue;
      const int a = t.subtree_lo(u), b = t.subtree_hi(u);
      if (a == b) continue;
      const Rational sl = interval_mass(masses, a, u - 1);
      const Rational sr = interval_mass(masses, u + 1, b);
      // u joins the lighter side
      const int m = sl <= sr ? u : u - 1;
      HardInterval iv{a, b, u, m, interval_mass(masses, a, m), interval_mass(masses, m + 1, b)};
      for (int x = a; x <= m; ++x) lv.values[static_cast<std::size_t>(x - 1)] = 2 * x + 2 * (b - m) + 1;
      for (int x = m + 1; x <= b; ++x) lv.values[static_cast<std::size_t>(x - 1)] = 2 * x - 2 * (m - a) - 1;
      lv.intervals.push_back(iv);
    }
    const Rational lowest = *std::min_element(lv.values.begin(), lv.values.end());
    if (lowest < 1) {
      for (auto& v : lv.values) v += 1 - lowest;
    }
    fam.levels.push_back(std::move(lv));
  }
  for (int j = 1; j <= t.height(); ++j) {
    if (beta[static_cast<std::size_t>(j - 1)] >= 2 * eps) fam.l_eps = j;
  }
  for (int i = 1; i <= n; ++i) fam.reference.emplace_back(3 * i);
  return fam;
}

/// Every violating pair of g_j (monotonicity) has its lca at depth j-1.
inline bool violations_at_level(const LineHardFamily& fam, int j) {
  const auto& v = fam.level(j).values;
  const int n = static_cast<int>(v.size());
  for (int x = 1; x <= n; ++x) {
    for (int y = x + 1; y <= n; ++y) {
      if (v[static_cast<std::size_t>(x - 1)] > v[static_cast<std::size_t>(y - 1)] &&
          fam.tree.depth(fam.tree.lca(x, y)) != j - 1) {
        return false;
      }
    }
  }
  return true;
}

// ----------------------------------------------------------- hypercube family

struct HypercubeSegment {
  std::vector<std::size_t> coords;  // 0-based axes
  bool or_type = false;             // χ = 1 iff some coordinate is 2; else all are 2
  Rational theta_sum;
};

struct HypercubeFamily {
  Shape shape;  // {1,2}^d
  std::vector<Rational> theta;
  Rational theta_total;
  bool nontrivial = false;  // Σθ > 1
  std::vector<HypercubeSegment> segments;
  std::vector<Rational> h;
  std::vector<std::vector<Rational>> g;  // g[a-1]
  std::vector<std::vector<bool>> chi;    // chi[a-1][idx]

  std::size_t count() const { return segments.size(); }
  GridFunction function(std::size_t a) const { return GridFunction(shape, g.at(a - 1)); }
  GridFunction reference() const { return GridFunction(shape, h); }
};

/// marginals[r] = (Pr[x_r = 1], Pr[x_r = 2]).
inline HypercubeFamily hypercube_hard_family(const ProductDistribution& dist) {
  HypercubeFamily fam;
  for (int s : dist.sides()) {
    if (s != 2) throw DomainError("hypercube_hard_family needs sides equal to 2");
  }
  const std::size_t d = dist.dims();
  fam.shape = dist.shape();
  fam.theta_total = 0;
  std::vector<std::size_t> and_axes, or_axes;
  for (std::size_t r = 0; r < d; ++r) {
    const Rational& low = dist.marginal(r)[0];
    fam.theta.push_back(std::min(low, 1 - low));
    fam.theta_total += fam.theta.back();
    (low <= Rational(1, 2) ? and_axes : or_axes).push_back(r);
  }
  fam.nontrivial = fam.theta_total > 1;

  auto cut = [&](std::vector<std::size_t> axes, bool or_type) {
    std::stable_sort(axes.begin(), axes.end(),
                     [&](std::size_t x, std::size_t y) { return fam.theta[x] < fam.theta[y]; });
    HypercubeSegment cur;
    cur.or_type = or_type;
    cur.theta_sum = 0;
    for (std::size_t r : axes) {
      if (fam.theta[r] == 0) continue;
      cur.coords.push_back(r);
      cur.theta_sum += fam.theta[r];
      if (cur.theta_sum >= Rational(1, 2)) {
        fam.segments.push_back(cur);
        cur.coords.clear();
        cur.theta_sum = 0;
      }
    }
  };
  cut(and_axes, false);
  cut(or_axes, true);

  const Shape& s = fam.shape;
  const std::size_t b = fam.segments.size();
  fam.chi.assign(b, std::vector<bool>(s.size(), false));
  fam.h.assign(s.size(), Rational(1));
  for (std::size_t a = 1; a <= b; ++a) {
    const auto& seg = fam.segments[a - 1];
    const BigInt pow = BigInt(1) << a;
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
      bool any = false, all = true;
      for (std::size_t r : seg.coords) {
        const bool high = s.coord(idx, r) == 2;
        any = any || high;
        all = all && high;
      }
      const bool c = seg.or_type ? any : all;
      fam.chi[a - 1][idx] = c;
      if (c) fam.h[idx] += Rational(pow);
    }
  }
  for (std::size_t a = 1; a <= b; ++a) {
    const Rational shift = Rational(BigInt(1) << a) + 1;
    std::vector<Rational> ga = fam.h;
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
      if (fam.chi[a - 1][idx]) ga[idx] -= shift;
    }
    fam.g.push_back(std::move(ga));
  }
  return fam;
}

/// Σ_v μ(v)·min(μ(χ_a = 0 | v), μ(χ_a = 1 | v)) over fibers v of the
/// coordinates outside segment a. Fibers are disjoint induced subgraphs of the
/// violation graph, so this lower-bounds dist(g_a).
inline Rational fiber_cover_bound(const HypercubeFamily& fam, const ProductDistribution& dist, std::size_t a) {
  const auto& seg = fam.segments.at(a - 1);
  const Shape& s = fam.shape;
  std::vector<bool> in_seg(s.dims(), false);
  for (std::size_t r : seg.coords) in_seg[r] = true;
  std::map<std::vector<int>, std::pair<Rational, Rational>> fibers;  // (mass χ=0, mass χ=1)
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    std::vector<int> key;
    for (std::size_t r = 0; r < s.dims(); ++r) key.push_back(in_seg[r] ? 0 : s.coord(idx, r));
    auto& slot = fibers[key];
    (fam.chi[a - 1][idx] ? slot.second : slot.first) += dist.point_mass_at(s, idx);
  }
  Rational total = 0;
  for (const auto& [key, masses] : fibers) total += std::min(masses.first, masses.second);
  return total;
}

// ------------------------------------------------------ hypergrid projection

struct CubeProjection {
  std::vector<int> thresholds;  // j_r: x_r ≤ j_r maps to 1
  std::vector<Rational> theta;  // max_j θ^j_r
  ProductDistribution cube;

  Point map_point(const Point& x) const {
    Point y(x.size());
    for (std::size_t r = 0; r < x.size(); ++r) y[r] = x[r] <= thresholds[r] ? 1 : 2;
    return y;
  }
};

/// θ^j_r = min(P_r(j), 1 - P_r(j)) for prefix mass P_r(j); argmax j, smallest on ties.
inline CubeProjection project_to_hypercube(const ProductDistribution& dist) {
  std::vector<int> thr;
  std::vector<Rational> theta;
  std::vector<std::vector<Rational>> cube;
  for (std::size_t r = 0; r < dist.dims(); ++r) {
    const auto& m = dist.marginal(r);
    const int n = static_cast<int>(m.size());
    int best_j = 1;
    Rational best = -1, prefix = 0, best_prefix = m[0];
    for (int j = 1; j <= std::max(1, n - 1); ++j) {
      prefix += m[static_cast<std::size_t>(j - 1)];
      const Rational th = std::min(prefix, 1 - prefix);
      if (th > best) {
        best = th;
        best_j = j;
        best_prefix = prefix;
      }
    }
    thr.push_back(best_j);
    theta.push_back(best);
    cube.push_back({best_prefix, 1 - best_prefix});
  }
  return CubeProjection{std::move(thr), std::move(theta), ProductDistribution(std::move(cube))};
}

/// f(x) = F(ψ(x)) for a function F on {1,2}^d.
inline GridFunction pullback(const GridFunction& cube_f, const CubeProjection& proj, const Shape& shape) {
  std::vector<Rational> v(shape.size());
  for (std::size_t idx = 0; idx < shape.size(); ++idx) v[idx] = cube_f.at(proj.map_point(shape.point(idx)));
  return GridFunction(shape, std::move(v));
}

// ------------------------------------------------------------- useful maps

inline constexpr long long kDefaultConstFactor = 110;

struct UsefulMap {
  std::map<std::size_t, int> psi;  // axis -> level; absent axes are ⊥
  Rational mass;                   // Σ β^r_{ψ(r)}
};

/// Levels j > 1 with β_j ≥ β_{j-1}/2 and β_j > 0, increasing.
inline std::vector<int> allowed_levels(const LineHardFamily& fam) {
  std::vector<int> out;
  for (int j = 2; j <= static_cast<int>(fam.levels.size()); ++j) {
    if (fam.beta(j) > 0 && 2 * fam.beta(j) >= fam.beta(j - 1)) out.push_back(j);
  }
  return out;
}

inline bool validate_useful_map(const UsefulMap& map, const std::vector<LineHardFamily>& fams,
                                const Rational& eps_prime) {
  Rational s = 0;
  for (const auto& [r, j] : map.psi) {
    if (r >= fams.size() || j <= 1) return false;
    const auto& fam = fams[r];
    if (j > static_cast<int>(fam.levels.size())) return false;
    if (2 * fam.beta(j) < fam.beta(j - 1)) return false;
    s += fam.beta(j);
  }
  return s == map.mass && s > eps_prime && s <= 1;
}

/// No axis carries the same level in both maps.
inline bool maps_disjoint(const UsefulMap& x, const UsefulMap& y) {
  for (const auto& [r, j] : x.psi) {
    auto it = y.psi.find(r);
    if (it != y.psi.end() && it->second == j) return false;
  }
  return true;
}

struct UsefulMapBatch {
  Rational eps_prime;
  std::vector<LineHardFamily> families;
  std::vector<UsefulMap> maps;
};

/// Stack procedure: one stack of allowed levels per axis; a map takes at most
/// one head from each stack, visiting axes cyclically, until its mass enters
/// (ε', 1]. A head that would push the mass above 1 restarts the map.
inline UsefulMapBatch build_useful_maps(const ProductDistribution& dist, const Rational& eps,
                                        long long const_factor = kDefaultConstFactor) {
  if (eps <= 0 || eps >= Rational(1, 10)) throw DomainError("build_useful_maps needs 0 < eps < 1/10");
  UsefulMapBatch out;
  out.eps_prime = eps * const_factor;
  if (out.eps_prime > 1) throw DomainError("eps * const_factor must be at most 1");
  const std::size_t d = dist.dims();
  // line families only need ε < 1/2 for their ℓ_ε bookkeeping
  for (std::size_t r = 0; r < d; ++r) out.families.push_back(line_hard_family(dist.marginal(r), eps));

  std::vector<std::vector<int>> stacks;
  for (const auto& fam : out.families) stacks.push_back(allowed_levels(fam));
  std::vector<std::size_t> head(d, 0);
  auto heads_mass = [&] {
    Rational s = 0;
    for (std::size_t r = 0; r < d; ++r) {
      if (head[r] < stacks[r].size()) s += out.families[r].beta(stacks[r][head[r]]);
    }
    return s;
  };

  std::size_t cursor = 0;
  while (heads_mass() > out.eps_prime) {
    UsefulMap cur;
    cur.mass = 0;
    std::size_t visited = 0;
    bool done = false;
    while (visited < d && !done) {
      const std::size_t r = cursor;
      cursor = (cursor + 1) % d;
      ++visited;
      if (head[r] >= stacks[r].size()) continue;
      const int j = stacks[r][head[r]++];
      const Rational b = out.families[r].beta(j);
      if (cur.mass + b > 1) {
        cur.psi.clear();
        cur.mass = 0;
        visited = 1;
      }
      cur.psi[r] = j;
      cur.mass += b;
      done = cur.mass > out.eps_prime;
    }
    if (!done) continue;  // partial map dropped
    if (!validate_useful_map(cur, out.families, out.eps_prime)) {
      throw PreconditionError("stack procedure produced a map that is not useful");
    }
    out.maps.push_back(std::move(cur));
  }
  for (std::size_t x = 0; x < out.maps.size(); ++x) {
    for (std::size_t y = x + 1; y < out.maps.size(); ++y) {
      if (!maps_disjoint(out.maps[x], out.maps[y])) throw PreconditionError("useful maps are not disjoint");
    }
  }
  return out;
}

// ------------------------------------------------------------ aggregation

struct AggregateFunction {
  GridFunction g;    // g_ψ
  GridFunction val;  // Σ 2(2n+1)^r x_r, monotone
};

/// g_ψ(x) = Σ_{r∈Ψ} (2n+1)^r h^r_{ψ(r)}(x_r) + Σ_{r∉Ψ} 2(2n+1)^r x_r, axes numbered from 1.
inline AggregateFunction aggregate_hard_function(const UsefulMap& map, const std::vector<LineHardFamily>& fams) {
  std::vector<int> sides;
  int n = 0;
  for (const auto& fam : fams) {
    sides.push_back(fam.tree.size());
    n = std::max(n, fam.tree.size());
  }
  Shape shape(sides);
  const BigInt base = 2 * n + 1;
  std::vector<BigInt> coef;
  BigInt c = 1;
  for (std::size_t r = 0; r < fams.size(); ++r) {
    c *= base;
    coef.push_back(c);
  }
  std::vector<Rational> gv(shape.size()), vv(shape.size());
  for (std::size_t idx = 0; idx < shape.size(); ++idx) {
    Rational g = 0, v = 0;
    for (std::size_t r = 0; r < fams.size(); ++r) {
      const int x = shape.coord(idx, r);
      const Rational lin = Rational(coef[r]) * (2 * x);
      v += lin;
      auto it = map.psi.find(r);
      if (it == map.psi.end()) {
        g += lin;
      } else {
        g += Rational(coef[r]) * fams[r].level(it->second).values[static_cast<std::size_t>(x - 1)];
      }
    }
    gv[idx] = g;
    vv[idx] = v;
  }
  return {GridFunction(shape, std::move(gv)), GridFunction(shape, std::move(vv))};
}

// ------------------------------------------- monotonicity -> bounded derivative

struct ReductionResult {
  GridFunction g;
  Rational delta;
  Rational range;      // R
  bool graphs_checked = false;
  bool graphs_equal = false;
};

inline constexpr std::size_t kReductionCheckCap = 512;

/// g(x) = δ/(2R)·f(x) − d(0̄,x) with 0̄ = (1,…,1) and δ the least
/// d(0̄,x) + d(x,y) − d(0̄,y) over ordered pairs with x not ⪯ y.
inline ReductionResult mono_to_bdp(const GridFunction& f, const BoundingFamily& family,
                                   std::size_t check_cap = kReductionCheckCap) {
  Quasimetric q(family);
  const Shape& s = f.shape();
  if (!(s == q.shape())) throw DomainError("function and family shapes differ");
  ReductionResult res;
  res.range = *std::max_element(f.values().begin(), f.values().end());
  for (const auto& v : f.values()) {
    if (v < 1) throw DomainError("mono_to_bdp needs function values in [1, R]");
  }
  std::vector<Rational> d0(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) {
    ExtRational e = q.between(0, x);
    if (!e.is_finite()) {
      throw DomainError("unsupported family: d(0, " + to_string(s.point(x)) + ") is infinite");
    }
    d0[x] = e.value();
  }
  std::optional<Rational> delta;
  for (std::size_t x = 0; x < s.size(); ++x) {
    const Point px = s.point(x);
    for (std::size_t y = 0; y < s.size(); ++y) {
      if (x == y || precedes(px, s.point(y))) continue;
      ExtRational dxy = q.between(x, y);
      if (!dxy.is_finite()) continue;
      Rational cand = d0[x] + dxy.value() - d0[y];
      if (!delta || cand < *delta) delta = cand;
    }
  }
  res.delta = delta.value_or(Rational(1));
  if (res.delta <= 0) throw PreconditionError("non-positive reduction slack");
  const Rational scale = res.delta / (2 * res.range);
  std::vector<Rational> gv(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) gv[x] = scale * f[x] - d0[x];
  res.g = GridFunction(s, std::move(gv));

  if (s.size() <= check_cap) {
    Quasimetric mono(BoundingFamily::monotone(s.sides()));
    auto a = build_violation_graph(f, mono, false, check_cap);
    auto b = build_violation_graph(res.g, q, false, check_cap);
    res.graphs_checked = true;
    res.graphs_equal = a.edges == b.edges;
    if (!res.graphs_equal) throw PreconditionError("reduction changed the violation graph");
  }
  return res;
}

// ------------------------------------------------------- sampling truncation

/// M = max of f over ceil(10/ε) samples; returns min(f, M).
inline GridFunction truncate_by_sampling(const GridFunction& f, const ProductDistribution& dist, const Rational& eps,
                                         Rng& rng) {
  if (eps <= 0 || eps > 1) throw DomainError("epsilon must lie in (0, 1]");
  const BigInt k = ceil_to_integer(Rational(10 / eps));
  std::optional<Rational> top;
  for (BigInt i = 0; i < k; ++i) {
    const Rational& v = f.at(dist.sample(rng));
    if (!top || v > *top) top = v;
  }
  std::vector<Rational> out(f.values());
  for (auto& v : out) v = std::min(v, *top);
  return GridFunction(f.shape(), std::move(out));
}

// ------------------------------------------------------------------ capture

/// Tuples (r, j): r the largest axis where a pair differs, j = depth(lca) + 1
/// in T_r. At most |Q| - 1 of them.
inline std::set<std::pair<std::size_t, int>> captured_tuples(const std::vector<Point>& qs,
                                                             const std::vector<SearchTree>& trees) {
  std::set<Point> distinct(qs.begin(), qs.end());
  if (distinct.size() < 2) throw DomainError("captured_tuples needs at least two distinct points");
  std::vector<Point> pts(distinct.begin(), distinct.end());
  std::set<std::pair<std::size_t, int>> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      std::size_t r = pts[i].size();
      while (r-- > 0) {
        if (pts[i][r] != pts[k][r]) break;
      }
      const SearchTree& t = trees.at(r);
      out.emplace(r, t.depth(t.lca(pts[i][r], pts[k][r])) + 1);
    }
  }
  if (out.size() > pts.size() - 1) throw PreconditionError("more captured tuples than |Q| - 1");
  return out;
}

// ---------------------------------------------------------------- stability

struct StabilityProbe {
  std::string name;
  ProductDistribution perturbed;
  Rational tv;          // total-variation distance to the original
  Rational delta_star;  // Δ*(D)
  Rational delta_star_perturbed;
  std::optional<Rational> ratio;  // Δ*(D')/Δ*(D) when Δ*(D) > 0
};

inline Rational total_delta_star(const ProductDistribution& dist) {
  Rational s = 0;
  for (const auto& m : dist.marginals()) s += build_optimal_bst(m).delta_star;
  return s;
}

inline Rational total_variation(const std::vector<Rational>& p, const std::vector<Rational>& q) {
  Rational s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += abs(p[i] - q[i]);
  return s / 2;
}

inline void finish_probe(StabilityProbe& p) {
  if (p.delta_star > 0) p.ratio = p.delta_star_perturbed / p.delta_star;
}

/// D' moves the mass of depth > ℓ_ε keys of the median tree onto the
/// remaining keys proportionally (1D).
inline StabilityProbe level_truncation_probe(const std::vector<Rational>& masses, const Rational& eps) {
  LineHardFamily fam = line_hard_family(masses, eps);
  std::vector<Rational> out(masses.size(), Rational(0));
  Rational kept = 0;
  for (int k = 1; k <= fam.tree.size(); ++k) {
    if (fam.tree.depth(k) <= fam.l_eps) kept += masses[static_cast<std::size_t>(k - 1)];
  }
  for (int k = 1; k <= fam.tree.size(); ++k) {
    if (fam.tree.depth(k) <= fam.l_eps) out[static_cast<std::size_t>(k - 1)] = masses[static_cast<std::size_t>(k - 1)] / kept;
  }
  StabilityProbe p{"level-truncation", ProductDistribution({out}), total_variation(masses, out),
                   build_optimal_bst(masses).delta_star, build_optimal_bst(out).delta_star, std::nullopt};
  finish_probe(p);
  return p;
}

/// D_r = (1/((n-1)d), …, 1/((n-1)d), 1 - 1/d) on every axis.
inline ProductDistribution concentration_example(int n, std::size_t d) {
  if (n < 2 || d < 1) throw DomainError("concentration example needs n >= 2 and d >= 1");
  const long long dd = static_cast<long long>(d);
  std::vector<Rational> m(static_cast<std::size_t>(n), Rational(1, (n - 1) * dd));
  m.back() = 1 - Rational(1, dd);
  return ProductDistribution(std::vector<std::vector<Rational>>(d, m));
}

/// Moves all of axis `axis`'s mass onto its last key.
inline StabilityProbe concentration_probe(const ProductDistribution& dist, std::size_t axis = 0) {
  auto margs = dist.marginals();
  const auto original = margs[axis];
  std::vector<Rational> point(original.size(), Rational(0));
  point.back() = 1;
  margs[axis] = point;
  ProductDistribution moved(margs);
  StabilityProbe p{"mass-concentration", moved, total_variation(original, point), total_delta_star(dist),
                   total_delta_star(moved), std::nullopt};
  finish_probe(p);
  return p;
}

}  // namespace bdpt
