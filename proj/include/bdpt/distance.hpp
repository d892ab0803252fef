#pragma once

// Exact distance to a bounded-derivative property: the line DP, a brute-force
// maximum-weight independent set on the violation graph, the closest member
// extension, directional distances and the matching witness check.

#include "bdpt/grid.hpp"
#include "bdpt/metric.hpp"
#include "bdpt/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bdpt {

struct DistanceReport {
  Rational dist;
  std::vector<Point> fix_set;  // a minimum-mass vertex cover of the violation graph
  std::optional<GridFunction> witness;
};

inline constexpr std::size_t kBruteForceCap = 22;

/// Point cap for subset enumeration; BDPT_CAP_POINTS overrides (at most 64).
inline std::size_t brute_force_cap() {
  if (const char* env = std::getenv("BDPT_CAP_POINTS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return std::min<std::size_t>(v, 64);
  }
  return kBruteForceCap;
}

struct KeptSet {
  Rational mass;
  std::vector<std::size_t> kept;  // increasing positions / flat indices
};

namespace detail {

// Heaviest chain i_1 < ... < i_k with no violation between consecutive members.
template <class Violates>
KeptSet best_chain(const std::vector<Rational>& masses, Violates&& violates) {
  const std::size_t n = masses.size();
  std::vector<Rational> best(n);
  std::vector<std::size_t> prev(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational carry = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (best[j] > carry && !violates(j, i)) {
        carry = best[j];
        prev[i] = j;
      }
    }
    best[i] = carry + masses[i];
  }
  std::size_t arg = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (best[i] > best[arg]) arg = i;
  }
  KeptSet out;
  out.mass = n ? best[arg] : Rational(0);
  for (std::size_t i = arg; n && i != n; i = prev[i]) out.kept.push_back(i);
  std::reverse(out.kept.begin(), out.kept.end());
  return out;
}

template <class W>
struct MisSearch {
  std::vector<W> weight;          // by rank (descending mass)
  std::vector<std::uint64_t> adj;  // by rank
  W best{};
  std::uint64_t best_set = 0;

  W bound(std::uint64_t cand) const {
    W s{};
    while (cand) {
      const int b = __builtin_ctzll(cand);
      s += weight[static_cast<std::size_t>(b)];
      cand &= cand - 1;
    }
    return s;
  }

  void run(std::uint64_t cand, std::uint64_t chosen, const W& cur) {
    if (cand == 0) {
      if (cur > best) {
        best = cur;
        best_set = chosen;
      }
      return;
    }
    if (!(cur + bound(cand) > best)) return;
    const int v = __builtin_ctzll(cand);
    const std::uint64_t bit = std::uint64_t{1} << v;
    run(cand & ~bit & ~adj[static_cast<std::size_t>(v)], chosen | bit, cur + weight[static_cast<std::size_t>(v)]);
    run(cand & ~bit, chosen, cur);
  }
};

}  // namespace detail

/// 1 - (heaviest independent set of the violation graph), by branch and bound
/// over vertices in descending mass order.
template <GridMetric M>
KeptSet max_independent_set(const GridFunction& f, const M& metric, const std::vector<Rational>& masses,
                            std::size_t cap = brute_force_cap()) {
  const std::size_t n = metric.shape().size();
  if (n > cap) {
    throw SizeError("brute-force distance cap exceeded: " + std::to_string(n) + " points > " + std::to_string(cap));
  }
  if (n > 64) throw SizeError("brute-force distance supports at most 64 points");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return masses[a] > masses[b]; });
  std::vector<std::size_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[order[k]] = k;
  std::vector<std::uint64_t> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (violates(f, metric, i, j)) {
        adj[rank[i]] |= std::uint64_t{1} << rank[j];
        adj[rank[j]] |= std::uint64_t{1} << rank[i];
      }
    }
  }
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);

  // exact int64 weights when the common denominator is small enough
  BigInt lcm = common_denominator(masses);
  BigInt scaled_total = 0;
  std::vector<BigInt> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = BigInt(boost::multiprecision::numerator(masses[i]) * (lcm / boost::multiprecision::denominator(masses[i])));
    scaled_total += scaled[i];
  }
  std::uint64_t best_set = 0;
  if (scaled_total < BigInt(std::numeric_limits<std::int64_t>::max() / 4)) {
    detail::MisSearch<std::int64_t> s;
    s.best = -1;
    s.adj = adj;
    for (std::size_t k = 0; k < n; ++k) s.weight.push_back(scaled[order[k]].convert_to<std::int64_t>());
    s.run(all, 0, 0);
    best_set = s.best_set;
  } else {
    detail::MisSearch<Rational> s;
    s.best = -1;
    s.adj = adj;
    for (std::size_t k = 0; k < n; ++k) s.weight.push_back(masses[order[k]]);
    s.run(all, 0, Rational(0));
    best_set = s.best_set;
  }
  KeptSet out;
  out.mass = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (best_set >> k & 1U) {
      out.kept.push_back(order[k]);
      out.mass += masses[order[k]];
    }
  }
  std::sort(out.kept.begin(), out.kept.end());
  return out;
}

/// Member of P agreeing with f on `keep`: the upper envelope
/// min_s f(s) + d(z,s) if finite everywhere, else the lower envelope
/// max_s f(s) - d(s,z), else max(lower, min(upper, B)) with B a fixed member.
inline GridFunction closest_extension(const GridFunction& f, const Quasimetric& q,
                                      const std::vector<std::size_t>& keep) {
  const Shape& s = f.shape();
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = a + 1; b < keep.size(); ++b) {
      if (violates(f, q, keep[a], keep[b])) {
        throw PreconditionError("keep set contains the violating pair " + to_string(s.point(keep[a])) + ", " +
                                to_string(s.point(keep[b])));
      }
    }
  }
  const std::size_t n = s.size();
  std::vector<ExtRational> upper(n, ExtRational::infinity()), lower(n, ExtRational::negative_infinity());
  bool upper_finite = true, lower_finite = true;
  for (std::size_t z = 0; z < n; ++z) {
    for (std::size_t k : keep) {
      ExtRational u = ExtRational(f[k]) + q.between(z, k);
      if (u < upper[z]) upper[z] = u;
      ExtRational l = ExtRational(f[k]) - q.between(k, z);
      if (l > lower[z]) lower[z] = l;
    }
    upper_finite = upper_finite && upper[z].is_finite();
    lower_finite = lower_finite && lower[z].is_finite();
  }
  std::vector<Rational> g(n);
  if (upper_finite) {
    for (std::size_t z = 0; z < n; ++z) g[z] = upper[z].value();
  } else if (lower_finite) {
    for (std::size_t z = 0; z < n; ++z) g[z] = lower[z].value();
  } else {
    // B integrates the per-step constant clamp(0, l, u); B ≡ 0 when l ≤ 0 ≤ u
    const BoundingFamily& fam = q.family();
    for (std::size_t z = 0; z < n; ++z) {
      Rational base = 0;
      for (std::size_t r = 0; r < s.dims(); ++r) {
        for (int t = 1; t < s.coord(z, r); ++t) {
          const ExtRational& lo = fam.lower(r, t);
          const ExtRational& hi = fam.upper(r, t);
          if (lo > ExtRational(0)) {
            base += lo.value();
          } else if (hi < ExtRational(0)) {
            base += hi.value();
          }
        }
      }
      ExtRational v = std::min(upper[z], ExtRational(base));
      v = std::max(lower[z], v);
      g[z] = v.value();
    }
  }
  GridFunction out(s, std::move(g));
  if (!is_member(out, q.family())) throw PreconditionError("extension is not a member of the property");
  return out;
}

inline GridFunction closest_extension(const GridFunction& f, const Quasimetric& q, const std::vector<Point>& keep) {
  std::set<std::size_t> idx;
  for (const auto& p : keep) idx.insert(f.shape().index(p));
  return closest_extension(f, q, std::vector<std::size_t>(idx.begin(), idx.end()));
}

namespace detail {

inline DistanceReport report_from_kept(const GridFunction& f, const Quasimetric& q, const KeptSet& kept,
                                       bool with_witness) {
  DistanceReport rep;
  rep.dist = 1 - kept.mass;
  std::vector<bool> in(f.size(), false);
  for (std::size_t k : kept.kept) in[k] = true;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!in[i]) rep.fix_set.push_back(f.shape().point(i));
  }
  if (with_witness) rep.witness = closest_extension(f, q, kept.kept);
  return rep;
}

}  // namespace detail

/// Keep-set DP along the r-line `line` (flat indices in coordinate order).
template <GridMetric M>
KeptSet line_kept_set(const GridFunction& f, const M& metric, const std::vector<std::size_t>& line,
                      const std::vector<Rational>& masses) {
  KeptSet k = detail::best_chain(masses, [&](std::size_t a, std::size_t b) {
    return violates(f, metric, line[a], line[b]);
  });
  for (auto& pos : k.kept) pos = line[pos];
  return k;
}

/// dist_D(f,P) on [n] via the consecutive-pair chain DP.
inline DistanceReport exact_distance_line(const GridFunction& f, const Quasimetric& q,
                                          const std::vector<Rational>& marginal, bool with_witness = true) {
  if (f.shape().dims() != 1) throw DomainError("exact_distance_line needs a 1D function");
  if (marginal.size() != f.size()) throw DomainError("marginal and function sizes differ");
  std::vector<std::size_t> line(f.size());
  std::iota(line.begin(), line.end(), 0);
  KeptSet k = line_kept_set(f, q, line, marginal);
  Rational total = std::accumulate(marginal.begin(), marginal.end(), Rational(0));
  DistanceReport rep = detail::report_from_kept(f, q, k, with_witness);
  rep.dist = total - k.mass;
  return rep;
}

/// Distance value only, for any metric on [n].
template <GridMetric M>
Rational line_distance(const GridFunction& f, const M& metric, const std::vector<Rational>& marginal) {
  std::vector<std::size_t> line(f.size());
  std::iota(line.begin(), line.end(), 0);
  return 1 - line_kept_set(f, metric, line, marginal).mass;
}

/// dist_D(f,P) by subset enumeration (grid ≤ brute_force_cap() points).
template <GridMetric M>
Rational exact_distance_bruteforce_value(const GridFunction& f, const M& metric, const std::vector<Rational>& masses,
                                        std::size_t cap = brute_force_cap()) {
  return 1 - max_independent_set(f, metric, masses, cap).mass;
}

inline DistanceReport exact_distance_bruteforce(const GridFunction& f, const Quasimetric& q,
                                                const ProductDistribution& dist, bool with_witness = true,
                                                std::size_t cap = brute_force_cap()) {
  if (f.shape().size() > cap) {
    throw SizeError("brute-force distance cap exceeded: " + std::to_string(f.shape().size()) + " points > " +
                    std::to_string(cap));
  }
  KeptSet k = max_independent_set(f, q, dist.point_masses(), cap);
  return detail::report_from_kept(f, q, k, with_witness);
}

/// Line DP when d = 1, brute force otherwise.
inline DistanceReport exact_distance(const GridFunction& f, const Quasimetric& q, const ProductDistribution& dist,
                                     bool with_witness = true) {
  if (f.shape().dims() == 1) return exact_distance_line(f, q, dist.marginal(0), with_witness);
  return exact_distance_bruteforce(f, q, dist, with_witness);
}

/// dist^r = E_{ℓ ~ D_-r} dist_{D_r}(f|ℓ, P).
template <GridMetric M>
Rational directional_distance(const GridFunction& f, const M& metric, const ProductDistribution& dist, std::size_t r) {
  const Shape& s = f.shape();
  if (s.sides() != dist.sides()) throw DomainError("function and distribution shapes differ");
  Rational total = 0;
  for (std::size_t base : s.line_bases(r)) {
    Rational lm = dist.line_mass(r, s.point(base));
    if (lm == 0) continue;
    KeptSet k = line_kept_set(f, metric, s.line_indices(base, r), dist.marginal(r));
    total += lm * (1 - k.mass);
  }
  return total;
}

struct DimensionReductionReport {
  Rational dist;
  std::vector<Rational> per_axis;
  Rational sum;
  bool lower_ok = false;  // Σ dist^r ≥ dist/4
  bool upper_ok = false;  // Σ dist^r ≤ d·dist
};

template <GridMetric M>
DimensionReductionReport check_dimension_reduction(const GridFunction& f, const M& metric,
                                                   const ProductDistribution& dist,
                                                   const std::vector<Rational>& point_masses,
                                                   std::size_t cap = brute_force_cap()) {
  DimensionReductionReport rep;
  rep.dist = exact_distance_bruteforce_value(f, metric, point_masses, cap);
  rep.sum = 0;
  for (std::size_t r = 0; r < f.shape().dims(); ++r) {
    rep.per_axis.push_back(directional_distance(f, metric, dist, r));
    rep.sum += rep.per_axis.back();
  }
  rep.lower_ok = 4 * rep.sum >= rep.dist;
  rep.upper_ok = rep.sum <= rep.dist * static_cast<long long>(f.shape().dims());
  return rep;
}

template <GridMetric M>
DimensionReductionReport check_dimension_reduction(const GridFunction& f, const M& metric,
                                                   const ProductDistribution& dist) {
  return check_dimension_reduction(f, metric, dist, dist.point_masses());
}

inline constexpr std::size_t kMatchingCap = 12;

struct NoviolResult {
  bool holds = false;             // some MWmC matching has no r-cross pair
  Rational max_weight;            // W*
  std::size_t min_cardinality = 0;
  std::size_t matchings = 0;      // matchings enumerated
  std::size_t edges = 0;
};

/// No violation inside any r-line.
template <GridMetric M>
bool is_r_good(const GridFunction& f, const M& metric, std::size_t r) {
  const Shape& s = f.shape();
  for (std::size_t base : s.line_bases(r)) {
    auto line = s.line_indices(base, r);
    for (std::size_t a = 0; a < line.size(); ++a) {
      for (std::size_t b = a + 1; b < line.size(); ++b) {
        if (violates(f, metric, line[a], line[b])) return false;
      }
    }
  }
  return true;
}

/// Enumerates every matching of the weighted violation graph and reports
/// whether a maximum-weight, minimum-cardinality one avoids r-cross pairs.
template <GridMetric M>
NoviolResult noviol_witness(const GridFunction& f, const M& metric, std::size_t r, std::size_t cap = kMatchingCap) {
  const Shape& s = f.shape();
  if (s.size() > cap) {
    throw SizeError("matching enumeration cap exceeded: " + std::to_string(s.size()) + " points > " + std::to_string(cap));
  }
  if (!is_r_good(f, metric, r)) throw PreconditionError("function is not " + std::to_string(r + 1) + "-good");
  ViolationGraph vg = build_violation_graph(f, metric, true);
  const std::size_t n = s.size();
  struct Arc {
    std::size_t to;
    Rational w;
    bool cross;
  };
  std::vector<std::vector<Arc>> adj(n);
  for (std::size_t e = 0; e < vg.edges.size(); ++e) {
    auto [a, b] = vg.edges[e];
    adj[a].push_back({b, vg.weights[e], s.coord(a, r) != s.coord(b, r)});
  }
  NoviolResult res;
  res.edges = vg.edges.size();
  res.max_weight = -1;
  std::vector<bool> used(n, false);
  Rational weight = 0;
  std::size_t card = 0, cross = 0;
  auto visit_leaf = [&]() {
    ++res.matchings;
    if (weight > res.max_weight || (weight == res.max_weight && card < res.min_cardinality)) {
      res.max_weight = weight;
      res.min_cardinality = card;
      res.holds = cross == 0;
    } else if (weight == res.max_weight && card == res.min_cardinality && cross == 0) {
      res.holds = true;
    }
  };
  auto rec = [&](auto&& self, std::size_t v) -> void {
    while (v < n && used[v]) ++v;
    if (v == n) {
      visit_leaf();
      return;
    }
    used[v] = true;
    self(self, v + 1);
    for (const Arc& a : adj[v]) {
      if (used[a.to]) continue;
      used[a.to] = true;
      weight += a.w;
      ++card;
      cross += a.cross ? 1 : 0;
      self(self, v + 1);
      cross -= a.cross ? 1 : 0;
      --card;
      weight -= a.w;
      used[a.to] = false;
    }
    used[v] = false;
  };
  rec(rec, 0);
  return res;
}

template <GridMetric M>
bool noviol_witness_check(const GridFunction& f, const M& metric, std::size_t r, std::size_t cap = kMatchingCap) {
  return noviol_witness(f, metric, r, cap).holds;
}

}  // namespace bdpt
