#pragma once

// Reduction from a product distribution with rational masses to the uniform
// distribution on [N]^d: index j of axis r is replicated q_r(j) = N·μ_r(j) times.

#include "bdpt/distance.hpp"
#include "bdpt/grid.hpp"
#include "bdpt/metric.hpp"

#include <string>
#include <vector>

namespace bdpt {

inline constexpr std::size_t kBloatCap = 1'000'000;

class BloatMap {
 public:
  BloatMap() = default;

  /// N = lcm of every marginal denominator.
  static BloatMap rationalize(const ProductDistribution& dist, std::size_t cap = kBloatCap) {
    BloatMap bm;
    bm.source_ = dist.shape(std::numeric_limits<std::size_t>::max());
    BigInt n = 1;
    for (const auto& m : dist.marginals()) n = boost::multiprecision::lcm(n, common_denominator(m));
    bm.n_big_ = n;
    BigInt points = 1;
    for (std::size_t r = 0; r < dist.dims(); ++r) {
      points *= n;
      if (points > BigInt(cap)) {
        throw SizeError("bloated grid [" + n.str() + "]^" + std::to_string(dist.dims()) + " exceeds the cap of " +
                        std::to_string(cap) + " points (N = " + n.str() + ")");
      }
    }
    bm.n_ = n.convert_to<int>();
    bm.target_ = Shape(std::vector<int>(dist.dims(), bm.n_), cap);
    for (std::size_t r = 0; r < dist.dims(); ++r) {
      std::vector<int> q, phi;
      for (const auto& p : dist.marginal(r)) {
        const int count = Rational(p * bm.n_).convert_to<int>();
        q.push_back(count);
        for (int c = 0; c < count; ++c) phi.push_back(static_cast<int>(q.size()));
      }
      bm.q_.push_back(std::move(q));
      bm.phi_.push_back(std::move(phi));
    }
    return bm;
  }

  int common_denominator_n() const { return n_; }
  const Shape& source() const { return source_; }
  const Shape& target() const { return target_; }
  /// q_r(j), j = 1..n_r.
  int weight(std::size_t r, int j) const { return q_[r][static_cast<std::size_t>(j - 1)]; }
  const std::vector<int>& weights(std::size_t r) const { return q_[r]; }
  /// φ_r(t), t = 1..N.
  int phi(std::size_t r, int t) const { return phi_[r][static_cast<std::size_t>(t - 1)]; }

  Point map_point(const Point& x) const {
    Point y(x.size());
    for (std::size_t r = 0; r < x.size(); ++r) y[r] = phi(r, x[r]);
    return y;
  }

  std::size_t map_index(std::size_t idx) const {
    std::size_t out = 0;
    for (std::size_t r = 0; r < target_.dims(); ++r) {
      out += static_cast<std::size_t>(phi(r, target_.coord(idx, r)) - 1) * source_.stride(r);
    }
    return out;
  }

  /// Φ^{-1}(x) as flat target indices.
  std::vector<std::size_t> preimage(const Point& x) const {
    std::vector<std::size_t> out;
    for (std::size_t idx = 0; idx < target_.size(); ++idx) {
      if (source_.index(x) == map_index(idx)) out.push_back(idx);
    }
    return out;
  }

 private:
  Shape source_, target_;
  BigInt n_big_;
  int n_ = 0;
  std::vector<std::vector<int>> q_, phi_;
};

/// f_ext(x) = f(Φ(x)).
inline GridFunction build_f_ext(const GridFunction& f, const BloatMap& bm) {
  if (!(f.shape() == bm.source())) throw DomainError("function shape differs from the bloat source");
  std::vector<Rational> v(bm.target().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[bm.map_index(i)];
  return GridFunction(bm.target(), std::move(v));
}

/// d_ext(x,y) = d(Φ(x), Φ(y)), evaluated directly: inside a segment the
/// step bounds would have to be l = u = 0, which no bounding family allows.
class BloatedMetric {
 public:
  BloatedMetric(const Quasimetric& base, const BloatMap& bm) : base_(&base), bm_(&bm) {
    if (!(base.shape() == bm.source())) throw DomainError("metric shape differs from the bloat source");
  }

  const Shape& shape() const { return bm_->target(); }
  ExtRational between(std::size_t i, std::size_t j) const {
    return base_->between(bm_->map_index(i), bm_->map_index(j));
  }
  ExtRational operator()(const Point& x, const Point& y) const { return (*base_)(bm_->map_point(x), bm_->map_point(y)); }

 private:
  const Quasimetric* base_;
  const BloatMap* bm_;
};

static_assert(GridMetric<BloatedMetric>);

struct BloatReport {
  int n = 0;  // common denominator N
  Rational dist_source;
  Rational dist_bloated;
  bool equal = false;
  std::size_t lines_checked = 0;
  std::size_t line_failures = 0;
  bool used_bruteforce = false;
};

inline constexpr std::size_t kLineDpCap = 4096;

/// dist_D(f, P(d)) = dist_U(f_ext, P(d_ext)), plus the same equality on every
/// line of the bloated grid against the line it maps onto.
inline BloatReport verify_bloat_equivalence(const GridFunction& f, const Quasimetric& q,
                                            const ProductDistribution& dist, std::size_t cap = brute_force_cap()) {
  BloatMap bm = BloatMap::rationalize(dist);
  GridFunction fx = build_f_ext(f, bm);
  BloatedMetric dx(q, bm);
  const Shape& tgt = bm.target();
  ProductDistribution uni = ProductDistribution::uniform(tgt);
  BloatReport rep;
  rep.n = bm.common_denominator_n();
  if (tgt.size() <= cap) {
    rep.used_bruteforce = true;
    DenseMetric dense_src(q), dense_tgt(dx);
    rep.dist_source = exact_distance_bruteforce_value(f, dense_src, dist.point_masses(), cap);
    rep.dist_bloated = exact_distance_bruteforce_value(fx, dense_tgt, uni.point_masses(), cap);
  } else if (tgt.dims() == 1 && tgt.size() <= kLineDpCap) {
    rep.dist_source = line_distance(f, q, dist.marginal(0));
    rep.dist_bloated = line_distance(fx, dx, uni.marginal(0));
  } else {
    throw SizeError("bloated grid has " + std::to_string(tgt.size()) + " points (N = " + std::to_string(rep.n) +
                    "), beyond the distance oracle caps");
  }
  rep.equal = rep.dist_source == rep.dist_bloated;

  const Shape& src = f.shape();
  for (std::size_t r = 0; r < tgt.dims(); ++r) {
    for (std::size_t base : tgt.line_bases(r)) {
      auto line = tgt.line_indices(base, r);
      Rational lhs = 1 - line_kept_set(fx, dx, line, uni.marginal(r)).mass;
      auto src_line = src.line_indices(bm.map_index(base), r);
      Rational rhs = 1 - line_kept_set(f, q, src_line, dist.marginal(r)).mass;
      ++rep.lines_checked;
      if (lhs != rhs) ++rep.line_failures;
    }
  }
  return rep;
}

}  // namespace bdpt
