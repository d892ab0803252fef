#pragma once

// Random instance generators shared by the unit suites and the acceptance run.

#include "bdpt/grid.hpp"
#include "bdpt/metric.hpp"
#include "bdpt/random.hpp"
#include "bdpt/rational.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace bdpt::testing {

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Integer weights in [0, max_weight] normalized; at least one positive.
inline std::vector<Rational> random_marginal(Rng& rng, int n, int max_weight = 9, bool allow_zero = true) {
  std::vector<long long> w(static_cast<std::size_t>(n));
  long long total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) total += x = uniform_int(rng, allow_zero ? 0 : 1, max_weight);
  }
  std::vector<Rational> m;
  for (auto x : w) m.emplace_back(x, total);
  return m;
}

inline ProductDistribution random_distribution(Rng& rng, const std::vector<int>& sides, int max_weight = 9) {
  std::vector<std::vector<Rational>> m;
  for (int n : sides) m.push_back(random_marginal(rng, n, max_weight));
  return ProductDistribution(std::move(m));
}

inline ProductDistribution uniform_distribution(const std::vector<int>& sides) {
  return ProductDistribution::uniform(Shape(sides));
}

/// Axis with random finite lower bounds and upper bounds that are finite or +inf.
inline BoundingFamily::Axis random_axis(Rng& rng, int n, bool allow_infinite_upper = true) {
  BoundingFamily::Axis a;
  for (int t = 1; t < n; ++t) {
    Rational lo(uniform_int(rng, -4, 1), 2);
    a.lower.emplace_back(lo);
    if (allow_infinite_upper && uniform_int(rng, 0, 3) == 0) {
      a.upper.push_back(ExtRational::infinity());
    } else {
      a.upper.emplace_back(Rational(lo + Rational(uniform_int(rng, 1, 6), 2)));
    }
  }
  return a;
}

/// 0 monotone, 1 one-Lipschitz, 2 mixed per axis.
inline BoundingFamily family_of_kind(int kind, const std::vector<int>& sides, Rng& rng) {
  if (kind == 0) return BoundingFamily::monotone(sides);
  if (kind == 1) return BoundingFamily::lipschitz(sides, Rational(1));
  std::vector<BoundingFamily::Axis> axes;
  for (std::size_t r = 0; r < sides.size(); ++r) {
    switch ((r + static_cast<std::size_t>(uniform_int(rng, 0, 2))) % 3) {
      case 0:
        axes.push_back(BoundingFamily::monotone_axis(sides[r]));
        break;
      case 1:
        axes.push_back(BoundingFamily::lipschitz_axis(sides[r], Rational(uniform_int(rng, 1, 4), 2)));
        break;
      default:
        axes.push_back(random_axis(rng, sides[r]));
    }
  }
  return BoundingFamily(std::move(axes));
}

/// Separable member: per-axis increments drawn from [l, min(u, l + 3)].
inline std::vector<Rational> random_separable_member(const BoundingFamily& fam, const Shape& s, Rng& rng) {
  std::vector<std::vector<Rational>> axis_vals;
  for (std::size_t r = 0; r < s.dims(); ++r) {
    std::vector<Rational> v{Rational(uniform_int(rng, -3, 3))};
    for (int t = 1; t < s.side(r); ++t) {
      const Rational lo = fam.lower(r, t).is_finite() ? fam.lower(r, t).value() : Rational(-5);
      Rational hi = lo + 3;
      if (fam.upper(r, t).is_finite()) hi = std::min(hi, fam.upper(r, t).value());
      const int k = uniform_int(rng, 0, 4);
      v.push_back(v.back() + lo + (hi - lo) * Rational(k, 4));
    }
    axis_vals.push_back(std::move(v));
  }
  std::vector<Rational> out(s.size(), Rational(0));
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    for (std::size_t r = 0; r < s.dims(); ++r) out[idx] += axis_vals[r][static_cast<std::size_t>(s.coord(idx, r) - 1)];
  }
  return out;
}

/// Pointwise max of a few separable members; P(B) is closed under max.
inline GridFunction random_member(const BoundingFamily& fam, const Shape& s, Rng& rng) {
  std::vector<Rational> v = random_separable_member(fam, s, rng);
  const int extra = uniform_int(rng, 0, 2);
  for (int k = 0; k < extra; ++k) {
    auto w = random_separable_member(fam, s, rng);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(v[i], w[i]);
  }
  return GridFunction(s, std::move(v));
}

inline GridFunction random_function(const Shape& s, int range, Rng& rng) {
  std::vector<Rational> v(s.size());
  for (auto& x : v) x = uniform_int(rng, 0, range - 1);
  return GridFunction(s, std::move(v));
}

/// f with values base-`range` digits of `code`.
inline GridFunction function_from_code(const Shape& s, int range, std::size_t code) {
  std::vector<Rational> v(s.size());
  for (auto& x : v) {
    x = static_cast<long long>(code % static_cast<std::size_t>(range));
    code /= static_cast<std::size_t>(range);
  }
  return GridFunction(s, std::move(v));
}

inline std::size_t int_pow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace bdpt::testing
