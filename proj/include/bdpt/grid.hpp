#pragma once

// Hypergrids [n_1] x ... x [n_d], points, product distributions and dense
// function tables. Coordinates are 1-indexed; axes are 0-indexed.

#include "bdpt/random.hpp"
#include "bdpt/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bdpt {

inline constexpr std::size_t kDefaultMaxGridPoints = 1'000'000;

using Point = std::vector<int>;

/// x ⪯ y coordinate-wise.
inline bool precedes(const Point& x, const Point& y) {
  for (std::size_t r = 0; r < x.size(); ++r) {
    if (x[r] > y[r]) return false;
  }
  return true;
}

inline std::string to_string(const Point& p) {
  std::string s = "(";
  for (std::size_t r = 0; r < p.size(); ++r) {
    if (r) s += ",";
    s += std::to_string(p[r]);
  }
  return s + ")";
}

class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<int> sides, std::size_t max_points = kDefaultMaxGridPoints)
      : sides_(std::move(sides)) {
    if (sides_.empty()) throw DomainError("shape needs at least one axis");
    strides_.assign(sides_.size(), 1);
    std::size_t total = 1;
    for (std::size_t r = sides_.size(); r-- > 0;) {
      if (sides_[r] < 1) throw DomainError("side lengths must be >= 1");
      strides_[r] = total;
      const auto side = static_cast<std::size_t>(sides_[r]);
      if (total > std::numeric_limits<std::size_t>::max() / side) {
        throw SizeError("grid point count overflows the word size");
      }
      total *= side;
    }
    if (total > max_points) {
      throw SizeError("grid has " + std::to_string(total) + " points, cap is " +
                      std::to_string(max_points));
    }
    size_ = total;
  }

  static Shape line(int n) { return Shape({n}); }
  static Shape cube(int n, std::size_t d) { return Shape(std::vector<int>(d, n)); }

  std::size_t dims() const { return sides_.size(); }
  int side(std::size_t r) const { return sides_[r]; }
  const std::vector<int>& sides() const { return sides_; }
  std::size_t size() const { return size_; }
  std::size_t stride(std::size_t r) const { return strides_[r]; }

  bool contains(const Point& p) const {
    if (p.size() != sides_.size()) return false;
    for (std::size_t r = 0; r < p.size(); ++r) {
      if (p[r] < 1 || p[r] > sides_[r]) return false;
    }
    return true;
  }

  std::size_t index(const Point& p) const {
    if (!contains(p)) throw DomainError("point " + to_string(p) + " is out of bounds");
    std::size_t idx = 0;
    for (std::size_t r = 0; r < p.size(); ++r) idx += static_cast<std::size_t>(p[r] - 1) * strides_[r];
    return idx;
  }

  Point point(std::size_t idx) const {
    Point p(sides_.size());
    for (std::size_t r = 0; r < sides_.size(); ++r) {
      p[r] = static_cast<int>(idx / strides_[r]) + 1;
      idx %= strides_[r];
    }
    return p;
  }

  int coord(std::size_t idx, std::size_t r) const {
    return static_cast<int>((idx / strides_[r]) % static_cast<std::size_t>(sides_[r])) + 1;
  }

  std::size_t with_coord(std::size_t idx, std::size_t r, int value) const {
    return idx - static_cast<std::size_t>(coord(idx, r) - 1) * strides_[r] +
           static_cast<std::size_t>(value - 1) * strides_[r];
  }

  /// Flat indices of the r-line through `idx`, ordered by coordinate r.
  std::vector<std::size_t> line_indices(std::size_t idx, std::size_t r) const {
    std::size_t base = with_coord(idx, r, 1);
    std::vector<std::size_t> out(static_cast<std::size_t>(sides_[r]));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = base + k * strides_[r];
    return out;
  }

  /// One representative (coordinate r = 1) per r-line.
  std::vector<std::size_t> line_bases(std::size_t r) const {
    std::vector<std::size_t> out;
    out.reserve(size_ / static_cast<std::size_t>(sides_[r]));
    for (std::size_t idx = 0; idx < size_; ++idx) {
      if (coord(idx, r) == 1) out.push_back(idx);
    }
    return out;
  }

  friend bool operator==(const Shape& a, const Shape& b) { return a.sides_ == b.sides_; }

 private:
  std::vector<int> sides_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

class ProductDistribution {
 public:
  ProductDistribution() = default;

  explicit ProductDistribution(std::vector<std::vector<Rational>> marginals)
      : marginals_(std::move(marginals)) {
    std::vector<int> sides;
    for (std::size_t r = 0; r < marginals_.size(); ++r) {
      const auto& m = marginals_[r];
      if (m.empty()) throw DomainError("marginal " + std::to_string(r + 1) + " is empty");
      Rational total = 0;
      for (const auto& p : m) {
        if (p < 0) throw DomainError("negative mass in marginal " + std::to_string(r + 1));
        total += p;
      }
      if (total != 1) {
        throw DomainError("marginal " + std::to_string(r + 1) + " sums to " + to_string(total));
      }
      sides.push_back(static_cast<int>(m.size()));
    }
    sides_ = std::move(sides);
    build_samplers();
  }

  static ProductDistribution uniform(const Shape& shape) {
    std::vector<std::vector<Rational>> m;
    for (int n : shape.sides()) m.emplace_back(static_cast<std::size_t>(n), Rational(1, n));
    return ProductDistribution(std::move(m));
  }

  /// Hypercube {1,2}^d with Pr[x_r = 2] = p.
  static ProductDistribution p_biased(std::size_t d, const Rational& p) {
    if (p < 0 || p > 1) throw DomainError("bias must lie in [0,1]");
    return ProductDistribution(std::vector<std::vector<Rational>>(d, {Rational(1 - p), p}));
  }

  /// Grid the distribution lives on; throws SizeError past the point cap.
  Shape shape(std::size_t max_points = kDefaultMaxGridPoints) const { return Shape(sides_, max_points); }
  const std::vector<int>& sides() const { return sides_; }
  std::size_t dims() const { return marginals_.size(); }
  const std::vector<Rational>& marginal(std::size_t r) const { return marginals_[r]; }
  const std::vector<std::vector<Rational>>& marginals() const { return marginals_; }

  Rational point_mass(const Point& p) const {
    bool inside = p.size() == sides_.size();
    for (std::size_t r = 0; inside && r < p.size(); ++r) inside = p[r] >= 1 && p[r] <= sides_[r];
    if (!inside) throw DomainError("point " + to_string(p) + " is out of bounds");
    Rational m = 1;
    for (std::size_t r = 0; r < p.size(); ++r) m *= marginals_[r][static_cast<std::size_t>(p[r] - 1)];
    return m;
  }

  Rational point_mass_at(const Shape& shape, std::size_t idx) const {
    Rational m = 1;
    for (std::size_t r = 0; r < shape.dims(); ++r) {
      m *= marginals_[r][static_cast<std::size_t>(shape.coord(idx, r) - 1)];
    }
    return m;
  }

  /// Mass of every grid point, by flat index.
  std::vector<Rational> point_masses() const {
    Shape grid(sides_);
    std::vector<Rational> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = point_mass_at(grid, i);
    return out;
  }

  /// Mass of a set of points; duplicates are counted once.
  Rational mass(const std::vector<Point>& pts) const {
    std::set<Point> unique(pts.begin(), pts.end());
    Rational total = 0;
    for (const auto& p : unique) total += point_mass(p);
    return total;
  }

  /// Mass of the r-line through p under D_{-r}.
  Rational line_mass(std::size_t r, const Point& p) const {
    Rational m = 1;
    for (std::size_t s = 0; s < p.size(); ++s) {
      if (s != r) m *= marginals_[s][static_cast<std::size_t>(p[s] - 1)];
    }
    return m;
  }

  int sample_coord(std::size_t r, Rng& rng) const {
    const Sampler& s = samplers_[r];
    if (s.small) {
      std::uniform_int_distribution<std::uint64_t> pick(0, s.total - 1);
      std::uint64_t u = pick(rng);
      auto it = std::upper_bound(s.cumulative.begin(), s.cumulative.end(), u);
      return static_cast<int>(it - s.cumulative.begin()) + 1;
    }
    BigInt u = uniform_bigint(s.big_total, rng);
    auto it = std::upper_bound(s.big_cumulative.begin(), s.big_cumulative.end(), u);
    return static_cast<int>(it - s.big_cumulative.begin()) + 1;
  }

  Point sample(Rng& rng) const {
    Point p(marginals_.size());
    for (std::size_t r = 0; r < p.size(); ++r) p[r] = sample_coord(r, rng);
    return p;
  }

 private:
  struct Sampler {
    bool small = true;
    std::uint64_t total = 0;
    std::vector<std::uint64_t> cumulative;
    BigInt big_total;
    std::vector<BigInt> big_cumulative;
  };

  // Uniform on [0, bound) by rejection over 64-bit limbs.
  static BigInt uniform_bigint(const BigInt& bound, Rng& rng) {
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
    for (;;) {
      BigInt v = 0;
      unsigned have = 0;
      while (have < bits) {
        v <<= 64;
        v += rng();
        have += 64;
      }
      v >>= (have - bits);
      if (v < bound) return v;
    }
  }

  void build_samplers() {
    samplers_.clear();
    for (const auto& m : marginals_) {
      Sampler s;
      BigInt total = common_denominator(m);
      BigInt running = 0;
      for (const auto& p : m) {
        running += BigInt(boost::multiprecision::numerator(p) * (total / boost::multiprecision::denominator(p)));
        s.big_cumulative.push_back(running);
      }
      s.big_total = total;
      s.small = total <= BigInt(std::numeric_limits<std::uint64_t>::max());
      if (s.small) {
        s.total = total.convert_to<std::uint64_t>();
        for (const auto& c : s.big_cumulative) s.cumulative.push_back(c.convert_to<std::uint64_t>());
      }
      samplers_.push_back(std::move(s));
    }
  }

  std::vector<int> sides_;
  std::vector<std::vector<Rational>> marginals_;
  std::vector<Sampler> samplers_;
};

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Shape shape, std::vector<Rational> values)
      : shape_(std::move(shape)), values_(std::move(values)) {
    if (values_.size() != shape_.size()) {
      throw DomainError("function table has " + std::to_string(values_.size()) +
                        " values, shape needs " + std::to_string(shape_.size()));
    }
  }

  static GridFunction line(std::vector<Rational> values) {
    Shape s = Shape::line(static_cast<int>(values.size()));
    return GridFunction(std::move(s), std::move(values));
  }

  template <class Int>
  static GridFunction from_ints(const Shape& shape, const std::vector<Int>& values) {
    std::vector<Rational> v(values.begin(), values.end());
    return GridFunction(shape, std::move(v));
  }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& operator[](std::size_t idx) const { return values_[idx]; }
  Rational& operator[](std::size_t idx) { return values_[idx]; }
  const Rational& at(const Point& p) const { return values_[shape_.index(p)]; }

  /// f along the r-line through `base`; coordinate r of base is ignored.
  GridFunction restrict_line(std::size_t r, const Point& base) const {
    Point anchor = base;
    anchor[r] = 1;
    std::vector<Rational> v;
    for (std::size_t idx : shape_.line_indices(shape_.index(anchor), r)) v.push_back(values_[idx]);
    return line(std::move(v));
  }

  /// ∂_r f(x) = f(x + e_r) - f(x).
  Rational partial_derivative(std::size_t r, const Point& x) const {
    if (r >= shape_.dims()) throw DomainError("axis out of range");
    if (x[r] >= shape_.side(r)) {
      throw DomainError("partial derivative along axis " + std::to_string(r + 1) +
                        " is defined only where x_r < n_r");
    }
    Point y = x;
    ++y[r];
    return at(y) - at(x);
  }

  friend bool operator==(const GridFunction& a, const GridFunction& b) {
    return a.shape_ == b.shape_ && a.values_ == b.values_;
  }

 private:
  Shape shape_;
  std::vector<Rational> values_;
};

}  // namespace bdpt
