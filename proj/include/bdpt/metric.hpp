#pragma once

// Bounding families, the induced quasimetric d(x,y), membership and violation
// predicates, and violation graphs.

#include "bdpt/grid.hpp"
#include "bdpt/rational.hpp"

#include <concepts>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace bdpt {

/// Per-axis bounds l_r(t) < u_r(t) on ∂_r f at coordinate t, for t = 1..n_r-1.
class BoundingFamily {
 public:
  struct Axis {
    std::vector<ExtRational> lower;
    std::vector<ExtRational> upper;
  };

  BoundingFamily() = default;
  explicit BoundingFamily(std::vector<Axis> axes) : axes_(std::move(axes)) {
    for (std::size_t r = 0; r < axes_.size(); ++r) {
      const Axis& a = axes_[r];
      if (a.lower.size() != a.upper.size()) {
        throw DomainError("axis " + std::to_string(r + 1) + ": lower/upper length mismatch");
      }
      for (std::size_t t = 0; t < a.lower.size(); ++t) {
        const std::string where = "axis " + std::to_string(r + 1) + ", t=" + std::to_string(t + 1);
        if (a.lower[t].is_positive_infinity()) throw DomainError(where + ": lower bound is +inf");
        if (a.upper[t].is_negative_infinity()) throw DomainError(where + ": upper bound is -inf");
        if (!(a.lower[t] < a.upper[t])) throw DomainError(where + ": need l < u");
      }
    }
  }

  static Axis monotone_axis(int n) {
    return {std::vector<ExtRational>(static_cast<std::size_t>(n - 1), ExtRational(0)),
            std::vector<ExtRational>(static_cast<std::size_t>(n - 1), ExtRational::infinity())};
  }

  static Axis lipschitz_axis(int n, const Rational& c) {
    if (c <= 0) throw DomainError("Lipschitz constant must be positive");
    return {std::vector<ExtRational>(static_cast<std::size_t>(n - 1), ExtRational(Rational(-c))),
            std::vector<ExtRational>(static_cast<std::size_t>(n - 1), ExtRational(c))};
  }

  static BoundingFamily monotone(const std::vector<int>& sides) {
    std::vector<Axis> axes;
    for (int n : sides) axes.push_back(monotone_axis(n));
    return BoundingFamily(std::move(axes));
  }

  static BoundingFamily lipschitz(const std::vector<int>& sides, const Rational& c) {
    std::vector<Axis> axes;
    for (int n : sides) axes.push_back(lipschitz_axis(n, c));
    return BoundingFamily(std::move(axes));
  }

  std::size_t dims() const { return axes_.size(); }
  int side(std::size_t r) const { return static_cast<int>(axes_[r].lower.size()) + 1; }
  std::vector<int> sides() const {
    std::vector<int> s;
    for (std::size_t r = 0; r < axes_.size(); ++r) s.push_back(side(r));
    return s;
  }
  const Axis& axis(std::size_t r) const { return axes_[r]; }
  const ExtRational& lower(std::size_t r, int t) const { return axes_[r].lower[static_cast<std::size_t>(t - 1)]; }
  const ExtRational& upper(std::size_t r, int t) const { return axes_[r].upper[static_cast<std::size_t>(t - 1)]; }

  /// The family restricted to axis r, as a family on [n_r].
  BoundingFamily axis_family(std::size_t r) const { return BoundingFamily({axes_[r]}); }

 private:
  std::vector<Axis> axes_;
};

template <class M>
concept GridMetric = requires(const M& m, std::size_t i) {
  { m.shape() } -> std::convertible_to<const Shape&>;
  { m.between(i, i) } -> std::convertible_to<ExtRational>;
};

/// d(x,y) = Σ_{r: x_r>y_r} Σ_{t=y_r}^{x_r-1} u_r(t) - Σ_{r: x_r<y_r} Σ_{t=x_r}^{y_r-1} l_r(t).
class Quasimetric {
 public:
  Quasimetric() = default;
  explicit Quasimetric(BoundingFamily family, std::size_t max_points = kDefaultMaxGridPoints)
      : family_(std::move(family)), shape_(family_.sides(), max_points) {
    for (std::size_t r = 0; r < family_.dims(); ++r) {
      const auto& ax = family_.axis(r);
      Prefix p;
      p.upper.assign(1, Rational(0));
      p.neg_lower.assign(1, Rational(0));
      p.upper_inf.assign(1, 0);
      p.neg_lower_inf.assign(1, 0);
      for (std::size_t t = 0; t < ax.lower.size(); ++t) {
        const bool ui = ax.upper[t].is_positive_infinity();
        const bool li = ax.lower[t].is_negative_infinity();
        p.upper.push_back(p.upper.back() + (ui ? Rational(0) : ax.upper[t].value()));
        p.neg_lower.push_back(p.neg_lower.back() - (li ? Rational(0) : ax.lower[t].value()));
        p.upper_inf.push_back(p.upper_inf.back() + (ui ? 1 : 0));
        p.neg_lower_inf.push_back(p.neg_lower_inf.back() + (li ? 1 : 0));
      }
      prefix_.push_back(std::move(p));
    }
  }

  const Shape& shape() const { return shape_; }
  const BoundingFamily& family() const { return family_; }

  /// Axis-r contribution of moving coordinate r from a to b.
  ExtRational axis_distance(std::size_t r, int a, int b) const {
    const Prefix& p = prefix_[r];
    const auto ia = static_cast<std::size_t>(a - 1);
    const auto ib = static_cast<std::size_t>(b - 1);
    if (a > b) {
      if (p.upper_inf[ia] != p.upper_inf[ib]) return ExtRational::infinity();
      return ExtRational(Rational(p.upper[ia] - p.upper[ib]));
    }
    if (a < b) {
      if (p.neg_lower_inf[ib] != p.neg_lower_inf[ia]) return ExtRational::infinity();
      return ExtRational(Rational(p.neg_lower[ib] - p.neg_lower[ia]));
    }
    return ExtRational(0);
  }

  ExtRational operator()(const Point& x, const Point& y) const {
    if (!shape_.contains(x) || !shape_.contains(y)) throw DomainError("metric argument out of bounds");
    Rational total = 0;
    for (std::size_t r = 0; r < x.size(); ++r) {
      ExtRational part = axis_distance(r, x[r], y[r]);
      if (!part.is_finite()) return ExtRational::infinity();
      total += part.value();
    }
    return ExtRational(total);
  }

  ExtRational between(std::size_t i, std::size_t j) const {
    Rational total = 0;
    for (std::size_t r = 0; r < shape_.dims(); ++r) {
      ExtRational part = axis_distance(r, shape_.coord(i, r), shape_.coord(j, r));
      if (!part.is_finite()) return ExtRational::infinity();
      total += part.value();
    }
    return ExtRational(total);
  }

  /// The 1D metric induced on r-lines.
  Quasimetric axis_metric(std::size_t r) const { return Quasimetric(family_.axis_family(r)); }

 private:
  struct Prefix {
    std::vector<Rational> upper;      // Σ_{t<k} u(t) over finite entries
    std::vector<Rational> neg_lower;  // Σ_{t<k} -l(t) over finite entries
    std::vector<int> upper_inf;       // count of u(t) = +inf for t<k
    std::vector<int> neg_lower_inf;   // count of l(t) = -inf for t<k
  };

  BoundingFamily family_;
  Shape shape_;
  std::vector<Prefix> prefix_;
};

static_assert(GridMetric<Quasimetric>);

/// All-pairs table of any metric; for repeated queries on small grids.
class DenseMetric {
 public:
  static constexpr std::size_t kMaxPoints = 1024;

  template <GridMetric M>
  explicit DenseMetric(const M& metric) : shape_(metric.shape()) {
    const std::size_t n = shape_.size();
    if (n > kMaxPoints) throw SizeError("dense metric cap exceeded: " + std::to_string(n) + " points");
    table_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) table_[i * n + j] = metric.between(i, j);
    }
  }

  const Shape& shape() const { return shape_; }
  const ExtRational& between(std::size_t i, std::size_t j) const { return table_[i * shape_.size() + j]; }

 private:
  Shape shape_;
  std::vector<ExtRational> table_;
};

static_assert(GridMetric<DenseMetric>);

/// Local check: every axis-adjacent pair obeys l_r(x_r) ≤ ∂_r f(x) ≤ u_r(x_r).
inline bool is_member(const GridFunction& f, const BoundingFamily& family) {
  const Shape& s = f.shape();
  if (s.sides() != family.sides()) throw DomainError("function and family shapes differ");
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    for (std::size_t r = 0; r < s.dims(); ++r) {
      const int t = s.coord(idx, r);
      if (t == s.side(r)) continue;
      ExtRational diff(Rational(f[idx + s.stride(r)] - f[idx]));
      if (diff < family.lower(r, t) || diff > family.upper(r, t)) return false;
    }
  }
  return true;
}

/// True iff f(i) - f(j) > d(i,j).
template <GridMetric M>
bool violates_directed(const GridFunction& f, const M& metric, std::size_t i, std::size_t j) {
  const ExtRational& d = metric.between(i, j);
  if (d.is_positive_infinity()) return false;
  return f[i] - f[j] > d.value();
}

template <GridMetric M>
bool violates(const GridFunction& f, const M& metric, std::size_t i, std::size_t j) {
  return violates_directed(f, metric, i, j) || violates_directed(f, metric, j, i);
}

template <GridMetric M>
bool is_violation(const GridFunction& f, const M& metric, const Point& x, const Point& y) {
  if (x == y) throw DomainError("a violation needs two distinct points");
  const Shape& s = metric.shape();
  return violates(f, metric, s.index(x), s.index(y));
}

/// Global check: f(x) - f(y) ≤ d(x,y) for all pairs.
template <GridMetric M>
bool is_member_all_pairs(const GridFunction& f, const M& metric) {
  const std::size_t n = metric.shape().size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && violates_directed(f, metric, i, j)) return false;
    }
  }
  return true;
}

/// w(x,y) = max(f(x)-f(y)-d(x,y), f(y)-f(x)-d(y,x)); -inf terms are dropped.
template <GridMetric M>
ExtRational violation_weight(const GridFunction& f, const M& metric, std::size_t i, std::size_t j) {
  ExtRational a = ExtRational(Rational(f[i] - f[j])) - metric.between(i, j);
  ExtRational b = ExtRational(Rational(f[j] - f[i])) - metric.between(j, i);
  return a < b ? b : a;
}

struct ViolationGraph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j
  std::vector<Rational> weights;                           // empty unless weighted

  bool empty() const { return edges.empty(); }
};

inline constexpr std::size_t kViolationGraphCap = 4096;

template <GridMetric M>
ViolationGraph build_violation_graph(const GridFunction& f, const M& metric, bool weighted,
                                     std::size_t cap = kViolationGraphCap) {
  const std::size_t n = metric.shape().size();
  if (n > cap) {
    throw SizeError("violation graph cap exceeded: " + std::to_string(n) + " points > " + std::to_string(cap));
  }
  ViolationGraph g;
  g.vertices = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!violates(f, metric, i, j)) continue;
      g.edges.emplace_back(i, j);
      if (weighted) {
        ExtRational w = violation_weight(f, metric, i, j);
        if (!w.is_finite() || w.value() <= 0) throw PreconditionError("edge weight is not positive");
        g.weights.push_back(w.value());
      }
    }
  }
  return g;
}

struct AxiomReport {
  std::size_t identity_failures = 0;
  std::size_t triangle_failures = 0;
  std::size_t linearity_failures = 0;
  std::size_t projection_failures = 0;
  std::vector<std::string> samples;  // first few offending tuples

  bool ok() const {
    return identity_failures + triangle_failures + linearity_failures + projection_failures == 0;
  }
};

inline constexpr std::size_t kAxiomCap = 512;

/// Exhaustively checks d(x,x)=0, the triangle inequality, linearity and
/// projection over every tuple of the grid.
template <GridMetric M>
AxiomReport verify_metric_axioms(const M& metric, std::size_t cap = kAxiomCap) {
  const Shape& s = metric.shape();
  const std::size_t n = s.size();
  if (n > cap) throw SizeError("axiom check cap exceeded: " + std::to_string(n) + " points");
  DenseMetric dm(metric);
  AxiomReport rep;
  auto note = [&](const std::string& what) {
    if (rep.samples.size() < 8) rep.samples.push_back(what);
  };
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = s.point(i);

  for (std::size_t i = 0; i < n; ++i) {
    if (dm.between(i, i) != ExtRational(0)) {
      ++rep.identity_failures;
      note("d(x,x) != 0 at " + to_string(pts[i]));
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        ExtRational via = dm.between(x, y) + dm.between(y, z);
        const ExtRational& direct = dm.between(x, z);
        if (direct > via) {
          ++rep.triangle_failures;
          note("triangle " + to_string(pts[x]) + to_string(pts[y]) + to_string(pts[z]));
        }
        bool between = true;
        for (std::size_t r = 0; r < s.dims() && between; ++r) {
          const int a = pts[x][r], b = pts[y][r], c = pts[z][r];
          between = (a <= b && b <= c) || (a >= b && b >= c);
        }
        if (between && direct != via) {
          ++rep.linearity_failures;
          note("linearity " + to_string(pts[x]) + to_string(pts[y]) + to_string(pts[z]));
        }
      }
    }
  }
  for (std::size_t r = 0; r < s.dims(); ++r) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (s.coord(x, r) != s.coord(y, r)) continue;
        for (int c = 1; c <= s.side(r); ++c) {
          const std::size_t xp = s.with_coord(x, r, c);
          const std::size_t yp = s.with_coord(y, r, c);
          if (dm.between(x, y) != dm.between(xp, yp) || dm.between(x, xp) != dm.between(y, yp)) {
            ++rep.projection_failures;
            note("projection " + to_string(pts[x]) + to_string(pts[y]) + " axis " + std::to_string(r + 1));
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace bdpt
