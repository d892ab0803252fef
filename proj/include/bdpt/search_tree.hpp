#pragma once

// Binary search trees over the keys 1..n: median, optimal and balanced
// constructions, depth accounting, level-mass profiles and lca queries.

#include "bdpt/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bdpt {

class SearchTree {
 public:
  SearchTree() = default;

  /// Builds the tree whose root on every interval [lo,hi] is choose(lo,hi).
  template <class Chooser>
  static SearchTree from_chooser(int n, Chooser&& choose) {
    if (n < 1) throw DomainError("search tree needs n >= 1");
    SearchTree t;
    t.n_ = n;
    const auto sz = static_cast<std::size_t>(n) + 1;
    t.parent_.assign(sz, 0);
    t.left_.assign(sz, 0);
    t.right_.assign(sz, 0);
    t.depth_.assign(sz, 0);
    t.lo_.assign(sz, 0);
    t.hi_.assign(sz, 0);
    struct Frame {
      int lo, hi, parent, depth;
      bool is_left;
    };
    std::vector<Frame> stack{{1, n, 0, 0, false}};
    while (!stack.empty()) {
      Frame fr = stack.back();
      stack.pop_back();
      if (fr.lo > fr.hi) continue;
      const int k = choose(fr.lo, fr.hi);
      if (k < fr.lo || k > fr.hi) throw PreconditionError("root chooser returned a key outside its interval");
      const auto uk = static_cast<std::size_t>(k);
      t.parent_[uk] = fr.parent;
      t.depth_[uk] = fr.depth;
      t.lo_[uk] = fr.lo;
      t.hi_[uk] = fr.hi;
      if (fr.parent == 0) {
        t.root_ = k;
      } else if (fr.is_left) {
        t.left_[static_cast<std::size_t>(fr.parent)] = k;
      } else {
        t.right_[static_cast<std::size_t>(fr.parent)] = k;
      }
      t.height_ = std::max(t.height_, fr.depth);
      stack.push_back({k + 1, fr.hi, k, fr.depth + 1, false});
      stack.push_back({fr.lo, k - 1, k, fr.depth + 1, true});
    }
    return t;
  }

  /// Tree from explicit parent links (0 marks the root); validates BST order.
  static SearchTree from_parents(const std::vector<int>& parent_of_key) {
    const int n = static_cast<int>(parent_of_key.size());
    // the root on [lo,hi] is the unique key in range whose parent is outside it
    auto choose = [&](int lo, int hi) {
      for (int k = lo; k <= hi; ++k) {
        const int p = parent_of_key[static_cast<std::size_t>(k - 1)];
        if (p == 0 || p < lo || p > hi) return k;
      }
      return lo;
    };
    SearchTree t = from_chooser(n, choose);
    for (int k = 1; k <= n; ++k) {
      if (t.parent(k) != parent_of_key[static_cast<std::size_t>(k - 1)]) {
        throw DomainError("parent links do not describe a binary search tree");
      }
    }
    return t;
  }

  int size() const { return n_; }
  int root() const { return root_; }
  int parent(int k) const { return parent_[static_cast<std::size_t>(k)]; }
  int left(int k) const { return left_[static_cast<std::size_t>(k)]; }
  int right(int k) const { return right_[static_cast<std::size_t>(k)]; }
  int depth(int k) const { return depth_[static_cast<std::size_t>(k)]; }
  int height() const { return height_; }
  /// Keys of the subtree rooted at k form the interval [subtree_lo(k), subtree_hi(k)].
  int subtree_lo(int k) const { return lo_[static_cast<std::size_t>(k)]; }
  int subtree_hi(int k) const { return hi_[static_cast<std::size_t>(k)]; }

  std::vector<int> depths() const { return {depth_.begin() + 1, depth_.end()}; }

  /// Path from v up to the root, both inclusive.
  std::vector<int> root_path(int v) const {
    check_key(v);
    std::vector<int> path;
    for (int k = v; k != 0; k = parent(k)) path.push_back(k);
    return path;
  }

  int lca(int x, int y) const {
    check_key(x);
    check_key(y);
    const int a = std::min(x, y), b = std::max(x, y);
    int k = root_;
    while (k < a || k > b) k = (k < a) ? right(k) : left(k);
    return k;
  }

  /// Parenthesized dump: (key:mass@depth left right), "-" for empty.
  std::string dump(const std::vector<Rational>& masses) const {
    std::function<std::string(int)> rec = [&](int k) -> std::string {
      if (k == 0) return "-";
      return "(" + std::to_string(k) + ":" + to_string(masses[static_cast<std::size_t>(k - 1)]) + "@" +
             std::to_string(depth(k)) + " " + rec(left(k)) + " " + rec(right(k)) + ")";
    };
    return rec(root_);
  }

 private:
  void check_key(int k) const {
    if (k < 1 || k > n_) throw DomainError("key " + std::to_string(k) + " outside [1," + std::to_string(n_) + "]");
  }

  int n_ = 0;
  int root_ = 0;
  int height_ = 0;
  std::vector<int> parent_, left_, right_, depth_, lo_, hi_;
};

namespace detail {

inline std::vector<Rational> prefix_sums(const std::vector<Rational>& masses) {
  std::vector<Rational> pre(masses.size() + 1, Rational(0));
  for (std::size_t i = 0; i < masses.size(); ++i) pre[i + 1] = pre[i] + masses[i];
  return pre;
}

}  // namespace detail

/// Subtree mass of every key: μ of the keys under k, k included.
inline std::vector<Rational> subtree_masses(const SearchTree& t, const std::vector<Rational>& masses) {
  auto pre = detail::prefix_sums(masses);
  std::vector<Rational> out(static_cast<std::size_t>(t.size()));
  for (int k = 1; k <= t.size(); ++k) {
    out[static_cast<std::size_t>(k - 1)] =
        pre[static_cast<std::size_t>(t.subtree_hi(k))] - pre[static_cast<std::size_t>(t.subtree_lo(k) - 1)];
  }
  return out;
}

/// Each subtree together with its parent outweighs the sibling subtree.
inline bool has_median_property(const SearchTree& t, const std::vector<Rational>& masses) {
  auto sub = subtree_masses(t, masses);
  auto mass_of = [&](int k) { return k == 0 ? Rational(0) : sub[static_cast<std::size_t>(k - 1)]; };
  for (int k = 1; k <= t.size(); ++k) {
    const Rational& own = masses[static_cast<std::size_t>(k - 1)];
    const Rational l = mass_of(t.left(k)), r = mass_of(t.right(k));
    if (l + own < r || r + own < l) return false;
  }
  return true;
}

/// Root = smallest t with μ([lo,t]) ≥ μ([lo,hi])/2, recursively.
inline SearchTree build_median_bst(const std::vector<Rational>& masses) {
  const auto pre = detail::prefix_sums(masses);
  auto choose = [&](int lo, int hi) {
    const Rational half = (pre[static_cast<std::size_t>(hi)] - pre[static_cast<std::size_t>(lo - 1)]) / 2;
    const Rational& base = pre[static_cast<std::size_t>(lo - 1)];
    // first t in [lo,hi] with pre[t] - base >= half; prefix sums are nondecreasing
    auto it = std::lower_bound(pre.begin() + lo, pre.begin() + hi + 1, Rational(base + half));
    return static_cast<int>(it - pre.begin());
  };
  SearchTree t = SearchTree::from_chooser(static_cast<int>(masses.size()), choose);
  if (!has_median_property(t, masses)) throw PreconditionError("median tree lost the median property");
  return t;
}

/// Midpoint floor((lo+hi)/2) recursively.
inline SearchTree build_balanced_bst(int n) {
  return SearchTree::from_chooser(n, [](int lo, int hi) { return (lo + hi) / 2; });
}

struct OptimalTree {
  SearchTree tree;
  Rational delta_star;
};

/// Interval DP e(i,j) = min_k e(i,k-1) + e(k+1,j) + W(i,j), restricted to
/// Knuth's root window; ties go to the smallest root.
inline OptimalTree build_optimal_bst(const std::vector<Rational>& masses) {
  const int n = static_cast<int>(masses.size());
  if (n < 1) throw DomainError("search tree needs n >= 1");
  const auto pre = detail::prefix_sums(masses);
  const auto N = static_cast<std::size_t>(n) + 2;
  // cost[i][j] for 1 <= i <= j+1 <= n+1; empty intervals cost 0
  std::vector<std::vector<Rational>> cost(N, std::vector<Rational>(N, Rational(0)));
  std::vector<std::vector<int>> root(N, std::vector<int>(N, 0));
  for (int i = 1; i <= n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    cost[ui][ui] = masses[ui - 1];
    root[ui][ui] = i;
  }
  for (int len = 2; len <= n; ++len) {
    for (int i = 1; i + len - 1 <= n; ++i) {
      const int j = i + len - 1;
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      const int k_lo = root[ui][uj - 1], k_hi = root[ui + 1][uj];
      Rational best;
      int best_k = 0;
      for (int k = k_lo; k <= k_hi; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        Rational c = (k > i ? cost[ui][uk - 1] : Rational(0)) + (k < j ? cost[uk + 1][uj] : Rational(0));
        if (best_k == 0 || c < best) {
          best = std::move(c);
          best_k = k;
        }
      }
      cost[ui][uj] = best + (pre[uj] - pre[ui - 1]);
      root[ui][uj] = best_k;
    }
  }
  SearchTree t = SearchTree::from_chooser(
      n, [&](int lo, int hi) { return root[static_cast<std::size_t>(lo)][static_cast<std::size_t>(hi)]; });
  Rational total = pre[static_cast<std::size_t>(n)];
  return {std::move(t), Rational(cost[1][static_cast<std::size_t>(n)] - total)};
}

/// Δ(T;μ) = Σ_v μ(v) depth(v).
inline Rational expected_depth(const SearchTree& t, const std::vector<Rational>& masses) {
  if (static_cast<int>(masses.size()) != t.size()) throw DomainError("tree and marginal sizes differ");
  Rational total = 0;
  for (int k = 1; k <= t.size(); ++k) total += masses[static_cast<std::size_t>(k - 1)] * t.depth(k);
  return total;
}

/// β_j = μ(depth ≥ j) for j = 1..height; entry j-1 holds β_j.
inline std::vector<Rational> level_mass_profile(const SearchTree& t, const std::vector<Rational>& masses) {
  if (static_cast<int>(masses.size()) != t.size()) throw DomainError("tree and marginal sizes differ");
  std::vector<Rational> at_depth(static_cast<std::size_t>(t.height()) + 1, Rational(0));
  for (int k = 1; k <= t.size(); ++k) at_depth[static_cast<std::size_t>(t.depth(k))] += masses[static_cast<std::size_t>(k - 1)];
  std::vector<Rational> beta(static_cast<std::size_t>(t.height()), Rational(0));
  Rational running = 0;
  for (int j = t.height(); j >= 1; --j) {
    running += at_depth[static_cast<std::size_t>(j)];
    beta[static_cast<std::size_t>(j - 1)] = running;
  }
  return beta;
}

/// All pairwise lcas of Q; |result| ≤ |Q| - 1.
inline std::set<int> lca_set(const SearchTree& t, const std::vector<int>& q) {
  std::set<int> keys(q.begin(), q.end());
  if (keys.size() < 2) throw DomainError("lca_set needs at least two distinct keys");
  std::vector<int> ks(keys.begin(), keys.end());
  std::set<int> out;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (std::size_t j = i + 1; j < ks.size(); ++j) out.insert(t.lca(ks[i], ks[j]));
  }
  if (out.size() > ks.size() - 1) throw PreconditionError("lca set larger than |Q| - 1");
  return out;
}

/// Shannon entropy in bits (floating point; the only inexact quantity here).
inline double entropy_bits(const std::vector<Rational>& masses) {
  double h = 0;
  for (const auto& m : masses) {
    if (m == 0) continue;
    const double p = m.convert_to<double>();
    h -= p * std::log2(p);
  }
  return h;
}

/// Exact certificate for Δ ≤ H: μ(v)·2^depth(v) ≤ 1 at every key.
inline bool depth_within_entropy_bound(const SearchTree& t, const std::vector<Rational>& masses) {
  for (int k = 1; k <= t.size(); ++k) {
    Rational scaled = masses[static_cast<std::size_t>(k - 1)];
    for (int i = 0; i < t.depth(k); ++i) scaled *= 2;
    if (scaled > 1) return false;
  }
  return true;
}

/// Depth vectors (index k-1 = depth of key k) of every BST on n keys.
inline std::vector<std::vector<int>> enumerate_bst_depths(int n) {
  std::function<std::vector<std::vector<int>>(int, int)> rec = [&](int lo, int hi) {
    std::vector<std::vector<int>> out;
    if (lo > hi) {
      out.emplace_back();
      return out;
    }
    for (int k = lo; k <= hi; ++k) {
      auto ls = rec(lo, k - 1);
      auto rs = rec(k + 1, hi);
      for (const auto& l : ls) {
        for (const auto& r : rs) {
          std::vector<int> d;
          for (int x : l) d.push_back(x + 1);
          d.push_back(0);
          for (int x : r) d.push_back(x + 1);
          out.push_back(std::move(d));
        }
      }
    }
    return out;
  };
  return rec(1, n);
}

/// min over all BSTs of Σ μ(v) depth(v), by exhaustive enumeration.
inline Rational exhaustive_optimal_depth(const std::vector<Rational>& masses) {
  Rational best = -1;
  for (const auto& d : enumerate_bst_depths(static_cast<int>(masses.size()))) {
    Rational c = 0;
    for (std::size_t i = 0; i < d.size(); ++i) c += masses[i] * d[i];
    if (best < 0 || c < best) best = c;
  }
  return best;
}

}  // namespace bdpt
