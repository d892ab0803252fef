#include "bdpt/search_tree.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace bdpt;
namespace tsup = bdpt::testing;

namespace {

Rational R(long long p, long long q = 1) { return Rational(p, q); }
std::vector<Rational> uniform(int n) { return std::vector<Rational>(static_cast<std::size_t>(n), R(1, n)); }

}  // namespace

TEST(MedianBst, UniformThree) {
  auto t = build_median_bst(uniform(3));
  EXPECT_EQ(t.root(), 2);
  EXPECT_EQ(t.depths(), (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(expected_depth(t, uniform(3)), R(2, 3));
  EXPECT_EQ(exhaustive_optimal_depth(uniform(3)), R(2, 3));
}

TEST(MedianBst, SkewedPair) {
  std::vector<Rational> m{R(9, 10), R(1, 10)};
  auto t = build_median_bst(m);
  EXPECT_EQ(t.root(), 1);
  EXPECT_EQ(expected_depth(t, m), R(1, 10));
}

TEST(MedianBst, Singleton) {
  auto t = build_median_bst({R(1)});
  EXPECT_EQ(t.root(), 1);
  EXPECT_EQ(expected_depth(t, {R(1)}), R(0));
}

TEST(MedianBst, MedianPropertyOnRandomMarginals) {
  Rng rng = derive_stream(21, 0);
  for (int k = 0; k < 300; ++k) {
    auto m = tsup::random_marginal(rng, tsup::uniform_int(rng, 1, 40));
    auto t = build_median_bst(m);
    EXPECT_TRUE(has_median_property(t, m));
    EXPECT_TRUE(depth_within_entropy_bound(t, m));
  }
}

TEST(OptimalBst, KnownValues) {
  auto u = build_optimal_bst(uniform(3));
  EXPECT_EQ(u.delta_star, R(2, 3));
  auto p = build_optimal_bst({R(0), R(0), R(1), R(0)});
  EXPECT_EQ(p.delta_star, R(0));
  EXPECT_EQ(p.tree.root(), 3);
  // (1/2, 1/4, 1/4): rooting at 1 costs 1/4 + 2/4 = 3/4; rooting at 2 costs 1/2 + 1/4 = 3/4
  std::vector<Rational> m{R(1, 2), R(1, 4), R(1, 4)};
  auto o = build_optimal_bst(m);
  EXPECT_EQ(o.delta_star, R(3, 4));
  EXPECT_EQ(exhaustive_optimal_depth(m), R(3, 4));
  EXPECT_EQ(o.tree.root(), 1);
}

TEST(OptimalBst, MatchesExhaustiveUpToEight) {
  Rng rng = derive_stream(22, 0);
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k < 25; ++k) {
      auto m = tsup::random_marginal(rng, n);
      auto o = build_optimal_bst(m);
      EXPECT_EQ(o.delta_star, exhaustive_optimal_depth(m));
      EXPECT_EQ(expected_depth(o.tree, m), o.delta_star);
    }
  }
}

TEST(OptimalBst, BelowMedianBelowEntropy) {
  Rng rng = derive_stream(23, 0);
  for (int k = 0; k < 300; ++k) {
    auto m = tsup::random_marginal(rng, tsup::uniform_int(rng, 1, 32));
    auto o = build_optimal_bst(m);
    auto med = expected_depth(build_median_bst(m), m);
    EXPECT_LE(o.delta_star, med);
    EXPECT_LE(med.convert_to<double>(), entropy_bits(m) + 1e-12);
    EXPECT_LE(med, 5 * o.delta_star);
  }
}

TEST(OptimalBst, EnumerationCountsAreCatalan) {
  const std::size_t catalan[] = {1, 1, 2, 5, 14, 42, 132};
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(enumerate_bst_depths(n).size(), catalan[n]);
}

TEST(BalancedBst, KnownValues) {
  EXPECT_EQ(build_balanced_bst(1).depths(), (std::vector<int>{0}));
  auto t4 = build_balanced_bst(4);
  EXPECT_EQ(t4.root(), 2);
  EXPECT_EQ(t4.depths(), (std::vector<int>{1, 0, 1, 2}));
  for (int d : build_balanced_bst(7).depths()) EXPECT_LE(d, 2);
  for (int n = 1; n <= 200; ++n) {
    int lg = 0;
    while ((2 << lg) <= n) ++lg;
    EXPECT_EQ(build_balanced_bst(n).height(), lg) << n;
  }
}

TEST(ExpectedDepth, KnownValues) {
  auto t = build_balanced_bst(4);
  EXPECT_EQ(expected_depth(t, {R(0), R(1), R(0), R(0)}), R(0));
  EXPECT_EQ(expected_depth(build_median_bst(uniform(3)), uniform(3)), R(2, 3));
  EXPECT_EQ(expected_depth(t, uniform(4)), R(1));
}

TEST(RootPath, KnownValues) {
  auto med = build_median_bst(uniform(3));
  EXPECT_EQ(med.root_path(2), (std::vector<int>{2}));
  EXPECT_EQ(med.root_path(1), (std::vector<int>{1, 2}));
  EXPECT_EQ(build_balanced_bst(4).root_path(4), (std::vector<int>{4, 3, 2}));
}

TEST(LevelMassProfile, KnownValues) {
  EXPECT_EQ(level_mass_profile(build_median_bst(uniform(3)), uniform(3)), (std::vector<Rational>{R(2, 3)}));
  auto t = build_balanced_bst(4);
  for (const auto& b : level_mass_profile(t, {R(0), R(1), R(0), R(0)})) EXPECT_EQ(b, R(0));
  auto beta = level_mass_profile(t, uniform(4));
  EXPECT_EQ(beta, (std::vector<Rational>{R(3, 4), R(1, 4)}));
}

TEST(LevelMassProfile, SumsToExpectedDepth) {
  Rng rng = derive_stream(24, 0);
  for (int k = 0; k < 200; ++k) {
    auto m = tsup::random_marginal(rng, tsup::uniform_int(rng, 1, 30));
    auto t = build_median_bst(m);
    auto beta = level_mass_profile(t, m);
    Rational s = 0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
      s += beta[j];
      if (j > 0) {
        EXPECT_LE(beta[j], beta[j - 1]);
      }
    }
    EXPECT_EQ(s, expected_depth(t, m));
  }
}

TEST(Lca, KnownValues) {
  auto med = build_median_bst(uniform(3));
  EXPECT_EQ(med.lca(3, 3), 3);
  EXPECT_EQ(med.lca(1, 3), 2);
  EXPECT_EQ(lca_set(med, {1, 3}), (std::set<int>{2}));
}

TEST(Lca, SetBoundOnRandomQueries) {
  Rng rng = derive_stream(25, 0);
  for (int k = 0; k < 500; ++k) {
    const int n = tsup::uniform_int(rng, 2, 40);
    auto t = build_median_bst(tsup::random_marginal(rng, n));
    std::vector<int> q;
    for (int i = 0; i < tsup::uniform_int(rng, 2, 12); ++i) q.push_back(tsup::uniform_int(rng, 1, n));
    std::set<int> distinct(q.begin(), q.end());
    if (distinct.size() < 2) continue;
    EXPECT_LE(lca_set(t, q).size(), distinct.size() - 1);
  }
}

TEST(Dump, ShowsMassAndDepth) {
  auto med = build_median_bst(uniform(3));
  const std::string s = med.dump(uniform(3));
  EXPECT_NE(s.find("2:1/3@0"), std::string::npos) << s;
}

TEST(FromParents, RejectsNonBst) {
  EXPECT_NO_THROW(SearchTree::from_parents({2, 0, 2}));
  EXPECT_THROW(SearchTree::from_parents({3, 0, 2}), DomainError);
}
