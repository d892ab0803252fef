#include "bdpt/bloat.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace bdpt;
namespace tsup = bdpt::testing;

namespace {

Rational R(long long p, long long q = 1) { return Rational(p, q); }

}  // namespace

TEST(Rationalize, KnownValues) {
  auto u = BloatMap::rationalize(ProductDistribution::uniform(Shape({2})));
  EXPECT_EQ(u.common_denominator_n(), 2);
  EXPECT_EQ(u.weights(0), (std::vector<int>{1, 1}));

  auto t = BloatMap::rationalize(ProductDistribution({{R(1, 3), R(2, 3)}}));
  EXPECT_EQ(t.common_denominator_n(), 3);
  EXPECT_EQ(t.weights(0), (std::vector<int>{1, 2}));
  EXPECT_EQ(t.phi(0, 1), 1);
  EXPECT_EQ(t.phi(0, 2), 2);
  EXPECT_EQ(t.phi(0, 3), 2);

  auto z = BloatMap::rationalize(ProductDistribution({{R(0), R(1)}}));
  EXPECT_EQ(z.weights(0), (std::vector<int>{0, 1}));
  for (int k = 1; k <= z.common_denominator_n(); ++k) EXPECT_EQ(z.phi(0, k), 2);
}

TEST(Rationalize, CommonDenominatorAcrossAxes) {
  auto bm = BloatMap::rationalize(ProductDistribution({{R(1, 2), R(1, 2)}, {R(1, 3), R(1, 3), R(1, 3)}}));
  EXPECT_EQ(bm.common_denominator_n(), 6);
  EXPECT_EQ(bm.weights(0), (std::vector<int>{3, 3}));
  EXPECT_EQ(bm.weights(1), (std::vector<int>{2, 2, 2}));
  EXPECT_EQ(bm.target().sides(), (std::vector<int>{6, 6}));
}

TEST(Rationalize, CapReportsN) {
  ProductDistribution d({{R(1, 1009), R(1008, 1009)}, {R(1, 1013), R(1012, 1013)}});
  try {
    BloatMap::rationalize(d);
    FAIL() << "expected SizeError";
  } catch (const SizeError& e) {
    EXPECT_NE(std::string(e.what()).find("1022117"), std::string::npos) << e.what();
  }
}

TEST(Rationalize, PreimagesPartitionTarget) {
  Rng rng = derive_stream(71, 0);
  for (int k = 0; k < 50; ++k) {
    auto d = tsup::random_distribution(rng, {3, 2}, 4);
    auto bm = BloatMap::rationalize(d);
    std::size_t covered = 0;
    for (std::size_t i = 0; i < d.shape().size(); ++i) {
      auto pre = bm.preimage(d.shape().point(i));
      covered += pre.size();
      // uniform mass of the cuboid equals the source mass
      EXPECT_EQ(Rational(static_cast<long long>(pre.size()), static_cast<long long>(bm.target().size())),
                d.mass({d.shape().point(i)}));
      for (auto t : pre) EXPECT_EQ(bm.map_index(t), i);
    }
    EXPECT_EQ(covered, bm.target().size());
  }
}

TEST(FExt, KnownValues) {
  auto same = BloatMap::rationalize(ProductDistribution::uniform(Shape({3})));
  auto f = GridFunction::line({4, 1, 9});
  EXPECT_EQ(build_f_ext(f, same), f);
  auto bm = BloatMap::rationalize(ProductDistribution({{R(1, 3), R(2, 3)}}));
  EXPECT_EQ(build_f_ext(GridFunction::line({5, 1}), bm).values(), (std::vector<Rational>{5, 1, 1}));
}

TEST(DExt, SameCuboidIsZeroBothWays) {
  auto bm = BloatMap::rationalize(ProductDistribution({{R(1, 3), R(2, 3)}, {R(1, 2), R(1, 2)}}));
  Quasimetric q(BoundingFamily::monotone({2, 2}));
  BloatedMetric dx(q, bm);
  // N = 6: axis 1 cuboids {1,2},{3..6}; axis 2 cuboids {1..3},{4..6}
  EXPECT_EQ(dx({1, 1}, {2, 3}), ExtRational(0));
  EXPECT_EQ(dx({2, 3}, {1, 1}), ExtRational(0));
  EXPECT_EQ(dx({3, 1}, {1, 1}), ExtRational::infinity());
  EXPECT_EQ(dx({1, 1}, {3, 6}), ExtRational(0));
}

TEST(VerifyBloat, KnownValues) {
  Quasimetric q(BoundingFamily::monotone({2}));
  auto rep = verify_bloat_equivalence(GridFunction::line({5, 1}), q, ProductDistribution({{R(1, 3), R(2, 3)}}));
  EXPECT_EQ(rep.n, 3);
  EXPECT_EQ(rep.dist_source, R(1, 3));
  EXPECT_EQ(rep.dist_bloated, R(1, 3));
  EXPECT_TRUE(rep.equal);
  EXPECT_EQ(rep.line_failures, 0u);

  auto mem = verify_bloat_equivalence(GridFunction::line({1, 5}), q, ProductDistribution({{R(1, 3), R(2, 3)}}));
  EXPECT_EQ(mem.dist_source, R(0));
  EXPECT_EQ(mem.dist_bloated, R(0));
}

TEST(VerifyBloat, RandomSmallInstances) {
  Rng rng = derive_stream(72, 0);
  std::size_t checked = 0;
  for (int k = 0; k < 400 && checked < 200; ++k) {
    std::vector<int> sides{tsup::uniform_int(rng, 1, 4)};
    if (k % 2) sides.push_back(tsup::uniform_int(rng, 1, 2));
    auto fam = tsup::family_of_kind(tsup::uniform_int(rng, 0, 2), sides, rng);
    Quasimetric q(fam);
    auto d = tsup::random_distribution(rng, sides, 2);
    // 2D instances need the bloated grid inside the brute-force cap
    if (sides.size() > 1 && BloatMap::rationalize(d).target().size() > brute_force_cap()) continue;
    ++checked;
    auto f = tsup::random_function(Shape(sides), 3, rng);
    auto rep = verify_bloat_equivalence(f, q, d);
    EXPECT_TRUE(rep.equal) << rep.dist_source << " vs " << rep.dist_bloated;
    EXPECT_EQ(rep.line_failures, 0u);
  }
  EXPECT_EQ(checked, 200u);
}

TEST(VerifyBloat, LineDpBeyondBruteForce) {
  Quasimetric q(BoundingFamily::lipschitz({3}, 1));
  ProductDistribution d({{R(1, 30), R(3, 10), R(2, 3)}});
  auto rep = verify_bloat_equivalence(GridFunction::line({0, 4, 1}), q, d);
  EXPECT_FALSE(rep.used_bruteforce);
  EXPECT_EQ(rep.n, 30);
  EXPECT_TRUE(rep.equal);
  EXPECT_EQ(rep.dist_source, R(3, 10));
}

TEST(VerifyBloat, TooLargeForEitherOracle) {
  Quasimetric q(BoundingFamily::monotone({2, 2}));
  ProductDistribution d({{R(1, 7), R(6, 7)}, {R(1, 5), R(4, 5)}});
  EXPECT_THROW(verify_bloat_equivalence(GridFunction::from_ints(Shape({2, 2}), std::vector<int>{0, 0, 0, 0}), q, d),
               SizeError);
}
