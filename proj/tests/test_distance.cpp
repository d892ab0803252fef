#include "bdpt/distance.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace bdpt;
namespace tsup = bdpt::testing;

namespace {

Rational R(long long p, long long q = 1) { return Rational(p, q); }
std::vector<Rational> uniform(int n) { return std::vector<Rational>(static_cast<std::size_t>(n), R(1, n)); }
GridFunction square_example() { return GridFunction::from_ints(Shape({2, 2}), std::vector<int>{0, 1, 1, 0}); }

Rational fix_mass(const ProductDistribution& d, const DistanceReport& rep) { return d.mass(rep.fix_set); }

}  // namespace

TEST(ExactDistanceLine, KnownValues) {
  Quasimetric q3(BoundingFamily::monotone({3}));
  auto rev = exact_distance_line(GridFunction::line({3, 2, 1}), q3, uniform(3));
  EXPECT_EQ(rev.dist, R(2, 3));
  EXPECT_EQ(rev.fix_set.size(), 2u);
  auto mono = exact_distance_line(GridFunction::line({1, 1, 4}), q3, uniform(3));
  EXPECT_EQ(mono.dist, R(0));
  EXPECT_TRUE(mono.fix_set.empty());
  Quasimetric q4(BoundingFamily::monotone({4}));
  EXPECT_EQ(exact_distance_line(GridFunction::line({1, 3, 2, 4}), q4, uniform(4)).dist, R(1, 4));
}

TEST(ExactDistanceLine, LipschitzAndWeighted) {
  Quasimetric q(BoundingFamily::lipschitz({3}, 1));
  // (0,1,3): neither pair containing 3 is feasible, so 3 or both others go
  EXPECT_EQ(exact_distance_line(GridFunction::line({0, 1, 3}), q, {R(1, 2), R(1, 4), R(1, 4)}).dist, R(1, 4));
  EXPECT_EQ(exact_distance_line(GridFunction::line({0, 1, 3}), q, {R(1, 4), R(1, 4), R(1, 2)}).dist, R(1, 2));
  // dropping the middle or both ends costs 1/2 either way
  EXPECT_EQ(exact_distance_line(GridFunction::line({0, 5, 0}), q, {R(1, 4), R(1, 2), R(1, 4)}).dist, R(1, 2));
}

TEST(ExactDistanceBruteforce, SquareExample) {
  auto d = ProductDistribution::uniform(Shape({2, 2}));
  Quasimetric q(BoundingFamily::monotone({2, 2}));
  auto rep = exact_distance_bruteforce(square_example(), q, d);
  EXPECT_EQ(rep.dist, R(1, 4));
  EXPECT_EQ(rep.fix_set, (std::vector<Point>{{2, 2}}));
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_TRUE(is_member(*rep.witness, q.family()));
}

TEST(ExactDistanceBruteforce, CapExceeded) {
  Shape s({5, 5});
  Quasimetric q(BoundingFamily::monotone({5, 5}));
  GridFunction f(s, std::vector<Rational>(s.size(), Rational(0)));
  EXPECT_THROW(exact_distance_bruteforce(f, q, ProductDistribution::uniform(s)), SizeError);
  EXPECT_NO_THROW(exact_distance_bruteforce(f, q, ProductDistribution::uniform(s), false, 25));
}

TEST(ExactDistance, LineAgreesWithBruteforce) {
  Rng rng = derive_stream(61, 0);
  for (int k = 0; k < 500; ++k) {
    const int n = tsup::uniform_int(rng, 1, 12);
    auto fam = tsup::family_of_kind(tsup::uniform_int(rng, 0, 2), {n}, rng);
    Quasimetric q(fam);
    ProductDistribution d({tsup::random_marginal(rng, n)});
    auto f = tsup::random_function(Shape({n}), 5, rng);
    auto line = exact_distance_line(f, q, d.marginal(0));
    auto brute = exact_distance_bruteforce(f, q, d);
    EXPECT_EQ(line.dist, brute.dist);
    EXPECT_EQ(fix_mass(d, line), line.dist);
    ASSERT_TRUE(line.witness.has_value());
    EXPECT_TRUE(is_member(*line.witness, fam));
  }
}

TEST(ExactDistance, WitnessDiffersOnlyOnFixSet) {
  Rng rng = derive_stream(62, 0);
  for (int k = 0; k < 200; ++k) {
    std::vector<int> sides{tsup::uniform_int(rng, 1, 3), tsup::uniform_int(rng, 1, 3), tsup::uniform_int(rng, 1, 2)};
    auto fam = tsup::family_of_kind(tsup::uniform_int(rng, 0, 2), sides, rng);
    Quasimetric q(fam);
    auto d = tsup::random_distribution(rng, sides);
    auto f = tsup::random_function(Shape(sides), 4, rng);
    auto rep = exact_distance(f, q, d);
    ASSERT_TRUE(rep.witness.has_value());
    EXPECT_TRUE(is_member(*rep.witness, fam));
    EXPECT_EQ(fix_mass(d, rep), rep.dist);
    std::set<Point> fixes(rep.fix_set.begin(), rep.fix_set.end());
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!fixes.count(f.shape().point(i))) {
        EXPECT_EQ((*rep.witness)[i], f[i]);
      }
    }
    // the fix set is a vertex cover of the violation graph
    auto vg = build_violation_graph(f, q, false);
    for (auto [a, b] : vg.edges) {
      EXPECT_TRUE(fixes.count(f.shape().point(a)) || fixes.count(f.shape().point(b)));
    }
  }
}

TEST(ClosestExtension, KnownValues) {
  Quasimetric q(BoundingFamily::monotone({3}));
  auto id = GridFunction::line({1, 2, 3});
  std::vector<Point> all{{1}, {2}, {3}};
  EXPECT_EQ(closest_extension(id, q, all), id);

  auto g = closest_extension(GridFunction::line({3, 2, 1}), q, std::vector<Point>{{3}});
  EXPECT_TRUE(is_member(g, q.family()));
  EXPECT_EQ(g[2], R(1));

  auto z = closest_extension(GridFunction::line({3, 2, 1}), q, std::vector<Point>{});
  EXPECT_TRUE(is_member(z, q.family()));

  EXPECT_THROW(closest_extension(GridFunction::line({3, 2, 1}), q, std::vector<Point>{{1}, {3}}), PreconditionError);
}

TEST(ClosestExtension, PositiveLowerBoundsWithEmptyKeep) {
  // l = 1 everywhere: the zero function is not a member
  BoundingFamily fam({BoundingFamily::Axis{{ExtRational(1), ExtRational(1)}, {ExtRational::infinity(), ExtRational(3)}}});
  Quasimetric q(fam);
  auto z = closest_extension(GridFunction::line({0, 0, 0}), q, std::vector<Point>{});
  EXPECT_TRUE(is_member(z, fam));
}

TEST(DirectionalDistance, MembersAreZero) {
  Rng rng = derive_stream(63, 0);
  for (int k = 0; k < 50; ++k) {
    std::vector<int> sides{3, 2, 2};
    auto fam = tsup::family_of_kind(tsup::uniform_int(rng, 0, 2), sides, rng);
    Quasimetric q(fam);
    auto d = tsup::random_distribution(rng, sides);
    auto f = tsup::random_member(fam, Shape(sides), rng);
    for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(directional_distance(f, q, d, r), R(0));
  }
}

TEST(DimensionReduction, SquareExample) {
  auto d = ProductDistribution::uniform(Shape({2, 2}));
  Quasimetric q(BoundingFamily::monotone({2, 2}));
  auto rep = check_dimension_reduction(square_example(), q, d);
  EXPECT_EQ(rep.dist, R(1, 4));
  EXPECT_EQ(rep.per_axis, (std::vector<Rational>{R(1, 4), R(1, 4)}));
  EXPECT_EQ(rep.sum, R(1, 2));
  EXPECT_TRUE(rep.lower_ok);
  EXPECT_TRUE(rep.upper_ok);
}

TEST(DimensionReduction, MemberIsAllZero) {
  auto d = ProductDistribution::uniform(Shape({2, 3}));
  Quasimetric q(BoundingFamily::lipschitz({2, 3}, 1));
  auto rep = check_dimension_reduction(GridFunction::from_ints(Shape({2, 3}), std::vector<int>{0, 1, 2, 1, 2, 3}), q, d);
  EXPECT_EQ(rep.dist, R(0));
  EXPECT_EQ(rep.sum, R(0));
  EXPECT_TRUE(rep.lower_ok && rep.upper_ok);
}

TEST(DimensionReduction, RandomSweepLowerBound) {
  Rng rng = derive_stream(64, 0);
  for (int k = 0; k < 300; ++k) {
    std::vector<int> sides{3, 3};
    auto fam = tsup::family_of_kind(tsup::uniform_int(rng, 0, 2), sides, rng);
    Quasimetric q(fam);
    auto d = k % 3 ? tsup::random_distribution(rng, sides) : ProductDistribution::uniform(Shape(sides));
    auto rep = check_dimension_reduction(tsup::random_function(Shape(sides), 3, rng), q, d);
    EXPECT_TRUE(rep.lower_ok);
    EXPECT_TRUE(rep.upper_ok);
  }
}

TEST(Noviol, KnownValues) {
  Quasimetric q(BoundingFamily::monotone({2, 2}));
  // f(.,1) = (0,0), f(.,2) = (-5,-5)
  auto f = GridFunction::from_ints(Shape({2, 2}), std::vector<int>{0, -5, 0, -5});
  auto res = noviol_witness(f, q, 0);
  EXPECT_TRUE(res.holds);
  // two vertical edges plus the diagonal (1,1)-(2,2)
  EXPECT_EQ(res.edges, 3u);
  EXPECT_EQ(res.max_weight, R(10));
  EXPECT_EQ(res.min_cardinality, 2u);

  auto id = GridFunction::from_ints(Shape({2, 2}), std::vector<int>{0, 1, 1, 2});
  EXPECT_TRUE(noviol_witness_check(id, q, 1));

  // axis-1 line (1,1)-(2,1) violates, so f is not 1-good
  auto bad = GridFunction::from_ints(Shape({2, 2}), std::vector<int>{1, 1, 0, 1});
  EXPECT_THROW(noviol_witness_check(bad, q, 0), PreconditionError);
}

TEST(Noviol, SweepOneGoodThreeByTwo) {
  Quasimetric q(BoundingFamily::monotone({3, 2}));
  Shape s({3, 2});
  std::size_t checked = 0;
  for (std::size_t code = 0; code < tsup::int_pow(3, 6); ++code) {
    auto f = tsup::function_from_code(s, 3, code);
    if (!is_r_good(f, q, 0)) continue;
    ++checked;
    EXPECT_TRUE(noviol_witness_check(f, q, 0)) << code;
  }
  EXPECT_GT(checked, 0u);
}

TEST(BruteForceCap, EnvironmentOverride) {
  ::setenv("BDPT_CAP_POINTS", "30", 1);
  EXPECT_EQ(brute_force_cap(), 30u);
  ::setenv("BDPT_CAP_POINTS", "500", 1);
  EXPECT_EQ(brute_force_cap(), 64u);
  ::setenv("BDPT_CAP_POINTS", "junk", 1);
  EXPECT_EQ(brute_force_cap(), kBruteForceCap);
  ::unsetenv("BDPT_CAP_POINTS");
}
