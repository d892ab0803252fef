#include "bdpt/grid.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace bdpt;
namespace tsup = bdpt::testing;

namespace {

Rational R(long long p, long long q = 1) { return Rational(p, q); }

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("3/6"), R(1, 2));
  EXPECT_EQ(parse_rational("-4"), R(-4));
  EXPECT_EQ(parse_rational("0.25"), R(1, 4));
  EXPECT_EQ(to_string(R(6, 4)), "3/2");
  EXPECT_EQ(to_string(R(-2)), "-2");
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
}

TEST(ExtRational, InfinityArithmetic) {
  const ExtRational inf = ExtRational::infinity();
  EXPECT_EQ(inf + ExtRational(5), inf);
  EXPECT_TRUE(ExtRational::negative_infinity() < ExtRational(-1000));
  EXPECT_TRUE(ExtRational(R(1, 3)) < inf);
  EXPECT_THROW(inf + ExtRational::negative_infinity(), DomainError);
  EXPECT_EQ(parse_ext_rational("-inf"), ExtRational::negative_infinity());
  EXPECT_EQ(to_string(inf), "inf");
}

TEST(Shape, IndexingIsRowMajorWithAxisOneOutermost) {
  Shape s({2, 3});
  EXPECT_EQ(s.size(), 6u);
  EXPECT_EQ(s.index({1, 1}), 0u);
  EXPECT_EQ(s.index({1, 3}), 2u);
  EXPECT_EQ(s.index({2, 1}), 3u);
  EXPECT_EQ(s.point(5), (Point{2, 3}));
  EXPECT_THROW(s.index({3, 1}), DomainError);
  EXPECT_THROW(Shape({0}), DomainError);
}

TEST(Shape, OverflowAndCapFailLoudly) {
  EXPECT_THROW(Shape(std::vector<int>(40, 2)), SizeError);
  EXPECT_THROW(Shape({1001, 1001}), SizeError);
}

TEST(Mass, KnownValues) {
  auto uni = ProductDistribution::uniform(Shape({2, 2}));
  EXPECT_EQ(uni.mass({{1, 1}, {1, 2}, {2, 1}, {2, 2}}), R(1));
  EXPECT_EQ(uni.mass({{1, 1}}), R(1, 4));
  ProductDistribution d({{R(1, 3), R(2, 3)}, {R(1, 2), R(1, 2)}});
  EXPECT_EQ(d.mass({{2, 1}}), R(1, 3));
  EXPECT_THROW(d.mass({{3, 1}}), DomainError);
}

TEST(Mass, AdditiveAndTotalOne) {
  Rng rng = derive_stream(5, 0);
  auto d = tsup::random_distribution(rng, {3, 2, 4});
  Shape s = d.shape();
  std::vector<Point> a, b, all;
  for (std::size_t i = 0; i < s.size(); ++i) {
    (i % 3 == 0 ? a : b).push_back(s.point(i));
    all.push_back(s.point(i));
  }
  EXPECT_EQ(d.mass(a) + d.mass(b), d.mass(all));
  EXPECT_EQ(d.mass(all), R(1));
}

TEST(ProductDistribution, RejectsBadMarginals) {
  EXPECT_THROW(ProductDistribution({{R(1, 2), R(1, 3)}}), DomainError);
  EXPECT_THROW(ProductDistribution({{R(3, 2), R(-1, 2)}}), DomainError);
}

TEST(Sample, PointMassIsDegenerate) {
  ProductDistribution d({{R(1), R(0)}, {R(1), R(0), R(0)}});
  Rng rng = derive_stream(1, 0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(d.sample(rng), (Point{1, 1}));
}

TEST(Sample, UniformFrequencyWithinThreeSigma) {
  auto d = ProductDistribution::uniform(Shape({2}));
  Rng rng = derive_stream(2024, 0);
  const int trials = 100000;
  int ones = 0;
  for (int i = 0; i < trials; ++i) ones += d.sample(rng)[0] == 1;
  const double sigma = std::sqrt(trials * 0.25);
  EXPECT_LT(std::abs(ones - trials / 2.0), 3 * sigma);
}

TEST(Sample, DeterministicGivenSeed) {
  ProductDistribution d({{R(1, 7), R(2, 7), R(4, 7)}, {R(1, 2), R(1, 2)}});
  Rng a = derive_stream(77, 3), b = derive_stream(77, 3);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(d.sample(a), d.sample(b));
}

TEST(Sample, ChiSquareOnSkewedMarginal) {
  // 4 cells, df = 3: the 0.999 quantile is 16.27
  ProductDistribution d({{R(1, 10), R(2, 10), R(3, 10), R(4, 10)}});
  Rng rng = derive_stream(9, 0);
  const int trials = 40000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < trials; ++i) ++counts[static_cast<std::size_t>(d.sample(rng)[0] - 1)];
  double chi = 0;
  for (int k = 0; k < 4; ++k) {
    const double e = trials * (k + 1) / 10.0;
    chi += (counts[static_cast<std::size_t>(k)] - e) * (counts[static_cast<std::size_t>(k)] - e) / e;
  }
  EXPECT_LT(chi, 16.27);
}

TEST(Sample, HugeDenominatorsStillExact) {
  const BigInt big = BigInt(1) << 80;
  ProductDistribution d({{Rational(BigInt(1), big), Rational(big - 1, big)}});
  Rng rng = derive_stream(4, 0);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(d.sample(rng)[0], 2);
}

TEST(RestrictLine, KnownValues) {
  auto f = GridFunction::from_ints(Shape({2, 2}), std::vector<int>{1, 2, 3, 4});
  EXPECT_EQ(f.restrict_line(0, {1, 1}).values(), (std::vector<Rational>{1, 3}));
  EXPECT_EQ(f.restrict_line(1, {2, 1}).values(), (std::vector<Rational>{3, 4}));
  // coordinate r of base is ignored
  EXPECT_EQ(f.restrict_line(0, {2, 1}), f.restrict_line(0, {1, 1}));
  auto g = GridFunction::line({5, 6, 7});
  EXPECT_EQ(g.restrict_line(0, {2}), g);
}

TEST(PartialDerivative, KnownValues) {
  auto id = GridFunction::line({1, 2, 3});
  EXPECT_EQ(id.partial_derivative(0, {1}), R(1));
  EXPECT_EQ(GridFunction::line({4, 4, 4}).partial_derivative(0, {2}), R(0));
  EXPECT_EQ(GridFunction::line({0, 1, 3}).partial_derivative(0, {2}), R(2));
  EXPECT_THROW(id.partial_derivative(0, {3}), DomainError);
}
