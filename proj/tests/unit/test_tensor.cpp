#include <gtest/gtest.h>

#include "rpwalk/tensor.hpp"
#include "support/oracle.hpp"

using namespace rpwalk;

namespace {

LieElement random_lie(oracle::Gen& g, int d, int N, double scale) {
  LieElement a(d, N);
  for (int m = 1; m <= N; ++m)
    for (auto& x : a.level(m)) x = g.real(-scale, scale);
  return a;
}

}  // namespace

TEST(Tensor, ShapeLimits) {
  EXPECT_THROW(TensorSeries(0, 2), DimensionError);
  EXPECT_THROW(TensorSeries(2, 0), DimensionError);
  EXPECT_THROW(TensorSeries(2, kMaxDepth + 1), DimensionError);
  TensorSeries t(3, 2);
  EXPECT_EQ(t.size(), 1u + 3u + 9u);
  EXPECT_EQ(t.level(2).size(), 9u);
}

TEST(Tensor, MismatchedShapesThrow) {
  GroupElement a(2, 2), b(2, 3);
  EXPECT_THROW(a * b, DimensionError);
}

TEST(Tensor, ExpOfBasisProductHasHalfBracket) {
  LieElement e1(2, 2), e2(2, 2);
  e1.level(1)[0] = 1.0;
  e2.level(1)[1] = 1.0;
  const auto l = log(exp(e1) * exp(e2));
  EXPECT_DOUBLE_EQ(l.level(1)[0], 1.0);
  EXPECT_DOUBLE_EQ(l.level(1)[1], 1.0);
  EXPECT_DOUBLE_EQ(l.level(2)[1], 0.5);   // (1,2)
  EXPECT_DOUBLE_EQ(l.level(2)[2], -0.5);  // (2,1)
  EXPECT_DOUBLE_EQ(l.level(2)[0], 0.0);
}

TEST(Tensor, LogOfNonGroupThrows) {
  TensorSeries s(2, 2);
  s.scalar() = 2.0;
  EXPECT_THROW(log(s), DomainError);
  EXPECT_THROW(GroupElement::from_series(s), DomainError);
}

TEST(Tensor, MatchesWordMapReference) {
  oracle::Gen g(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = g.integer(1, 3), N = g.integer(1, 4);
    const auto a = random_lie(g, d, N, 1.0), b = random_lie(g, d, N, 1.0);
    const auto prod = exp(a) * exp(b);
    const auto ra = oracle::exp(oracle::from_flat(a.coordinates(), d, N), N);
    const auto rb = oracle::exp(oracle::from_flat(b.coordinates(), d, N), N);
    const auto rp = oracle::mul(ra, rb, N);
    const auto flat = oracle::flat(rp, d, N);
    const auto c = prod.series().coefficients();
    for (std::size_t i = 0; i < flat.size(); ++i) ASSERT_NEAR(c[i + 1], flat[i], 1e-12);
    const auto rl = oracle::flat(oracle::log(rp, N), d, N);
    const auto l = log(prod).coordinates();
    for (std::size_t i = 0; i < rl.size(); ++i) ASSERT_NEAR(l[i], rl[i], 1e-11);
  }
}

// Randomized algebraic identities.
TEST(TensorProperty, GroupLaws) {
  oracle::Gen g(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = g.integer(1, 3), N = g.integer(1, 4);
    const auto x = exp(random_lie(g, d, N, 1.5)), y = exp(random_lie(g, d, N, 1.5)),
               z = exp(random_lie(g, d, N, 1.5));
    ASSERT_LE(max_abs_diff((x * y) * z, x * (y * z)), 1e-10);
    const auto a = random_lie(g, d, N, 1.5);
    ASSERT_LE(max_abs_diff(log(exp(a)), a), 1e-10);
    ASSERT_LE(max_abs_diff(exp(log(x)), x), 1e-10);
    ASSERT_LE(max_abs_diff(x * inverse(x), GroupElement(d, N)), 1e-10);
    const double lam = g.real(-2.0, 2.0);
    ASSERT_LE(max_abs_diff(dilate(lam, x * y), dilate(lam, x) * dilate(lam, y)), 1e-10);
    ASSERT_LE(max_abs_diff(dilate(lam, log(x)), log(dilate(lam, x))), 1e-10);
  }
}

TEST(Tensor, ProjectAndCoordinates) {
  LieElement a(2, 3);
  a.level(1)[1] = 3.0;
  a.level(3)[5] = -1.0;
  EXPECT_EQ(project(1, a), (std::vector<double>{0.0, 3.0}));
  EXPECT_EQ(project(3, a)[5], -1.0);
  EXPECT_THROW(project(4, a), RangeError);
  const auto c = a.coordinates();
  EXPECT_EQ(c.size(), 2u + 4u + 8u);
  EXPECT_EQ(LieElement::from_coordinates(2, 3, c), a);
}
