#include <gtest/gtest.h>

#include "rpwalk/chen_lift.hpp"
#include "support/oracle.hpp"

using namespace rpwalk;

namespace {

std::vector<std::vector<double>> rows(const std::vector<double>& flat, int dim) {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < flat.size(); k += static_cast<std::size_t>(dim))
    out.emplace_back(flat.begin() + static_cast<long>(k), flat.begin() + static_cast<long>(k) + dim);
  return out;
}

}  // namespace

TEST(ChenLift, SignatureMatchesIteratedIntegrals) {
  oracle::Gen g(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = g.integer(1, 3), N = g.integer(1, 4), n = g.integer(1, 6);
    const auto samples = g.vec(static_cast<std::size_t>((n + 1) * d), 1.0);
    const auto path = lift_linear_chords(samples, d, N);
    const auto ref = oracle::flat(oracle::signature(rows(samples, d), N), d, N);
    const auto sig = signature(path);
    const auto c = sig.series().coefficients();
    for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_NEAR(c[i + 1], ref[i], 1e-12);
  }
}

TEST(ChenLift, SquareLoopEnclosesUnitArea) {
  const std::vector<double> square = {0, 0, 1, 0, 1, 1, 0, 1, 0, 0};
  const auto l = log(signature(lift_linear_chords(square, 2, 2)));
  EXPECT_NEAR(l.level(1)[0], 0.0, 1e-15);
  EXPECT_NEAR(l.level(2)[1], 1.0, 1e-15);
  EXPECT_NEAR(l.level(2)[2], -1.0, 1e-15);
}

TEST(ChenLift, StraightLineIsExponential) {
  const std::vector<double> line = {0, 0, 2, -1};
  LieElement v(2, 3);
  v.level(1)[0] = 2;
  v.level(1)[1] = -1;
  EXPECT_LE(max_abs_diff(signature(lift_linear_chords(line, 2, 3)), exp(v)), 1e-15);
}

// Chen: the increment over [s,u] is the product of those over [s,t], [t,u].
TEST(ChenLiftProperty, ChenIdentityAtArbitraryTimes) {
  oracle::Gen g(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = g.integer(1, 3), N = g.integer(1, 4), n = g.integer(1, 8);
    const auto path = lift_linear_chords(g.vec(static_cast<std::size_t>((n + 1) * d), 1.0), d, N);
    double ts[3] = {g.real(0, 1), g.real(0, 1), g.real(0, 1)};
    std::sort(ts, ts + 3);
    const auto lhs = increment(path, ts[0], ts[2]);
    const auto rhs = increment(path, ts[0], ts[1]) * increment(path, ts[1], ts[2]);
    ASSERT_LE(max_abs_diff(lhs, rhs), 1e-10);
  }
}

TEST(ChenLift, InterpolationIsGeodesic) {
  const auto path = lift_linear_chords(std::vector<double>{0, 0, 1, 1, 3, 0}, 2, 2);
  const auto mid = interpolate(path, 0.25);  // halfway along the first chord
  const auto l = log(mid);
  EXPECT_NEAR(l.level(1)[0], 0.5, 1e-15);
  EXPECT_NEAR(l.level(1)[1], 0.5, 1e-15);
  EXPECT_NEAR(l.level(2)[1], 0.0, 1e-15);
  EXPECT_LE(max_abs_diff(interpolate(path, 0.5), path.point(1)), 1e-15);
  EXPECT_THROW(interpolate(path, 1.5), RangeError);
  EXPECT_THROW(increment(path, 0.7, 0.2), RangeError);
}

TEST(ChenLift, LevelOneSamplesRecoverInput) {
  const std::vector<double> s = {0, 0, 1, 2, -1, 3};
  EXPECT_EQ(level_one_samples(lift_linear_chords(s, 2, 2)), s);
}

TEST(ChenLift, SerializeRoundTrip) {
  oracle::Gen g(9);
  const auto path = lift_linear_chords(g.vec(12, 1.0), 3, 3);
  const auto text = serialize(path);
  const auto back = parse_lifted_path(text);
  ASSERT_EQ(back.size(), path.size());
  EXPECT_EQ(back.interpolation(), path.interpolation());
  for (std::size_t k = 0; k < path.size(); ++k) EXPECT_LE(max_abs_diff(back.point(k), path.point(k)), 1e-15);
  EXPECT_EQ(serialize(back), text);
  EXPECT_THROW(parse_lifted_path("nonsense"), ParseError);
}

TEST(ChenLift, LogLinearPathsFollowGenerators) {
  LieElement a(2, 2);
  a.level(1)[0] = 1.0;
  a.level(2)[1] = 0.5;
  a.level(2)[2] = -0.5;
  const auto path = LiftedPath::from_generators({0.0, 1.0}, {a}, Interpolation::log_linear);
  EXPECT_LE(max_abs_diff(log(interpolate(path, 0.5)), 0.5 * a), 1e-15);
}
