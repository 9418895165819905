#include <gtest/gtest.h>

#include <cmath>

#include "rpwalk/rde_solver.hpp"
#include "support/oracle.hpp"

using namespace rpwalk;

TEST(RdeSolver, JacobianValidation) {
  auto value = [](std::span<const double> y, std::span<double> v) { v[0] = y[0] * y[0]; };
  auto good = [](std::span<const double> y, std::span<double> j) { j[0] = 2 * y[0]; };
  auto bad = [](std::span<const double> y, std::span<double> j) { j[0] = y[0]; };
  EXPECT_NO_THROW(VectorFieldSet(1, 1, value, good, "square"));
  EXPECT_THROW(VectorFieldSet(1, 1, value, bad, "square"), DomainError);
  EXPECT_LT(VectorFieldSet::planar_rotation(3, {{1, 2}, {2, 0}}).derivative_mismatch(), 1e-6);
  EXPECT_LT(VectorFieldSet::sigmoid(2, {{1, 0.5, -0.3, 2}}, {{0.1, -0.2}}).derivative_mismatch(), 1e-6);
}

// Commuting scalar field: Y_t = y0 exp(x_t) exactly up to the scheme's
// third-order local error.
TEST(RdeSolver, ScalarLinearConvergesToExponential) {
  const auto f = VectorFieldSet::linear(1, {{1.0}});
  oracle::Gen g(1);
  double prev_err = 1e9;
  for (int n : {16, 64, 256}) {
    std::vector<double> s(static_cast<std::size_t>(n + 1), 0.0);
    for (int k = 1; k <= n; ++k) s[static_cast<std::size_t>(k)] = std::sin(1.2 * k / n);  // monotone, so the local errors do not cancel
    const auto path = lift_linear_chords(s, 1, 2);
    const double y = rde_solve_step2_endpoint(path, f, std::vector<double>{2.0})[0];
    const double err = std::abs(y - 2.0 * std::exp(s.back()));
    EXPECT_LT(err, prev_err / 8.0 + 1e-14);  // order >= 2 in the mesh
    prev_err = err;
  }
}

TEST(RdeSolver, RotationFieldsTrackAreaTerm) {
  // One chord e1 then e2: the exact flow composes two rotations; the step-2
  // scheme sees the area through the level-2 increment.
  const auto f = VectorFieldSet::planar_rotation(3, {{1, 2}, {2, 0}});
  const std::vector<double> s = {0, 0, 0.01, 0, 0.01, 0.01};
  const auto path = lift_linear_chords(s, 2, 2);
  const std::vector<double> y0 = {1, 0.5, -0.25};
  const auto sol = rde_solve_step2(path, f, y0, 8);
  const auto ref = stratonovich_reference(f, s, std::vector<double>{0, 0.5, 1}, y0);
  // Heun on two steps is itself second order; compare with a fine Heun run.
  std::vector<double> fine;
  const int m = 2000;
  for (int k = 0; k <= m; ++k) fine.push_back(0.01 * std::min(1.0, 2.0 * k / m)), fine.push_back(0.01 * std::max(0.0, 2.0 * k / m - 1));
  std::vector<double> t(m + 1);
  for (int k = 0; k <= m; ++k) t[static_cast<std::size_t>(k)] = static_cast<double>(k) / m;
  const auto exact = stratonovich_reference(f, fine, t, y0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(sol.final_state()[i], exact.final_state()[i], 1e-7);
  EXPECT_EQ(ref.size(), 3u);
  double r0 = 0, r1 = 0;
  for (int i = 0; i < 3; ++i) {
    r0 += y0[static_cast<std::size_t>(i)] * y0[static_cast<std::size_t>(i)];
    r1 += sol.final_state()[i] * sol.final_state()[i];
  }
  EXPECT_NEAR(r1, r0, 1e-6);
}

TEST(RdeSolver, ErrorsAndDivergence) {
  const auto f = VectorFieldSet::linear(1, {{1.0}});
  const auto p1 = lift_linear_chords(std::vector<double>{0, 1}, 1, 1);
  EXPECT_THROW(rde_solve_step2(p1, f, std::vector<double>{1.0}), DomainError);
  const auto p2 = lift_linear_chords(std::vector<double>{0, 1}, 1, 2);
  EXPECT_THROW(rde_solve_step2(p2, f, std::vector<double>{1.0, 2.0}), DimensionError);
  EXPECT_THROW(rde_solve_step2(p2, f, std::vector<double>{1.0}, 0), RangeError);
  const auto blow = lift_linear_chords(std::vector<double>{0, 1e200}, 1, 2);
  EXPECT_THROW(rde_solve_step2(blow, VectorFieldSet::linear(1, {{1e200}}), std::vector<double>{1.0}),
               DivergenceError);
}

TEST(RdeSolver, PathIntegralIdentities) {
  oracle::Gen g(3);
  const auto s = g.vec(33, 1.0);
  std::vector<double> x(s);
  x[0] = 0.0;
  const auto p = lift_linear_chords(x, 1, 2);
  const auto I = path_integral(IntegrandSet::linear(1, 1, {{1.0}}), p);
  EXPECT_NEAR(I.final_state()[0], 0.5 * x.back() * x.back(), 1e-13);
  const auto q = lift_linear_chords(std::vector<double>{0, 0, 1, 0, 1, 1, 0, 1, 0, 0}, 2, 2);
  EXPECT_NEAR(path_integral(IntegrandSet::levy_area(), q).final_state()[0], 1.0, 1e-14);
  const auto c = path_integral(IntegrandSet::constant(2, {{2.0}, {-1.0}}), q);
  EXPECT_NEAR(c.final_state()[0], 0.0, 1e-14);
  EXPECT_EQ(c.size(), q.size());
}

TEST(RdeSolver, AdjoinTime) {
  const auto p = lift_linear_chords(std::vector<double>{0, 1, 3}, 1, 2);
  const auto q = adjoin_time(p);
  EXPECT_EQ(q.dim(), 2);
  EXPECT_DOUBLE_EQ(log(q.point(2)).level(1)[1], 1.0);
  EXPECT_DOUBLE_EQ(log(q.point(2)).level(1)[0], 3.0);
}

TEST(RdeSolver, SolutionCsv) {
  SolutionPath s{2, {0.0, 1.0}, {1, 2, 3, 4}};
  const auto csv = s.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,y1,y2");
}
