#include <gtest/gtest.h>

#include "rpwalk/graded_poly.hpp"
#include "support/oracle.hpp"

using namespace rpwalk;

namespace {

GradedPolynomial a(const std::shared_ptr<const VariableLayout>& L, std::vector<int> word) {
  return GradedPolynomial::coordinate(L, static_cast<int>(word.size()), word);
}

}  // namespace

TEST(GradedPoly, ArithmeticAndText) {
  const auto L = VariableLayout::get(2, 2);
  const auto x = a(L, {0}), y = a(L, {1}), A = a(L, {0, 1});
  const auto p = (x + y).pow(2) * make_rational(3) + GradedPolynomial::constant(L, 1);
  EXPECT_EQ(p.degree(), 2);
  const auto v0 = static_cast<std::uint16_t>(L->variable(0, 1, 0)), v1 = static_cast<std::uint16_t>(L->variable(0, 1, 1));
  EXPECT_EQ(p.coefficient({{v0, 1}, {v1, 1}}), 6);
  EXPECT_EQ((x * A).degree(), 3);
  EXPECT_EQ(A.to_string(), "a[2;1,2]");
  EXPECT_EQ((x.pow(2) * make_rational(6) + GradedPolynomial::constant(L, 1)).to_string(), "6*a[1;1]^2 + 1");
  EXPECT_TRUE((x - x).is_zero());
  EXPECT_EQ(GradedPolynomial().degree(), kZeroPolynomialDegree);
  std::vector<double> vals(L->count(), 0.0);
  vals[L->variable(0, 1, 0)] = 2.0;
  vals[L->variable(0, 2, 1)] = 0.5;
  EXPECT_DOUBLE_EQ((x * A).evaluate(std::span<const double>(vals)), 1.0);
}

TEST(GradedPoly, CbhSecondLevel) {
  // log(exp(a) exp(x)) at level 2, entry (1,2): a12 + x12 + (a1 x2 - a2 x1)/2.
  const auto& c = cbh_coordinates(2, 2);
  const auto L = VariableLayout::get(2, 2, 2);
  const auto txt = c[4].to_string();
  EXPECT_EQ(c[4].degree(), 2);
  std::vector<Rational> v(L->count(), Rational(0));
  v[L->variable(0, 1, 0)] = 1;
  v[L->variable(1, 1, 1)] = 1;
  EXPECT_EQ(c[4].evaluate(std::span<const Rational>(v)), make_rational(1, 2)) << txt;
}

TEST(GradedPoly, RademacherQuartic) {
  const auto L = VariableLayout::get(1, 2);
  const auto q = a(L, {0}).pow(4);
  const auto law = rademacher_law(1, 2);
  const auto t1 = T_apply(q, law);
  EXPECT_EQ(t1.degree(), 2);
  EXPECT_EQ(t1.to_string(), "6*a[1;1]^2 + 1");
  const auto ex = walk_moment_expansion(q, law);
  EXPECT_EQ(ex.growth_degree(), 2);
  EXPECT_EQ(ex.leading_coefficient(), 3);
  for (std::uint64_t k = 0; k <= 10; ++k) EXPECT_EQ(ex.at(k), Rational(3 * k * k - 2 * k));
  EXPECT_EQ(walk_moment(q, law, 2), 8);
}

TEST(GradedPoly, MomentsAgainstEnumeratedSums) {
  const auto L = VariableLayout::get(1, 3);
  const auto x = a(L, {0});
  const std::vector<std::pair<mpq_class, mpq_class>> atoms = {{2, mpq_class(1, 5)}, {mpq_class(-1, 2), mpq_class(4, 5)}};
  const auto law = two_point_law(1, 3, 2, make_rational(-1, 2), make_rational(1, 5));
  for (unsigned e = 1; e <= 8; ++e) {
    const auto p = x.pow(e);
    for (int k = 0; k <= 7; ++k) {
      const auto ref = oracle::enumerate_sum(atoms, k, [e](const mpq_class& s) {
        mpq_class r = 1;
        for (unsigned i = 0; i < e; ++i) r *= s;
        return r;
      });
      ASSERT_EQ(walk_moment(p, law, static_cast<std::uint64_t>(k)), ref) << "e=" << e << " k=" << k;
    }
  }
}

TEST(GradedPoly, GaussianMoments) {
  const auto L = VariableLayout::get(1, 2);
  const GaussianLaw g(1, 2, 1);
  for (std::uint64_t k = 0; k <= 6; ++k) {
    EXPECT_EQ(walk_moment(a(L, {0}).pow(4), g, k), Rational(3 * k * k));
    EXPECT_EQ(walk_moment(a(L, {0}).pow(6), g, k), Rational(15 * k * k * k));
  }
}

TEST(GradedPolyProperty, TLowersDegreeByTwo) {
  oracle::Gen g(12);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = g.integer(1, 2), N = g.integer(2, 3);
    const auto L = VariableLayout::get(d, N);
    GradedPolynomial p(L);
    const int terms = g.integer(1, 3);
    for (int t = 0; t < terms; ++t) {
      GradedPolynomial m = GradedPolynomial::constant(L, g.integer(-3, 3));
      const int factors = g.integer(1, 4);
      for (int f = 0; f < factors; ++f) {
        const int level = g.integer(1, N);
        std::vector<int> word(static_cast<std::size_t>(level));
        for (auto& l : word) l = g.integer(0, d - 1);
        m = m * a(L, word);
      }
      if (m.degree() <= 8) p += m;
    }
    if (p.is_zero()) continue;
    const auto law = d >= 2 && trial % 2 ? rademacher_area_law(d, N, 1) : rademacher_law(d, N);
    const auto tp = T_apply(p, law);
    if (!tp.is_zero()) ASSERT_LE(tp.degree(), p.degree() - 2) << p.to_string();
  }
}

TEST(GradedPoly, UnresolvedMomentsReported) {
  const auto L = VariableLayout::get(1, 2);
  std::map<Monomial, Rational> table{{Monomial{VarPower{0, 2}}, Rational(1)}};
  const MomentTable law(1, 2, table, 2, true);
  EXPECT_THROW(T_apply(a(L, {0}).pow(4), law), UnresolvedMomentError);
}

TEST(GradedPoly, FiniteSupportLawsValidated) {
  EXPECT_THROW(FiniteSupportLaw(1, 2, {{Rational(1), {Rational(1), Rational(0)}}}), DomainError);
  EXPECT_THROW(FiniteSupportLaw(1, 2, {{make_rational(1, 2), {Rational(1), Rational(0)}}}), DomainError);
  EXPECT_TRUE(rademacher_law(2, 2).symmetric());
  EXPECT_FALSE(two_point_law(1, 2, 2, make_rational(-1, 2), make_rational(1, 5)).symmetric());
}

TEST(GradedPoly, TightnessExponents) {
  EXPECT_EQ(tightness_exponents(4, 2).q0, 4);
  EXPECT_EQ(tightness_exponents(4, 3).q0, 3);
  EXPECT_EQ(tightness_exponents(5, 2).p_star, 4);
  EXPECT_EQ(tightness_exponents(4, 2).alpha_star_exact, make_rational(3, 8));
  EXPECT_EQ(tightness_exponents(6, 2).alpha_star_exact, make_rational(5, 12));
  EXPECT_EQ(tightness_exponents(1.5, 2).alpha_star_exact, 0);
  for (int N = 2; N <= 4; ++N) {
    EXPECT_TRUE(tightness_exponents(4, N).rough_path_admissible);
    EXPECT_FALSE(tightness_exponents(3.99, N).rough_path_admissible);
  }
  EXPECT_THROW(tightness_exponents(1.0, 2), DomainError);
}

TEST(GradedPoly, LevelPolynomial) {
  const auto p = level_polynomial(2, 4, 2, 2);
  EXPECT_EQ(p.degree(), 8);
  EXPECT_EQ(p.terms().size(), 4u);
  EXPECT_THROW(level_polynomial(3, 4, 2, 2), RangeError);
}
