#pragma once

// Exact polynomial calculus on the log chart of G^N(R^d).
//
// Variables are the full tensor coordinates a^{m;i_1..i_m} of log g, levels
// 1..N (d^m of them at level m). A monomial's graded degree counts a level-m
// variable with weight m. Coefficients are exact rationals.

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rpwalk/tensor.hpp"

namespace rpwalk {

using Rational = mpq_class;

// Canonical p/q.
Rational make_rational(long num, long den = 1);
std::string to_string(const Rational& q);

// One or two groups of log-chart variables. Group 0 prints as `a`, group 1
// (the increment in composed polynomials) as `x`.
class VariableLayout {
 public:
  static std::shared_ptr<const VariableLayout> get(int dim, int depth, int groups = 1);

  int dim() const noexcept { return dim_; }
  int depth() const noexcept { return depth_; }
  int groups() const noexcept { return groups_; }
  std::size_t per_group() const noexcept { return per_group_; }
  std::size_t count() const noexcept { return per_group_ * static_cast<std::size_t>(groups_); }

  std::size_t variable(int group, int level, std::size_t word) const;
  int group_of(std::size_t var) const { return static_cast<int>(var / per_group_); }
  int level_of(std::size_t var) const { return levels_[var % per_group_]; }
  // Position of the variable's coordinate inside a tensor series (level 0 is
  // position 0).
  std::size_t tensor_index(std::size_t var) const { return var % per_group_ + 1; }
  std::string name(std::size_t var) const;

 private:
  VariableLayout(int dim, int depth, int groups);

  int dim_;
  int depth_;
  int groups_;
  std::size_t per_group_;
  std::vector<int> levels_;
};

struct VarPower {
  std::uint16_t var;
  std::uint16_t power;
  friend auto operator<=>(const VarPower&, const VarPower&) = default;
};

// Sorted by variable, powers positive. The empty monomial is the constant 1.
using Monomial = std::vector<VarPower>;

inline constexpr int kZeroPolynomialDegree = std::numeric_limits<int>::min();

class GradedPolynomial {
 public:
  // The zero polynomial.
  GradedPolynomial() = default;
  explicit GradedPolynomial(std::shared_ptr<const VariableLayout> layout) : layout_(std::move(layout)) {}

  static GradedPolynomial constant(std::shared_ptr<const VariableLayout> layout, const Rational& c);
  static GradedPolynomial variable(std::shared_ptr<const VariableLayout> layout, std::size_t var);
  // a^{level; word} of the first group.
  static GradedPolynomial coordinate(std::shared_ptr<const VariableLayout> layout, int level,
                                     std::span<const int> word);

  const std::shared_ptr<const VariableLayout>& layout() const noexcept { return layout_; }
  const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;

  // Graded degree; kZeroPolynomialDegree for the zero polynomial.
  int degree() const;

  void add_term(const Monomial& m, const Rational& c);

  GradedPolynomial& operator+=(const GradedPolynomial& o);
  GradedPolynomial& operator-=(const GradedPolynomial& o);
  GradedPolynomial& operator*=(const Rational& c);
  friend GradedPolynomial operator+(GradedPolynomial a, const GradedPolynomial& b) { return a += b; }
  friend GradedPolynomial operator-(GradedPolynomial a, const GradedPolynomial& b) { return a -= b; }
  friend GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b);
  friend GradedPolynomial operator*(GradedPolynomial a, const Rational& c) { return a *= c; }
  friend bool operator==(const GradedPolynomial& a, const GradedPolynomial& b) { return a.terms_ == b.terms_; }

  GradedPolynomial pow(unsigned e) const;

  // Evaluation at coordinates indexed by variable (layout().count() entries).
  Rational evaluate(std::span<const Rational> values) const;
  double evaluate(std::span<const double> values) const;

  // Canonical text form: monomials ordered by decreasing graded degree, then
  // by decreasing exponent of the lowest-indexed variable.
  std::string to_string() const;

 private:
  void adopt_layout(const GradedPolynomial& o);

  std::shared_ptr<const VariableLayout> layout_;
  std::map<Monomial, Rational> terms_;
};

int degree(const GradedPolynomial& p);
int monomial_degree(const VariableLayout& layout, const Monomial& m);
std::string monomial_to_string(const VariableLayout& layout, const Monomial& m);

template <>
struct ScalarTraits<Rational> {
  using Coeff = Rational;
  static Coeff ratio(long num, long den) { return make_rational(num, den); }
  static bool is_zero(const Rational& q) { return sgn(q) == 0; }
  static Rational zero() { return 0; }
  static Rational one() { return 1; }
};

template <>
struct ScalarTraits<GradedPolynomial> {
  using Coeff = Rational;
  static Coeff ratio(long num, long den) { return make_rational(num, den); }
  static bool is_zero(const GradedPolynomial& p) { return p.is_zero(); }
  static GradedPolynomial zero() { return {}; }
  static GradedPolynomial one() { return GradedPolynomial::constant(nullptr, 1); }
};

// Law of the group increment xi seen through the moments of its log-chart
// coordinates. Monomials are over the one-group layout of (dim, depth).
class MomentOracle {
 public:
  virtual ~MomentOracle() = default;
  virtual int dim() const = 0;
  virtual int depth() const = 0;
  // Largest graded degree for which moments are declared finite.
  virtual int max_degree() const = 0;
  virtual bool symmetric() const = 0;
  // E[prod (log xi)^m]; nullopt when the oracle does not know it.
  virtual std::optional<Rational> moment(const Monomial& m) const = 0;
};

// Finitely many atoms with rational log coordinates (levels 1..N flattened).
// Construction checks that probabilities sum to one and that the level-1 mean
// vanishes.
class FiniteSupportLaw final : public MomentOracle {
 public:
  struct Atom {
    Rational probability;
    std::vector<Rational> log_coordinates;
  };

  FiniteSupportLaw(int dim, int depth, std::vector<Atom> atoms,
                   int max_degree = std::numeric_limits<int>::max());

  int dim() const override { return dim_; }
  int depth() const override { return depth_; }
  int max_degree() const override { return max_degree_; }
  bool symmetric() const override { return symmetric_; }
  std::optional<Rational> moment(const Monomial& m) const override;
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

 private:
  int dim_;
  int depth_;
  int max_degree_;
  bool symmetric_;
  std::vector<Atom> atoms_;
};

// exp(xi) with xi ~ N(0, variance I); moments by Wick pairing.
class GaussianLaw final : public MomentOracle {
 public:
  GaussianLaw(int dim, int depth, Rational variance = 1);
  int dim() const override { return dim_; }
  int depth() const override { return depth_; }
  int max_degree() const override { return std::numeric_limits<int>::max(); }
  bool symmetric() const override { return true; }
  std::optional<Rational> moment(const Monomial& m) const override;

 private:
  int dim_;
  int depth_;
  Rational variance_;
};

// Explicit table of moments; unlisted monomials are unknown.
class MomentTable final : public MomentOracle {
 public:
  MomentTable(int dim, int depth, std::map<Monomial, Rational> moments, int max_degree, bool symmetric);
  int dim() const override { return dim_; }
  int depth() const override { return depth_; }
  int max_degree() const override { return max_degree_; }
  bool symmetric() const override { return symmetric_; }
  std::optional<Rational> moment(const Monomial& m) const override;

 private:
  int dim_;
  int depth_;
  int max_degree_;
  bool symmetric_;
  std::map<Monomial, Rational> moments_;
};

// exp(eps), eps uniform on {-1, 1}^dim.
FiniteSupportLaw rademacher_law(int dim, int depth);
// exp(eps + eta * s * [e_1, e_2]) with eps Rademacher and s = +-1 independent.
FiniteSupportLaw rademacher_area_law(int dim, int depth, const Rational& eta);
// exp(xi) with IID coordinates taking hi = sqrt((1-q)/q) w.p. q and
// lo = -sqrt(q/(1-q)) otherwise; q must make both atoms rational (q = 1/5 gives 2 and -1/2).
FiniteSupportLaw two_point_law(int dim, int depth, const Rational& hi, const Rational& lo, const Rational& q);

// a |-> P(log(exp(a_g) (x) exp(a_xi))) as a polynomial over the two-group
// layout (g variables first), obtained by exact symbolic exp/log in the
// truncated tensor algebra.
GradedPolynomial cbh_compose(const GradedPolynomial& p);

// The symbolic coordinates of log(exp(X) exp(Y)) (tensor positions), cached
// per (dim, depth).
const std::vector<GradedPolynomial>& cbh_coordinates(int dim, int depth);

// TP : g |-> E[P(g (x) xi)] - P(g). Throws UnresolvedMomentError when a needed
// moment is unknown or beyond the oracle's declared degree.
GradedPolynomial T_apply(const GradedPolynomial& p, const MomentOracle& law);

// E[P(xi_1 (x) ... (x) xi_k)] = sum_l C(k, l) (T^l P)(1).
struct WalkMomentExpansion {
  // (T^l P)(unit) for l = 0..L.
  std::vector<Rational> t_values;

  Rational at(std::uint64_t k) const;
  // Largest l with a non-zero term: the growth order in k.
  int growth_degree() const;
  // Coefficient of k^growth_degree.
  Rational leading_coefficient() const;
};

WalkMomentExpansion walk_moment_expansion(const GradedPolynomial& p, const MomentOracle& law);
Rational walk_moment(const GradedPolynomial& p, const MomentOracle& law, std::uint64_t k);

// sum_{words of length m} (a^{m;w})^{2 floor(p/m)} on (dim, depth).
GradedPolynomial level_polynomial(int m, double p, int dim, int depth);

struct TightnessExponents {
  int q0 = 0;       // min_m m floor(p/m)
  int p_star = 0;   // min(floor p, 2 floor(p/2))
  Rational alpha_star_exact;  // (p*-1)/(2p*), 0 when p* = 0
  double alpha_star = 0.0;
  double alpha_q0 = 0.0;      // (q0-1)/(2 q0), 0 when q0 = 0
  bool rough_path_admissible = false;  // q0 > 1 + 2/(N-1), N >= 2
};

TightnessExponents tightness_exponents(double p, int depth);

}  // namespace rpwalk
