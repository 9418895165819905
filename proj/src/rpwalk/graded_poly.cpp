#include "rpwalk/graded_poly.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <tuple>

namespace rpwalk {

Rational make_rational(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// VariableLayout

VariableLayout::VariableLayout(int dim, int depth, int groups) : dim_(dim), depth_(depth), groups_(groups) {
  per_group_ = series_size(dim, depth) - 1;
  levels_.reserve(per_group_);
  for (int m = 1; m <= depth; ++m)
    for (std::size_t w = 0; w < level_size(dim, m); ++w) levels_.push_back(m);
}

std::shared_ptr<const VariableLayout> VariableLayout::get(int dim, int depth, int groups) {
  if (dim < 1 || dim > kMaxDim || depth < 1 || depth > kMaxDepth)
    throw DimensionError("polynomial layout (d, N) out of range");
  if (groups != 1 && groups != 2) throw DimensionError("layouts have one or two variable groups");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const VariableLayout>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{dim, depth, groups}];
  if (!slot) {
    slot = std::shared_ptr<const VariableLayout>(new VariableLayout(dim, depth, groups));
    if (slot->count() > 0xFFFF) throw DimensionError("too many polynomial variables");
  }
  return slot;
}

std::size_t VariableLayout::variable(int group, int level, std::size_t word) const {
  if (group < 0 || group >= groups_ || level < 1 || level > depth_ || word >= level_size(dim_, level))
    throw RangeError("variable index out of range");
  std::size_t off = 0;
  for (int m = 1; m < level; ++m) off += level_size(dim_, m);
  return static_cast<std::size_t>(group) * per_group_ + off + word;
}

std::string VariableLayout::name(std::size_t var) const {
  const int m = level_of(var);
  std::size_t local = var % per_group_;
  for (int j = 1; j < m; ++j) local -= level_size(dim_, j);
  std::vector<int> letters(static_cast<std::size_t>(m));
  for (int k = m - 1; k >= 0; --k) {
    letters[static_cast<std::size_t>(k)] = static_cast<int>(local % static_cast<std::size_t>(dim_)) + 1;
    local /= static_cast<std::size_t>(dim_);
  }
  std::string s = group_of(var) == 0 ? "a[" : "x[";
  s += std::to_string(m) + ";";
  for (int k = 0; k < m; ++k) {
    if (k) s += ",";
    s += std::to_string(letters[static_cast<std::size_t>(k)]);
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// Monomials

namespace {

Monomial mul_monomials(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].var < b[j].var)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].var < a[i].var) {
      out.push_back(b[j++]);
    } else {
      const unsigned p = unsigned{a[i].power} + b[j].power;
      if (p > 0xFFFF) throw DomainError("monomial exponent overflow");
      out.push_back({a[i].var, static_cast<std::uint16_t>(p)});
      ++i;
      ++j;
    }
  }
  return out;
}

// Canonical print order: higher graded degree first, then the larger
// exponent on the lowest-indexed variable.
bool canonical_before(const VariableLayout* layout, const Monomial& a, const Monomial& b) {
  if (layout) {
    const int da = monomial_degree(*layout, a), db = monomial_degree(*layout, b);
    if (da != db) return da > db;
  }
  std::size_t i = 0;
  for (; i < a.size() && i < b.size(); ++i) {
    if (a[i].var != b[i].var) return a[i].var < b[i].var;
    if (a[i].power != b[i].power) return a[i].power > b[i].power;
  }
  return i < a.size() && i == b.size();
}

}  // namespace

int monomial_degree(const VariableLayout& layout, const Monomial& m) {
  int d = 0;
  for (const auto& vp : m) d += layout.level_of(vp.var) * vp.power;
  return d;
}

std::string monomial_to_string(const VariableLayout& layout, const Monomial& m) {
  if (m.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k) s += "*";
    s += layout.name(m[k].var);
    if (m[k].power > 1) s += "^" + std::to_string(m[k].power);
  }
  return s;
}

// ---------------------------------------------------------------------------
// GradedPolynomial

GradedPolynomial GradedPolynomial::constant(std::shared_ptr<const VariableLayout> layout, const Rational& c) {
  GradedPolynomial p(std::move(layout));
  p.add_term({}, c);
  return p;
}

GradedPolynomial GradedPolynomial::variable(std::shared_ptr<const VariableLayout> layout, std::size_t var) {
  if (!layout || var >= layout->count()) throw RangeError("variable index out of range");
  GradedPolynomial p(std::move(layout));
  p.terms_.emplace(Monomial{{static_cast<std::uint16_t>(var), 1}}, Rational(1));
  return p;
}

GradedPolynomial GradedPolynomial::coordinate(std::shared_ptr<const VariableLayout> layout, int level,
                                              std::span<const int> word) {
  if (!layout) throw DimensionError("coordinate needs a layout");
  if (static_cast<int>(word.size()) != level) throw RangeError("word length must equal the level");
  std::size_t w = 0;
  for (int letter : word) {
    if (letter < 0 || letter >= layout->dim()) throw RangeError("letter out of range");
    w = w * static_cast<std::size_t>(layout->dim()) + static_cast<std::size_t>(letter);
  }
  return variable(layout, layout->variable(0, level, w));
}

Rational GradedPolynomial::constant_term() const { return coefficient({}); }

Rational GradedPolynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

int GradedPolynomial::degree() const {
  if (terms_.empty()) return kZeroPolynomialDegree;
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, layout_ ? monomial_degree(*layout_, m) : 0);
  return d;
}

int degree(const GradedPolynomial& p) { return p.degree(); }

void GradedPolynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void GradedPolynomial::adopt_layout(const GradedPolynomial& o) {
  if (!o.layout_) return;
  if (!layout_) {
    layout_ = o.layout_;
    return;
  }
  if (layout_ != o.layout_) throw DimensionError("polynomials live on different variable layouts");
}

GradedPolynomial& GradedPolynomial::operator+=(const GradedPolynomial& o) {
  adopt_layout(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

GradedPolynomial& GradedPolynomial::operator-=(const GradedPolynomial& o) {
  adopt_layout(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

GradedPolynomial& GradedPolynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b) {
  GradedPolynomial out(a.layout_ ? a.layout_ : b.layout_);
  if (a.layout_ && b.layout_ && a.layout_ != b.layout_)
    throw DimensionError("polynomials live on different variable layouts");
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(mul_monomials(ma, mb), ca * cb);
  return out;
}

GradedPolynomial GradedPolynomial::pow(unsigned e) const {
  GradedPolynomial result = constant(layout_, 1);
  GradedPolynomial base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

Rational GradedPolynomial::evaluate(std::span<const Rational> values) const {
  if (layout_ && values.size() != layout_->count()) throw DimensionError("wrong number of evaluation values");
  Rational total = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (const auto& vp : m) {
      Rational f;
      mpz_class e;
      mpq_class base = values[vp.var];
      mpz_pow_ui(f.get_num_mpz_t(), base.get_num_mpz_t(), vp.power);
      mpz_pow_ui(f.get_den_mpz_t(), base.get_den_mpz_t(), vp.power);
      t *= f;
    }
    total += t;
  }
  return total;
}

double GradedPolynomial::evaluate(std::span<const double> values) const {
  if (layout_ && values.size() != layout_->count()) throw DimensionError("wrong number of evaluation values");
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.get_d();
    for (const auto& vp : m) t *= std::pow(values[vp.var], static_cast<int>(vp.power));
    total += t;
  }
  return total;
}

std::string GradedPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const std::pair<const Monomial, Rational>*> order;
  order.reserve(terms_.size());
  for (const auto& t : terms_) order.push_back(&t);
  const VariableLayout* lay = layout_.get();
  std::sort(order.begin(), order.end(),
            [lay](const auto* x, const auto* y) { return canonical_before(lay, x->first, y->first); });
  std::string s;
  bool first = true;
  for (const auto* t : order) {
    Rational c = t->second;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) s += "-";
    } else {
      s += negative ? " - " : " + ";
    }
    first = false;
    if (t->first.empty()) {
      s += c.get_str();
    } else {
      if (c != 1) s += c.get_str() + "*";
      s += monomial_to_string(*lay, t->first);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Composition with the group law

const std::vector<GradedPolynomial>& cbh_coordinates(int dim, int depth) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<GradedPolynomial>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({dim, depth});
  if (it != cache.end()) return it->second;

  auto layout = VariableLayout::get(dim, depth, 2);
  using PolySeries = BasicTensorSeries<GradedPolynomial>;
  PolySeries x(dim, depth), y(dim, depth);
  for (int m = 1; m <= depth; ++m)
    for (std::size_t w = 0; w < level_size(dim, m); ++w) {
      x.level(m)[w] = GradedPolynomial::variable(layout, layout->variable(0, m, w));
      y.level(m)[w] = GradedPolynomial::variable(layout, layout->variable(1, m, w));
    }
  PolySeries z = tensor_log(truncated_mul(tensor_exp(x), tensor_exp(y)));
  std::vector<GradedPolynomial> coords(z.coefficients().begin(), z.coefficients().end());
  for (auto& c : coords)
    if (!c.layout()) c = GradedPolynomial(layout) + c;
  return cache.emplace(std::make_pair(dim, depth), std::move(coords)).first->second;
}

GradedPolynomial cbh_compose(const GradedPolynomial& p) {
  if (!p.layout()) return p;  // constant
  const auto& in = *p.layout();
  if (in.groups() != 1) throw DimensionError("cbh_compose expects a one-group polynomial");
  const auto& z = cbh_coordinates(in.dim(), in.depth());
  auto layout2 = VariableLayout::get(in.dim(), in.depth(), 2);

  std::map<std::pair<std::uint16_t, std::uint16_t>, GradedPolynomial> powers;
  auto power_of = [&](std::uint16_t var, std::uint16_t e) -> const GradedPolynomial& {
    auto key = std::make_pair(var, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    return powers.emplace(key, z[in.tensor_index(var)].pow(e)).first->second;
  };

  GradedPolynomial out(layout2);
  for (const auto& [m, c] : p.terms()) {
    GradedPolynomial term = GradedPolynomial::constant(layout2, c);
    for (const auto& vp : m) term = term * power_of(vp.var, vp.power);
    out += term;
  }
  return out;
}

GradedPolynomial T_apply(const GradedPolynomial& p, const MomentOracle& law) {
  if (!p.layout()) return {};  // E[c] - c
  const auto& in = *p.layout();
  if (in.dim() != law.dim() || in.depth() != law.depth())
    throw DimensionError("polynomial and increment law disagree on (d, N)");
  const GradedPolynomial composed = cbh_compose(p);
  const std::size_t shift = in.per_group();

  std::map<Monomial, Rational> moment_cache;
  GradedPolynomial out(p.layout());
  for (const auto& [m, c] : composed.terms()) {
    Monomial g_part, xi_part;
    for (const auto& vp : m) {
      if (vp.var < shift)
        g_part.push_back(vp);
      else
        xi_part.push_back({static_cast<std::uint16_t>(vp.var - shift), vp.power});
    }
    if (xi_part.empty()) {
      out.add_term(g_part, c);
      continue;
    }
    auto it = moment_cache.find(xi_part);
    if (it == moment_cache.end()) {
      if (monomial_degree(in, xi_part) > law.max_degree())
        throw UnresolvedMomentError(monomial_to_string(in, xi_part));
      auto mom = law.moment(xi_part);
      if (!mom) throw UnresolvedMomentError(monomial_to_string(in, xi_part));
      it = moment_cache.emplace(xi_part, *mom).first;
    }
    if (it->second != 0) out.add_term(g_part, c * it->second);
  }
  out -= p;
  return out;
}

// ---------------------------------------------------------------------------
// Walk moments

namespace {

mpz_class binomial(std::uint64_t n, unsigned long k) {
  if (k > n) return 0;
  mpz_class r;
  mpz_class nn;
  mpz_set_ui(nn.get_mpz_t(), static_cast<unsigned long>(n));
  mpz_bin_ui(r.get_mpz_t(), nn.get_mpz_t(), k);
  return r;
}

}  // namespace

Rational WalkMomentExpansion::at(std::uint64_t k) const {
  Rational total = 0;
  for (std::size_t l = 0; l < t_values.size(); ++l) {
    if (t_values[l] == 0) continue;
    total += Rational(binomial(k, static_cast<unsigned long>(l))) * t_values[l];
  }
  return total;
}

int WalkMomentExpansion::growth_degree() const {
  for (int l = static_cast<int>(t_values.size()) - 1; l >= 0; --l)
    if (t_values[static_cast<std::size_t>(l)] != 0) return l;
  return kZeroPolynomialDegree;
}

Rational WalkMomentExpansion::leading_coefficient() const {
  const int l = growth_degree();
  if (l == kZeroPolynomialDegree) return 0;
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(l));
  return t_values[static_cast<std::size_t>(l)] / Rational(fact);
}

WalkMomentExpansion walk_moment_expansion(const GradedPolynomial& p, const MomentOracle& law) {
  WalkMomentExpansion ex;
  const int deg = p.degree();
  if (deg == kZeroPolynomialDegree) return ex;
  GradedPolynomial q = p;
  for (int l = 0; l <= deg / 2; ++l) {
    ex.t_values.push_back(q.constant_term());
    q = T_apply(q, law);
    if (q.is_zero()) break;
  }
  if (!q.is_zero())
    throw DomainError("T^l P did not vanish after floor(deg/2) + 1 steps; is the increment law centered?");
  return ex;
}

Rational walk_moment(const GradedPolynomial& p, const MomentOracle& law, std::uint64_t k) {
  return walk_moment_expansion(p, law).at(k);
}

// ---------------------------------------------------------------------------
// Exponent calculus

GradedPolynomial level_polynomial(int m, double p, int dim, int depth) {
  if (m < 1 || m > depth) throw RangeError("level must lie in [1, depth]");
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("p must be positive and finite");
  auto layout = VariableLayout::get(dim, depth, 1);
  const auto e = static_cast<unsigned>(2 * static_cast<long>(std::floor(p / m)));
  GradedPolynomial out(layout);
  for (std::size_t w = 0; w < level_size(dim, m); ++w)
    out += GradedPolynomial::variable(layout, layout->variable(0, m, w)).pow(e);
  return out;
}

TightnessExponents tightness_exponents(double p, int depth) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("tightness exponents need finite p > 1");
  if (depth < 1) throw RangeError("depth must be >= 1");
  TightnessExponents r;
  long q0 = std::numeric_limits<long>::max();
  for (int m = 1; m <= depth; ++m) q0 = std::min(q0, m * static_cast<long>(std::floor(p / m)));
  r.q0 = static_cast<int>(q0);
  r.p_star = static_cast<int>(std::min(static_cast<long>(std::floor(p)), 2 * static_cast<long>(std::floor(p / 2))));
  r.alpha_star_exact = r.p_star > 0 ? make_rational(r.p_star - 1, 2L * r.p_star) : Rational(0);
  r.alpha_star = r.alpha_star_exact.get_d();
  r.alpha_q0 = r.q0 > 0 ? static_cast<double>(r.q0 - 1) / (2.0 * r.q0) : 0.0;
  // q0 > 1 + 2/(N-1)  <=>  q0 (N-1) > N+1
  r.rough_path_admissible = depth >= 2 && static_cast<long>(r.q0) * (depth - 1) > depth + 1;
  return r;
}

}  // namespace rpwalk
