#include <algorithm>

#include "rpwalk/graded_poly.hpp"

namespace rpwalk {

namespace {

Rational rational_pow(const Rational& base, unsigned e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

void check_shape(int dim, int depth) {
  if (dim < 1 || dim > kMaxDim || depth < 1 || depth > kMaxDepth)
    throw DimensionError("law (d, N) out of range");
}

std::vector<FiniteSupportLaw::Atom> product_atoms(int dim, int depth, const Rational& hi, const Rational& lo,
                                                  const Rational& q) {
  if (dim > 12) throw DimensionError("product laws enumerate 2^d atoms; d must be <= 12");
  const std::size_t per = series_size(dim, depth) - 1;
  std::vector<FiniteSupportLaw::Atom> atoms;
  for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
    FiniteSupportLaw::Atom a{1, std::vector<Rational>(per, Rational(0))};
    for (int i = 0; i < dim; ++i) {
      const bool up = (mask >> i) & 1u;
      a.log_coordinates[static_cast<std::size_t>(i)] = up ? hi : lo;
      a.probability *= up ? q : Rational(1) - q;
    }
    atoms.push_back(std::move(a));
  }
  return atoms;
}

}  // namespace

FiniteSupportLaw::FiniteSupportLaw(int dim, int depth, std::vector<Atom> atoms, int max_degree)
    : dim_(dim), depth_(depth), max_degree_(max_degree), symmetric_(false), atoms_(std::move(atoms)) {
  check_shape(dim, depth);
  if (atoms_.empty()) throw DomainError("a finite-support law needs at least one atom");
  const std::size_t per = series_size(dim, depth) - 1;
  Rational total = 0;
  std::vector<Rational> mean(static_cast<std::size_t>(dim), Rational(0));
  for (const auto& a : atoms_) {
    if (a.log_coordinates.size() != per) throw DimensionError("atom has the wrong number of log coordinates");
    if (a.probability < 0) throw DomainError("negative atom probability");
    total += a.probability;
    for (int i = 0; i < dim; ++i) mean[static_cast<std::size_t>(i)] += a.probability * a.log_coordinates[static_cast<std::size_t>(i)];
  }
  if (total != 1) throw DomainError("atom probabilities must sum to one");
  for (const auto& m : mean)
    if (m != 0) throw DomainError("increment law is not centered: E[a^{1;i}] != 0");

  // Symmetric means log xi and -log xi have the same law.
  std::map<std::vector<Rational>, Rational> mass;
  for (const auto& a : atoms_) mass[a.log_coordinates] += a.probability;
  symmetric_ = std::all_of(mass.begin(), mass.end(), [&](const auto& kv) {
    std::vector<Rational> neg = kv.first;
    for (auto& c : neg) c = -c;
    auto it = mass.find(neg);
    return it != mass.end() && it->second == kv.second;
  });
}

std::optional<Rational> FiniteSupportLaw::moment(const Monomial& m) const {
  Rational total = 0;
  for (const auto& a : atoms_) {
    if (a.probability == 0) continue;
    Rational t = a.probability;
    for (const auto& vp : m) {
      if (vp.var >= a.log_coordinates.size()) return std::nullopt;
      const Rational& c = a.log_coordinates[vp.var];
      if (c == 0) {
        t = 0;
        break;
      }
      t *= rational_pow(c, vp.power);
    }
    total += t;
  }
  return total;
}

GaussianLaw::GaussianLaw(int dim, int depth, Rational variance) : dim_(dim), depth_(depth), variance_(std::move(variance)) {
  check_shape(dim, depth);
  if (variance_ < 0) throw DomainError("variance must be non-negative");
}

std::optional<Rational> GaussianLaw::moment(const Monomial& m) const {
  // log exp(xi) = xi sits at level 1 only.
  Rational out = 1;
  for (const auto& vp : m) {
    if (vp.var >= static_cast<std::size_t>(dim_)) return Rational(0);
    if (vp.power % 2) return Rational(0);
    // E[Z^{2k}] = v^k (2k-1)!!
    const unsigned k = vp.power / 2u;
    mpz_class dfact = 1;
    for (unsigned j = 1; j < 2 * k; j += 2) dfact *= j;
    out *= rational_pow(variance_, k) * Rational(dfact);
  }
  return out;
}

MomentTable::MomentTable(int dim, int depth, std::map<Monomial, Rational> moments, int max_degree, bool symmetric)
    : dim_(dim), depth_(depth), max_degree_(max_degree), symmetric_(symmetric), moments_(std::move(moments)) {
  check_shape(dim, depth);
}

std::optional<Rational> MomentTable::moment(const Monomial& m) const {
  if (m.empty()) return Rational(1);
  auto it = moments_.find(m);
  if (it == moments_.end()) return std::nullopt;
  return it->second;
}

FiniteSupportLaw rademacher_law(int dim, int depth) {
  check_shape(dim, depth);
  return FiniteSupportLaw(dim, depth, product_atoms(dim, depth, 1, -1, make_rational(1, 2)));
}

FiniteSupportLaw rademacher_area_law(int dim, int depth, const Rational& eta) {
  check_shape(dim, depth);
  if (dim < 2 || depth < 2) throw DimensionError("area kicks need d >= 2 and N >= 2");
  auto base = product_atoms(dim, depth, 1, -1, make_rational(1, 2));
  const std::size_t i12 = static_cast<std::size_t>(dim) + 1;                     // (1,2)
  const std::size_t i21 = static_cast<std::size_t>(dim) + static_cast<std::size_t>(dim);  // (2,1)
  std::vector<FiniteSupportLaw::Atom> atoms;
  for (const auto& a : base)
    for (int s : {1, -1}) {
      auto b = a;
      b.probability *= make_rational(1, 2);
      b.log_coordinates[i12] = eta * s;
      b.log_coordinates[i21] = -eta * s;
      atoms.push_back(std::move(b));
    }
  return FiniteSupportLaw(dim, depth, std::move(atoms));
}

FiniteSupportLaw two_point_law(int dim, int depth, const Rational& hi, const Rational& lo, const Rational& q) {
  check_shape(dim, depth);
  if (!(q > 0 && q < 1)) throw DomainError("two-point probability must lie in (0, 1)");
  return FiniteSupportLaw(dim, depth, product_atoms(dim, depth, hi, lo, q));
}

}  // namespace rpwalk
