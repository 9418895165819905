#pragma once

// Truncated tensor algebra T^N(R^d) = R + R^d + ... + (R^d)^{(x)N} and the
// free nilpotent group G^N(R^d) embedded in it.
//
// Coefficients are stored densely, level after level. A word (i_1..i_m) with
// letters in [0, d) sits at offset(m) + sum_k i_k d^(m-k), i.e. the first
// letter is the most significant digit.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rpwalk/errors.hpp"

namespace rpwalk {

inline constexpr int kMaxDepth = 8;
inline constexpr int kMaxDim = 16;

inline std::size_t level_size(int dim, int m) {
  std::size_t s = 1;
  for (int k = 0; k < m; ++k) s *= static_cast<std::size_t>(dim);
  return s;
}

// Coefficient count of levels 0..depth.
inline std::size_t series_size(int dim, int depth) {
  std::size_t s = 0;
  for (int m = 0; m <= depth; ++m) s += level_size(dim, m);
  return s;
}

// Scalars used as tensor coefficients expose exact rational scaling through
// this trait. `Coeff` is what a scalar may be multiplied by.
template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  using Coeff = double;
  static Coeff ratio(long num, long den) { return static_cast<double>(num) / static_cast<double>(den); }
  static bool is_zero(double x) { return x == 0.0; }
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
};

template <class Scalar>
class BasicTensorSeries {
 public:
  BasicTensorSeries() = default;

  BasicTensorSeries(int dim, int depth) : dim_(dim), depth_(depth) {
    if (dim < 1 || dim > kMaxDim)
      throw DimensionError("tensor dimension must lie in [1, " + std::to_string(kMaxDim) + "], got " +
                           std::to_string(dim));
    if (depth < 1 || depth > kMaxDepth)
      throw DimensionError("tensor depth must lie in [1, " + std::to_string(kMaxDepth) + "], got " +
                           std::to_string(depth));
    std::size_t off = 0;
    for (int m = 0; m <= depth; ++m) {
      offsets_[m] = off;
      off += level_size(dim, m);
    }
    offsets_[depth + 1] = off;
    coeffs_.assign(off, ScalarTraits<Scalar>::zero());
  }

  int dim() const noexcept { return dim_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::size_t offset(int m) const noexcept { return offsets_[m]; }

  std::span<Scalar> level(int m) {
    return {coeffs_.data() + offsets_[m], offsets_[m + 1] - offsets_[m]};
  }
  std::span<const Scalar> level(int m) const {
    return {coeffs_.data() + offsets_[m], offsets_[m + 1] - offsets_[m]};
  }

  Scalar& scalar() { return coeffs_[0]; }
  const Scalar& scalar() const { return coeffs_[0]; }

  std::span<Scalar> coefficients() { return coeffs_; }
  std::span<const Scalar> coefficients() const { return coeffs_; }

  bool same_shape(const BasicTensorSeries& o) const noexcept { return dim_ == o.dim_ && depth_ == o.depth_; }

  BasicTensorSeries& operator+=(const BasicTensorSeries& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  BasicTensorSeries& operator-=(const BasicTensorSeries& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  template <class C>
  BasicTensorSeries& scale(const C& c) {
    for (auto& x : coeffs_) x = x * c;
    return *this;
  }

  void require_same_shape(const BasicTensorSeries& o) const {
    if (!same_shape(o))
      throw DimensionError("tensor shape mismatch: (d=" + std::to_string(dim_) + ", N=" + std::to_string(depth_) +
                           ") vs (d=" + std::to_string(o.dim_) + ", N=" + std::to_string(o.depth_) + ")");
  }

  friend bool operator==(const BasicTensorSeries& a, const BasicTensorSeries& b) {
    return a.dim_ == b.dim_ && a.depth_ == b.depth_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int dim_ = 0;
  int depth_ = 0;
  std::array<std::size_t, kMaxDepth + 2> offsets_{};
  std::vector<Scalar> coeffs_;
};

// Level m of the result is sum_j a_j (x) b_{m-j}; products beyond `depth`
// are dropped.
template <class Scalar>
BasicTensorSeries<Scalar> truncated_mul(const BasicTensorSeries<Scalar>& a, const BasicTensorSeries<Scalar>& b) {
  a.require_same_shape(b);
  using Tr = ScalarTraits<Scalar>;
  BasicTensorSeries<Scalar> out(a.dim(), a.depth());
  for (int m = 0; m <= a.depth(); ++m) {
    auto dst = out.level(m);
    for (int j = 0; j <= m; ++j) {
      auto lhs = a.level(j);
      auto rhs = b.level(m - j);
      const std::size_t nb = rhs.size();
      for (std::size_t u = 0; u < lhs.size(); ++u) {
        if (Tr::is_zero(lhs[u])) continue;
        Scalar* row = dst.data() + u * nb;
        for (std::size_t w = 0; w < nb; ++w) {
          if (Tr::is_zero(rhs[w])) continue;
          row[w] += lhs[u] * rhs[w];
        }
      }
    }
  }
  return out;
}

// sum_{k=0}^{N} x^k / k!, with the scalar part of x ignored.
template <class Scalar>
BasicTensorSeries<Scalar> tensor_exp(BasicTensorSeries<Scalar> x) {
  using Tr = ScalarTraits<Scalar>;
  x.scalar() = Tr::zero();
  BasicTensorSeries<Scalar> r(x.dim(), x.depth());
  r.scalar() = Tr::one();
  for (int k = x.depth(); k >= 1; --k) {
    auto next = truncated_mul(x, r);
    next.scale(Tr::ratio(1, k));
    next.scalar() = Tr::one();
    r = std::move(next);
  }
  return r;
}

// sum_{k=1}^{N} (-1)^{k+1} (g-1)^k / k. Caller guarantees scalar part one.
template <class Scalar>
BasicTensorSeries<Scalar> tensor_log(BasicTensorSeries<Scalar> g) {
  using Tr = ScalarTraits<Scalar>;
  g.scalar() = Tr::zero();
  BasicTensorSeries<Scalar> r = g;
  BasicTensorSeries<Scalar> power = g;
  for (int k = 2; k <= g.depth(); ++k) {
    power = truncated_mul(power, g);
    auto term = power;
    term.scale(Tr::ratio(k % 2 == 0 ? -1 : 1, k));
    r += term;
  }
  return r;
}

using TensorSeries = BasicTensorSeries<double>;

// Log-chart coordinates: a tensor series with zero scalar part. Level m
// scales by lambda^m under dilation.
class LieElement {
 public:
  LieElement(int dim, int depth) : series_(dim, depth) {}
  explicit LieElement(TensorSeries series) : series_(std::move(series)) { series_.scalar() = 0.0; }

  // Build from the flat concatenation of levels 1..depth.
  static LieElement from_coordinates(int dim, int depth, std::span<const double> coords);
  // Level-1 vector v embedded at level 1.
  static LieElement from_vector(int depth, std::span<const double> v);

  int dim() const noexcept { return series_.dim(); }
  int depth() const noexcept { return series_.depth(); }
  std::span<const double> level(int m) const { return series_.level(m); }
  std::span<double> level(int m) { return series_.level(m); }
  const TensorSeries& series() const noexcept { return series_; }

  // Flat concatenation of levels 1..depth.
  std::vector<double> coordinates() const;

  // Level-2 entries (i, j) with i < j, in row-major order of the pairs. This
  // is the "bracket" view of the antisymmetric part; the full level-2 array
  // stays available through level(2).
  std::vector<double> bracket_coordinates() const;

  LieElement& operator+=(const LieElement& o) { series_ += o.series_; return *this; }
  LieElement& operator-=(const LieElement& o) { series_ -= o.series_; return *this; }
  LieElement& operator*=(double c) { series_.scale(c); return *this; }
  friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
  friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
  friend LieElement operator*(double c, LieElement a) { return a *= c; }
  friend LieElement operator-(LieElement a) { return a *= -1.0; }
  friend bool operator==(const LieElement&, const LieElement&) = default;

 private:
  TensorSeries series_;
};

// A tensor series with scalar part exactly one. Group-likeness is not
// enforced; outputs of exp, products, inverses and dilations are group-like
// by construction.
class GroupElement {
 public:
  // Unit element.
  GroupElement(int dim, int depth);
  // Throws DomainError unless the scalar part is exactly one.
  static GroupElement from_series(TensorSeries series);

  int dim() const noexcept { return series_.dim(); }
  int depth() const noexcept { return series_.depth(); }
  std::span<const double> level(int m) const { return series_.level(m); }
  const TensorSeries& series() const noexcept { return series_; }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);
  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  explicit GroupElement(TensorSeries series) : series_(std::move(series)) {}
  friend GroupElement exp(const LieElement& a);
  friend GroupElement dilate(double lambda, const GroupElement& g);

  TensorSeries series_;
};

GroupElement exp(const LieElement& a);
LieElement log(const GroupElement& g);
// Throws DomainError when the scalar part differs from one.
LieElement log(const TensorSeries& g);
GroupElement inverse(const GroupElement& g);
GroupElement dilate(double lambda, const GroupElement& g);
LieElement dilate(double lambda, const LieElement& a);

// Level-m block, 1 <= m <= depth. For a group element this is the block of its log.
std::vector<double> project(int m, const LieElement& a);
std::vector<double> project(int m, const GroupElement& g);

// Largest absolute coefficient difference; shapes must agree.
double max_abs_diff(const TensorSeries& a, const TensorSeries& b);
inline double max_abs_diff(const GroupElement& a, const GroupElement& b) {
  return max_abs_diff(a.series(), b.series());
}
inline double max_abs_diff(const LieElement& a, const LieElement& b) {
  return max_abs_diff(a.series(), b.series());
}

}  // namespace rpwalk
