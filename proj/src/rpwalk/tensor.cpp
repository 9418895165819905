#include "rpwalk/tensor.hpp"

#include <algorithm>

namespace rpwalk {

LieElement LieElement::from_coordinates(int dim, int depth, std::span<const double> coords) {
  LieElement a(dim, depth);
  const std::size_t expected = a.series_.size() - 1;
  if (coords.size() != expected)
    throw DimensionError("expected " + std::to_string(expected) + " log coordinates, got " +
                         std::to_string(coords.size()));
  std::copy(coords.begin(), coords.end(), a.series_.coefficients().begin() + 1);
  return a;
}

LieElement LieElement::from_vector(int depth, std::span<const double> v) {
  LieElement a(static_cast<int>(v.size()), depth);
  std::copy(v.begin(), v.end(), a.level(1).begin());
  return a;
}

std::vector<double> LieElement::coordinates() const {
  auto c = series_.coefficients();
  return {c.begin() + 1, c.end()};
}

std::vector<double> LieElement::bracket_coordinates() const {
  std::vector<double> out;
  if (depth() < 2) return out;
  const int d = dim();
  auto l2 = level(2);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) out.push_back(l2[static_cast<std::size_t>(i * d + j)]);
  return out;
}

GroupElement::GroupElement(int dim, int depth) : series_(dim, depth) { series_.scalar() = 1.0; }

GroupElement GroupElement::from_series(TensorSeries series) {
  if (series.scalar() != 1.0)
    throw DomainError("group element requires scalar part 1, got " + std::to_string(series.scalar()));
  return GroupElement(std::move(series));
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  auto s = truncated_mul(a.series_, b.series_);
  s.scalar() = 1.0;
  return GroupElement(std::move(s));
}

GroupElement exp(const LieElement& a) { return GroupElement(tensor_exp(a.series())); }

LieElement log(const GroupElement& g) { return LieElement(tensor_log(g.series())); }

LieElement log(const TensorSeries& g) {
  if (g.scalar() != 1.0)
    throw DomainError("log requires scalar part 1, got " + std::to_string(g.scalar()));
  return LieElement(tensor_log(g));
}

GroupElement inverse(const GroupElement& g) { return exp(-log(g)); }

GroupElement dilate(double lambda, const GroupElement& g) {
  TensorSeries s = g.series();
  double f = 1.0;
  for (int m = 1; m <= s.depth(); ++m) {
    f *= lambda;
    for (auto& x : s.level(m)) x *= f;
  }
  return GroupElement(std::move(s));
}

LieElement dilate(double lambda, const LieElement& a) {
  LieElement out = a;
  double f = 1.0;
  for (int m = 1; m <= a.depth(); ++m) {
    f *= lambda;
    for (auto& x : out.level(m)) x *= f;
  }
  return out;
}

std::vector<double> project(int m, const LieElement& a) {
  if (m < 1 || m > a.depth())
    throw RangeError("projection level " + std::to_string(m) + " outside [1, " + std::to_string(a.depth()) + "]");
  auto l = a.level(m);
  return {l.begin(), l.end()};
}

std::vector<double> project(int m, const GroupElement& g) {
  if (m < 1 || m > g.depth())
    throw RangeError("projection level " + std::to_string(m) + " outside [1, " + std::to_string(g.depth()) + "]");
  if (m == 1) {
    auto l = g.level(1);
    return {l.begin(), l.end()};
  }
  return project(m, log(g));
}

double max_abs_diff(const TensorSeries& a, const TensorSeries& b) {
  a.require_same_shape(b);
  double e = 0.0;
  auto ca = a.coefficients();
  auto cb = b.coefficients();
  for (std::size_t k = 0; k < ca.size(); ++k) e = std::max(e, std::abs(ca[k] - cb[k]));
  return e;
}

}  // namespace rpwalk
