#pragma once

// Reference implementations kept deliberately naive and independent of the
// library internals: tensors as maps from words to coefficients, pairwise
// Hoelder sups, exhaustive enumeration over finite laws.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Word = std::vector<int>;
using Tensor = std::map<Word, double>;

inline Tensor unit() { return {{Word{}, 1.0}}; }

inline Tensor mul(const Tensor& a, const Tensor& b, int depth) {
  Tensor out;
  for (const auto& [u, x] : a)
    for (const auto& [v, y] : b) {
      if (static_cast<int>(u.size() + v.size()) > depth) continue;
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      out[w] += x * y;
    }
  return out;
}

inline Tensor add(Tensor a, const Tensor& b, double s = 1.0) {
  for (const auto& [w, y] : b) a[w] += s * y;
  return a;
}

inline Tensor exp(const Tensor& x, int depth) {
  Tensor term = unit(), out = unit();
  Tensor nilp = x;
  nilp.erase(Word{});
  for (int k = 1; k <= depth; ++k) {
    term = mul(term, nilp, depth);
    out = add(out, term, 1.0 / std::tgamma(k + 1.0));
  }
  return out;
}

inline Tensor log(const Tensor& g, int depth) {
  Tensor y = g;
  y.erase(Word{});
  Tensor power = unit(), out;
  for (int k = 1; k <= depth; ++k) {
    power = mul(power, y, depth);
    out = add(out, power, (k % 2 ? 1.0 : -1.0) / k);
  }
  return out;
}

// Flat coordinates of levels 1..depth, first letter most significant.
inline std::vector<double> flat(const Tensor& t, int dim, int depth) {
  std::vector<double> out;
  for (int m = 1; m <= depth; ++m) {
    std::size_t count = 1;
    for (int k = 0; k < m; ++k) count *= static_cast<std::size_t>(dim);
    for (std::size_t idx = 0; idx < count; ++idx) {
      Word w(static_cast<std::size_t>(m));
      std::size_t r = idx;
      for (int k = m - 1; k >= 0; --k) {
        w[static_cast<std::size_t>(k)] = static_cast<int>(r % static_cast<std::size_t>(dim));
        r /= static_cast<std::size_t>(dim);
      }
      auto it = t.find(w);
      out.push_back(it == t.end() ? 0.0 : it->second);
    }
  }
  return out;
}

inline Tensor from_flat(const std::vector<double>& c, int dim, int depth) {
  Tensor t;
  std::size_t pos = 0;
  for (int m = 1; m <= depth; ++m) {
    std::size_t count = 1;
    for (int k = 0; k < m; ++k) count *= static_cast<std::size_t>(dim);
    for (std::size_t idx = 0; idx < count; ++idx, ++pos) {
      Word w(static_cast<std::size_t>(m));
      std::size_t r = idx;
      for (int k = m - 1; k >= 0; --k) {
        w[static_cast<std::size_t>(k)] = static_cast<int>(r % static_cast<std::size_t>(dim));
        r /= static_cast<std::size_t>(dim);
      }
      if (c[pos] != 0.0) t[w] = c[pos];
    }
  }
  return t;
}

// Signature of the piecewise-linear path through `pts` (rows of length dim)
// by the iterated-integral recursion S_{0,t} = S_{0,s} exp(dx).
inline Tensor signature(const std::vector<std::vector<double>>& pts, int depth) {
  Tensor s = unit();
  for (std::size_t k = 1; k < pts.size(); ++k) {
    Tensor dx;
    for (std::size_t i = 0; i < pts[k].size(); ++i) dx[Word{static_cast<int>(i)}] = pts[k][i] - pts[k - 1][i];
    s = mul(s, exp(dx, depth), depth);
  }
  return s;
}

// sum_m |pi_m log g|^{1/m} from flat log coordinates.
inline double homogeneous_norm(const std::vector<double>& log_flat, int dim, int depth) {
  double total = 0.0;
  std::size_t pos = 0;
  for (int m = 1; m <= depth; ++m) {
    std::size_t count = 1;
    for (int k = 0; k < m; ++k) count *= static_cast<std::size_t>(dim);
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i, ++pos) s += log_flat[pos] * log_flat[pos];
    total += std::pow(std::sqrt(s), 1.0 / m);
  }
  return total;
}

// Every pair (s < t) of grid points.
inline double holder_sup_grid(const std::vector<Tensor>& points, const std::vector<double>& times, int dim, int depth,
                              double alpha) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      // x_s^{-1} x_t = exp(-log x_s) x_t
      Tensor inv = exp(add(Tensor{}, log(points[i], depth), -1.0), depth);
      Tensor inc = mul(inv, points[j], depth);
      const double v = homogeneous_norm(flat(log(inc, depth), dim, depth), dim, depth) /
                       std::pow(times[j] - times[i], alpha);
      best = std::max(best, v);
    }
  return best;
}

// E[f(x_1 + ... + x_k)] over IID draws from a finite law on the line, exactly.
inline mpq_class enumerate_sum(const std::vector<std::pair<mpq_class, mpq_class>>& atoms, int k,
                               const std::function<mpq_class(const mpq_class&)>& f) {
  std::map<mpq_class, mpq_class> dist{{mpq_class(0), mpq_class(1)}};
  for (int s = 0; s < k; ++s) {
    std::map<mpq_class, mpq_class> next;
    for (const auto& [x, p] : dist)
      for (const auto& [v, q] : atoms) next[x + v] += p * q;
    dist = std::move(next);
  }
  mpq_class total = 0;
  for (const auto& [x, p] : dist) total += p * f(x);
  return total;
}

// Hand-rolled generators for property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  std::vector<double> vec(std::size_t n, double scale) {
    std::vector<double> v(n);
    for (auto& x : v) x = real(-scale, scale);
    return v;
  }
};

}  // namespace oracle
