#include "rpwalk/stats.hpp"

#include <algorithm>
#include <cmath>

#include "rpwalk/errors.hpp"

namespace rpwalk {

namespace {

// Boundaries of batch b when n items are cut into `batches` blocks.
std::size_t batch_start(std::size_t n, int batches, int b) {
  return n * static_cast<std::size_t>(b) / static_cast<std::size_t>(batches);
}

int effective_batches(std::size_t n, int batches) {
  if (batches < 2) throw RangeError("batch means need at least two batches");
  return static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(batches)));
}

double sd_over_root(std::span<const double> v) {
  const auto b = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= b;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (b - 1.0) / b);
}

}  // namespace

Estimate batch_mean(std::span<const double> xs, int batches) {
  Estimate e;
  e.count = xs.size();
  if (xs.empty()) return e;
  double total = 0.0;
  for (double x : xs) total += x;
  e.mean = total / static_cast<double>(xs.size());
  if (xs.size() < 2) return e;
  e.batches = effective_batches(xs.size(), batches);
  std::vector<double> means;
  for (int b = 0; b < e.batches; ++b) {
    const std::size_t lo = batch_start(xs.size(), e.batches, b), hi = batch_start(xs.size(), e.batches, b + 1);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += xs[i];
    means.push_back(s / static_cast<double>(hi - lo));
  }
  e.se = sd_over_root(means);
  return e;
}

double quantile(std::span<const double> xs, double q) {
  if (xs.empty()) throw RangeError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw RangeError("quantile level must lie in [0, 1]");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Estimate batch_quantile(std::span<const double> xs, double q, int batches) {
  Estimate e;
  e.count = xs.size();
  e.mean = quantile(xs, q);
  if (xs.size() < 2) return e;
  e.batches = effective_batches(xs.size(), batches);
  std::vector<double> qs;
  for (int b = 0; b < e.batches; ++b) {
    const std::size_t lo = batch_start(xs.size(), e.batches, b), hi = batch_start(xs.size(), e.batches, b + 1);
    qs.push_back(quantile(xs.subspan(lo, hi - lo), q));
  }
  e.se = sd_over_root(qs);
  return e;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic_normal(std::span<const double> xs) {
  if (xs.empty()) throw RangeError("KS statistic of an empty sample");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size();) {
    // Ties: F_n jumps once over the whole run of equal values.
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double f = standard_normal_cdf(v[i]);
    d = std::max({d, std::abs(static_cast<double>(j) / n - f), std::abs(static_cast<double>(i) / n - f)});
    i = j;
  }
  return d;
}

double ks_critical_value(double level, std::size_t n) {
  if (!(level > 0.0 && level < 1.0)) throw RangeError("KS level must lie in (0, 1)");
  return std::sqrt(-0.5 * std::log(level / 2.0)) / std::sqrt(static_cast<double>(n));
}

double ks_null_sd(std::size_t n) {
  // Standard deviation of the Kolmogorov distribution.
  return 0.2603 / std::sqrt(static_cast<double>(n));
}

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw RangeError("least squares needs two or more paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw RangeError("least squares needs distinct abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    f.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return f;
}

}  // namespace rpwalk
