#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace rpwalk {

inline constexpr int kDefaultBatches = 32;

// Mean with a batch-means standard error: the sample is cut into `batches`
// contiguous blocks (sizes differing by at most one) and the error is the
// standard deviation of the block means over sqrt(batches).
struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
  int batches = 0;
};

Estimate batch_mean(std::span<const double> xs, int batches = kDefaultBatches);

// Type-7 (linear interpolation) empirical quantile; the input is copied.
double quantile(std::span<const double> xs, double q);

// Full-sample quantile with the spread of per-batch quantiles as its error.
Estimate batch_quantile(std::span<const double> xs, double q, int batches = kDefaultBatches);

// sup_x |F_n(x) - Phi(x)| against the standard normal.
double ks_statistic_normal(std::span<const double> xs);

// Asymptotic Kolmogorov critical value sqrt(-log(level/2)/2) / sqrt(n).
double ks_critical_value(double level, std::size_t n);

// Standard deviation of sqrt(n) D_n under the null, divided by sqrt(n).
double ks_null_sd(std::size_t n);

double standard_normal_cdf(double x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  // OLS standard error of the slope (zero with fewer than three points).
  double slope_se = 0.0;
};

LinearFit ols(std::span<const double> x, std::span<const double> y);

// Indices [0, count) are split across `threads` workers; results land at
// their index so the reduction order never depends on scheduling. The first
// exception thrown by any worker is rethrown.
template <class R>
std::vector<R> run_replicas(std::size_t count, int threads, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(count);
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  const auto workers = static_cast<std::size_t>(threads) < count ? static_cast<std::size_t>(threads) : count;
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace rpwalk
