#include "rpwalk/rough_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace rpwalk {

namespace {

constexpr double kMinGap = 1e-12;

double level_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("Hoelder exponent must lie in (0, 1)");
}

// Sorted evaluation times: `base` plus 2^refinement - 1 dyadic points inside
// every base segment.
std::vector<double> refine(const std::vector<double>& base, int refinement) {
  if (refinement < 0 || refinement > 12) throw RangeError("refinement depth must lie in [0, 12]");
  const std::size_t parts = std::size_t{1} << refinement;
  std::vector<double> out;
  out.reserve((base.size() - 1) * parts + 1);
  for (std::size_t k = 0; k + 1 < base.size(); ++k) {
    const double a = base[k], b = base[k + 1];
    out.push_back(a);
    for (std::size_t j = 1; j < parts; ++j) out.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(parts));
  }
  out.push_back(base.back());
  return out;
}

// Returns the common spacing when the grid is uniform, 0 otherwise.
double uniform_spacing(const std::vector<double>& t) {
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t k = 1; k < t.size(); ++k)
    if (std::abs((t[k] - t[k - 1]) - h) > 1e-9 * h) return 0.0;
  return h;
}

// Step-2 increment norm from the logs of the two endpoints:
// log(exp(-A) exp(B)) = B - A - [A, B]/2 at depth 2.
template <int D>
struct Step2Kernel {
  int dim;
  const double* a1;  // level 1 of the logs, stride dim
  const double* a2;  // level 2 of the logs, stride dim*dim

  double operator()(std::size_t s, std::size_t t) const {
    const int d = D > 0 ? D : dim;
    const double* xs = a1 + s * static_cast<std::size_t>(d);
    const double* xt = a1 + t * static_cast<std::size_t>(d);
    const double* ls = a2 + s * static_cast<std::size_t>(d * d);
    const double* lt = a2 + t * static_cast<std::size_t>(d * d);
    double n1 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double u = xt[i] - xs[i];
      n1 += u * u;
    }
    double n2 = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double u = lt[i * d + j] - ls[i * d + j] - 0.5 * (xs[i] * xt[j] - xt[i] * xs[j]);
        n2 += u * u;
      }
    return std::sqrt(n1) + std::sqrt(std::sqrt(n2));
  }
};

template <class PairNorm>
std::vector<HolderEvaluation> scan_pairs(const std::vector<double>& times, std::span<const double> alphas,
                                         int refinement, const PairNorm& pair_norm) {
  std::vector<HolderEvaluation> best(alphas.size());
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    best[a].alpha = alphas[a];
    best[a].refinement = refinement;
  }
  const std::size_t n = times.size();
  const double h = uniform_spacing(times);
  std::vector<std::vector<double>> inv_pow;
  if (h > 0.0) {
    inv_pow.assign(alphas.size(), std::vector<double>(n));
    for (std::size_t a = 0; a < alphas.size(); ++a)
      for (std::size_t g = 1; g < n; ++g) inv_pow[a][g] = std::pow(static_cast<double>(g) * h, -alphas[a]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = times[j] - times[i];
      if (gap < kMinGap) continue;
      const double nrm = pair_norm(i, j);
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        const double r = h > 0.0 ? nrm * inv_pow[a][j - i] : nrm * std::pow(gap, -alphas[a]);
        if (r > best[a].value) {
          best[a].value = r;
          best[a].s = times[i];
          best[a].t = times[j];
        }
      }
    }
  }
  return best;
}

}  // namespace

double homogeneous_norm(const LieElement& log_g) {
  double total = 0.0;
  for (int m = 1; m <= log_g.depth(); ++m) {
    const double l = level_norm(log_g.level(m));
    total += m == 1 ? l : std::pow(l, 1.0 / m);
  }
  return total;
}

double homogeneous_norm(const GroupElement& g) { return homogeneous_norm(log(g)); }

double cc_distance(const GroupElement& g, const GroupElement& h) { return homogeneous_norm(inverse(g) * h); }

std::vector<HolderEvaluation> holder_norms(const LiftedPath& x, std::span<const double> alphas, int refinement) {
  for (double a : alphas) check_alpha(a);
  std::vector<double> base(x.times().begin(), x.times().end());
  const auto times = refine(base, refinement);
  const std::size_t parts = std::size_t{1} << refinement;

  // Logs at every evaluation time; grid points reuse the cached logs.
  std::vector<LieElement> logs;
  logs.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k % parts == 0)
      logs.push_back(x.point_log(k / parts));
    else
      logs.push_back(log(interpolate(x, times[k])));
  }

  const int d = x.dim();
  if (x.depth() == 2) {
    std::vector<double> a1, a2;
    a1.reserve(times.size() * d);
    a2.reserve(times.size() * d * d);
    for (const auto& l : logs) {
      a1.insert(a1.end(), l.level(1).begin(), l.level(1).end());
      a2.insert(a2.end(), l.level(2).begin(), l.level(2).end());
    }
    switch (d) {
      case 1: return scan_pairs(times, alphas, refinement, Step2Kernel<1>{d, a1.data(), a2.data()});
      case 2: return scan_pairs(times, alphas, refinement, Step2Kernel<2>{d, a1.data(), a2.data()});
      case 3: return scan_pairs(times, alphas, refinement, Step2Kernel<3>{d, a1.data(), a2.data()});
      default: return scan_pairs(times, alphas, refinement, Step2Kernel<0>{d, a1.data(), a2.data()});
    }
  }

  std::vector<GroupElement> inv, pts;
  inv.reserve(logs.size());
  pts.reserve(logs.size());
  for (const auto& l : logs) {
    inv.push_back(exp(-l));
    pts.push_back(exp(l));
  }
  if (x.depth() == 1) {
    return scan_pairs(times, alphas, refinement, [&](std::size_t s, std::size_t t) {
      double n = 0.0;
      for (int i = 0; i < d; ++i) {
        const double u = logs[t].level(1)[i] - logs[s].level(1)[i];
        n += u * u;
      }
      return std::sqrt(n);
    });
  }
  return scan_pairs(times, alphas, refinement,
                    [&](std::size_t s, std::size_t t) { return homogeneous_norm(inv[s] * pts[t]); });
}

HolderEvaluation holder_norm(const LiftedPath& x, double alpha, int refinement) {
  const double a[1] = {alpha};
  return holder_norms(x, a, refinement).front();
}

HolderEvaluation holder_distance(const LiftedPath& x, const LiftedPath& y, double alpha, int refinement) {
  check_alpha(alpha);
  if (x.dim() != y.dim() || x.depth() != y.depth()) throw DimensionError("paths differ in dimension or depth");
  if (x.start_time() != y.start_time() || x.end_time() != y.end_time())
    throw RangeError("paths must live on the same time interval");
  std::vector<double> base;
  base.insert(base.end(), x.times().begin(), x.times().end());
  base.insert(base.end(), y.times().begin(), y.times().end());
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  const auto times = refine(base, refinement);

  std::vector<GroupElement> xp, xi, yp, yi;
  for (double t : times) {
    xp.push_back(interpolate(x, t));
    yp.push_back(interpolate(y, t));
    xi.push_back(inverse(xp.back()));
    yi.push_back(inverse(yp.back()));
  }
  const double a[1] = {alpha};
  return scan_pairs(times, a, refinement, [&](std::size_t s, std::size_t t) {
           return cc_distance(xi[s] * xp[t], yi[s] * yp[t]);
         }).front();
}

}  // namespace rpwalk
