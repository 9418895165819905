#include "rpwalk/walk_gen.hpp"

#include <cmath>
#include <limits>

namespace rpwalk {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::rademacher: return "rademacher";
    case DistributionKind::gaussian: return "gaussian";
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::student_t: return "student-t";
    case DistributionKind::two_point_asymmetric: return "two-point-asymmetric";
    case DistributionKind::constant: return "constant";
  }
  return "?";
}

DistributionKind distribution_from_string(std::string_view name) {
  for (auto k : {DistributionKind::rademacher, DistributionKind::gaussian, DistributionKind::uniform,
                 DistributionKind::student_t, DistributionKind::two_point_asymmetric, DistributionKind::constant})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown distribution '" + std::string(name) + "'");
}

void IncrementDistribution::validate() const {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("distribution dimension out of range");
  if (!std::isfinite(center_offset)) throw ConfigError("center_offset must be finite");
  if (kind == DistributionKind::student_t && !(nu > 2.0))
    throw ConfigError("student-t increments need nu > 2 (finite variance); got nu = " + std::to_string(nu));
  if (kind == DistributionKind::two_point_asymmetric && !(asym_prob > 0.0 && asym_prob < 1.0))
    throw ConfigError("asym_prob must lie in (0, 1)");
}

double IncrementDistribution::variance() const {
  switch (kind) {
    case DistributionKind::constant: return 0.0;
    case DistributionKind::two_point_asymmetric: return 1.0;
    default: break;
  }
  if (normalize) return 1.0;
  switch (kind) {
    case DistributionKind::uniform: return 1.0 / 3.0;
    case DistributionKind::student_t: return nu / (nu - 2.0);
    default: return 1.0;
  }
}

double IncrementDistribution::finite_moment_order() const {
  if (kind == DistributionKind::student_t) return nu;
  return std::numeric_limits<double>::infinity();
}

bool IncrementDistribution::symmetric() const {
  return center_offset == 0.0 && kind != DistributionKind::two_point_asymmetric;
}

void IncrementDistribution::sample(Rng& rng, std::span<double> out) const {
  switch (kind) {
    case DistributionKind::rademacher:
      for (auto& x : out) x = (rng() >> 63) ? 1.0 : -1.0;
      break;
    case DistributionKind::gaussian: {
      std::normal_distribution<double> n01;
      for (auto& x : out) x = n01(rng);
      break;
    }
    case DistributionKind::uniform: {
      const double h = normalize ? std::sqrt(3.0) : 1.0;
      std::uniform_real_distribution<double> u(-h, h);
      for (auto& x : out) x = u(rng);
      break;
    }
    case DistributionKind::student_t: {
      std::student_t_distribution<double> t(nu);
      const double s = normalize ? std::sqrt((nu - 2.0) / nu) : 1.0;
      for (auto& x : out) x = s * t(rng);
      break;
    }
    case DistributionKind::two_point_asymmetric: {
      const double hi = std::sqrt((1.0 - asym_prob) / asym_prob);
      const double lo = -std::sqrt(asym_prob / (1.0 - asym_prob));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (auto& x : out) x = u(rng) < asym_prob ? hi : lo;
      break;
    }
    case DistributionKind::constant:
      for (auto& x : out) x = 0.0;
      break;
  }
  if (center_offset != 0.0)
    for (auto& x : out) x += center_offset;
}

Rng master_seed_split(std::uint64_t seed, std::uint64_t replica, std::uint64_t stream) {
  const std::uint64_t tagged = replica ^ (stream * 0xD1B54A32D192ED03ULL);
  return Rng(splitmix64(seed + splitmix64(tagged)));
}

GroupIncrementSampler exponential_sampler(const IncrementDistribution& dist, int depth) {
  dist.validate();
  GroupIncrementSampler s;
  s.dim = dist.dim;
  s.depth = depth;
  s.level_one_exponential = true;
  s.draw = [dist, depth](Rng& rng) {
    LieElement a(dist.dim, depth);
    dist.sample(rng, a.level(1));
    return exp(a);
  };
  return s;
}

GroupIncrementSampler area_kick_sampler(const IncrementDistribution& dist, int depth, double eta) {
  dist.validate();
  if (dist.dim < 2) throw ConfigError("area kicks need dimension >= 2");
  if (depth < 2) throw ConfigError("area kicks need depth >= 2");
  GroupIncrementSampler s;
  s.dim = dist.dim;
  s.depth = depth;
  s.level_one_exponential = (eta == 0.0);
  s.draw = [dist, depth, eta](Rng& rng) {
    LieElement a(dist.dim, depth);
    dist.sample(rng, a.level(1));
    const double sign = (rng() >> 63) ? 1.0 : -1.0;
    auto l2 = a.level(2);
    l2[1] = eta * sign;                                  // (1,2)
    l2[static_cast<std::size_t>(dist.dim)] = -eta * sign;  // (2,1)
    return exp(a);
  };
  return s;
}

LiftedPath sample_group_walk(std::int64_t n, const GroupIncrementSampler& sampler, Rng& rng, bool force_log_linear) {
  if (n < 1) throw ConfigError("walk length n must be >= 1");
  const auto count = static_cast<std::size_t>(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const Interpolation mode = (sampler.level_one_exponential && !force_log_linear) ? Interpolation::linear_lift
                                                                                 : Interpolation::log_linear;
  std::vector<double> times(count + 1);
  for (std::size_t k = 0; k <= count; ++k) times[k] = static_cast<double>(k) / static_cast<double>(n);

  std::vector<GroupElement> points;
  std::vector<LieElement> gens;
  points.reserve(count + 1);
  gens.reserve(count);
  GroupElement product(sampler.dim, sampler.depth);
  points.push_back(product);
  for (std::size_t k = 0; k < count; ++k) {
    GroupElement xi = sampler.draw(rng);
    product = product * xi;
    points.push_back(dilate(scale, product));
    LieElement g = dilate(scale, log(xi));
    if (mode == Interpolation::linear_lift) {
      for (int m = 2; m <= g.depth(); ++m)
        for (auto& c : g.level(m)) c = 0.0;
    }
    gens.push_back(std::move(g));
  }
  return LiftedPath::from_parts(std::move(times), std::move(points), std::move(gens), mode);
}

LiftedPath sample_walk(const WalkSpec& spec, Rng& rng, std::vector<double>* increments) {
  auto sampler = exponential_sampler(spec.distribution, spec.depth);
  if (increments) {
    increments->clear();
    increments->reserve(static_cast<std::size_t>(spec.n) * static_cast<std::size_t>(spec.distribution.dim));
    auto inner = sampler.draw;
    sampler.draw = [inner, increments](Rng& r) {
      GroupElement g = inner(r);
      auto l1 = g.level(1);
      increments->insert(increments->end(), l1.begin(), l1.end());
      return g;
    };
  }
  return sample_group_walk(spec.n, sampler, rng, spec.interpolation == Interpolation::log_linear);
}

}  // namespace rpwalk
