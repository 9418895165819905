#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rpwalk/chen_lift.hpp"

namespace rpwalk {

using Rng = std::mt19937_64;

enum class DistributionKind {
  rademacher,
  gaussian,
  uniform,
  student_t,
  two_point_asymmetric,
  // Point mass at the centering offset; zero variance.
  constant,
};

std::string_view to_string(DistributionKind kind);
DistributionKind distribution_from_string(std::string_view name);

// Law of one R^d increment; coordinates are IID.
//
// With `normalize` set (the default) every non-degenerate kind is scaled to
// mean 0 and unit variance per coordinate; the raw forms are rademacher +-1,
// gaussian N(0,1), uniform U(-1,1), student_t t_nu, and the two-point law
// (already standardized). `center_offset` is added afterwards.
struct IncrementDistribution {
  DistributionKind kind = DistributionKind::rademacher;
  int dim = 1;
  bool normalize = true;
  double center_offset = 0.0;
  // Degrees of freedom for student_t; must exceed 2.
  double nu = 0.0;
  // Probability of the positive atom of the two-point law.
  double asym_prob = 0.2;

  void validate() const;
  // Per-coordinate variance of the generated law.
  double variance() const;
  // Supremum of the orders r with E|xi|^r finite.
  double finite_moment_order() const;
  bool symmetric() const;
  void sample(Rng& rng, std::span<double> out) const;
};

// Deterministic per-replica stream; distinct replica indices (or stream tags)
// give distinct 64-bit seeds.
Rng master_seed_split(std::uint64_t seed, std::uint64_t replica, std::uint64_t stream = 0);

struct WalkSpec {
  std::int64_t n = 1;
  IncrementDistribution distribution;
  int depth = 2;
  std::uint64_t seed = 0;
  Interpolation interpolation = Interpolation::linear_lift;
};

// Draws one group-valued increment.
struct GroupIncrementSampler {
  int dim = 1;
  int depth = 2;
  // True when every draw is exp of a level-1 vector, so geodesic (linear-lift)
  // interpolation is exact.
  bool level_one_exponential = false;
  std::function<GroupElement(Rng&)> draw;
};

// exp(xi) with xi from `dist`.
GroupIncrementSampler exponential_sampler(const IncrementDistribution& dist, int depth);

// exp(xi + eta * s * [e_1, e_2]) with s = +-1 independent of xi; needs dim >= 2.
GroupIncrementSampler area_kick_sampler(const IncrementDistribution& dist, int depth, double eta);

// Grid {k/n}; point k is dilate(n^{-1/2}, xi_1 (x) ... (x) xi_k).
// Interpolation is linear-lift when the sampler produces level-1
// exponentials, log-linear otherwise (or when `force_log_linear`).
LiftedPath sample_group_walk(std::int64_t n, const GroupIncrementSampler& sampler, Rng& rng,
                             bool force_log_linear = false);

// The lifted rescaled walk S_N(W^(n)). When `increments` is non-null it
// receives the raw increments xi_1..xi_n row-major.
LiftedPath sample_walk(const WalkSpec& spec, Rng& rng, std::vector<double>* increments = nullptr);

}  // namespace rpwalk
