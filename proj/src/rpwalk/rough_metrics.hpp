#pragma once

#include <span>
#include <vector>

#include "rpwalk/chen_lift.hpp"

namespace rpwalk {

// Homogeneous norm sum_{m=1}^{N} |pi_m(log g)|^{1/m} with Euclidean norms per
// level. It is equivalent to, not equal to, the Carnot-Caratheodory norm:
// c ||g||_CC <= ||g|| <= C ||g||_CC with constants depending only on (d, N).
// Level-1 exponentials have ||exp(v)|| = ||exp(v)||_CC = |v|. The norm is
// symmetric (log g^{-1} = -log g) and homogeneous under dilation, but it is not
// subadditive, so ||g h|| <= C (||g|| + ||h||) holds only with some C > 1.
double homogeneous_norm(const GroupElement& g);
double homogeneous_norm(const LieElement& log_g);

// ||g^{-1} (x) h||; left-invariant.
double cc_distance(const GroupElement& g, const GroupElement& h);

inline constexpr int kDefaultHolderRefinement = 4;

struct HolderEvaluation {
  double alpha = 0.0;
  int refinement = 0;
  double value = 0.0;
  // Attaining pair; (0, 0) when no admissible pair exists.
  double s = 0.0;
  double t = 0.0;
};

// sup d(x_{s,t}, x'_{s,t}) / |t-s|^alpha over all pairs drawn from the union of
// both grids, each union segment refined by 2^refinement - 1 dyadic points.
// A lower bound on the continuous supremum, non-decreasing in `refinement`.
// Pairs with t - s < 1e-12 are skipped. Ties keep the lexicographically first
// (s, t).
HolderEvaluation holder_distance(const LiftedPath& x, const LiftedPath& y, double alpha,
                                 int refinement = kDefaultHolderRefinement);

// holder_distance against the constant unit path.
HolderEvaluation holder_norm(const LiftedPath& x, double alpha, int refinement = kDefaultHolderRefinement);

// holder_norm for several exponents sharing one pass over the pairs.
std::vector<HolderEvaluation> holder_norms(const LiftedPath& x, std::span<const double> alphas,
                                           int refinement = kDefaultHolderRefinement);

}  // namespace rpwalk
