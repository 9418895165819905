#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rpwalk/tensor.hpp"

namespace rpwalk {

enum class Interpolation {
  // Segments are exp(theta * v) for a level-1 chord v: exact geodesics.
  linear_lift,
  // Segments are exp(theta * log(segment increment)); used for general
  // group-valued increments.
  log_linear,
};

std::string_view to_string(Interpolation mode);
Interpolation interpolation_from_string(std::string_view name);

// A group-valued path on a strictly increasing time grid, starting at the
// unit element. Between grid points the path follows x_k (x) exp(theta * gen_k)
// where gen_k is the segment generator fixed by the interpolation mode.
class LiftedPath {
 public:
  // Points x_{k+1} = x_k (x) exp(generator_k); x_0 = unit.
  static LiftedPath from_generators(std::vector<double> times, std::vector<LieElement> generators,
                                    Interpolation mode);

  // Points given directly. The first point must be the unit element. The
  // segment generators are recovered from the point increments; for
  // linear-lift paths only their level-1 part is kept.
  static LiftedPath from_points(std::vector<double> times, std::vector<GroupElement> points, Interpolation mode);

  // Points and generators both supplied; consistency is the caller's
  // responsibility.
  static LiftedPath from_parts(std::vector<double> times, std::vector<GroupElement> points,
                               std::vector<LieElement> generators, Interpolation mode);

  int dim() const noexcept { return dim_; }
  int depth() const noexcept { return depth_; }
  Interpolation interpolation() const noexcept { return mode_; }
  std::size_t size() const noexcept { return times_.size(); }
  std::size_t segments() const noexcept { return times_.size() - 1; }

  std::span<const double> times() const noexcept { return times_; }
  double start_time() const noexcept { return times_.front(); }
  double end_time() const noexcept { return times_.back(); }
  const GroupElement& point(std::size_t k) const { return points_.at(k); }
  std::span<const GroupElement> points() const noexcept { return points_; }
  const LieElement& generator(std::size_t k) const { return generators_.at(k); }

  // log of the stored point k (cached).
  const LieElement& point_log(std::size_t k) const { return logs_.at(k); }

 private:
  LiftedPath() = default;
  void finish();

  int dim_ = 0;
  int depth_ = 0;
  Interpolation mode_ = Interpolation::linear_lift;
  std::vector<double> times_;
  std::vector<GroupElement> points_;
  std::vector<LieElement> generators_;
  std::vector<LieElement> logs_;

  friend LiftedPath parse_lifted_path(std::string_view text);
};

// Chen lift of the piecewise-linear path through `samples` (row-major,
// count x dim). Grid k carries exp(v_1) (x) ... (x) exp(v_k) with
// v_j = sample_j - sample_{j-1}. Times default to the uniform grid on [0,1].
LiftedPath lift_linear_chords(std::span<const double> samples, int dim, int depth,
                              std::span<const double> times = {});

GroupElement interpolate(const LiftedPath& path, double t);

// x_s^{-1} (x) x_t.
GroupElement increment(const LiftedPath& path, double s, double t);

GroupElement signature(const LiftedPath& path);

// Level-1 trajectory at the grid points (row-major size x dim).
std::vector<double> level_one_samples(const LiftedPath& path);

// Text form: a header with dim, depth and interpolation tag, then one row per
// grid point holding the time followed by the log coordinates of the point
// (levels 1..N), all at 17 significant digits.
std::string serialize(const LiftedPath& path);
LiftedPath parse_lifted_path(std::string_view text);

}  // namespace rpwalk
