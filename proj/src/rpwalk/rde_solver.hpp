#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rpwalk/chen_lift.hpp"

namespace rpwalk {

// d vector fields V_1..V_d on R^e, evaluated together.
//   value(y, v):    v[i*e + k] = V_i(y)_k
//   jacobian(y, j): j[(i*e + k)*e + l] = d V_i(y)_k / d y_l
class VectorFieldSet {
 public:
  using Value = std::function<void(std::span<const double>, std::span<double>)>;
  using Jacobian = std::function<void(std::span<const double>, std::span<double>)>;

  // Checks the Jacobian against central differences of `value` at a fixed set
  // of test points (relative tolerance 1e-6) unless `validate` is false.
  VectorFieldSet(int state_dim, int fields, Value value, Jacobian jacobian, std::string name, bool validate = true);

  // V_i(y) = A_i y; each matrix is e x e row-major.
  static VectorFieldSet linear(int state_dim, std::vector<std::vector<double>> matrices);
  // V_i(y) = c_i.
  static VectorFieldSet constant(int state_dim, std::vector<std::vector<double>> vectors);
  // Field i rotates the (p_i, q_i) coordinate plane: V_i(y)_p = -y_q, V_i(y)_q = y_p.
  static VectorFieldSet planar_rotation(int state_dim, std::vector<std::pair<int, int>> planes);
  // V_i(y) = tanh(A_i y + b_i) componentwise: bounded with bounded derivatives.
  static VectorFieldSet sigmoid(int state_dim, std::vector<std::vector<double>> matrices,
                                std::vector<std::vector<double>> offsets);

  int state_dim() const noexcept { return e_; }
  int fields() const noexcept { return d_; }
  const std::string& name() const noexcept { return name_; }

  void value(std::span<const double> y, std::span<double> v) const { value_(y, v); }
  void jacobian(std::span<const double> y, std::span<double> j) const { jacobian_(y, j); }

  // Worst relative mismatch between the Jacobian and central differences on
  // the test points.
  double derivative_mismatch() const;

  // The fields of `a` followed by those of `b` (same state dimension); used to
  // append a drift paired with an adjoined time coordinate.
  static VectorFieldSet concat(const VectorFieldSet& a, const VectorFieldSet& b);

 private:
  int e_;
  int d_;
  Value value_;
  Jacobian jacobian_;
  std::string name_;
};

// d integrands phi_1..phi_d : R^d -> R^e.
//   value(x, v):    v[i*e + k] = phi_i(x)_k
//   jacobian(x, j): j[(i*e + k)*d + l] = d phi_i(x)_k / d x_l
class IntegrandSet {
 public:
  using Value = std::function<void(std::span<const double>, std::span<double>)>;
  using Jacobian = std::function<void(std::span<const double>, std::span<double>)>;

  IntegrandSet(int path_dim, int out_dim, Value value, Jacobian jacobian, std::string name, bool validate = true);

  // phi_i(x) = c_i; each vector has e entries.
  static IntegrandSet constant(int path_dim, std::vector<std::vector<double>> vectors);
  // phi_i(x) = M_i x with M_i an e x d row-major matrix.
  static IntegrandSet linear(int path_dim, int out_dim, std::vector<std::vector<double>> matrices);
  // phi(x) = (-x_2, x_1) / 2 on R^2: integrates to the Levy area.
  static IntegrandSet levy_area();

  int path_dim() const noexcept { return d_; }
  int out_dim() const noexcept { return e_; }
  const std::string& name() const noexcept { return name_; }
  void value(std::span<const double> x, std::span<double> v) const { value_(x, v); }
  void jacobian(std::span<const double> x, std::span<double> j) const { jacobian_(x, j); }
  double derivative_mismatch() const;

 private:
  int d_;
  int e_;
  Value value_;
  Jacobian jacobian_;
  std::string name_;
};

// Time/state samples; states row-major (size x state_dim).
struct SolutionPath {
  int state_dim = 0;
  std::vector<double> times;
  std::vector<double> states;

  std::size_t size() const noexcept { return times.size(); }
  std::span<const double> state(std::size_t k) const {
    return {states.data() + k * static_cast<std::size_t>(state_dim), static_cast<std::size_t>(state_dim)};
  }
  std::span<const double> final_state() const { return state(size() - 1); }
  // Header "t,y1,...,ye", then one row per sample at 17 significant digits.
  std::string to_csv() const;
};

// Step-2 increment scheme. Over each mesh interval [s, t]:
//   y <- y + sum_i V_i(y) x1_i + sum_{i,j} (DV_j V_i)(y) x2_ij
// with x1, x2 the level-1 and level-2 blocks of the increment x_{s,t}. Each
// driver segment is split into `substeps` equal pieces along its
// interpolation. Throws DivergenceError on a non-finite state and refuses
// depth-1 drivers.
SolutionPath rde_solve_step2(const LiftedPath& driver, const VectorFieldSet& fields, std::span<const double> y0,
                             int substeps = 1);

// Endpoint only; same scheme, no storage.
std::vector<double> rde_solve_step2_endpoint(const LiftedPath& driver, const VectorFieldSet& fields,
                                             std::span<const double> y0, int substeps = 1);

// Heun (predictor-corrector midpoint) scheme for dY = V(Y) o dB on sampled
// driver values (row-major (K+1) x d) at `times`.
SolutionPath stratonovich_reference(const VectorFieldSet& fields, std::span<const double> samples,
                                    std::span<const double> times, std::span<const double> y0);

// Heun endpoint from raw increments (row-major K x d), in place on `y`.
void heun_integrate(const VectorFieldSet& fields, std::span<const double> increments, std::span<double> y);

// Integral of sum_i phi_i(x) dx^i along the level-1 trajectory of `path`
// (piecewise linear), by five-point Gauss-Legendre quadrature per segment.
// Returns the running integral at the grid points.
SolutionPath path_integral(const IntegrandSet& phi, const LiftedPath& path);

// The path (x_t, t) in R^{d+1}, re-lifted from the level-1 chords at the same
// depth. Requires a linear-lift path.
LiftedPath adjoin_time(const LiftedPath& path);

}  // namespace rpwalk
