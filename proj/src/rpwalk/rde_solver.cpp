#include "rpwalk/rde_solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

namespace rpwalk {

namespace {

constexpr double kDerivativeTolerance = 1e-6;

// Deterministic test points: the origin plus six pseudo-random points in
// [-2, 2]^n.
std::vector<std::vector<double>> test_points(int n) {
  std::vector<std::vector<double>> pts;
  pts.emplace_back(static_cast<std::size_t>(n), 0.0);
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 6; ++k) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (auto& x : p) x = u(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

// Max relative gap between an analytic Jacobian (rows = outputs, cols = n
// inputs) and central differences of `f`.
template <class F, class J>
double fd_mismatch(int n, std::size_t outputs, const F& f, const J& jac) {
  double worst = 0.0;
  std::vector<double> plus(outputs), minus(outputs), analytic(outputs * static_cast<std::size_t>(n));
  for (auto y : test_points(n)) {
    jac(std::span<const double>(y), std::span<double>(analytic));
    for (int l = 0; l < n; ++l) {
      const double y_l = y[static_cast<std::size_t>(l)];
      const double h = 1e-5 * (1.0 + std::abs(y_l));
      y[static_cast<std::size_t>(l)] = y_l + h;
      f(std::span<const double>(y), std::span<double>(plus));
      y[static_cast<std::size_t>(l)] = y_l - h;
      f(std::span<const double>(y), std::span<double>(minus));
      y[static_cast<std::size_t>(l)] = y_l;
      for (std::size_t r = 0; r < outputs; ++r) {
        const double fd = (plus[r] - minus[r]) / (2.0 * h);
        const double an = analytic[r * static_cast<std::size_t>(n) + static_cast<std::size_t>(l)];
        worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
      }
    }
  }
  return worst;
}

void append_number(std::string& out, double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  out.append(buf, r.ptr);
}

void check_matrices(const std::vector<std::vector<double>>& ms, std::size_t size, const char* what) {
  if (ms.empty()) throw DimensionError(std::string(what) + ": at least one field is required");
  for (const auto& m : ms)
    if (m.size() != size) throw DimensionError(std::string(what) + ": wrong coefficient count");
}

bool all_finite(std::span<const double> y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

// Workspace for the step-2 update.
struct Step2Workspace {
  int e, d;
  std::vector<double> v, jac, w;
  Step2Workspace(int e_, int d_)
      : e(e_), d(d_), v(static_cast<std::size_t>(e_ * d_)), jac(static_cast<std::size_t>(d_ * e_ * e_)),
        w(static_cast<std::size_t>(e_)) {}

  void step(const VectorFieldSet& fields, std::span<double> y, const double* x1, const double* x2) {
    fields.value(y, v);
    fields.jacobian(y, jac);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < e; ++k) y[static_cast<std::size_t>(k)] += v[static_cast<std::size_t>(i * e + k)] * x1[i];
    for (int j = 0; j < d; ++j) {
      // w = sum_i x2_ij V_i(y); then y += DV_j w.
      std::fill(w.begin(), w.end(), 0.0);
      for (int i = 0; i < d; ++i) {
        const double c = x2[i * d + j];
        if (c == 0.0) continue;
        for (int l = 0; l < e; ++l) w[static_cast<std::size_t>(l)] += c * v[static_cast<std::size_t>(i * e + l)];
      }
      for (int k = 0; k < e; ++k) {
        const double* row = jac.data() + static_cast<std::size_t>((j * e + k) * e);
        double s = 0.0;
        for (int l = 0; l < e; ++l) s += row[l] * w[static_cast<std::size_t>(l)];
        y[static_cast<std::size_t>(k)] += s;
      }
    }
  }
};

template <class Emit>
void run_step2(const LiftedPath& driver, const VectorFieldSet& fields, std::span<double> y, int substeps,
               const Emit& emit) {
  if (driver.depth() < 2) throw DomainError("RDE solving needs a driver of depth >= 2");
  if (fields.fields() != driver.dim()) throw DimensionError("number of vector fields must equal the driver dimension");
  if (static_cast<int>(y.size()) != fields.state_dim()) throw DimensionError("initial state has the wrong dimension");
  if (substeps < 1) throw RangeError("substeps must be >= 1");
  if (!all_finite(y)) throw DivergenceError("non-finite initial state", 0);
  const int d = driver.dim();
  Step2Workspace ws(fields.state_dim(), d);
  std::vector<double> x1(static_cast<std::size_t>(d)), x2(static_cast<std::size_t>(d * d));
  const double theta = 1.0 / substeps;
  std::size_t step = 0;
  for (std::size_t k = 0; k < driver.segments(); ++k) {
    const auto& gen = driver.generator(k);
    auto g1 = gen.level(1);
    auto g2 = gen.level(2);
    // Increment over a fraction theta of the segment: levels 1 and 2 of exp(theta * gen).
    for (int i = 0; i < d; ++i) x1[static_cast<std::size_t>(i)] = theta * g1[static_cast<std::size_t>(i)];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        x2[static_cast<std::size_t>(i * d + j)] =
            theta * g2[static_cast<std::size_t>(i * d + j)] + 0.5 * x1[static_cast<std::size_t>(i)] * x1[static_cast<std::size_t>(j)];
    const double t0 = driver.times()[k], t1 = driver.times()[k + 1];
    for (int s = 0; s < substeps; ++s) {
      ws.step(fields, y, x1.data(), x2.data());
      ++step;
      if (!all_finite(y)) throw DivergenceError("RDE state became non-finite", step);
      emit(s + 1 == substeps ? t1 : t0 + (t1 - t0) * (s + 1) * theta, std::span<const double>(y));
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// VectorFieldSet

VectorFieldSet::VectorFieldSet(int state_dim, int fields, Value value, Jacobian jacobian, std::string name,
                               bool validate)
    : e_(state_dim), d_(fields), value_(std::move(value)), jacobian_(std::move(jacobian)), name_(std::move(name)) {
  if (e_ < 1 || d_ < 1) throw DimensionError("vector field sets need e >= 1 and d >= 1");
  if (!value_ || !jacobian_) throw ConfigError("vector field callbacks must be set");
  if (validate) {
    const double gap = derivative_mismatch();
    if (!(gap <= kDerivativeTolerance))
      throw DomainError("vector field '" + name_ + "': Jacobian disagrees with finite differences (relative gap " +
                        std::to_string(gap) + ")");
  }
}

double VectorFieldSet::derivative_mismatch() const {
  return fd_mismatch(e_, static_cast<std::size_t>(d_ * e_), value_, jacobian_);
}

VectorFieldSet VectorFieldSet::linear(int e, std::vector<std::vector<double>> ms) {
  check_matrices(ms, static_cast<std::size_t>(e * e), "linear fields");
  const int d = static_cast<int>(ms.size());
  auto value = [e, ms](std::span<const double> y, std::span<double> v) {
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (int k = 0; k < e; ++k) {
        double s = 0.0;
        for (int l = 0; l < e; ++l) s += ms[i][static_cast<std::size_t>(k * e + l)] * y[static_cast<std::size_t>(l)];
        v[i * static_cast<std::size_t>(e) + static_cast<std::size_t>(k)] = s;
      }
  };
  auto jac = [ms](std::span<const double>, std::span<double> j) {
    std::size_t o = 0;
    for (const auto& m : ms)
      for (double c : m) j[o++] = c;
  };
  return VectorFieldSet(e, d, value, jac, "linear");
}

VectorFieldSet VectorFieldSet::constant(int e, std::vector<std::vector<double>> cs) {
  check_matrices(cs, static_cast<std::size_t>(e), "constant fields");
  const int d = static_cast<int>(cs.size());
  auto value = [cs](std::span<const double>, std::span<double> v) {
    std::size_t o = 0;
    for (const auto& c : cs)
      for (double x : c) v[o++] = x;
  };
  auto jac = [](std::span<const double>, std::span<double> j) { std::fill(j.begin(), j.end(), 0.0); };
  return VectorFieldSet(e, d, value, jac, "constant");
}

VectorFieldSet VectorFieldSet::planar_rotation(int e, std::vector<std::pair<int, int>> planes) {
  if (planes.empty()) throw DimensionError("rotation fields: at least one plane is required");
  for (auto [p, q] : planes)
    if (p < 0 || q < 0 || p >= e || q >= e || p == q) throw DimensionError("rotation plane out of range");
  std::vector<std::vector<double>> ms;
  for (auto [p, q] : planes) {
    std::vector<double> a(static_cast<std::size_t>(e * e), 0.0);
    a[static_cast<std::size_t>(p * e + q)] = -1.0;
    a[static_cast<std::size_t>(q * e + p)] = 1.0;
    ms.push_back(std::move(a));
  }
  auto out = linear(e, std::move(ms));
  out.name_ = "planar-rotation";
  return out;
}

VectorFieldSet VectorFieldSet::sigmoid(int e, std::vector<std::vector<double>> ms, std::vector<std::vector<double>> bs) {
  check_matrices(ms, static_cast<std::size_t>(e * e), "sigmoid fields");
  check_matrices(bs, static_cast<std::size_t>(e), "sigmoid offsets");
  if (ms.size() != bs.size()) throw DimensionError("sigmoid fields: one offset per matrix");
  const int d = static_cast<int>(ms.size());
  auto pre = [e, ms, bs](std::size_t i, int k, std::span<const double> y) {
    double s = bs[i][static_cast<std::size_t>(k)];
    for (int l = 0; l < e; ++l) s += ms[i][static_cast<std::size_t>(k * e + l)] * y[static_cast<std::size_t>(l)];
    return s;
  };
  auto value = [e, d, pre](std::span<const double> y, std::span<double> v) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i)
      for (int k = 0; k < e; ++k) v[i * static_cast<std::size_t>(e) + static_cast<std::size_t>(k)] = std::tanh(pre(i, k, y));
  };
  auto jac = [e, d, ms, pre](std::span<const double> y, std::span<double> j) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i)
      for (int k = 0; k < e; ++k) {
        const double t = std::tanh(pre(i, k, y));
        const double s = 1.0 - t * t;
        for (int l = 0; l < e; ++l)
          j[(i * static_cast<std::size_t>(e) + static_cast<std::size_t>(k)) * static_cast<std::size_t>(e) +
            static_cast<std::size_t>(l)] = s * ms[i][static_cast<std::size_t>(k * e + l)];
      }
  };
  return VectorFieldSet(e, d, value, jac, "sigmoid");
}

VectorFieldSet VectorFieldSet::concat(const VectorFieldSet& a, const VectorFieldSet& b) {
  if (a.e_ != b.e_) throw DimensionError("concatenated field sets must share the state dimension");
  const std::size_t na = static_cast<std::size_t>(a.d_ * a.e_);
  const std::size_t ja = na * static_cast<std::size_t>(a.e_);
  auto value = [a, b, na](std::span<const double> y, std::span<double> v) {
    a.value(y, v.subspan(0, na));
    b.value(y, v.subspan(na));
  };
  auto jac = [a, b, ja](std::span<const double> y, std::span<double> j) {
    a.jacobian(y, j.subspan(0, ja));
    b.jacobian(y, j.subspan(ja));
  };
  return VectorFieldSet(a.e_, a.d_ + b.d_, value, jac, a.name_ + "+" + b.name_, false);
}

// ---------------------------------------------------------------------------
// IntegrandSet

IntegrandSet::IntegrandSet(int path_dim, int out_dim, Value value, Jacobian jacobian, std::string name, bool validate)
    : d_(path_dim), e_(out_dim), value_(std::move(value)), jacobian_(std::move(jacobian)), name_(std::move(name)) {
  if (d_ < 1 || e_ < 1) throw DimensionError("integrand sets need d >= 1 and e >= 1");
  if (!value_ || !jacobian_) throw ConfigError("integrand callbacks must be set");
  if (validate) {
    const double gap = derivative_mismatch();
    if (!(gap <= kDerivativeTolerance))
      throw DomainError("integrand '" + name_ + "': Jacobian disagrees with finite differences (relative gap " +
                        std::to_string(gap) + ")");
  }
}

double IntegrandSet::derivative_mismatch() const {
  return fd_mismatch(d_, static_cast<std::size_t>(d_ * e_), value_, jacobian_);
}

IntegrandSet IntegrandSet::constant(int d, std::vector<std::vector<double>> cs) {
  if (static_cast<int>(cs.size()) != d) throw DimensionError("constant integrands: one vector per path coordinate");
  const std::size_t e = cs.front().size();
  check_matrices(cs, e, "constant integrands");
  auto value = [cs](std::span<const double>, std::span<double> v) {
    std::size_t o = 0;
    for (const auto& c : cs)
      for (double x : c) v[o++] = x;
  };
  auto jac = [](std::span<const double>, std::span<double> j) { std::fill(j.begin(), j.end(), 0.0); };
  return IntegrandSet(d, static_cast<int>(e), value, jac, "constant");
}

IntegrandSet IntegrandSet::linear(int d, int e, std::vector<std::vector<double>> ms) {
  if (static_cast<int>(ms.size()) != d) throw DimensionError("linear integrands: one matrix per path coordinate");
  check_matrices(ms, static_cast<std::size_t>(e * d), "linear integrands");
  auto value = [d, e, ms](std::span<const double> x, std::span<double> v) {
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (int k = 0; k < e; ++k) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += ms[i][static_cast<std::size_t>(k * d + l)] * x[static_cast<std::size_t>(l)];
        v[i * static_cast<std::size_t>(e) + static_cast<std::size_t>(k)] = s;
      }
  };
  auto jac = [ms](std::span<const double>, std::span<double> j) {
    std::size_t o = 0;
    for (const auto& m : ms)
      for (double c : m) j[o++] = c;
  };
  return IntegrandSet(d, e, value, jac, "linear");
}

IntegrandSet IntegrandSet::levy_area() {
  auto out = linear(2, 1, {{0.0, -0.5}, {0.5, 0.0}});
  out.name_ = "levy-area";
  return out;
}

// ---------------------------------------------------------------------------
// Solvers

std::string SolutionPath::to_csv() const {
  std::string out = "t";
  for (int k = 1; k <= state_dim; ++k) out += ",y" + std::to_string(k);
  out += "\n";
  for (std::size_t r = 0; r < size(); ++r) {
    append_number(out, times[r]);
    for (double v : state(r)) {
      out += ",";
      append_number(out, v);
    }
    out += "\n";
  }
  return out;
}

SolutionPath rde_solve_step2(const LiftedPath& driver, const VectorFieldSet& fields, std::span<const double> y0,
                             int substeps) {
  SolutionPath sol;
  sol.state_dim = fields.state_dim();
  std::vector<double> y(y0.begin(), y0.end());
  sol.times.push_back(driver.start_time());
  sol.states.insert(sol.states.end(), y.begin(), y.end());
  run_step2(driver, fields, y, substeps, [&](double t, std::span<const double> state) {
    sol.times.push_back(t);
    sol.states.insert(sol.states.end(), state.begin(), state.end());
  });
  return sol;
}

std::vector<double> rde_solve_step2_endpoint(const LiftedPath& driver, const VectorFieldSet& fields,
                                             std::span<const double> y0, int substeps) {
  std::vector<double> y(y0.begin(), y0.end());
  run_step2(driver, fields, y, substeps, [](double, std::span<const double>) {});
  return y;
}

void heun_integrate(const VectorFieldSet& fields, std::span<const double> increments, std::span<double> y) {
  const int e = fields.state_dim(), d = fields.fields();
  if (static_cast<int>(y.size()) != e) throw DimensionError("state has the wrong dimension");
  if (increments.size() % static_cast<std::size_t>(d)) throw DimensionError("increments are not a multiple of d");
  std::vector<double> v(static_cast<std::size_t>(d * e)), v2(v.size()), pred(static_cast<std::size_t>(e));
  const std::size_t steps = increments.size() / static_cast<std::size_t>(d);
  for (std::size_t s = 0; s < steps; ++s) {
    const double* db = increments.data() + s * static_cast<std::size_t>(d);
    fields.value(y, v);
    for (int k = 0; k < e; ++k) {
      double acc = y[static_cast<std::size_t>(k)];
      for (int i = 0; i < d; ++i) acc += v[static_cast<std::size_t>(i * e + k)] * db[i];
      pred[static_cast<std::size_t>(k)] = acc;
    }
    fields.value(pred, v2);
    for (int k = 0; k < e; ++k) {
      double acc = 0.0;
      for (int i = 0; i < d; ++i)
        acc += (v[static_cast<std::size_t>(i * e + k)] + v2[static_cast<std::size_t>(i * e + k)]) * db[i];
      y[static_cast<std::size_t>(k)] += 0.5 * acc;
    }
    if (!all_finite(y)) throw DivergenceError("Stratonovich reference state became non-finite", s + 1);
  }
}

SolutionPath stratonovich_reference(const VectorFieldSet& fields, std::span<const double> samples,
                                    std::span<const double> times, std::span<const double> y0) {
  const auto d = static_cast<std::size_t>(fields.fields());
  if (samples.size() % d || samples.size() / d != times.size() || times.size() < 1)
    throw DimensionError("samples must hold one row of d values per time");
  if (static_cast<int>(y0.size()) != fields.state_dim()) throw DimensionError("initial state has the wrong dimension");
  SolutionPath sol;
  sol.state_dim = fields.state_dim();
  std::vector<double> y(y0.begin(), y0.end()), inc(d);
  sol.times.push_back(times[0]);
  sol.states.insert(sol.states.end(), y.begin(), y.end());
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    for (std::size_t i = 0; i < d; ++i) inc[i] = samples[(k + 1) * d + i] - samples[k * d + i];
    try {
      heun_integrate(fields, inc, y);
    } catch (const DivergenceError&) {
      throw DivergenceError("Stratonovich reference state became non-finite", k + 1);
    }
    sol.times.push_back(times[k + 1]);
    sol.states.insert(sol.states.end(), y.begin(), y.end());
  }
  return sol;
}

SolutionPath path_integral(const IntegrandSet& phi, const LiftedPath& path) {
  if (phi.path_dim() != path.dim()) throw DimensionError("integrand and path dimensions differ");
  static constexpr double kNodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                       0.9061798459386640};
  static constexpr double kWeights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                         0.2369268850561891, 0.2369268850561891};
  const int d = path.dim(), e = phi.out_dim();
  const auto x = level_one_samples(path);
  SolutionPath sol;
  sol.state_dim = e;
  sol.times.assign(path.times().begin(), path.times().end());
  sol.states.assign(static_cast<std::size_t>(e), 0.0);
  std::vector<double> acc(static_cast<std::size_t>(e), 0.0), pt(static_cast<std::size_t>(d)),
      v(static_cast<std::size_t>(d * e)), chord(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double* a = x.data() + k * static_cast<std::size_t>(d);
    const double* b = a + d;
    for (int i = 0; i < d; ++i) chord[static_cast<std::size_t>(i)] = b[i] - a[i];
    for (int q = 0; q < 5; ++q) {
      const double theta = 0.5 * (1.0 + kNodes[q]);
      for (int i = 0; i < d; ++i) pt[static_cast<std::size_t>(i)] = a[i] + theta * chord[static_cast<std::size_t>(i)];
      phi.value(pt, v);
      for (int c = 0; c < e; ++c) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += v[static_cast<std::size_t>(i * e + c)] * chord[static_cast<std::size_t>(i)];
        acc[static_cast<std::size_t>(c)] += 0.5 * kWeights[q] * s;
      }
    }
    sol.states.insert(sol.states.end(), acc.begin(), acc.end());
  }
  return sol;
}

LiftedPath adjoin_time(const LiftedPath& path) {
  if (path.interpolation() != Interpolation::linear_lift)
    throw DomainError("adjoining time needs a linear-lift path");
  const int d = path.dim();
  const auto x = level_one_samples(path);
  std::vector<double> samples;
  samples.reserve(path.size() * static_cast<std::size_t>(d + 1));
  for (std::size_t k = 0; k < path.size(); ++k) {
    samples.insert(samples.end(), x.begin() + static_cast<std::ptrdiff_t>(k * d),
                   x.begin() + static_cast<std::ptrdiff_t>((k + 1) * d));
    samples.push_back(path.times()[k]);
  }
  return lift_linear_chords(samples, d + 1, path.depth(), path.times());
}

}  // namespace rpwalk
