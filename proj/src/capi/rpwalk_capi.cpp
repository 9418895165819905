#include "rpwalk/rpwalk.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "rpwalk/experiment.hpp"
#include "rpwalk/graded_poly.hpp"
#include "rpwalk/rde_solver.hpp"
#include "rpwalk/rough_metrics.hpp"

struct rpw_group {
  rpwalk::GroupElement g;
};
struct rpw_path {
  rpwalk::LiftedPath p;
};
struct rpw_poly {
  rpwalk::GradedPolynomial p;
};
struct rpw_law {
  std::unique_ptr<rpwalk::MomentOracle> law;
};
struct rpw_fields {
  rpwalk::VectorFieldSet f;
};
struct rpw_integrand {
  rpwalk::IntegrandSet f;
};
struct rpw_solution {
  rpwalk::SolutionPath s;
};

namespace {

thread_local std::string g_last_error;

class InvalidArgument : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

rpw_status fail(rpw_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
rpw_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return RPW_OK;
  } catch (const InvalidArgument& e) {
    return fail(RPW_ERR_INVALID_ARGUMENT, e.what());
  } catch (const rpwalk::DimensionError& e) {
    return fail(RPW_ERR_DIMENSION, e.what());
  } catch (const rpwalk::DomainError& e) {
    return fail(RPW_ERR_DOMAIN, e.what());
  } catch (const rpwalk::RangeError& e) {
    return fail(RPW_ERR_RANGE, e.what());
  } catch (const rpwalk::ConfigError& e) {
    return fail(RPW_ERR_CONFIG, e.what());
  } catch (const rpwalk::ParseError& e) {
    return fail(RPW_ERR_PARSE, e.what());
  } catch (const rpwalk::DivergenceError& e) {
    return fail(RPW_ERR_DIVERGENCE, e.what());
  } catch (const rpwalk::UnresolvedMomentError& e) {
    return fail(RPW_ERR_UNRESOLVED_MOMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RPW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RPW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RPW_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  if (!p) throw InvalidArgument(std::string(name) + " must not be NULL");
}

void need_size(size_t got, size_t want, const char* name) {
  if (got != want)
    throw InvalidArgument(std::string(name) + ": expected " + std::to_string(want) + " entries, got " +
                          std::to_string(got));
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rpwalk::Rational parse_rational(const char* text, const char* name) {
  need(text, name);
  try {
    rpwalk::Rational q(text, 10);
    q.canonicalize();
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    return q;
  } catch (const std::invalid_argument&) {
    throw InvalidArgument(std::string(name) + ": '" + text + "' is not a rational number");
  }
}

rpwalk::DistributionKind kind_of(rpw_distribution d) {
  switch (d) {
    case RPW_RADEMACHER: return rpwalk::DistributionKind::rademacher;
    case RPW_GAUSSIAN: return rpwalk::DistributionKind::gaussian;
    case RPW_UNIFORM: return rpwalk::DistributionKind::uniform;
    case RPW_STUDENT_T: return rpwalk::DistributionKind::student_t;
    case RPW_TWO_POINT: return rpwalk::DistributionKind::two_point_asymmetric;
    case RPW_CONSTANT: return rpwalk::DistributionKind::constant;
  }
  throw InvalidArgument("unknown distribution");
}

rpwalk::Interpolation interpolation_of(rpw_interpolation m) {
  if (m == RPW_LINEAR_LIFT) return rpwalk::Interpolation::linear_lift;
  if (m == RPW_LOG_LINEAR) return rpwalk::Interpolation::log_linear;
  throw InvalidArgument("unknown interpolation");
}

void copy_out(const std::vector<double>& v, double* out, size_t n, const char* name) {
  need(out, name);
  need_size(n, v.size(), name);
  std::copy(v.begin(), v.end(), out);
}

std::vector<double> uniform_times(size_t count) {
  std::vector<double> t(count);
  for (size_t k = 0; k < count; ++k) t[k] = count > 1 ? static_cast<double>(k) / static_cast<double>(count - 1) : 0.0;
  return t;
}

}  // namespace

extern "C" {

const char* rpw_last_error(void) { return g_last_error.c_str(); }

const char* rpw_status_name(rpw_status status) {
  switch (status) {
    case RPW_OK: return "ok";
    case RPW_ERR_DIMENSION: return "dimension";
    case RPW_ERR_DOMAIN: return "domain";
    case RPW_ERR_RANGE: return "range";
    case RPW_ERR_CONFIG: return "config";
    case RPW_ERR_PARSE: return "parse";
    case RPW_ERR_DIVERGENCE: return "divergence";
    case RPW_ERR_UNRESOLVED_MOMENT: return "unresolved-moment";
    case RPW_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case RPW_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* rpw_version(void) { return "0.1.0"; }

void rpw_string_free(char* s) { std::free(s); }

// ---- group -------------------------------------------------------------------

rpw_status rpw_coordinate_count(int dim, int depth, size_t* out) {
  return guard([&] {
    need(out, "out");
    rpwalk::LieElement probe(dim, depth);
    *out = probe.series().size() - 1;
  });
}

rpw_status rpw_group_unit(int dim, int depth, rpw_group** out) {
  return guard([&] {
    need(out, "out");
    *out = new rpw_group{rpwalk::GroupElement(dim, depth)};
  });
}

rpw_status rpw_group_exp(int dim, int depth, const double* log_coords, size_t n, rpw_group** out) {
  return guard([&] {
    need(out, "out");
    need(log_coords, "log_coords");
    rpwalk::LieElement probe(dim, depth);
    need_size(n, probe.series().size() - 1, "log_coords");
    *out = new rpw_group{rpwalk::exp(rpwalk::LieElement::from_coordinates(dim, depth, {log_coords, n}))};
  });
}

rpw_status rpw_group_from_tensor(int dim, int depth, const double* coords, size_t n, rpw_group** out) {
  return guard([&] {
    need(out, "out");
    need(coords, "coords");
    rpwalk::TensorSeries s(dim, depth);
    need_size(n, s.size() - 1, "coords");
    s.scalar() = 1.0;
    std::copy(coords, coords + n, s.coefficients().begin() + 1);
    *out = new rpw_group{rpwalk::GroupElement::from_series(std::move(s))};
  });
}

void rpw_group_free(rpw_group* g) { delete g; }

rpw_status rpw_group_shape(const rpw_group* g, int* dim, int* depth) {
  return guard([&] {
    need(g, "g");
    if (dim) *dim = g->g.dim();
    if (depth) *depth = g->g.depth();
  });
}

rpw_status rpw_group_mul(const rpw_group* a, const rpw_group* b, rpw_group** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = new rpw_group{a->g * b->g};
  });
}

rpw_status rpw_group_inverse(const rpw_group* g, rpw_group** out) {
  return guard([&] {
    need(g, "g");
    need(out, "out");
    *out = new rpw_group{rpwalk::inverse(g->g)};
  });
}

rpw_status rpw_group_dilate(double lambda, const rpw_group* g, rpw_group** out) {
  return guard([&] {
    need(g, "g");
    need(out, "out");
    *out = new rpw_group{rpwalk::dilate(lambda, g->g)};
  });
}

rpw_status rpw_group_log(const rpw_group* g, double* out, size_t n) {
  return guard([&] {
    need(g, "g");
    copy_out(rpwalk::log(g->g).coordinates(), out, n, "out");
  });
}

rpw_status rpw_group_tensor(const rpw_group* g, double* out, size_t n) {
  return guard([&] {
    need(g, "g");
    const auto c = g->g.series().coefficients();
    copy_out(std::vector<double>(c.begin() + 1, c.end()), out, n, "out");
  });
}

rpw_status rpw_group_norm(const rpw_group* g, double* out) {
  return guard([&] {
    need(g, "g");
    need(out, "out");
    *out = rpwalk::homogeneous_norm(g->g);
  });
}

rpw_status rpw_group_distance(const rpw_group* g, const rpw_group* h, double* out) {
  return guard([&] {
    need(g, "g");
    need(h, "h");
    need(out, "out");
    *out = rpwalk::cc_distance(g->g, h->g);
  });
}

// ---- paths -------------------------------------------------------------------

void rpw_walk_spec_init(rpw_walk_spec* spec) {
  if (!spec) return;
  *spec = rpw_walk_spec{};
  spec->n = 1;
  spec->dim = 1;
  spec->depth = 2;
  spec->distribution = RPW_RADEMACHER;
  spec->normalize = 1;
  spec->asym_prob = 0.2;
  spec->interpolation = RPW_LINEAR_LIFT;
}

rpw_status rpw_path_lift(const double* samples, size_t count, int dim, int depth, const double* times,
                         rpw_path** out) {
  return guard([&] {
    need(samples, "samples");
    need(out, "out");
    if (dim < 1) throw InvalidArgument("dim must be positive");
    std::span<const double> t;
    if (times) t = {times, count};
    *out = new rpw_path{rpwalk::lift_linear_chords({samples, count * static_cast<size_t>(dim)}, dim, depth, t)};
  });
}

rpw_status rpw_path_sample_walk(const rpw_walk_spec* spec, rpw_path** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    rpwalk::WalkSpec w;
    w.n = spec->n;
    w.distribution.kind = kind_of(spec->distribution);
    w.distribution.dim = spec->dim;
    w.distribution.normalize = spec->normalize != 0;
    w.distribution.center_offset = spec->center_offset;
    w.distribution.nu = spec->nu;
    w.distribution.asym_prob = spec->asym_prob;
    w.depth = spec->depth;
    w.seed = spec->seed;
    w.interpolation = interpolation_of(spec->interpolation);
    auto rng = rpwalk::master_seed_split(spec->seed, 0);
    *out = new rpw_path{rpwalk::sample_walk(w, rng)};
  });
}

void rpw_path_free(rpw_path* p) { delete p; }

rpw_status rpw_path_shape(const rpw_path* p, int* dim, int* depth, size_t* points) {
  return guard([&] {
    need(p, "path");
    if (dim) *dim = p->p.dim();
    if (depth) *depth = p->p.depth();
    if (points) *points = p->p.size();
  });
}

rpw_status rpw_path_times(const rpw_path* p, double* out, size_t n) {
  return guard([&] {
    need(p, "path");
    const auto t = p->p.times();
    copy_out(std::vector<double>(t.begin(), t.end()), out, n, "out");
  });
}

rpw_status rpw_path_point(const rpw_path* p, size_t k, rpw_group** out) {
  return guard([&] {
    need(p, "path");
    need(out, "out");
    if (k >= p->p.size()) throw rpwalk::RangeError("point index " + std::to_string(k) + " out of range");
    *out = new rpw_group{p->p.point(k)};
  });
}

rpw_status rpw_path_interpolate(const rpw_path* p, double t, rpw_group** out) {
  return guard([&] {
    need(p, "path");
    need(out, "out");
    *out = new rpw_group{rpwalk::interpolate(p->p, t)};
  });
}

rpw_status rpw_path_increment(const rpw_path* p, double s, double t, rpw_group** out) {
  return guard([&] {
    need(p, "path");
    need(out, "out");
    *out = new rpw_group{rpwalk::increment(p->p, s, t)};
  });
}

rpw_status rpw_path_signature(const rpw_path* p, rpw_group** out) {
  return guard([&] {
    need(p, "path");
    need(out, "out");
    *out = new rpw_group{rpwalk::signature(p->p)};
  });
}

rpw_status rpw_path_serialize(const rpw_path* p, char** out) {
  return guard([&] {
    need(p, "path");
    need(out, "out");
    *out = dup(rpwalk::serialize(p->p));
  });
}

rpw_status rpw_path_parse(const char* text, rpw_path** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new rpw_path{rpwalk::parse_lifted_path(text)};
  });
}

rpw_status rpw_holder_distance(const rpw_path* x, const rpw_path* y, double alpha, int refinement, double* out) {
  return guard([&] {
    need(x, "x");
    need(y, "y");
    need(out, "out");
    *out = rpwalk::holder_distance(x->p, y->p, alpha, refinement < 0 ? rpwalk::kDefaultHolderRefinement : refinement)
               .value;
  });
}

rpw_status rpw_holder_norm(const rpw_path* x, double alpha, int refinement, double* out) {
  return guard([&] {
    need(x, "x");
    need(out, "out");
    *out = rpwalk::holder_norm(x->p, alpha, refinement < 0 ? rpwalk::kDefaultHolderRefinement : refinement).value;
  });
}

// ---- polynomials ---------------------------------------------------------------

rpw_status rpw_poly_constant(int dim, int depth, const char* rational, rpw_poly** out) {
  return guard([&] {
    need(out, "out");
    const auto q = parse_rational(rational, "rational");
    *out = new rpw_poly{rpwalk::GradedPolynomial::constant(rpwalk::VariableLayout::get(dim, depth), q)};
  });
}

rpw_status rpw_poly_coordinate(int dim, int depth, int level, const int* word, rpw_poly** out) {
  return guard([&] {
    need(word, "word");
    need(out, "out");
    if (level < 1 || level > depth) throw rpwalk::RangeError("level must lie in [1, depth]");
    std::vector<int> w(word, word + level);
    for (auto& letter : w) {
      if (letter < 1 || letter > dim) throw rpwalk::RangeError("letters are 1-based and must lie in [1, dim]");
      --letter;
    }
    *out = new rpw_poly{rpwalk::GradedPolynomial::coordinate(rpwalk::VariableLayout::get(dim, depth), level, w)};
  });
}

rpw_status rpw_poly_level(int m, double p, int dim, int depth, rpw_poly** out) {
  return guard([&] {
    need(out, "out");
    *out = new rpw_poly{rpwalk::level_polynomial(m, p, dim, depth)};
  });
}

void rpw_poly_free(rpw_poly* p) { delete p; }

rpw_status rpw_poly_add(const rpw_poly* a, const rpw_poly* b, rpw_poly** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = new rpw_poly{a->p + b->p};
  });
}

rpw_status rpw_poly_mul(const rpw_poly* a, const rpw_poly* b, rpw_poly** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = new rpw_poly{a->p * b->p};
  });
}

rpw_status rpw_poly_scale(const rpw_poly* a, const char* rational, rpw_poly** out) {
  return guard([&] {
    need(a, "a");
    need(out, "out");
    *out = new rpw_poly{a->p * parse_rational(rational, "rational")};
  });
}

rpw_status rpw_poly_pow(const rpw_poly* a, unsigned e, rpw_poly** out) {
  return guard([&] {
    need(a, "a");
    need(out, "out");
    *out = new rpw_poly{a->p.pow(e)};
  });
}

rpw_status rpw_poly_degree(const rpw_poly* p, int* out) {
  return guard([&] {
    need(p, "p");
    need(out, "out");
    *out = p->p.degree();
  });
}

rpw_status rpw_poly_to_string(const rpw_poly* p, char** out) {
  return guard([&] {
    need(p, "p");
    need(out, "out");
    *out = dup(p->p.to_string());
  });
}

rpw_status rpw_poly_evaluate(const rpw_poly* p, const double* log_coords, size_t n, double* out) {
  return guard([&] {
    need(p, "p");
    need(log_coords, "log_coords");
    need(out, "out");
    if (p->p.layout()) need_size(n, p->p.layout()->count(), "log_coords");
    *out = p->p.evaluate(std::span<const double>(log_coords, n));
  });
}

rpw_status rpw_law_rademacher(int dim, int depth, rpw_law** out) {
  return guard([&] {
    need(out, "out");
    *out = new rpw_law{std::make_unique<rpwalk::FiniteSupportLaw>(rpwalk::rademacher_law(dim, depth))};
  });
}

rpw_status rpw_law_rademacher_area(int dim, int depth, const char* eta, rpw_law** out) {
  return guard([&] {
    need(out, "out");
    *out = new rpw_law{std::make_unique<rpwalk::FiniteSupportLaw>(
        rpwalk::rademacher_area_law(dim, depth, parse_rational(eta, "eta")))};
  });
}

rpw_status rpw_law_two_point(int dim, int depth, const char* hi, const char* lo, const char* q, rpw_law** out) {
  return guard([&] {
    need(out, "out");
    *out = new rpw_law{std::make_unique<rpwalk::FiniteSupportLaw>(rpwalk::two_point_law(
        dim, depth, parse_rational(hi, "hi"), parse_rational(lo, "lo"), parse_rational(q, "q")))};
  });
}

rpw_status rpw_law_gaussian(int dim, int depth, const char* variance, rpw_law** out) {
  return guard([&] {
    need(out, "out");
    *out = new rpw_law{std::make_unique<rpwalk::GaussianLaw>(dim, depth, parse_rational(variance, "variance"))};
  });
}

void rpw_law_free(rpw_law* law) { delete law; }

rpw_status rpw_poly_T(const rpw_poly* p, const rpw_law* law, rpw_poly** out) {
  return guard([&] {
    need(p, "p");
    need(law, "law");
    need(out, "out");
    *out = new rpw_poly{rpwalk::T_apply(p->p, *law->law)};
  });
}

rpw_status rpw_walk_moment(const rpw_poly* p, const rpw_law* law, uint64_t k, char** out) {
  return guard([&] {
    need(p, "p");
    need(law, "law");
    need(out, "out");
    *out = dup(rpwalk::to_string(rpwalk::walk_moment(p->p, *law->law, k)));
  });
}

rpw_status rpw_tightness_exponents(double p, int depth, rpw_tightness* out) {
  return guard([&] {
    need(out, "out");
    const auto e = rpwalk::tightness_exponents(p, depth);
    out->q0 = e.q0;
    out->p_star = e.p_star;
    out->alpha_star = e.alpha_star;
    out->alpha_q0 = e.alpha_q0;
    out->rough_path_admissible = e.rough_path_admissible ? 1 : 0;
  });
}

// ---- fields and solvers ----------------------------------------------------------

rpw_status rpw_fields_callback(int state_dim, int fields, rpw_field_fn value, rpw_field_fn jacobian, void* user,
                               rpw_fields** out) {
  return guard([&] {
    need(reinterpret_cast<const void*>(value), "value");
    need(reinterpret_cast<const void*>(jacobian), "jacobian");
    need(out, "out");
    auto v = [value, user](std::span<const double> y, std::span<double> o) { value(y.data(), o.data(), user); };
    auto j = [jacobian, user](std::span<const double> y, std::span<double> o) { jacobian(y.data(), o.data(), user); };
    *out = new rpw_fields{rpwalk::VectorFieldSet(state_dim, fields, v, j, "callback")};
  });
}

rpw_status rpw_fields_linear(int state_dim, int fields, const double* matrices, rpw_fields** out) {
  return guard([&] {
    need(matrices, "matrices");
    need(out, "out");
    if (state_dim < 1 || fields < 1) throw InvalidArgument("state_dim and fields must be positive");
    const auto block = static_cast<size_t>(state_dim) * static_cast<size_t>(state_dim);
    std::vector<std::vector<double>> ms;
    for (int i = 0; i < fields; ++i) ms.emplace_back(matrices + i * block, matrices + (i + 1) * block);
    *out = new rpw_fields{rpwalk::VectorFieldSet::linear(state_dim, std::move(ms))};
  });
}

rpw_status rpw_fields_rotation(int state_dim, int fields, const int* planes, rpw_fields** out) {
  return guard([&] {
    need(planes, "planes");
    need(out, "out");
    if (fields < 1) throw InvalidArgument("fields must be positive");
    std::vector<std::pair<int, int>> ps;
    for (int i = 0; i < fields; ++i) ps.emplace_back(planes[2 * i], planes[2 * i + 1]);
    *out = new rpw_fields{rpwalk::VectorFieldSet::planar_rotation(state_dim, std::move(ps))};
  });
}

void rpw_fields_free(rpw_fields* f) { delete f; }

rpw_status rpw_integrand_linear(int path_dim, int out_dim, const double* matrices, rpw_integrand** out) {
  return guard([&] {
    need(matrices, "matrices");
    need(out, "out");
    if (path_dim < 1 || out_dim < 1) throw InvalidArgument("dimensions must be positive");
    const auto block = static_cast<size_t>(out_dim) * static_cast<size_t>(path_dim);
    std::vector<std::vector<double>> ms;
    for (int i = 0; i < path_dim; ++i) ms.emplace_back(matrices + i * block, matrices + (i + 1) * block);
    *out = new rpw_integrand{rpwalk::IntegrandSet::linear(path_dim, out_dim, std::move(ms))};
  });
}

rpw_status rpw_integrand_levy_area(rpw_integrand** out) {
  return guard([&] {
    need(out, "out");
    *out = new rpw_integrand{rpwalk::IntegrandSet::levy_area()};
  });
}

void rpw_integrand_free(rpw_integrand* f) { delete f; }

rpw_status rpw_rde_solve(const rpw_path* driver, const rpw_fields* fields, const double* y0, size_t n, int substeps,
                         rpw_solution** out) {
  return guard([&] {
    need(driver, "driver");
    need(fields, "fields");
    need(y0, "y0");
    need(out, "out");
    *out = new rpw_solution{rpwalk::rde_solve_step2(driver->p, fields->f, {y0, n}, substeps)};
  });
}

rpw_status rpw_stratonovich_reference(const rpw_fields* fields, const double* samples, size_t count,
                                      const double* times, const double* y0, size_t n, rpw_solution** out) {
  return guard([&] {
    need(fields, "fields");
    need(samples, "samples");
    need(y0, "y0");
    need(out, "out");
    std::vector<double> t = times ? std::vector<double>(times, times + count) : uniform_times(count);
    const auto d = static_cast<size_t>(fields->f.fields());
    *out = new rpw_solution{rpwalk::stratonovich_reference(fields->f, {samples, count * d}, t, {y0, n})};
  });
}

rpw_status rpw_path_integral(const rpw_integrand* phi, const rpw_path* path, rpw_solution** out) {
  return guard([&] {
    need(phi, "phi");
    need(path, "path");
    need(out, "out");
    *out = new rpw_solution{rpwalk::path_integral(phi->f, path->p)};
  });
}

void rpw_solution_free(rpw_solution* s) { delete s; }

rpw_status rpw_solution_shape(const rpw_solution* s, int* state_dim, size_t* points) {
  return guard([&] {
    need(s, "solution");
    if (state_dim) *state_dim = s->s.state_dim;
    if (points) *points = s->s.size();
  });
}

rpw_status rpw_solution_states(const rpw_solution* s, double* out, size_t n) {
  return guard([&] {
    need(s, "solution");
    copy_out(s->s.states, out, n, "out");
  });
}

rpw_status rpw_solution_csv(const rpw_solution* s, char** out) {
  return guard([&] {
    need(s, "solution");
    need(out, "out");
    *out = dup(s->s.to_csv());
  });
}

// ---- experiments -----------------------------------------------------------------

void rpw_run_options_init(rpw_run_options* opt) {
  if (opt) *opt = rpw_run_options{};
}

const char* rpw_experiment_kinds(void) {
  static const std::string kinds = [] {
    std::string s;
    for (auto k : rpwalk::all_experiments()) {
      if (!s.empty()) s += ",";
      s += rpwalk::to_string(k);
    }
    return s;
  }();
  return kinds.c_str();
}

rpw_status rpw_experiment_run(const char* kind, const char* config_json, const rpw_run_options* options,
                              int* passed, char** report_json) {
  return guard([&] {
    need(kind, "kind");
    rpwalk::ExperimentKind k;
    try {
      k = rpwalk::experiment_from_string(kind);
    } catch (const rpwalk::Error& e) {
      throw rpwalk::ConfigError(e.what());
    }
    auto cfg = config_json && *config_json ? rpwalk::parse_config(k, config_json) : rpwalk::default_config(k);
    if (options) {
      if (options->has_seed) cfg.seed = options->seed;
      if (options->replicas > 0) cfg.replicas = options->replicas;
      if (options->threads > 0) cfg.threads = options->threads;
      if (options->out_dir && *options->out_dir) cfg.output_dir = options->out_dir;
    }
    const auto report = rpwalk::run_experiment(cfg);
    if (!cfg.output_dir.empty()) rpwalk::write_report(report, cfg.output_dir);
    if (passed) *passed = report.passed() ? 1 : 0;
    if (report_json) *report_json = dup(report.to_json().dump(2));
  });
}

}  // extern "C"
