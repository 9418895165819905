#ifndef RPWALK_RPWALK_H
#define RPWALK_RPWALK_H

/*
 * C interface to the rpwalk library: free nilpotent group arithmetic, lifted
 * random walks, Hoelder metrics, the moment operator T, rough differential
 * equations and the Monte Carlo experiment harness.
 *
 * Every function returns an rpw_status. On failure a message describing the
 * last error of the calling thread is available from rpw_last_error().
 * Handles are opaque; each *_free accepts NULL. Strings returned through
 * char** are owned by the caller and released with rpw_string_free.
 *
 * Tensor coordinates are flat: levels 1..depth concatenated, a word
 * (i_1..i_m) at position sum_k i_k d^(m-k) within level m. Letters are
 * 0-based here, but polynomial text uses 1-based letters (a[2;1,2]).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(RPWALK_BUILDING_LIBRARY)
#define RPW_API __attribute__((visibility("default")))
#else
#define RPW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rpw_status {
  RPW_OK = 0,
  RPW_ERR_DIMENSION = 1,
  RPW_ERR_DOMAIN = 2,
  RPW_ERR_RANGE = 3,
  RPW_ERR_CONFIG = 4,
  RPW_ERR_PARSE = 5,
  RPW_ERR_DIVERGENCE = 6,
  RPW_ERR_UNRESOLVED_MOMENT = 7,
  RPW_ERR_INVALID_ARGUMENT = 8,
  RPW_ERR_INTERNAL = 9
} rpw_status;

RPW_API const char* rpw_last_error(void);
RPW_API const char* rpw_status_name(rpw_status status);
RPW_API const char* rpw_version(void);
RPW_API void rpw_string_free(char* s);

/* ---- group elements ----------------------------------------------------- */

typedef struct rpw_group rpw_group;

/* Number of flat coordinates of levels 1..depth. */
RPW_API rpw_status rpw_coordinate_count(int dim, int depth, size_t* out);

RPW_API rpw_status rpw_group_unit(int dim, int depth, rpw_group** out);
/* exp of the Lie element with the given log coordinates. */
RPW_API rpw_status rpw_group_exp(int dim, int depth, const double* log_coords, size_t n, rpw_group** out);
/* Tensor coordinates of levels 1..depth (the scalar part is one). */
RPW_API rpw_status rpw_group_from_tensor(int dim, int depth, const double* coords, size_t n, rpw_group** out);
RPW_API void rpw_group_free(rpw_group* g);

RPW_API rpw_status rpw_group_shape(const rpw_group* g, int* dim, int* depth);
RPW_API rpw_status rpw_group_mul(const rpw_group* a, const rpw_group* b, rpw_group** out);
RPW_API rpw_status rpw_group_inverse(const rpw_group* g, rpw_group** out);
RPW_API rpw_status rpw_group_dilate(double lambda, const rpw_group* g, rpw_group** out);
/* Both write rpw_coordinate_count(dim, depth) doubles. */
RPW_API rpw_status rpw_group_log(const rpw_group* g, double* out, size_t n);
RPW_API rpw_status rpw_group_tensor(const rpw_group* g, double* out, size_t n);
RPW_API rpw_status rpw_group_norm(const rpw_group* g, double* out);
RPW_API rpw_status rpw_group_distance(const rpw_group* g, const rpw_group* h, double* out);

/* ---- lifted paths ------------------------------------------------------- */

typedef struct rpw_path rpw_path;

typedef enum rpw_interpolation { RPW_LINEAR_LIFT = 0, RPW_LOG_LINEAR = 1 } rpw_interpolation;

typedef enum rpw_distribution {
  RPW_RADEMACHER = 0,
  RPW_GAUSSIAN = 1,
  RPW_UNIFORM = 2,
  RPW_STUDENT_T = 3,
  RPW_TWO_POINT = 4,
  RPW_CONSTANT = 5
} rpw_distribution;

typedef struct rpw_walk_spec {
  int64_t n;
  int dim;
  int depth;
  rpw_distribution distribution;
  int normalize;          /* nonzero: mean 0, unit variance per coordinate */
  double center_offset;
  double nu;              /* student-t degrees of freedom */
  double asym_prob;       /* two-point law: probability of the positive atom */
  uint64_t seed;
  rpw_interpolation interpolation;
} rpw_walk_spec;

/* Defaults: n = 1, dim = 1, depth = 2, Rademacher, normalized, asym_prob 0.2. */
RPW_API void rpw_walk_spec_init(rpw_walk_spec* spec);

/* Chen lift of the piecewise-linear path through count x dim samples;
   times may be NULL for the uniform grid on [0, 1]. */
RPW_API rpw_status rpw_path_lift(const double* samples, size_t count, int dim, int depth, const double* times,
                                 rpw_path** out);
RPW_API rpw_status rpw_path_sample_walk(const rpw_walk_spec* spec, rpw_path** out);
RPW_API void rpw_path_free(rpw_path* p);

RPW_API rpw_status rpw_path_shape(const rpw_path* p, int* dim, int* depth, size_t* points);
RPW_API rpw_status rpw_path_times(const rpw_path* p, double* out, size_t n);
RPW_API rpw_status rpw_path_point(const rpw_path* p, size_t k, rpw_group** out);
RPW_API rpw_status rpw_path_interpolate(const rpw_path* p, double t, rpw_group** out);
RPW_API rpw_status rpw_path_increment(const rpw_path* p, double s, double t, rpw_group** out);
RPW_API rpw_status rpw_path_signature(const rpw_path* p, rpw_group** out);
RPW_API rpw_status rpw_path_serialize(const rpw_path* p, char** out);
RPW_API rpw_status rpw_path_parse(const char* text, rpw_path** out);

/* Hoelder rough-path distance and norm; refinement < 0 picks the default. */
RPW_API rpw_status rpw_holder_distance(const rpw_path* x, const rpw_path* y, double alpha, int refinement,
                                       double* out);
RPW_API rpw_status rpw_holder_norm(const rpw_path* x, double alpha, int refinement, double* out);

/* ---- graded polynomials and the operator T ------------------------------ */

typedef struct rpw_poly rpw_poly;
typedef struct rpw_law rpw_law;

RPW_API rpw_status rpw_poly_constant(int dim, int depth, const char* rational, rpw_poly** out);
/* a^{level; word} with 1-based letters. */
RPW_API rpw_status rpw_poly_coordinate(int dim, int depth, int level, const int* word, rpw_poly** out);
RPW_API rpw_status rpw_poly_level(int m, double p, int dim, int depth, rpw_poly** out);
RPW_API void rpw_poly_free(rpw_poly* p);
RPW_API rpw_status rpw_poly_add(const rpw_poly* a, const rpw_poly* b, rpw_poly** out);
RPW_API rpw_status rpw_poly_mul(const rpw_poly* a, const rpw_poly* b, rpw_poly** out);
RPW_API rpw_status rpw_poly_scale(const rpw_poly* a, const char* rational, rpw_poly** out);
RPW_API rpw_status rpw_poly_pow(const rpw_poly* a, unsigned e, rpw_poly** out);
RPW_API rpw_status rpw_poly_degree(const rpw_poly* p, int* out);
RPW_API rpw_status rpw_poly_to_string(const rpw_poly* p, char** out);
RPW_API rpw_status rpw_poly_evaluate(const rpw_poly* p, const double* log_coords, size_t n, double* out);

RPW_API rpw_status rpw_law_rademacher(int dim, int depth, rpw_law** out);
RPW_API rpw_status rpw_law_rademacher_area(int dim, int depth, const char* eta, rpw_law** out);
RPW_API rpw_status rpw_law_two_point(int dim, int depth, const char* hi, const char* lo, const char* q,
                                     rpw_law** out);
RPW_API rpw_status rpw_law_gaussian(int dim, int depth, const char* variance, rpw_law** out);
RPW_API void rpw_law_free(rpw_law* law);

RPW_API rpw_status rpw_poly_T(const rpw_poly* p, const rpw_law* law, rpw_poly** out);
/* E[P(xi_1 ... xi_k)] as an exact rational "p/q" (or "p"). */
RPW_API rpw_status rpw_walk_moment(const rpw_poly* p, const rpw_law* law, uint64_t k, char** out);

typedef struct rpw_tightness {
  int q0;
  int p_star;
  double alpha_star;
  double alpha_q0;
  int rough_path_admissible;
} rpw_tightness;

RPW_API rpw_status rpw_tightness_exponents(double p, int depth, rpw_tightness* out);

/* ---- vector fields and differential equations --------------------------- */

typedef struct rpw_fields rpw_fields;
typedef struct rpw_integrand rpw_integrand;
typedef struct rpw_solution rpw_solution;

/* value[i*e + k] = V_i(y)_k and jacobian[(i*e + k)*e + l] = dV_i(y)_k / dy_l. */
typedef void (*rpw_field_fn)(const double* y, double* out, void* user);

RPW_API rpw_status rpw_fields_callback(int state_dim, int fields, rpw_field_fn value, rpw_field_fn jacobian,
                                       void* user, rpw_fields** out);
/* `matrices` holds fields * e * e entries. */
RPW_API rpw_status rpw_fields_linear(int state_dim, int fields, const double* matrices, rpw_fields** out);
/* Field i rotates the (planes[2i], planes[2i+1]) coordinate plane (0-based). */
RPW_API rpw_status rpw_fields_rotation(int state_dim, int fields, const int* planes, rpw_fields** out);
RPW_API void rpw_fields_free(rpw_fields* f);

/* phi_i(x) = M_i x with `matrices` holding d * e * d entries. */
RPW_API rpw_status rpw_integrand_linear(int path_dim, int out_dim, const double* matrices, rpw_integrand** out);
RPW_API rpw_status rpw_integrand_levy_area(rpw_integrand** out);
RPW_API void rpw_integrand_free(rpw_integrand* f);

RPW_API rpw_status rpw_rde_solve(const rpw_path* driver, const rpw_fields* fields, const double* y0, size_t n,
                                 int substeps, rpw_solution** out);
/* Heun scheme on count x d driver samples at `times` (NULL: uniform on [0, 1]). */
RPW_API rpw_status rpw_stratonovich_reference(const rpw_fields* fields, const double* samples, size_t count,
                                              const double* times, const double* y0, size_t n, rpw_solution** out);
RPW_API rpw_status rpw_path_integral(const rpw_integrand* phi, const rpw_path* path, rpw_solution** out);
RPW_API void rpw_solution_free(rpw_solution* s);
RPW_API rpw_status rpw_solution_shape(const rpw_solution* s, int* state_dim, size_t* points);
/* points x state_dim doubles, row-major. */
RPW_API rpw_status rpw_solution_states(const rpw_solution* s, double* out, size_t n);
RPW_API rpw_status rpw_solution_csv(const rpw_solution* s, char** out);

/* ---- experiments -------------------------------------------------------- */

typedef struct rpw_run_options {
  uint64_t seed;
  int has_seed;
  int64_t replicas;       /* <= 0 keeps the configured count */
  int threads;            /* <= 0 keeps the configured count */
  const char* out_dir;    /* NULL or empty: no files written */
} rpw_run_options;

RPW_API void rpw_run_options_init(rpw_run_options* opt);

/* Comma-separated list of experiment kinds. */
RPW_API const char* rpw_experiment_kinds(void);

/* Runs `kind` with the flat JSON config (NULL or "" for defaults), overridden
   by `options`. *passed receives 1 when every counted check passes. When
   report_json is non-NULL it receives the full report. */
RPW_API rpw_status rpw_experiment_run(const char* kind, const char* config_json, const rpw_run_options* options,
                                      int* passed, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
