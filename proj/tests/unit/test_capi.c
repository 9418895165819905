/* Plain C consumer of the public header. */
#include <stdio.h>
#include <string.h>

#include "rpwalk/rpwalk.h"

#define REQUIRE(cond)                                               \
  do {                                                              \
    if (!(cond)) {                                                  \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond, \
              rpw_last_error());                                    \
      return 1;                                                     \
    }                                                               \
  } while (0)

static void rotate(const double* y, double* out, void* user) {
  (void)user;
  out[0] = -y[1];
  out[1] = y[0];
}

static void rotate_jac(const double* y, double* out, void* user) {
  (void)y;
  (void)user;
  out[0] = 0;
  out[1] = -1;
  out[2] = 1;
  out[3] = 0;
}

static void wrong_jac(const double* y, double* out, void* user) {
  rotate_jac(y, out, user);
  out[1] = 1;
}

int main(void) {
  size_t n = 0;
  REQUIRE(rpw_coordinate_count(2, 2, &n) == RPW_OK && n == 6);

  double e1[6] = {1, 0, 0, 0, 0, 0}, e2[6] = {0, 1, 0, 0, 0, 0}, l[6];
  rpw_group *a = NULL, *b = NULL, *ab = NULL;
  REQUIRE(rpw_group_exp(2, 2, e1, 6, &a) == RPW_OK);
  REQUIRE(rpw_group_exp(2, 2, e2, 6, &b) == RPW_OK);
  REQUIRE(rpw_group_mul(a, b, &ab) == RPW_OK);
  REQUIRE(rpw_group_log(ab, l, 6) == RPW_OK);
  REQUIRE(l[3] == 0.5 && l[4] == -0.5);
  REQUIRE(rpw_group_log(ab, l, 5) == RPW_ERR_INVALID_ARGUMENT);
  rpw_group* bad = NULL;
  REQUIRE(rpw_group_exp(2, 3, e1, 6, &bad) == RPW_ERR_INVALID_ARGUMENT && bad == NULL);
  rpw_group* c = NULL;
  REQUIRE(rpw_group_unit(2, 3, &c) == RPW_OK);
  REQUIRE(rpw_group_mul(a, c, &bad) == RPW_ERR_DIMENSION);
  REQUIRE(strlen(rpw_last_error()) > 0);
  rpw_group_free(a);
  rpw_group_free(b);
  rpw_group_free(ab);
  rpw_group_free(c);
  rpw_group_free(NULL);

  rpw_walk_spec spec;
  rpw_walk_spec_init(&spec);
  spec.n = 64;
  spec.dim = 2;
  spec.seed = 9;
  rpw_path* p = NULL;
  REQUIRE(rpw_path_sample_walk(&spec, &p) == RPW_OK);
  size_t pts = 0;
  REQUIRE(rpw_path_shape(p, NULL, NULL, &pts) == RPW_OK && pts == 65);
  double h = 0;
  REQUIRE(rpw_holder_norm(p, 0.4, -1, &h) == RPW_OK && h > 0);
  REQUIRE(rpw_holder_norm(p, 1.4, 0, &h) == RPW_ERR_RANGE);
  char* text = NULL;
  REQUIRE(rpw_path_serialize(p, &text) == RPW_OK);
  rpw_path* q = NULL;
  REQUIRE(rpw_path_parse(text, &q) == RPW_OK);
  rpw_string_free(text);
  REQUIRE(rpw_holder_distance(p, q, 0.4, 0, &h) == RPW_OK && h < 1e-12);
  REQUIRE(rpw_path_parse("garbage", &q) == RPW_ERR_PARSE);

  rpw_fields* f = NULL;
  REQUIRE(rpw_fields_callback(2, 1, rotate, wrong_jac, NULL, &f) == RPW_ERR_DOMAIN);
  int planes[4] = {0, 1, 1, 0};
  REQUIRE(rpw_fields_rotation(2, 2, planes, &f) == RPW_OK);
  double y0[2] = {1, 0};
  rpw_solution* s = NULL;
  REQUIRE(rpw_rde_solve(p, f, y0, 2, 1, &s) == RPW_OK);
  int e = 0;
  REQUIRE(rpw_solution_shape(s, &e, &pts) == RPW_OK && e == 2 && pts == 65);
  rpw_solution_free(s);
  rpw_fields_free(f);
  rpw_fields* cb = NULL;
  REQUIRE(rpw_fields_callback(2, 1, rotate, rotate_jac, NULL, &cb) == RPW_OK);
  rpw_fields_free(cb);
  rpw_path_free(p);
  rpw_path_free(q);

  int word[1] = {1};
  rpw_poly *x = NULL, *x4 = NULL;
  REQUIRE(rpw_poly_coordinate(1, 2, 1, word, &x) == RPW_OK);
  REQUIRE(rpw_poly_pow(x, 4, &x4) == RPW_OK);
  rpw_law* law = NULL;
  REQUIRE(rpw_law_rademacher(1, 2, &law) == RPW_OK);
  char* m = NULL;
  REQUIRE(rpw_walk_moment(x4, law, 2, &m) == RPW_OK && strcmp(m, "8") == 0);
  rpw_string_free(m);
  rpw_poly* t = NULL;
  REQUIRE(rpw_poly_T(x4, law, &t) == RPW_OK);
  REQUIRE(rpw_poly_to_string(t, &m) == RPW_OK && strcmp(m, "6*a[1;1]^2 + 1") == 0);
  rpw_string_free(m);
  word[0] = 0;
  REQUIRE(rpw_poly_coordinate(1, 2, 1, word, &t) == RPW_ERR_RANGE);
  REQUIRE(rpw_law_two_point(1, 2, "2", "-1/2", "x", &law) == RPW_ERR_INVALID_ARGUMENT);
  rpw_poly_free(x);
  rpw_poly_free(x4);
  rpw_poly_free(t);
  rpw_law_free(law);

  rpw_tightness te;
  REQUIRE(rpw_tightness_exponents(4.0, 2, &te) == RPW_OK && te.q0 == 4 && te.alpha_star == 0.375);

  rpw_run_options opt;
  rpw_run_options_init(&opt);
  opt.replicas = 64;
  int passed = -1;
  char* rep = NULL;
  REQUIRE(rpw_experiment_run("moment-scaling", "{\"n_schedule\": [2, 4], \"exact_k\": [1]}", &opt, &passed, &rep) ==
          RPW_OK);
  REQUIRE(passed == 0 || passed == 1);
  REQUIRE(strstr(rep, "\"body\"") != NULL);
  rpw_string_free(rep);
  REQUIRE(rpw_experiment_run("moment-scaling", "{\"bogus\": 1}", &opt, &passed, NULL) == RPW_ERR_CONFIG);
  REQUIRE(rpw_experiment_run("nope", NULL, &opt, &passed, NULL) == RPW_ERR_CONFIG);
  REQUIRE(strstr(rpw_experiment_kinds(), "symbolic-audit") != NULL);
  printf("capi ok (%s)\n", rpw_version());
  return 0;
}
