/* C interface to the jtheta library. All handles are opaque; every call that
 * can fail returns a jt_status and leaves a message for
 * jt_last_error_message() on the calling thread. */
#ifndef JTHETA_JTHETA_H
#define JTHETA_JTHETA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define JT_API __declspec(dllexport)
#else
#define JT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  JT_OK = 0,
  JT_ERR_NOT_SYMMETRIC = 1,
  JT_ERR_ODD_DIAGONAL,
  JT_ERR_NOT_POSITIVE_DEFINITE,
  JT_ERR_ODD_RANK,
  JT_ERR_DIMENSION_MISMATCH,
  JT_ERR_LINEARLY_DEPENDENT,
  JT_ERR_UNDEFINED,
  JT_ERR_ZERO_ARGUMENT,
  JT_ERR_NON_UNIT_VALUE,
  JT_ERR_OVERFLOW,
  JT_ERR_RADIUS_TOO_LARGE,
  JT_ERR_INADMISSIBLE_RESIDUE,
  JT_ERR_NONCONVERGENT_INPUT,
  JT_ERR_TRUNCATION_FAILURE,
  JT_ERR_OUT_OF_RANGE,
  JT_ERR_INDEX_OUT_OF_RANGE,
  JT_ERR_SINGULAR_GRAM,
  JT_ERR_NOT_UNIMODULAR,
  JT_ERR_NOT_CONGRUENT,
  JT_ERR_INADMISSIBLE_SPEC,
  JT_ERR_HYPOTHESIS_VIOLATION,
  JT_ERR_NEGATIVE_D,
  JT_ERR_ILL_CONDITIONED_FIT,
  JT_ERR_INVALID_ARGUMENT,
  JT_ERR_INTERNAL = 100
} jt_status;

typedef struct {
  double re;
  double im;
} jt_complex;

typedef struct {
  int64_t a, b, c, d;
} jt_gamma;

typedef struct jt_form jt_form;
typedef struct jt_spec jt_spec;
typedef struct jt_expansion jt_expansion;
typedef struct jt_report jt_report;

JT_API const char* jt_version(void);
JT_API const char* jt_last_error_message(void);
/* "OddDiagonal", ...; "Ok" for JT_OK. */
JT_API const char* jt_status_name(jt_status status);

/* ---- forms ---- */
/* matrix: f x f, row major. */
JT_API jt_status jt_form_create(const int64_t* matrix, size_t f, jt_form** out);
JT_API void jt_form_destroy(jt_form* form);
JT_API jt_status jt_form_info(const jt_form* form, size_t* rank, int64_t* det,
                              int64_t* level);
JT_API jt_status jt_form_epsilon(const jt_form* form, int64_t d, int* out);
JT_API jt_status jt_kronecker(int64_t a, int64_t n, int* out);

/* ---- theta specs ---- */
/* directions: n x f row major; v: f entries. */
JT_API jt_status jt_spec_create(const jt_form* form, const int64_t* directions,
                                size_t n, const jt_complex* v, unsigned k,
                                jt_spec** out);
JT_API void jt_spec_destroy(jt_spec* spec);
JT_API size_t jt_spec_n(const jt_spec* spec);
JT_API size_t jt_spec_rank(const jt_spec* spec);
/* out: n x n Gram matrix B(h_i, h_j). */
JT_API jt_status jt_spec_gram(const jt_spec* spec, int64_t* out);
JT_API jt_status jt_spec_admissibility(const jt_spec* spec, double tol,
                                       int* isotropic, int* orthogonal);
/* v = sum alpha_i h_i + u; alpha has n entries, u has f. */
JT_API jt_status jt_spherical_decomposition(const jt_spec* spec, const jt_complex* v,
                                            jt_complex* alpha, jt_complex* u);

/* ---- Fourier expansions ---- */
JT_API jt_status jt_theta_coeffs(const jt_spec* spec, int64_t lmax, jt_expansion** out);
JT_API jt_status jt_psi_coeffs(const jt_spec* spec, int64_t lmax, jt_expansion** out);
JT_API jt_status jt_expansion_create(size_t n, int64_t lmax, jt_expansion** out);
JT_API jt_status jt_expansion_add(jt_expansion* e, int64_t l, const int64_t* nu,
                                  jt_complex value);
/* Zero-based direction index. */
JT_API jt_status jt_expansion_z_derivative(const jt_expansion* e, size_t i,
                                           jt_expansion** out);
JT_API void jt_expansion_destroy(jt_expansion* e);
JT_API size_t jt_expansion_n(const jt_expansion* e);
JT_API int64_t jt_expansion_lmax(const jt_expansion* e);
JT_API size_t jt_expansion_size(const jt_expansion* e);
/* Entries in canonical order: l, then nu lexicographically. */
JT_API jt_status jt_expansion_entry(const jt_expansion* e, size_t index, int64_t* l,
                                    int64_t* nu, jt_complex* value);

/* ---- evaluation ---- */
/* radius / points may be NULL. */
JT_API jt_status jt_theta_eval(const jt_spec* spec, jt_complex tau, const jt_complex* z,
                               double eps, jt_complex* out, int64_t* radius,
                               size_t* points);
JT_API jt_status jt_psi_eval(const jt_spec* spec, jt_complex tau, const jt_complex* z,
                             double eps, jt_complex* out, int64_t* radius,
                             size_t* points);
JT_API jt_status jt_e2_eval(jt_complex tau, double eps, jt_complex* out);
/* Uses the form and directions of spec; p and ell have f entries. */
JT_API jt_status jt_congruence_theta_eval(const jt_spec* spec, const int64_t* p,
                                          const jt_complex* ell, unsigned k,
                                          jt_complex tau, const jt_complex* z,
                                          double eps, jt_complex* out,
                                          int64_t* radius, size_t* points);
/* out: T + 1 coefficients of X^0..X^T. */
JT_API jt_status jt_generating_poly(const jt_spec* spec, jt_complex tau,
                                    const jt_complex* z, unsigned T, double eps,
                                    jt_complex* out);

/* ---- verification ---- */
typedef struct {
  double tol;
  double eps;
} jt_verify_options;

typedef struct {
  size_t point_index;
  int degree;
  int64_t l;
  size_t nu_len;
  jt_complex lhs;
  jt_complex rhs;
  double abs_residual;
  double rel_residual;
} jt_sample;

/* taus: count entries; zs: count x n row major. */
JT_API jt_status jt_default_points(size_t n, size_t count, uint64_t seed,
                                   jt_complex* taus, jt_complex* zs);

JT_API jt_status jt_verify_modular(const jt_spec* spec, int psi, jt_gamma gamma,
                                   size_t count, const jt_complex* taus,
                                   const jt_complex* zs, const jt_verify_options* opt,
                                   jt_report** out);
JT_API jt_status jt_verify_elliptic(const jt_spec* spec, int psi, const int64_t* lambda,
                                    const int64_t* mu, size_t count,
                                    const jt_complex* taus, const jt_complex* zs,
                                    const jt_verify_options* opt, jt_report** out);
JT_API jt_status jt_verify_translation(const jt_spec* spec, const int64_t* lambda,
                                       const int64_t* mu, size_t count,
                                       const jt_complex* taus, const jt_complex* zs,
                                       const jt_verify_options* opt, jt_report** out);
JT_API jt_status jt_verify_generating(const jt_spec* spec, jt_gamma gamma, unsigned T,
                                      size_t count, const jt_complex* taus,
                                      const jt_complex* zs,
                                      const jt_verify_options* opt, jt_report** out);
JT_API jt_status jt_verify_congruence(const jt_spec* spec, const int64_t* p,
                                      const jt_complex* ell, unsigned k, jt_gamma gamma,
                                      size_t count, const jt_complex* taus,
                                      const jt_complex* zs,
                                      const jt_verify_options* opt, jt_report** out);
/* gram: n x n of the directions the expansion was built from. */
JT_API jt_status jt_verify_support(const jt_expansion* e, const int64_t* gram, double tol,
                                   jt_report** out);

JT_API void jt_report_destroy(jt_report* r);
JT_API const char* jt_report_identity(const jt_report* r);
JT_API int jt_report_passed(const jt_report* r);
JT_API double jt_report_max_residual(const jt_report* r);
JT_API double jt_report_tolerance(const jt_report* r);
JT_API size_t jt_report_sample_count(const jt_report* r);
/* nu (capacity nu_cap) receives the Fourier key of a support sample; it may
 * be NULL. */
JT_API jt_status jt_report_sample(const jt_report* r, size_t i, jt_sample* out,
                                  int64_t* nu, size_t nu_cap);
JT_API jt_status jt_report_truncation(const jt_report* r, double* eps, int64_t* max_radius,
                                      size_t* max_points, size_t* evaluations);

/* ---- quasi-Jacobi depth ---- */
typedef struct {
  unsigned smax;
  unsigned tmax;
  unsigned max_modular_degree;
  double tol;
  double eps;
  double max_condition;
} jt_depth_options;

typedef struct {
  unsigned t;
  unsigned modular_degree;
  double fit_residual;
  double condition;
} jt_depth_result;

JT_API jt_depth_options jt_depth_options_default(void);
/* Default base points, Gamma_0 elements and translation grid. s: n entries. */
JT_API jt_status jt_quasi_depth(const jt_spec* spec, const jt_depth_options* opt,
                                int64_t* s, jt_depth_result* out);

#ifdef __cplusplus
}
#endif

#endif /* JTHETA_JTHETA_H */
