#include "jtheta/jtheta.h"

#include <exception>
#include <string>
#include <vector>

#include "jtheta/error.hpp"
#include "jtheta/jacobi_group.hpp"
#include "jtheta/quadform.hpp"
#include "jtheta/series.hpp"
#include "jtheta/verify.hpp"

#ifndef JTHETA_VERSION
#define JTHETA_VERSION "0.0.0"
#endif

struct jt_form {
  jtheta::QuadraticForm form;
};

struct jt_spec {
  jtheta::ThetaSpec spec;
};

struct jt_expansion {
  jtheta::FourierExpansion exp;
};

struct jt_report {
  jtheta::VerificationReport report;
  std::string identity;
};

namespace {

using jtheta::Complex;
using jtheta::ComplexVector;
using jtheta::ErrorCode;
using jtheta::IntVector;

thread_local std::string g_last_error;

jt_status fail(jt_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs body and maps exceptions to status codes.
template <class F>
jt_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return JT_OK;
  } catch (const jtheta::Error& e) {
    return fail(static_cast<jt_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(JT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(JT_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw jtheta::Error(ErrorCode::kInvalidArgument, what);
}

Complex to_cpp(jt_complex c) { return {c.re, c.im}; }
jt_complex to_c(Complex c) { return {c.real(), c.imag()}; }

ComplexVector complex_vec(const jt_complex* p, std::size_t len) {
  ComplexVector out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = to_cpp(p[i]);
  return out;
}

std::vector<jtheta::SamplePoint> points_from(std::size_t n, std::size_t count,
                                             const jt_complex* taus, const jt_complex* zs) {
  require(count == 0 || taus != nullptr, "taus is NULL");
  require(count == 0 || n == 0 || zs != nullptr, "zs is NULL");
  std::vector<jtheta::SamplePoint> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].tau = to_cpp(taus[i]);
    out[i].z = complex_vec(zs + i * n, n);
  }
  return out;
}

jtheta::VerifyOptions options_from(const jt_verify_options* opt) {
  jtheta::VerifyOptions o;
  if (opt != nullptr) {
    o.tol = opt->tol;
    o.eps = opt->eps;
  }
  return o;
}

jtheta::Gamma0Element gamma_from(const jt_spec* spec, jt_gamma g) {
  return jtheta::Gamma0Element::make(g.a, g.b, g.c, g.d, spec->spec.form.level());
}

void emit_report(jtheta::VerificationReport r, jt_report** out) {
  auto* h = new jt_report{std::move(r), {}};
  h->identity = std::string(jtheta::identity_name(h->report.identity));
  *out = h;
}

void emit_value(const jtheta::SeriesValue& sv, jt_complex* out, int64_t* radius,
                size_t* points) {
  *out = to_c(sv.value);
  if (radius != nullptr) *radius = sv.radius;
  if (points != nullptr) *points = sv.points;
}

}  // namespace

extern "C" {

const char* jt_version(void) { return JTHETA_VERSION; }

const char* jt_last_error_message(void) { return g_last_error.c_str(); }

const char* jt_status_name(jt_status status) {
  if (status == JT_OK) return "Ok";
  if (status == JT_ERR_INTERNAL) return "Internal";
  if (status < JT_ERR_NOT_SYMMETRIC || status > JT_ERR_INVALID_ARGUMENT) return "Unknown";
  return jtheta::error_name(static_cast<ErrorCode>(status)).data();
}

jt_status jt_form_create(const int64_t* matrix, size_t f, jt_form** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    require(f == 0 || matrix != nullptr, "matrix is NULL");
    std::vector<std::int64_t> data(matrix, matrix + f * f);
    *out = new jt_form{jtheta::QuadraticForm::validate(jtheta::IntMatrix(f, std::move(data)))};
  });
}

void jt_form_destroy(jt_form* form) { delete form; }

jt_status jt_form_info(const jt_form* form, size_t* rank, int64_t* det, int64_t* level) {
  return guarded([&] {
    require(form != nullptr, "form is NULL");
    if (rank != nullptr) *rank = form->form.rank();
    if (det != nullptr) *det = form->form.det();
    if (level != nullptr) *level = form->form.level();
  });
}

jt_status jt_form_epsilon(const jt_form* form, int64_t d, int* out) {
  return guarded([&] {
    require(form != nullptr && out != nullptr, "NULL argument");
    *out = jtheta::epsilon(form->form, d);
  });
}

jt_status jt_kronecker(int64_t a, int64_t n, int* out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = jtheta::kronecker(a, n);
  });
}

jt_status jt_spec_create(const jt_form* form, const int64_t* directions, size_t n,
                         const jt_complex* v, unsigned k, jt_spec** out) {
  return guarded([&] {
    require(form != nullptr && out != nullptr && v != nullptr, "NULL argument");
    require(n == 0 || directions != nullptr, "directions is NULL");
    const std::size_t f = form->form.rank();
    std::vector<IntVector> dirs(n);
    for (std::size_t j = 0; j < n; ++j)
      dirs[j].assign(directions + j * f, directions + (j + 1) * f);
    *out = new jt_spec{jtheta::ThetaSpec::make(form->form, std::move(dirs),
                                               complex_vec(v, f), k)};
  });
}

void jt_spec_destroy(jt_spec* spec) { delete spec; }

size_t jt_spec_n(const jt_spec* spec) { return spec == nullptr ? 0 : spec->spec.n(); }

size_t jt_spec_rank(const jt_spec* spec) {
  return spec == nullptr ? 0 : spec->spec.form.rank();
}

jt_status jt_spec_gram(const jt_spec* spec, int64_t* out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "NULL argument");
    const auto& g = spec->spec.directions.gram();
    std::copy(g.data().begin(), g.data().end(), out);
  });
}

jt_status jt_spec_admissibility(const jt_spec* spec, double tol, int* isotropic,
                                int* orthogonal) {
  return guarded([&] {
    require(spec != nullptr, "spec is NULL");
    const auto a = jtheta::check_admissible(spec->spec.form, spec->spec.directions,
                                            spec->spec.v, tol);
    if (isotropic != nullptr) *isotropic = a.isotropic;
    if (orthogonal != nullptr) *orthogonal = a.orthogonal;
  });
}

jt_status jt_spherical_decomposition(const jt_spec* spec, const jt_complex* v,
                                     jt_complex* alpha, jt_complex* u) {
  return guarded([&] {
    require(spec != nullptr && v != nullptr && alpha != nullptr && u != nullptr,
            "NULL argument");
    const auto vv = complex_vec(v, spec->spec.form.rank());
    const auto d = jtheta::spherical_decomposition(spec->spec.form, spec->spec.directions, vv);
    for (std::size_t i = 0; i < d.alpha.size(); ++i) alpha[i] = to_c(d.alpha[i]);
    for (std::size_t i = 0; i < d.u.size(); ++i) u[i] = to_c(d.u[i]);
  });
}

jt_status jt_theta_coeffs(const jt_spec* spec, int64_t lmax, jt_expansion** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "NULL argument");
    *out = new jt_expansion{jtheta::theta_coeffs(spec->spec, lmax)};
  });
}

jt_status jt_psi_coeffs(const jt_spec* spec, int64_t lmax, jt_expansion** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "NULL argument");
    *out = new jt_expansion{jtheta::psi_coeffs(spec->spec, lmax)};
  });
}

jt_status jt_expansion_create(size_t n, int64_t lmax, jt_expansion** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    require(lmax >= 0, "lmax must be non-negative");
    *out = new jt_expansion{jtheta::FourierExpansion(n, lmax)};
  });
}

jt_status jt_expansion_add(jt_expansion* e, int64_t l, const int64_t* nu, jt_complex value) {
  return guarded([&] {
    require(e != nullptr, "expansion is NULL");
    require(e->exp.n() == 0 || nu != nullptr, "nu is NULL");
    e->exp.add(jtheta::FourierKey{l, IntVector(nu, nu + e->exp.n())}, to_cpp(value));
  });
}

jt_status jt_expansion_z_derivative(const jt_expansion* e, size_t i, jt_expansion** out) {
  return guarded([&] {
    require(e != nullptr && out != nullptr, "NULL argument");
    *out = new jt_expansion{jtheta::z_derivative(e->exp, i)};
  });
}

void jt_expansion_destroy(jt_expansion* e) { delete e; }

size_t jt_expansion_n(const jt_expansion* e) { return e == nullptr ? 0 : e->exp.n(); }

int64_t jt_expansion_lmax(const jt_expansion* e) { return e == nullptr ? 0 : e->exp.lmax(); }

size_t jt_expansion_size(const jt_expansion* e) { return e == nullptr ? 0 : e->exp.size(); }

jt_status jt_expansion_entry(const jt_expansion* e, size_t index, int64_t* l, int64_t* nu,
                             jt_complex* value) {
  return guarded([&] {
    require(e != nullptr, "expansion is NULL");
    if (index >= e->exp.size())
      throw jtheta::Error(ErrorCode::kIndexOutOfRange, "entry index out of range");
    auto it = e->exp.entries().begin();
    std::advance(it, static_cast<std::ptrdiff_t>(index));
    if (l != nullptr) *l = it->first.l;
    if (nu != nullptr) std::copy(it->first.nu.begin(), it->first.nu.end(), nu);
    if (value != nullptr) *value = to_c(it->second);
  });
}

jt_status jt_theta_eval(const jt_spec* spec, jt_complex tau, const jt_complex* z, double eps,
                        jt_complex* out, int64_t* radius, size_t* points) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "NULL argument");
    require(spec->spec.n() == 0 || z != nullptr, "z is NULL");
    const auto zz = complex_vec(z, spec->spec.n());
    emit_value(jtheta::theta_eval_detailed(spec->spec, to_cpp(tau), zz, eps), out, radius,
               points);
  });
}

jt_status jt_psi_eval(const jt_spec* spec, jt_complex tau, const jt_complex* z, double eps,
                      jt_complex* out, int64_t* radius, size_t* points) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "NULL argument");
    require(spec->spec.n() == 0 || z != nullptr, "z is NULL");
    const auto zz = complex_vec(z, spec->spec.n());
    emit_value(jtheta::psi_eval_detailed(spec->spec, to_cpp(tau), zz, eps), out, radius,
               points);
  });
}

jt_status jt_e2_eval(jt_complex tau, double eps, jt_complex* out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = to_c(jtheta::eisenstein_e2(to_cpp(tau), eps));
  });
}

jt_status jt_congruence_theta_eval(const jt_spec* spec, const int64_t* p,
                                   const jt_complex* ell, unsigned k, jt_complex tau,
                                   const jt_complex* z, double eps, jt_complex* out,
                                   int64_t* radius, size_t* points) {
  return guarded([&] {
    require(spec != nullptr && p != nullptr && ell != nullptr && out != nullptr,
            "NULL argument");
    require(spec->spec.n() == 0 || z != nullptr, "z is NULL");
    const std::size_t f = spec->spec.form.rank();
    const IntVector pp(p, p + f);
    const auto ll = complex_vec(ell, f);
    const auto zz = complex_vec(z, spec->spec.n());
    emit_value(jtheta::congruence_theta_eval_detailed(spec->spec.form, pp, ll, k,
                                                      spec->spec.directions, to_cpp(tau),
                                                      zz, eps),
               out, radius, points);
  });
}

jt_status jt_generating_poly(const jt_spec* spec, jt_complex tau, const jt_complex* z,
                             unsigned T, double eps, jt_complex* out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "NULL argument");
    require(spec->spec.n() == 0 || z != nullptr, "z is NULL");
    const auto zz = complex_vec(z, spec->spec.n());
    const auto poly = jtheta::theta_generating_poly(spec->spec.form, spec->spec.directions,
                                                    spec->spec.v, to_cpp(tau), zz, T, eps);
    for (std::size_t t = 0; t < poly.coefficients.size(); ++t)
      out[t] = to_c(poly.coefficients[t]);
  });
}

jt_status jt_default_points(size_t n, size_t count, uint64_t seed, jt_complex* taus,
                            jt_complex* zs) {
  return guarded([&] {
    require(count == 0 || taus != nullptr, "taus is NULL");
    require(count == 0 || n == 0 || zs != nullptr, "zs is NULL");
    const auto pts = jtheta::default_sample_points(n, count, seed);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      taus[i] = to_c(pts[i].tau);
      for (std::size_t j = 0; j < n; ++j) zs[i * n + j] = to_c(pts[i].z[j]);
    }
  });
}

jt_status jt_verify_modular(const jt_spec* spec, int psi, jt_gamma gamma, size_t count,
                            const jt_complex* taus, const jt_complex* zs,
                            const jt_verify_options* opt, jt_report** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "NULL argument");
    const auto pts = points_from(spec->spec.n(), count, taus, zs);
    emit_report(jtheta::verify_modular(psi ? jtheta::SeriesKind::kPsi
                                           : jtheta::SeriesKind::kTheta,
                                       spec->spec, gamma_from(spec, gamma), pts,
                                       options_from(opt)),
                out);
  });
}

jt_status jt_verify_elliptic(const jt_spec* spec, int psi, const int64_t* lambda,
                             const int64_t* mu, size_t count, const jt_complex* taus,
                             const jt_complex* zs, const jt_verify_options* opt,
                             jt_report** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr && lambda != nullptr && mu != nullptr,
            "NULL argument");
    const std::size_t n = spec->spec.n();
    const auto pts = points_from(n, count, taus, zs);
    emit_report(jtheta::verify_elliptic(psi ? jtheta::SeriesKind::kPsi
                                            : jtheta::SeriesKind::kTheta,
                                        spec->spec, {lambda, n}, {mu, n}, pts,
                                        options_from(opt)),
                out);
  });
}

jt_status jt_verify_translation(const jt_spec* spec, const int64_t* lambda, const int64_t* mu,
                                size_t count, const jt_complex* taus, const jt_complex* zs,
                                const jt_verify_options* opt, jt_report** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr && lambda != nullptr && mu != nullptr,
            "NULL argument");
    const std::size_t n = spec->spec.n();
    const auto pts = points_from(n, count, taus, zs);
    emit_report(jtheta::verify_translation_polynomial(spec->spec, {lambda, n}, {mu, n}, pts,
                                                      options_from(opt)),
                out);
  });
}

jt_status jt_verify_generating(const jt_spec* spec, jt_gamma gamma, unsigned T, size_t count,
                               const jt_complex* taus, const jt_complex* zs,
                               const jt_verify_options* opt, jt_report** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "NULL argument");
    const auto pts = points_from(spec->spec.n(), count, taus, zs);
    emit_report(jtheta::verify_generating(spec->spec.form, spec->spec.directions,
                                          spec->spec.v, gamma_from(spec, gamma), T, pts,
                                          options_from(opt)),
                out);
  });
}

jt_status jt_verify_congruence(const jt_spec* spec, const int64_t* p, const jt_complex* ell,
                               unsigned k, jt_gamma gamma, size_t count,
                               const jt_complex* taus, const jt_complex* zs,
                               const jt_verify_options* opt, jt_report** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr && p != nullptr && ell != nullptr,
            "NULL argument");
    const std::size_t f = spec->spec.form.rank();
    const auto pts = points_from(spec->spec.n(), count, taus, zs);
    const IntVector pp(p, p + f);
    const auto ll = complex_vec(ell, f);
    emit_report(jtheta::verify_congruence(spec->spec.form, pp, ll, k, spec->spec.directions,
                                          gamma_from(spec, gamma), pts, options_from(opt)),
                out);
  });
}

jt_status jt_verify_support(const jt_expansion* e, const int64_t* gram, double tol,
                            jt_report** out) {
  return guarded([&] {
    require(e != nullptr && gram != nullptr && out != nullptr, "NULL argument");
    const std::size_t n = e->exp.n();
    jtheta::IntMatrix g(n, std::vector<std::int64_t>(gram, gram + n * n));
    emit_report(jtheta::verify_support(e->exp, g, tol), out);
  });
}

void jt_report_destroy(jt_report* r) { delete r; }

const char* jt_report_identity(const jt_report* r) {
  return r == nullptr ? "" : r->identity.c_str();
}

int jt_report_passed(const jt_report* r) { return r != nullptr && r->report.passed; }

double jt_report_max_residual(const jt_report* r) {
  return r == nullptr ? 0.0 : r->report.max_residual;
}

double jt_report_tolerance(const jt_report* r) {
  return r == nullptr ? 0.0 : r->report.tolerance;
}

size_t jt_report_sample_count(const jt_report* r) {
  return r == nullptr ? 0 : r->report.samples.size();
}

jt_status jt_report_sample(const jt_report* r, size_t i, jt_sample* out, int64_t* nu,
                           size_t nu_cap) {
  return guarded([&] {
    require(r != nullptr && out != nullptr, "NULL argument");
    if (i >= r->report.samples.size())
      throw jtheta::Error(ErrorCode::kIndexOutOfRange, "sample index out of range");
    const auto& s = r->report.samples[i];
    out->point_index = s.point_index;
    out->degree = s.degree;
    out->l = s.l;
    out->nu_len = s.nu.size();
    out->lhs = to_c(s.lhs);
    out->rhs = to_c(s.rhs);
    out->abs_residual = s.abs_residual;
    out->rel_residual = s.rel_residual;
    if (nu != nullptr) {
      require(nu_cap >= s.nu.size(), "nu buffer too small");
      std::copy(s.nu.begin(), s.nu.end(), nu);
    }
  });
}

jt_status jt_report_truncation(const jt_report* r, double* eps, int64_t* max_radius,
                               size_t* max_points, size_t* evaluations) {
  return guarded([&] {
    require(r != nullptr, "report is NULL");
    const auto& t = r->report.truncation;
    if (eps != nullptr) *eps = t.eval_eps;
    if (max_radius != nullptr) *max_radius = t.max_radius;
    if (max_points != nullptr) *max_points = t.max_points;
    if (evaluations != nullptr) *evaluations = t.evaluations;
  });
}

jt_depth_options jt_depth_options_default(void) {
  const jtheta::DepthFitOptions d;
  return {d.smax, d.tmax, d.max_modular_degree, d.tol, d.eps, d.max_condition};
}

jt_status jt_quasi_depth(const jt_spec* spec, const jt_depth_options* opt, int64_t* s,
                         jt_depth_result* out) {
  return guarded([&] {
    require(spec != nullptr && s != nullptr && out != nullptr, "NULL argument");
    jtheta::DepthFitOptions o;
    if (opt != nullptr) {
      o.smax = opt->smax;
      o.tmax = opt->tmax;
      o.max_modular_degree = opt->max_modular_degree;
      o.tol = opt->tol;
      o.eps = opt->eps;
      o.max_condition = opt->max_condition;
    }
    const std::size_t n = spec->spec.n();
    const auto base = jtheta::default_depth_base_points(n);
    const auto gammas = jtheta::default_depth_gammas(spec->spec.form.level());
    const auto lambdas = jtheta::default_depth_lambdas(n, o.smax);
    const auto fit = jtheta::quasi_depth_fit(spec->spec, base, gammas, lambdas, o);
    std::copy(fit.lambda_depth.begin(), fit.lambda_depth.end(), s);
    *out = {fit.t, fit.modular_degree, fit.fit_residual, fit.condition};
  });
}

}  // extern "C"
