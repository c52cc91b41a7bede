#include "jtheta/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <numeric>

#include <Eigen/Dense>

#include "checked.hpp"
#include "jtheta/error.hpp"
#include "jtheta/lattice_enum.hpp"

namespace jtheta {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};

Complex cpow(Complex base, int e) {
  Complex out = 1.0;
  const bool neg = e < 0;
  for (int i = 0; i < std::abs(e); ++i) out *= base;
  return neg ? 1.0 / out : out;
}

double binomial(unsigned n, unsigned k) {
  double out = 1.0;
  for (unsigned i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / i;
  return out;
}

Complex evaluate(SeriesKind kind, const ThetaSpec& spec, Complex tau,
                 std::span<const Complex> z, double eps, TruncationInfo& info) {
  const SeriesValue sv = kind == SeriesKind::kTheta
                             ? theta_eval_detailed(spec, tau, z, eps)
                             : psi_eval_detailed(spec, tau, z, eps);
  info.max_radius = std::max(info.max_radius, sv.radius);
  info.max_points = std::max(info.max_points, sv.points);
  ++info.evaluations;
  return sv.value;
}

void check_points(std::span<const SamplePoint> points, std::size_t n) {
  for (const auto& p : points) {
    if (p.z.size() != n)
      throw Error(ErrorCode::kDimensionMismatch, "sample point z has wrong length");
    if (!(p.tau.imag() > 0.0))
      throw Error(ErrorCode::kNonconvergentInput, "sample point with Im tau <= 0");
  }
}

void check_gamma(const QuadraticForm& form, const Gamma0Element& gamma) {
  if (gamma.c() % form.level() != 0)
    throw Error(ErrorCode::kInadmissibleSpec,
                "gamma is not in Gamma_0 of the level of the form");
}

void record(VerificationReport& report, Sample s) {
  s.abs_residual = std::abs(s.lhs - s.rhs);
  s.rel_residual = s.abs_residual / std::max(1.0, std::abs(s.rhs));
  report.max_residual = std::max(report.max_residual, s.rel_residual);
  report.samples.push_back(std::move(s));
}

void finish(VerificationReport& report) {
  report.passed = report.max_residual <= report.tolerance;
}

VerificationReport start(Identity id, const VerifyOptions& options) {
  VerificationReport r;
  r.identity = id;
  r.tolerance = options.tol;
  r.truncation.eval_eps = options.eps;
  return r;
}

ComplexVector shifted(std::span<const Complex> z, Complex tau,
                      std::span<const std::int64_t> lambda,
                      std::span<const std::int64_t> mu) {
  ComplexVector out(z.begin(), z.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += static_cast<double>(lambda[i]) * tau + static_cast<double>(mu[i]);
  return out;
}

void check_shift(std::size_t n, std::span<const std::int64_t> lambda,
                 std::span<const std::int64_t> mu) {
  if (lambda.size() != n || mu.size() != n)
    throw Error(ErrorCode::kDimensionMismatch, "lambda and mu must have length n");
}

// Real least squares with complex right-hand side after column scaling.
struct LsqResult {
  std::vector<Complex> coeffs;
  double residual = 0.0;
  double condition = 0.0;
};

LsqResult least_squares(Eigen::MatrixXd design, const std::vector<Complex>& y,
                        double max_condition) {
  const auto rows = design.rows();
  const auto cols = design.cols();
  if (rows < cols)
    throw Error(ErrorCode::kIllConditionedFit, "fewer samples than unknowns");
  Eigen::VectorXd scale(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double m = design.col(j).cwiseAbs().maxCoeff();
    scale(j) = m > 0.0 ? m : 1.0;
    design.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double cond = smin > 0.0 ? sv(0) / smin : INFINITY;
  if (!(cond <= max_condition))
    throw Error(ErrorCode::kIllConditionedFit, "design matrix is ill conditioned");
  Eigen::VectorXd re(rows), im(rows);
  double ymax = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    re(i) = y[static_cast<std::size_t>(i)].real();
    im(i) = y[static_cast<std::size_t>(i)].imag();
    ymax = std::max(ymax, std::abs(y[static_cast<std::size_t>(i)]));
  }
  const Eigen::VectorXd xr = svd.solve(re);
  const Eigen::VectorXd xi = svd.solve(im);
  const Eigen::VectorXd rr = design * xr - re;
  const Eigen::VectorXd ri = design * xi - im;
  LsqResult out;
  out.condition = cond;
  for (Eigen::Index i = 0; i < rows; ++i)
    out.residual = std::max(out.residual, std::hypot(rr(i), ri(i)));
  out.residual /= std::max(1.0, ymax);
  out.coeffs.resize(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j)
    out.coeffs[static_cast<std::size_t>(j)] = Complex(xr(j), xi(j)) / scale(j);
  return out;
}

}  // namespace

std::string_view identity_name(Identity id) noexcept {
  switch (id) {
    case Identity::kModularTheta: return "modular_theta";
    case Identity::kModularPsi: return "modular_psi";
    case Identity::kEllipticTheta: return "elliptic_theta";
    case Identity::kEllipticPsi: return "elliptic_psi";
    case Identity::kTranslationPolynomial: return "translation_polynomial";
    case Identity::kGenerating: return "generating";
    case Identity::kCongruence: return "congruence";
    case Identity::kSupport: return "support";
  }
  return "unknown";
}

std::vector<SamplePoint> default_sample_points(std::size_t n, std::size_t count,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };
  std::vector<SamplePoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SamplePoint p;
    const double x = uniform(-0.5, 0.5);
    const double y = uniform(0.5, 2.0);
    p.tau = Complex(x, y);
    p.z.resize(n);
    for (auto& zj : p.z) {
      const double r = 0.3 * std::sqrt(uniform(0.0, 1.0));
      const double phi = uniform(0.0, 2.0 * std::numbers::pi);
      zj = std::polar(r, phi);
    }
    out.push_back(std::move(p));
  }
  return out;
}

VerificationReport verify_modular(SeriesKind kind, const ThetaSpec& spec,
                                  const Gamma0Element& gamma,
                                  std::span<const SamplePoint> points,
                                  const VerifyOptions& options) {
  const auto adm = check_admissible(spec.form, spec.directions, spec.v,
                                    options.admissibility_tol);
  if (!adm.orthogonal)
    throw Error(ErrorCode::kInadmissibleSpec, "B(v, h_j) must vanish for every j");
  if (kind == SeriesKind::kTheta && !adm.isotropic)
    throw Error(ErrorCode::kInadmissibleSpec, "Q(v) must vanish for the theta law");
  check_gamma(spec.form, gamma);
  check_points(points, spec.n());

  auto report = start(kind == SeriesKind::kTheta ? Identity::kModularTheta
                                                 : Identity::kModularPsi,
                      options);
  const auto index = index_from_gram(spec.directions.gram());
  const int weight = static_cast<int>(spec.k + spec.form.half_rank());
  const double eps_d = epsilon(spec.form, gamma.d());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const ActedPoint g = act(gamma, p.tau, p.z);
    Sample s;
    s.point_index = i;
    s.lhs = evaluate(kind, spec, g.tau, g.z, options.eps, report.truncation);
    s.rhs = eps_d * modular_factor(gamma, weight, index, p.tau, p.z) *
            evaluate(kind, spec, p.tau, p.z, options.eps, report.truncation);
    record(report, std::move(s));
  }
  finish(report);
  return report;
}

VerificationReport verify_elliptic(SeriesKind kind, const ThetaSpec& spec,
                                   std::span<const std::int64_t> lambda,
                                   std::span<const std::int64_t> mu,
                                   std::span<const SamplePoint> points,
                                   const VerifyOptions& options) {
  const auto adm = check_admissible(spec.form, spec.directions, spec.v,
                                    options.admissibility_tol);
  if (!adm.orthogonal)
    throw Error(ErrorCode::kInadmissibleSpec, "B(v, h_j) must vanish for every j");
  check_shift(spec.n(), lambda, mu);
  check_points(points, spec.n());

  auto report = start(kind == SeriesKind::kTheta ? Identity::kEllipticTheta
                                                 : Identity::kEllipticPsi,
                      options);
  const auto index = index_from_gram(spec.directions.gram());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const auto zs = shifted(p.z, p.tau, lambda, mu);
    Sample s;
    s.point_index = i;
    s.lhs = evaluate(kind, spec, p.tau, zs, options.eps, report.truncation);
    s.rhs = elliptic_factor(index, p.tau, p.z, lambda, mu) *
            evaluate(kind, spec, p.tau, p.z, options.eps, report.truncation);
    record(report, std::move(s));
  }
  finish(report);
  return report;
}

VerificationReport verify_translation_polynomial(const ThetaSpec& spec,
                                                 std::span<const std::int64_t> lambda,
                                                 std::span<const std::int64_t> mu,
                                                 std::span<const SamplePoint> points,
                                                 const VerifyOptions& options) {
  check_shift(spec.n(), lambda, mu);
  check_points(points, spec.n());
  auto report = start(Identity::kTranslationPolynomial, options);
  const auto index = index_from_gram(spec.directions.gram());
  Complex shift = 0.0;
  for (std::size_t i = 0; i < spec.n(); ++i)
    shift += static_cast<double>(lambda[i]) * spec.v.pairings()[i];
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const auto zs = shifted(p.z, p.tau, lambda, mu);
    Sample s;
    s.point_index = i;
    s.lhs = evaluate(SeriesKind::kTheta, spec, p.tau, zs, options.eps, report.truncation) /
            elliptic_factor(index, p.tau, p.z, lambda, mu);
    Complex rhs = 0.0;
    for (unsigned j = 0; j <= spec.k; ++j) {
      const auto lower = spec.with_exponent(spec.k - j);
      rhs += binomial(spec.k, j) * cpow(-shift, static_cast<int>(j)) *
             evaluate(SeriesKind::kTheta, lower, p.tau, p.z, options.eps,
                      report.truncation);
    }
    s.rhs = rhs;
    record(report, std::move(s));
  }
  finish(report);
  return report;
}

VerificationReport verify_generating(const QuadraticForm& form,
                                     const DirectionSet& directions,
                                     const SphericalVector& v,
                                     const Gamma0Element& gamma, unsigned T,
                                     std::span<const SamplePoint> points,
                                     const VerifyOptions& options) {
  const auto adm = check_admissible(form, directions, v, options.admissibility_tol);
  if (!adm.orthogonal)
    throw Error(ErrorCode::kInadmissibleSpec, "B(v, h_j) must vanish for every j");
  check_gamma(form, gamma);
  check_points(points, directions.size());

  auto report = start(Identity::kGenerating, options);
  const auto index = index_from_gram(directions.gram());
  const int r = static_cast<int>(form.half_rank());
  const double eps_d = epsilon(form, gamma.d());
  const double c = static_cast<double>(gamma.c());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const ActedPoint g = act(gamma, p.tau, p.z);
    const Complex j = gamma.automorphy(p.tau);
    const auto lhs = theta_generating_poly(form, directions, v, g.tau, g.z, T, options.eps);
    const auto base = theta_generating_poly(form, directions, v, p.tau, p.z, T, options.eps);
    report.truncation.evaluations += 2 * (T + 1);
    // exp(2 pi i 2 Q(v) c X^2 / j) truncated at X^T.
    std::vector<Complex> ex(T + 1, 0.0);
    const Complex a = kTwoPiI * 2.0 * v.q_of_v() * c / j;
    Complex term = 1.0;
    for (unsigned m = 0; 2 * m <= T; ++m) {
      ex[2 * m] = term;
      term *= a / static_cast<double>(m + 1);
    }
    const Complex pref = eps_d * modular_factor(gamma, r, index, p.tau, p.z);
    for (unsigned t = 0; t <= T; ++t) {
      Complex conv = 0.0;
      for (unsigned u = 0; u <= t; ++u) conv += ex[u] * base.coefficients[t - u];
      Sample s;
      s.point_index = i;
      s.degree = static_cast<int>(t);
      s.lhs = lhs.coefficients[t] * cpow(j, -static_cast<int>(t));
      s.rhs = pref * conv;
      record(report, std::move(s));
    }
  }
  finish(report);
  return report;
}

VerificationReport verify_congruence(const QuadraticForm& form,
                                     std::span<const std::int64_t> p,
                                     std::span<const Complex> ell, unsigned k,
                                     const DirectionSet& directions,
                                     const Gamma0Element& gamma,
                                     std::span<const SamplePoint> points,
                                     const VerifyOptions& options) {
  const std::size_t f = form.rank();
  if (p.size() != f || ell.size() != f)
    throw Error(ErrorCode::kDimensionMismatch, "p and ell must have length f");
  if (!is_admissible_residue(form, p, form.level()))
    throw Error(ErrorCode::kInadmissibleResidue, "A p is not divisible by the level");
  for (std::size_t j = 0; j < directions.size(); ++j) {
    ComplexVector h(directions[j].begin(), directions[j].end());
    if (std::abs(form.bilinear(ell, h)) > options.admissibility_tol)
      throw Error(ErrorCode::kHypothesisViolation, "B(ell, h_j) must vanish for every j");
  }
  check_gamma(form, gamma);
  if (gamma.d() <= 0) throw Error(ErrorCode::kNegativeD, "the congruence law needs d > 0");
  check_points(points, directions.size());

  auto report = start(Identity::kCongruence, options);
  const auto index = index_from_gram(directions.gram());
  const std::int64_t N = form.level();
  const std::int64_t N2 = detail::checked_mul(N, N);
  const int r = static_cast<int>(form.half_rank());
  const double eps_d = epsilon(form, gamma.d());

  IntVector ap(f);
  for (std::size_t i = 0; i < f; ++i)
    ap[i] = detail::mod_floor(detail::checked_mul(gamma.a() % N, p[i] % N), N);
  // exp(2 pi i Q(p) a b / N^2), reduced exactly mod N^2.
  const std::int64_t qp = detail::mod_floor(form.quad(p), N2);
  const std::int64_t ab = detail::mod_floor(
      detail::checked_mul(detail::mod_floor(gamma.a(), N2), detail::mod_floor(gamma.b(), N2)), N2);
  const std::int64_t phase_num = detail::narrow(
      (static_cast<__int128>(qp) * ab) % N2);
  const Complex phase = std::exp(kTwoPiI * (static_cast<double>(phase_num) /
                                            static_cast<double>(N2)));
  const Complex q_ell = form.quad(ell);

  auto eval = [&](std::span<const std::int64_t> res, unsigned kk, Complex tau,
                  std::span<const Complex> z) {
    const SeriesValue sv = congruence_theta_eval_detailed(form, res, ell, kk, directions,
                                                          tau, z, options.eps);
    report.truncation.max_radius = std::max(report.truncation.max_radius, sv.radius);
    report.truncation.max_points = std::max(report.truncation.max_points, sv.points);
    ++report.truncation.evaluations;
    return sv.value;
  };

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const ActedPoint g = act(gamma, pt.tau, pt.z);
    const Complex j = gamma.automorphy(pt.tau);
    Sample s;
    s.point_index = i;
    s.lhs = eval(p, k, g.tau, g.z) /
            modular_factor(gamma, r + static_cast<int>(k), index, pt.tau, pt.z);
    Complex sum = 0.0;
    const Complex x = q_ell * static_cast<double>(gamma.c()) / (kI * std::numbers::pi * j);
    for (unsigned t = 0; 2 * t <= k; ++t) {
      const Rational dl = delta_coeff(t, k);
      const double dv = static_cast<double>(dl.numerator()) / static_cast<double>(dl.denominator());
      const Complex xt = cpow(x, static_cast<int>(t));
      if (xt == 0.0) continue;
      sum += xt * dv * eval(ap, k - 2 * t, pt.tau, pt.z);
    }
    s.rhs = eps_d * phase * sum;
    record(report, std::move(s));
  }
  finish(report);
  return report;
}

VerificationReport verify_support(const FourierExpansion& expansion,
                                  const IntMatrix& gram, double tol) {
  if (gram.dim() != expansion.n())
    throw Error(ErrorCode::kDimensionMismatch, "Gram matrix size differs from n");
  const std::int64_t det = determinant(gram);
  if (det <= 0) throw Error(ErrorCode::kSingularGram, "Gram matrix is not positive definite");
  const IntMatrix adj = adjugate(gram);
  VerificationReport report;
  report.identity = Identity::kSupport;
  report.tolerance = tol;
  for (const auto& [key, value] : expansion.entries()) {
    // (G/2)^{-1}[nu] = 2 nu^T adj(G) nu / det(G).
    __int128 quad = 0;
    for (std::size_t i = 0; i < key.nu.size(); ++i)
      for (std::size_t j = 0; j < key.nu.size(); ++j)
        quad += static_cast<__int128>(key.nu[i]) * adj(i, j) * key.nu[j];
    const __int128 slack = static_cast<__int128>(2 * key.l) * det - quad;
    Sample s;
    s.l = key.l;
    s.nu = key.nu;
    s.lhs = 4.0 * static_cast<double>(key.l);
    s.rhs = 2.0 * static_cast<double>(quad) / static_cast<double>(det);
    s.abs_residual = slack >= 0 ? 0.0 : -2.0 * static_cast<double>(slack) / static_cast<double>(det);
    s.rel_residual = s.abs_residual;
    report.max_residual = std::max(report.max_residual, s.rel_residual);
    report.samples.push_back(std::move(s));
  }
  finish(report);
  return report;
}

std::vector<SamplePoint> default_depth_base_points(std::size_t n) {
  std::vector<SamplePoint> out;
  const Complex taus[] = {{0.0, 1.0}, {0.1, 0.9}, {-0.15, 1.1}};
  const double zs[][2] = {{0.11, 0.07}, {-0.05, 0.13}, {0.09, -0.12}};
  for (std::size_t b = 0; b < 3; ++b) {
    SamplePoint p;
    p.tau = taus[b];
    p.z.resize(n);
    for (std::size_t j = 0; j < n; ++j)
      p.z[j] = Complex(zs[b][0] * (1.0 + 0.3 * j), zs[b][1] * (1.0 - 0.2 * j));
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Gamma0Element> default_depth_gammas(std::int64_t level) {
  std::vector<Gamma0Element> out;
  out.push_back(Gamma0Element::make(1, 1, 0, 1, level));
  const std::int64_t c = level;
  for (std::int64_t d = -5; d <= 5; ++d) {
    if (d == 0 || std::gcd(c, d) != 1) continue;
    // a d - b c = 1 with a = d^{-1} mod c.
    std::int64_t a = 0;
    if (c == 1) {
      a = 1;
    } else {
      for (std::int64_t x = 1; x < c; ++x)
        if (detail::mod_floor(x * d, c) == 1) { a = x; break; }
    }
    const std::int64_t b = (a * d - 1) / c;
    out.push_back(Gamma0Element::make(a, b, c, d, level));
  }
  // -gamma repeats a value of c/(c tau + d) and exercises eps(-d).
  out.push_back(-out[1]);
  return out;
}

std::vector<IntVector> default_depth_lambdas(std::size_t n, unsigned smax) {
  const std::int64_t h = std::max<std::int64_t>(2, (smax + 2) / 2);
  std::vector<IntVector> out;
  IntVector cur(n, -h);
  for (;;) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < n && cur[i] == h) cur[i++] = -h;
    if (i == n) break;
    ++cur[i];
  }
  return out;
}

DepthFit quasi_depth_fit(const ThetaSpec& spec,
                         std::span<const SamplePoint> base_points,
                         std::span<const Gamma0Element> gammas,
                         std::span<const IntVector> lambdas,
                         const DepthFitOptions& options) {
  const std::size_t n = spec.n();
  check_points(base_points, n);
  if (base_points.empty()) throw Error(ErrorCode::kInvalidArgument, "no base points");
  for (const auto& g : gammas) check_gamma(spec.form, g);
  for (const auto& l : lambdas)
    if (l.size() != n) throw Error(ErrorCode::kDimensionMismatch, "lambda has wrong length");

  // Multi-indices {0..smax}^n.
  std::vector<IntVector> exps;
  {
    IntVector cur(n, 0);
    for (;;) {
      exps.push_back(cur);
      std::size_t i = 0;
      while (i < n && cur[i] == static_cast<std::int64_t>(options.smax)) cur[i++] = 0;
      if (i == n) break;
      ++cur[i];
    }
  }
  const unsigned D = std::min<unsigned>(
      static_cast<unsigned>(n) * options.smax + options.tmax, options.max_modular_degree);

  const auto index = index_from_gram(spec.directions.gram());
  const int weight = static_cast<int>(spec.k + spec.form.half_rank());
  const IntVector zero(n, 0);

  DepthFit fit;
  fit.lambda_depth.assign(n, 0);
  for (const auto& bp : base_points) {
    // Lattice-translation direction.
    Eigen::MatrixXd design(static_cast<Eigen::Index>(lambdas.size()),
                           static_cast<Eigen::Index>(exps.size()));
    std::vector<Complex> y;
    for (std::size_t row = 0; row < lambdas.size(); ++row) {
      const auto& lam = lambdas[row];
      for (std::size_t col = 0; col < exps.size(); ++col) {
        double m = 1.0;
        for (std::size_t j = 0; j < n; ++j)
          m *= std::pow(static_cast<double>(lam[j]), static_cast<double>(exps[col][j]));
        design(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = m;
      }
      const auto zs = shifted(bp.z, bp.tau, lam, zero);
      y.push_back(theta_eval(spec, bp.tau, zs, options.eps) /
                  elliptic_factor(index, bp.tau, bp.z, lam, zero));
    }
    const auto lam_fit = least_squares(design, y, options.max_condition);
    double cmax = 0.0;
    for (auto c : lam_fit.coeffs) cmax = std::max(cmax, std::abs(c));
    const double thr = options.tol * std::max(1.0, cmax);
    for (std::size_t col = 0; col < exps.size(); ++col) {
      if (std::abs(lam_fit.coeffs[col]) <= thr) continue;
      for (std::size_t j = 0; j < n; ++j)
        fit.lambda_depth[j] = std::max(fit.lambda_depth[j], exps[col][j]);
    }
    fit.fit_residual = std::max(fit.fit_residual, lam_fit.residual);
    fit.condition = std::max(fit.condition, lam_fit.condition);

    // Modular direction: polynomial in Y = c / (c tau + d).
    std::vector<Complex> my;
    // Complex unknowns through the real embedding.
    Eigen::MatrixXd big(2 * static_cast<Eigen::Index>(gammas.size()),
                        2 * static_cast<Eigen::Index>(D + 1));
    for (std::size_t row = 0; row < gammas.size(); ++row) {
      const auto& g = gammas[row];
      const Complex j = g.automorphy(bp.tau);
      const Complex Y = static_cast<double>(g.c()) / j;
      const ActedPoint ap = act(g, bp.tau, bp.z);
      const Complex val = static_cast<double>(epsilon(spec.form, g.d())) *
                          theta_eval(spec, ap.tau, ap.z, options.eps) /
                          modular_factor(g, weight, index, bp.tau, bp.z);
      my.push_back(val);
      Complex pw = 1.0;
      for (unsigned e = 0; e <= D; ++e) {
        const auto r0 = 2 * static_cast<Eigen::Index>(row);
        const auto c0 = 2 * static_cast<Eigen::Index>(e);
        // (a + ib)(x + iy) = (ax - by) + i(ay + bx)
        big(r0, c0) = pw.real();
        big(r0, c0 + 1) = -pw.imag();
        big(r0 + 1, c0) = pw.imag();
        big(r0 + 1, c0 + 1) = pw.real();
        pw *= Y;
      }
    }
    std::vector<Complex> ry;
    for (auto v : my) {
      ry.emplace_back(v.real(), 0.0);
      ry.emplace_back(v.imag(), 0.0);
    }
    const auto mod_fit = least_squares(big, ry, options.max_condition);
    std::vector<Complex> mc(D + 1);
    double mmax = 0.0;
    for (unsigned e = 0; e <= D; ++e) {
      mc[e] = Complex(mod_fit.coeffs[2 * e].real(), mod_fit.coeffs[2 * e + 1].real());
      mmax = std::max(mmax, std::abs(mc[e]));
    }
    const double mthr = options.tol * std::max(1.0, mmax);
    unsigned deg = 0;
    for (unsigned e = 0; e <= D; ++e)
      if (std::abs(mc[e]) > mthr) deg = e;
    fit.modular_degree = std::max(fit.modular_degree, deg);
    fit.fit_residual = std::max(fit.fit_residual, mod_fit.residual);
    fit.condition = std::max(fit.condition, mod_fit.condition);
  }
  std::int64_t ssum = 0;
  for (auto s : fit.lambda_depth) ssum += s;
  fit.t = static_cast<unsigned>(std::max<std::int64_t>(0, fit.modular_degree - ssum));
  return fit;
}

}  // namespace jtheta
