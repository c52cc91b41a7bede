#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "jtheta/jacobi_group.hpp"
#include "jtheta/quadform.hpp"
#include "jtheta/series.hpp"

namespace jtheta {

enum class Identity {
  kModularTheta,
  kModularPsi,
  kEllipticTheta,
  kEllipticPsi,
  kTranslationPolynomial,
  kGenerating,
  kCongruence,
  kSupport,
};

std::string_view identity_name(Identity id) noexcept;

enum class SeriesKind { kTheta, kPsi };

struct SamplePoint {
  Complex tau;
  ComplexVector z;
};

struct Sample {
  std::size_t point_index = 0;
  int degree = -1;          // X-degree (generating series) or -1
  std::int64_t l = 0;       // Fourier key (support checks)
  IntVector nu;
  Complex lhs;
  Complex rhs;
  double abs_residual = 0.0;
  double rel_residual = 0.0;  // |lhs - rhs| / max(1, |rhs|)
};

struct TruncationInfo {
  double eval_eps = 0.0;
  std::int64_t max_radius = 0;
  std::size_t max_points = 0;
  std::size_t evaluations = 0;
};

struct VerificationReport {
  Identity identity = Identity::kModularTheta;
  std::vector<Sample> samples;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;  // max_residual <= tolerance
  TruncationInfo truncation;
};

struct VerifyOptions {
  double tol = 1e-8;
  double eps = 1e-10;
  // Threshold for the isotropy / orthogonality preconditions.
  double admissibility_tol = 1e-12;
};

// Deterministic sample points: Im tau in [0.5, 2], |Re tau| <= 0.5,
// |z_j| <= 0.3.
std::vector<SamplePoint> default_sample_points(std::size_t n, std::size_t count = 8,
                                               std::uint64_t seed = 1);

// theta (kind theta; needs Q(v) = 0 and B(v, h_j) = 0) or Psi (needs
// B(v, h_j) = 0) against eps(d) (c tau + d)^{k+r} e(c G[z] / 2(c tau + d)).
VerificationReport verify_modular(SeriesKind kind, const ThetaSpec& spec,
                                  const Gamma0Element& gamma,
                                  std::span<const SamplePoint> points,
                                  const VerifyOptions& options = {});

// F(tau, z + lambda tau + mu) against exp(-pi i (G[lambda] tau + 2 z^T G lambda)) F.
VerificationReport verify_elliptic(SeriesKind kind, const ThetaSpec& spec,
                                   std::span<const std::int64_t> lambda,
                                   std::span<const std::int64_t> mu,
                                   std::span<const SamplePoint> points,
                                   const VerifyOptions& options = {});

// General v:
// exp(pi i (G[lambda] tau + 2 z^T G lambda)) theta_k(tau, z + lambda tau + mu)
//   = sum_j C(k, j) (-sum_i lambda_i B(v, h_i))^j theta_{k-j}(tau, z).
VerificationReport verify_translation_polynomial(const ThetaSpec& spec,
                                                 std::span<const std::int64_t> lambda,
                                                 std::span<const std::int64_t> mu,
                                                 std::span<const SamplePoint> points,
                                                 const VerifyOptions& options = {});

// Generating series through X^T; one sample per (point, degree).
VerificationReport verify_generating(const QuadraticForm& form,
                                     const DirectionSet& directions,
                                     const SphericalVector& v,
                                     const Gamma0Element& gamma, unsigned T,
                                     std::span<const SamplePoint> points,
                                     const VerifyOptions& options = {});

// Congruence theta law for d > 0; the right side is evaluated at residue a·p.
VerificationReport verify_congruence(const QuadraticForm& form,
                                     std::span<const std::int64_t> p,
                                     std::span<const Complex> ell, unsigned k,
                                     const DirectionSet& directions,
                                     const Gamma0Element& gamma,
                                     std::span<const SamplePoint> points,
                                     const VerifyOptions& options = {});

// Every stored coefficient satisfies 4l - (G/2)^{-1}[nu] >= -tol. One sample
// per coefficient with lhs = 4l and rhs = (G/2)^{-1}[nu] (computed exactly).
VerificationReport verify_support(const FourierExpansion& expansion,
                                  const IntMatrix& gram, double tol = 0.0);

struct DepthFitOptions {
  unsigned smax = 3;
  unsigned tmax = 2;
  // Cap on the degree of the modular fit in c/(c tau + d).
  unsigned max_modular_degree = 4;
  double tol = 1e-6;
  double eps = 1e-10;
  double max_condition = 1e10;
};

struct DepthFit {
  IntVector lambda_depth;       // s_1..s_n from the lattice-translation fit
  unsigned t = 0;               // max(0, modular_degree - sum s_i)
  unsigned modular_degree = 0;  // total degree in c/(c tau + d)
  double fit_residual = 0.0;    // worst relative residual of all fits
  double condition = 0.0;       // worst scaled condition number
};

// Least-squares estimate of the quasi-Jacobi depth; maxima over the base
// points. Throws IllConditionedFit when a design matrix is rank deficient.
DepthFit quasi_depth_fit(const ThetaSpec& spec,
                         std::span<const SamplePoint> base_points,
                         std::span<const Gamma0Element> gammas,
                         std::span<const IntVector> lambdas,
                         const DepthFitOptions& options = {});

std::vector<SamplePoint> default_depth_base_points(std::size_t n);
std::vector<Gamma0Element> default_depth_gammas(std::int64_t level);
std::vector<IntVector> default_depth_lambdas(std::size_t n, unsigned smax);

}  // namespace jtheta
