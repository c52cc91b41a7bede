#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "jtheta/verify.hpp"

using namespace jtheta;
using fx::I;

namespace {

const auto kPoints = default_sample_points(2, 4, 3);

DirectionSet dirs() { return DirectionSet::make(fx::form_2i4(), fx::dirs_e3e4()); }
SphericalVector sv(const ComplexVector& v) {
  return SphericalVector::make(fx::form_2i4(), dirs(), v);
}

}  // namespace

TEST(SamplePoints, DeterministicAndInRange) {
  const auto a = default_sample_points(2, 8, 7);
  const auto b = default_sample_points(2, 8, 7);
  ASSERT_EQ(a.size(), 8u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].tau, b[i].tau);
    EXPECT_EQ(a[i].z, b[i].z);
    EXPECT_GE(a[i].tau.imag(), 0.5);
    EXPECT_LE(a[i].tau.imag(), 2.0);
    EXPECT_LE(std::abs(a[i].tau.real()), 0.5);
    for (const auto& zj : a[i].z) EXPECT_LE(std::abs(zj), 0.3 + 1e-15);
  }
  EXPECT_NE(default_sample_points(2, 8, 8)[0].tau, a[0].tau);
}

TEST(VerifyModular, IdentityIsExact) {
  for (unsigned k : {0u, 2u}) {
    const auto r = verify_modular(SeriesKind::kTheta, fx::spec(fx::v_iso(), k),
                                  Gamma0Element::identity(4), kPoints);
    EXPECT_EQ(r.max_residual, 0.0);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.identity, Identity::kModularTheta);
    EXPECT_EQ(r.samples.size(), kPoints.size());
  }
}

TEST(VerifyModular, Passes) {
  for (const auto& g : {gamma0_element(1, 0, 4, 1, 4), gamma0_element(-3, -1, 4, 1, 4)}) {
    const auto r = verify_modular(SeriesKind::kTheta, fx::spec(fx::v_iso(), 3), g, kPoints);
    EXPECT_TRUE(r.passed) << r.max_residual;
    EXPECT_GT(r.truncation.evaluations, 0u);
    EXPECT_GT(r.truncation.max_radius, 0);
  }
  const auto p = verify_modular(SeriesKind::kPsi, fx::spec(fx::v_ortho(), 2),
                                gamma0_element(1, 0, 4, 1, 4), kPoints);
  EXPECT_TRUE(p.passed) << p.max_residual;
  EXPECT_EQ(p.identity, Identity::kModularPsi);
}

TEST(VerifyModular, SecondaryFormWithNontrivialCharacter) {
  const auto form = fx::form_a2();
  ASSERT_EQ(form.level(), 3);
  const auto g = gamma0_element(2, 1, 3, 2, 3);
  ASSERT_EQ(epsilon(form, g.d()), -1);
  const auto spec = ThetaSpec::make(form, {{1, 0}}, {0.0, 0.0}, 0);
  const auto r = verify_modular(SeriesKind::kTheta, spec, g, default_sample_points(1, 6, 2));
  EXPECT_TRUE(r.passed) << r.max_residual;
}

TEST(VerifyModular, Preconditions) {
  EXPECT_JT_ERROR(verify_modular(SeriesKind::kTheta, fx::spec(fx::v_gen(), 1),
                                 gamma0_element(1, 0, 4, 1, 4), kPoints),
                  kInadmissibleSpec);
  EXPECT_JT_ERROR(verify_modular(SeriesKind::kTheta, fx::spec(fx::v_ortho(), 1),
                                 gamma0_element(1, 0, 4, 1, 4), kPoints),
                  kInadmissibleSpec);
  EXPECT_JT_ERROR(verify_modular(SeriesKind::kPsi, fx::spec(fx::v_gen(), 1),
                                 gamma0_element(1, 0, 4, 1, 4), kPoints),
                  kInadmissibleSpec);
  EXPECT_JT_ERROR(verify_modular(SeriesKind::kTheta, fx::spec(fx::v_iso(), 0),
                                 gamma0_element(1, 0, 2, 1, 2), kPoints),
                  kInadmissibleSpec);
  const std::vector<SamplePoint> bad{{Complex(0.0, 1.0), {0.0}}};
  EXPECT_JT_ERROR(verify_modular(SeriesKind::kTheta, fx::spec(fx::v_iso(), 0),
                                 gamma0_element(1, 0, 4, 1, 4), bad),
                  kDimensionMismatch);
}

TEST(VerifyModular, PsiMatchesThetaWhenIsotropic) {
  const auto g = gamma0_element(1, 0, 4, 1, 4);
  const auto a = verify_modular(SeriesKind::kTheta, fx::spec(fx::v_iso(), 2), g, kPoints);
  const auto b = verify_modular(SeriesKind::kPsi, fx::spec(fx::v_iso(), 2), g, kPoints);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].lhs, b.samples[i].lhs);
    EXPECT_EQ(a.samples[i].rhs, b.samples[i].rhs);
    EXPECT_EQ(a.samples[i].abs_residual, b.samples[i].abs_residual);
  }
}

TEST(VerifyModular, Deterministic) {
  const auto g = gamma0_element(-3, -1, 4, 1, 4);
  const auto a = verify_modular(SeriesKind::kTheta, fx::spec(fx::v_iso(), 1), g, kPoints);
  const auto b = verify_modular(SeriesKind::kTheta, fx::spec(fx::v_iso(), 1), g, kPoints);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].lhs, b.samples[i].lhs);
    EXPECT_EQ(a.samples[i].rhs, b.samples[i].rhs);
  }
  EXPECT_EQ(a.max_residual, b.max_residual);
}

TEST(VerifyElliptic, ZeroLambda) {
  const IntVector zero{0, 0};
  const auto r = verify_elliptic(SeriesKind::kTheta, fx::spec(fx::v_iso(), 2), zero,
                                 IntVector{1, -1}, kPoints);
  EXPECT_LT(r.max_residual, 1e-12);
  const auto same = verify_elliptic(SeriesKind::kTheta, fx::spec(fx::v_iso(), 2), zero, zero, kPoints);
  EXPECT_EQ(same.max_residual, 0.0);
}

TEST(VerifyElliptic, PassesAndChecksPreconditions) {
  const auto r = verify_elliptic(SeriesKind::kPsi, fx::spec(fx::v_ortho(), 3), IntVector{1, -1},
                                 IntVector{0, 2}, kPoints);
  EXPECT_TRUE(r.passed) << r.max_residual;
  EXPECT_EQ(r.identity, Identity::kEllipticPsi);
  EXPECT_JT_ERROR(verify_elliptic(SeriesKind::kTheta, fx::spec(fx::v_gen(), 1), IntVector{1, 0},
                                  IntVector{0, 0}, kPoints),
                  kInadmissibleSpec);
  EXPECT_JT_ERROR(verify_elliptic(SeriesKind::kTheta, fx::spec(fx::v_iso(), 1), IntVector{1},
                                  IntVector{0, 0}, kPoints),
                  kDimensionMismatch);
}

TEST(VerifyTranslation, GeneralVector) {
  // v = h_1: theta_1 shifted by lambda = (1, 0) picks up -B(v, h_1) = -2.
  const auto r = verify_translation_polynomial(fx::spec(fx::v_gen(), 1), IntVector{1, 0},
                                               IntVector{0, 1}, kPoints);
  EXPECT_LT(r.max_residual, 1e-9);
  const auto& s = r.samples[0];
  const auto& p = kPoints[0];
  const Complex want = theta_eval(fx::spec(fx::v_gen(), 1), p.tau, p.z, 1e-12) -
                       2.0 * theta_eval(fx::spec(fx::v_gen(), 0), p.tau, p.z, 1e-12);
  EXPECT_LT(std::abs(s.rhs - want), 1e-9);
  for (unsigned k : {0u, 2u, 3u}) {
    const auto q = verify_translation_polynomial(fx::spec(fx::v_gen(), k), IntVector{-1, 2},
                                                 IntVector{1, 0}, kPoints);
    EXPECT_TRUE(q.passed) << k << " " << q.max_residual;
  }
}

TEST(VerifyGenerating, PassesAndIsotropicCase) {
  const auto g = gamma0_element(1, 0, 4, 1, 4);
  const auto r = verify_generating(fx::form_2i4(), dirs(), sv(fx::v_ortho()), g, 4, kPoints);
  EXPECT_TRUE(r.passed) << r.max_residual;
  EXPECT_EQ(r.samples.size(), kPoints.size() * 5);
  // Q(v) = 0: the E2 factor is 1 and each degree is the plain modular law.
  const auto iso = verify_generating(fx::form_2i4(), dirs(), sv(fx::v_iso()), g, 4, kPoints);
  EXPECT_TRUE(iso.passed) << iso.max_residual;
  EXPECT_JT_ERROR(verify_generating(fx::form_2i4(), dirs(), sv(fx::v_gen()), g, 2, kPoints),
                  kInadmissibleSpec);
}

TEST(VerifyCongruence, Cases) {
  const auto g = gamma0_element(1, 0, 4, 1, 4);
  const IntVector p0(4, 0);
  const IntVector p2{2, 0, 0, 0};
  for (unsigned k : {0u, 1u, 2u}) {
    EXPECT_TRUE(verify_congruence(fx::form_2i4(), p0, fx::v_iso(), k, dirs(), g, kPoints).passed);
    EXPECT_TRUE(verify_congruence(fx::form_2i4(), p2, fx::v_iso(), k, dirs(), g, kPoints).passed);
  }
  const auto shift = verify_congruence(fx::form_2i4(), p2, fx::v_iso(), 1, dirs(),
                                       gamma0_element(1, 1, 0, 1, 4), kPoints);
  EXPECT_LT(shift.max_residual, 1e-12);
}

TEST(VerifyCongruence, Errors) {
  const auto g = gamma0_element(1, 0, 4, 1, 4);
  EXPECT_JT_ERROR(verify_congruence(fx::form_2i4(), IntVector{1, 0, 0, 0}, fx::v_iso(), 0, dirs(),
                                    g, kPoints),
                  kInadmissibleResidue);
  EXPECT_JT_ERROR(verify_congruence(fx::form_2i4(), IntVector(4, 0), fx::v_gen(), 1, dirs(), g,
                                    kPoints),
                  kHypothesisViolation);
  EXPECT_JT_ERROR(verify_congruence(fx::form_2i4(), IntVector(4, 0), fx::v_iso(), 0, dirs(),
                                    gamma0_element(-1, 0, 4, -1, 4), kPoints),
                  kNegativeD);
}

TEST(VerifySupport, BoundaryAndViolation) {
  const auto e = theta_coeffs(fx::spec(fx::v_gen(), 0), 6);
  const auto r = verify_support(e, dirs().gram());
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.max_residual, 0.0);
  bool boundary = false;
  for (const auto& s : r.samples)
    if (s.l == 1 && s.nu == IntVector{2, 0}) {
      boundary = true;
      EXPECT_EQ(s.lhs, s.rhs);
    }
  EXPECT_TRUE(boundary);

  FourierExpansion bad(2, 2);
  bad.add({1, {3, 0}}, 1.0);
  const auto v = verify_support(bad, dirs().gram());
  EXPECT_FALSE(v.passed);
  EXPECT_DOUBLE_EQ(v.max_residual, 5.0);
  EXPECT_TRUE(verify_support(bad, dirs().gram(), 5.0).passed);
  EXPECT_JT_ERROR(verify_support(bad, IntMatrix{{2}}), kDimensionMismatch);
  EXPECT_JT_ERROR(verify_support(bad, IntMatrix{{2, 2}, {2, 2}}), kSingularGram);
}

TEST(QuasiDepth, IsotropicHasDepthZero) {
  const auto spec = fx::spec(fx::v_iso(), 2);
  DepthFitOptions opt;
  opt.smax = 2;
  const auto fit = quasi_depth_fit(spec, default_depth_base_points(2), default_depth_gammas(4),
                                   default_depth_lambdas(2, opt.smax), opt);
  EXPECT_EQ(fit.lambda_depth, (IntVector{0, 0}));
  EXPECT_EQ(fit.t, 0u);
  EXPECT_LT(fit.fit_residual, 1e-6);
}

TEST(QuasiDepth, TooFewSamples) {
  const auto spec = fx::spec(fx::v_gen(), 1);
  const std::vector<IntVector> lambdas{{1, 0}};
  EXPECT_JT_ERROR(quasi_depth_fit(spec, default_depth_base_points(2), default_depth_gammas(4),
                                  lambdas),
                  kIllConditionedFit);
}

TEST(QuasiDepth, DefaultGrids) {
  const auto g = default_depth_gammas(4);
  ASSERT_GE(g.size(), 3u);
  for (const auto& x : g) EXPECT_EQ(x.c() % 4, 0);
  const auto l = default_depth_lambdas(2, 3);
  EXPECT_EQ(l.size(), 25u);
}
