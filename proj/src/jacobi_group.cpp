#include "jtheta/jacobi_group.hpp"

#include <cmath>
#include <numeric>
#include <numbers>
#include <string>

#include "checked.hpp"
#include "jtheta/error.hpp"

namespace jtheta {

namespace {

const Complex kTwoPiI(0.0, 2.0 * std::numbers::pi);

Complex int_power(Complex x, int e) {
  Complex out = 1.0;
  for (int i = 0; i < std::abs(e); ++i) out *= x;
  return e < 0 ? 1.0 / out : out;
}

}  // namespace

Gamma0Element Gamma0Element::make(std::int64_t a, std::int64_t b, std::int64_t c,
                                  std::int64_t d, std::int64_t level) {
  if (level <= 0) throw Error(ErrorCode::kInvalidArgument, "level must be positive");
  const __int128 det = static_cast<__int128>(a) * d - static_cast<__int128>(b) * c;
  if (det != 1)
    throw Error(ErrorCode::kNotUnimodular, "ad - bc must equal 1");
  if (c % level != 0)
    throw Error(ErrorCode::kNotCongruent,
                "c = " + std::to_string(c) + " is not divisible by N = " + std::to_string(level));
  Gamma0Element g;
  g.a_ = a;
  g.b_ = b;
  g.c_ = c;
  g.d_ = d;
  g.level_ = level;
  return g;
}

Gamma0Element Gamma0Element::operator*(const Gamma0Element& rhs) const {
  using detail::checked_add;
  using detail::checked_mul;
  return make(checked_add(checked_mul(a_, rhs.a_), checked_mul(b_, rhs.c_)),
              checked_add(checked_mul(a_, rhs.b_), checked_mul(b_, rhs.d_)),
              checked_add(checked_mul(c_, rhs.a_), checked_mul(d_, rhs.c_)),
              checked_add(checked_mul(c_, rhs.b_), checked_mul(d_, rhs.d_)),
              std::gcd(level_, rhs.level_));
}

ActedPoint act(const Gamma0Element& gamma, Complex tau, std::span<const Complex> z) {
  if (!(tau.imag() > 0.0))
    throw Error(ErrorCode::kNonconvergentInput, "Im(tau) must be positive");
  const Complex j = gamma.automorphy(tau);
  ActedPoint out;
  out.tau = (static_cast<double>(gamma.a()) * tau + static_cast<double>(gamma.b())) / j;
  out.z.reserve(z.size());
  for (const Complex& zj : z) out.z.push_back(zj / j);
  if (!(out.tau.imag() > 0.0))
    throw Error(ErrorCode::kNonconvergentInput, "image point left the upper half plane");
  return out;
}

Eigen::MatrixXd index_from_gram(const IntMatrix& gram) {
  const auto n = static_cast<Eigen::Index>(gram.dim());
  Eigen::MatrixXd f(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) f(i, j) = 0.5 * static_cast<double>(gram(i, j));
  return f;
}

Complex index_apply(const Eigen::MatrixXd& index, std::span<const Complex> x) {
  if (static_cast<std::size_t>(index.rows()) != x.size())
    throw Error(ErrorCode::kDimensionMismatch, "index matrix and vector disagree in size");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      acc += x[i] * index(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * x[j];
  return acc;
}

Complex modular_factor(const Gamma0Element& gamma, int weight,
                       const Eigen::MatrixXd& index, Complex tau,
                       std::span<const Complex> z) {
  const Complex j = gamma.automorphy(tau);
  return int_power(j, weight) *
         std::exp(kTwoPiI * static_cast<double>(gamma.c()) * index_apply(index, z) / j);
}

Complex elliptic_factor(const Eigen::MatrixXd& index, Complex tau,
                        std::span<const Complex> z,
                        std::span<const std::int64_t> lambda,
                        std::span<const std::int64_t> mu) {
  const auto n = static_cast<std::size_t>(index.rows());
  if (z.size() != n || lambda.size() != n || mu.size() != n)
    throw Error(ErrorCode::kDimensionMismatch, "z, lambda and mu must have length n");
  Complex f_lambda = 0.0;
  Complex cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double fij = index(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      f_lambda += static_cast<double>(lambda[i]) * fij * static_cast<double>(lambda[j]);
      cross += z[i] * fij * static_cast<double>(lambda[j]);
    }
  }
  return std::exp(-kTwoPiI * (tau * f_lambda + 2.0 * cross));
}

}  // namespace jtheta
