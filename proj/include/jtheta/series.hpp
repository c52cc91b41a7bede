#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "jtheta/quadform.hpp"
#include "jtheta/rational.hpp"

namespace jtheta {

// One theta series: form, directions h_1..h_n, spherical vector v, exponent k.
struct ThetaSpec {
  QuadraticForm form;
  DirectionSet directions;
  SphericalVector v;
  unsigned k = 0;

  static ThetaSpec make(QuadraticForm form, std::vector<IntVector> directions,
                        ComplexVector v, unsigned k);

  ThetaSpec with_exponent(unsigned exponent) const;
  ThetaSpec with_vector(ComplexVector w) const;
  std::size_t n() const { return directions.size(); }
};

struct FourierKey {
  std::int64_t l = 0;
  IntVector nu;

  auto operator<=>(const FourierKey&) const = default;
};

// Sparse map (l, nu) -> c(l, nu), ordered by (l, lexicographic nu). Entries
// that are exactly zero are never stored.
class FourierExpansion {
 public:
  using Map = std::map<FourierKey, Complex>;

  FourierExpansion(std::size_t n, std::int64_t lmax) : n_(n), lmax_(lmax) {}

  std::size_t n() const { return n_; }
  std::int64_t lmax() const { return lmax_; }
  const Map& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  Complex coefficient(std::int64_t l, std::span<const std::int64_t> nu) const;
  // Adds value to the coefficient at key; drops the entry if it becomes 0.
  void add(const FourierKey& key, Complex value);

  FourierExpansion& operator+=(const FourierExpansion& other);
  FourierExpansion& operator*=(Complex scale);

 private:
  std::size_t n_;
  std::int64_t lmax_;
  Map entries_;
};

FourierExpansion operator+(FourierExpansion a, const FourierExpansion& b);
FourierExpansion operator*(Complex scale, FourierExpansion a);

// Coefficients of X^0..X^T.
struct TruncatedXPolynomial {
  std::vector<Complex> coefficients;

  std::size_t degree_bound() const {
    return coefficients.empty() ? 0 : coefficients.size() - 1;
  }
};

// Value of a truncated lattice sum together with the truncation it used.
struct SeriesValue {
  Complex value;
  // Scaled norm bound Q(m)/N^2 <= radius of the accepted (outer) sum.
  std::int64_t radius = 0;
  std::size_t points = 0;
};

inline constexpr double kDefaultEps = 1e-8;

// c(l, nu) = sum over Q(m) = l, B(m, h_j) = nu_j of B(v, m)^k, for l <= lmax.
FourierExpansion theta_coeffs(const ThetaSpec& spec, std::int64_t lmax);

// Truncated evaluation of the theta series. The radius R is seeded from a
// tail bound and doubled until |S(2R) - S(R)| <= eps/2 · max(1, |S(2R)|).
// Throws NonconvergentInput for Im tau <= 0 and TruncationFailure when the
// enumeration cap is reached first.
Complex theta_eval(const ThetaSpec& spec, Complex tau, std::span<const Complex> z,
                   double eps = kDefaultEps);
SeriesValue theta_eval_detailed(const ThetaSpec& spec, Complex tau,
                                std::span<const Complex> z, double eps = kDefaultEps);

// E2(tau) = -1/12 + 2 sum sigma_1(m) q^m, the normalization satisfying
// (c tau + d)^{-2} E2(gamma tau) = E2(tau) - c / (2 pi i (c tau + d)).
Complex eisenstein_e2(Complex tau, double eps = kDefaultEps);
// q-expansion coefficients of E2 up to q^lmax.
std::vector<double> eisenstein_e2_coeffs(std::int64_t lmax);

// delta(t, k) = k! / (2^t t! (k - 2t)!). Throws OutOfRange unless
// 0 <= t <= k/2.
Rational delta_coeff(unsigned t, unsigned k);

// Psi = sum_t delta(t,k) (2 Q(v) E2)^t theta_{k-2t}.
Complex psi_eval(const ThetaSpec& spec, Complex tau, std::span<const Complex> z,
                 double eps = kDefaultEps);
SeriesValue psi_eval_detailed(const ThetaSpec& spec, Complex tau,
                              std::span<const Complex> z, double eps = kDefaultEps);
FourierExpansion psi_coeffs(const ThetaSpec& spec, std::int64_t lmax);

// Coefficient of X^t is 2^{t/2} (2 pi i)^t theta_t(tau, z) / t!, t = 0..T.
TruncatedXPolynomial theta_generating_poly(const QuadraticForm& form,
                                           const DirectionSet& directions,
                                           const SphericalVector& v, Complex tau,
                                           std::span<const Complex> z, unsigned T,
                                           double eps = kDefaultEps);

// exp(2 Q(v) E2(tau) (2 pi i X)^2) truncated at X^T.
TruncatedXPolynomial e2_hat_poly(const SphericalVector& v, Complex tau, unsigned T,
                                 double eps = kDefaultEps);
// Same series for a given value of E2.
TruncatedXPolynomial e2_hat_poly_from_value(Complex q_of_v, Complex e2, unsigned T);

// N^{-k} sum_{m ≡ p (N)} (ell^T A m)^k e(tau Q(m)/N^2 + sum_j z_j B(m,h_j)/N)
// with N the level of the form. Throws InadmissibleResidue unless A p ≡ 0 (N).
Complex congruence_theta_eval(const QuadraticForm& form,
                              std::span<const std::int64_t> p,
                              std::span<const Complex> ell, unsigned k,
                              const DirectionSet& directions, Complex tau,
                              std::span<const Complex> z, double eps = kDefaultEps);
SeriesValue congruence_theta_eval_detailed(
    const QuadraticForm& form, std::span<const std::int64_t> p,
    std::span<const Complex> ell, unsigned k, const DirectionSet& directions,
    Complex tau, std::span<const Complex> z, double eps = kDefaultEps);

// Normalized derivative (1/2 pi i) d/dz_i: c(l, nu) -> nu_i c(l, nu).
// The index is zero based; throws IndexOutOfRange.
FourierExpansion z_derivative(const FourierExpansion& expansion, std::size_t i);

struct SphericalDecomposition {
  ComplexVector alpha;  // length n
  ComplexVector u;      // length f, B(u, h_j) = 0
};

// v = sum_i alpha_i h_i + u with u orthogonal to every h_j.
SphericalDecomposition spherical_decomposition(const QuadraticForm& form,
                                               const DirectionSet& directions,
                                               std::span<const Complex> v);

}  // namespace jtheta
