#include "jtheta/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "checked.hpp"
#include "jtheta/error.hpp"
#include "jtheta/lattice_enum.hpp"

namespace jtheta {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kTwoPiI(0.0, kTwoPi);

// Neumaier summation, componentwise.
class CompensatedSum {
 public:
  void add(Complex x) {
    add_part(re_, re_c_, x.real());
    add_part(im_, im_c_, x.imag());
  }
  Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

Complex ipow(Complex x, unsigned k) {
  Complex out = 1.0;
  for (unsigned i = 0; i < k; ++i) out *= x;
  return out;
}

void require_upper_half_plane(Complex tau) {
  if (!(tau.imag() > 0.0))
    throw Error(ErrorCode::kNonconvergentInput, "Im(tau) must be positive");
}

void require_length(std::span<const Complex> z, std::size_t n) {
  if (z.size() != n)
    throw Error(ErrorCode::kDimensionMismatch, "z must have one entry per direction");
}

// Sum over a coset p + N Z^f of w(m)^k e(tau Q(m)/N^2 + z·nu(m)/N), with
// w(m) = B(ell, m)/N and nu_j(m) = B(m, h_j).
class LatticeSum {
 public:
  LatticeSum(const QuadraticForm& form, const DirectionSet& directions,
             std::span<const Complex> ell, unsigned k,
             std::span<const std::int64_t> p, std::int64_t modulus)
      : form_(form), k_(k), p_(p.begin(), p.end()), modulus_(modulus) {
    const std::size_t f = form.rank();
    if (ell.size() != f)
      throw Error(ErrorCode::kDimensionMismatch, "weight vector length must equal the rank");
    a_ell_.assign(f, 0.0);
    for (std::size_t i = 0; i < f; ++i)
      for (std::size_t j = 0; j < f; ++j)
        a_ell_[i] += static_cast<double>(form.matrix()(i, j)) * ell[j];
    for (const auto& h : directions.vectors()) {
      IntVector ah(f, 0);
      for (std::size_t i = 0; i < f; ++i)
        for (std::size_t j = 0; j < f; ++j)
          ah[i] = detail::checked_add(ah[i], detail::checked_mul(form.matrix()(i, j), h[j]));
      a_h_.push_back(std::move(ah));
      gram_diag_.push_back(static_cast<double>(form.bilinear(h, h)));
    }
    // |B(ell, m)| <= sqrt(|ell|^T |A| |ell|) sqrt(2 Q(m)).
    double abs_form = 0.0;
    for (std::size_t i = 0; i < f; ++i)
      for (std::size_t j = 0; j < f; ++j)
        abs_form += std::abs(ell[i]) * std::abs(static_cast<double>(form.matrix()(i, j))) *
                    std::abs(ell[j]);
    weight_scale_ = std::sqrt(abs_form);
    symmetric_ = true;
    for (std::int64_t pi : p_)
      symmetric_ = symmetric_ && detail::mod_floor(2 * pi, modulus_) == 0;
  }

  SeriesValue evaluate(Complex tau, std::span<const Complex> z, double eps) const {
    require_upper_half_plane(tau);
    require_length(z, a_h_.size());
    if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
    std::int64_t radius = std::max<std::int64_t>(1, (seed_radius(tau, z, eps) + 1) / 2);
    while (true) {
      const std::int64_t outer = detail::checked_mul(2, radius);
      PointSet points;
      try {
        points = enumerate_congruence(form_, p_, modulus_, Rational(outer));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kRadiusTooLarge) throw;
        throw Error(ErrorCode::kTruncationFailure,
                    "theta series did not converge before the enumeration cap (radius " +
                        std::to_string(outer) + ")");
      }
      const auto [inner_sum, outer_sum] = sum(points, tau, z, radius);
      const double scale = std::max(1.0, std::abs(outer_sum));
      if (std::abs(outer_sum - inner_sum) <= 0.5 * eps * scale)
        return {outer_sum, outer, points.size()};
      radius = outer;
    }
  }

 private:
  // Rough size of the shell Q(m)/N^2 = l; only used to seed the radius.
  double term_bound(double l, Complex tau, std::span<const Complex> z) const {
    double growth = -kTwoPi * tau.imag() * l;
    for (std::size_t j = 0; j < z.size(); ++j)
      growth += kTwoPi * std::abs(z[j].imag()) * std::sqrt(2.0 * l * gram_diag_[j]);
    const double weight = std::pow(weight_scale_ * std::sqrt(2.0 * l), k_);
    const double shell =
        std::pow(std::sqrt(2.0 * l) + 1.0, static_cast<double>(form_.rank()) - 1.0);
    return weight * shell * std::exp(growth);
  }

  std::int64_t seed_radius(Complex tau, std::span<const Complex> z, double eps) const {
    constexpr std::int64_t kMaxSeed = 1'000'000;
    double previous = term_bound(1.0, tau, z);
    for (std::int64_t l = 1; l < kMaxSeed; ++l) {
      const double next = term_bound(static_cast<double>(l + 1), tau, z);
      if (previous < eps && next < previous) return l;
      previous = next;
    }
    throw Error(ErrorCode::kTruncationFailure, "tail bound seed exceeds the radius cap");
  }

  // Returns (sum over Q/N^2 <= inner, sum over all points). Phases come from
  // tables indexed by Q(m) and B(m, h_j).
  std::pair<Complex, Complex> sum(const PointSet& points, Complex tau,
                                  std::span<const Complex> z,
                                  std::int64_t inner) const {
    const std::int64_t n2 = modulus_ * modulus_;
    const std::int64_t inner_norm = inner * n2;
    const double nd = static_cast<double>(modulus_);
    const std::size_t f = points.dim();
    const std::size_t nh = a_h_.size();

    std::int64_t max_norm = 0;
    for (std::size_t idx = 0; idx < points.size(); ++idx)
      max_norm = std::max(max_norm, points.norm(idx));
    std::vector<Complex> q_table(static_cast<std::size_t>(max_norm) + 1);
    for (std::int64_t l = 0; l <= max_norm; ++l)
      q_table[static_cast<std::size_t>(l)] =
          std::exp(kTwoPiI * tau * (static_cast<double>(l) / static_cast<double>(n2)));

    // nu_j(m) for every point, and the range of each.
    std::vector<std::int64_t> nus(points.size() * nh);
    std::vector<std::int64_t> nu_max(nh, 0);
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
      const auto m = points[idx];
      for (std::size_t j = 0; j < nh; ++j) {
        std::int64_t nu = 0;
        for (std::size_t i = 0; i < f; ++i) nu += a_h_[j][i] * m[i];
        nus[idx * nh + j] = nu;
        nu_max[j] = std::max(nu_max[j], std::abs(nu));
      }
    }
    std::vector<std::vector<Complex>> z_tables(nh);
    for (std::size_t j = 0; j < nh; ++j) {
      auto& t = z_tables[j];
      t.resize(static_cast<std::size_t>(2 * nu_max[j] + 1));
      for (std::int64_t nu = -nu_max[j]; nu <= nu_max[j]; ++nu)
        t[static_cast<std::size_t>(nu + nu_max[j])] =
            std::exp(kTwoPiI * z[j] * (static_cast<double>(nu) / nd));
    }
    auto z_phase = [&](std::size_t idx, std::int64_t sign) {
      Complex out = 1.0;
      for (std::size_t j = 0; j < nh; ++j)
        out *= z_tables[j][static_cast<std::size_t>(sign * nus[idx * nh + j] + nu_max[j])];
      return out;
    };
    auto weight = [&](std::span<const std::int64_t> m) {
      Complex w = 0.0;
      for (std::size_t i = 0; i < f; ++i) w += a_ell_[i] * static_cast<double>(m[i]);
      return ipow(w / nd, k_);
    };

    CompensatedSum in_sum, all_sum;
    const double odd = k_ % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
      const auto m = points[idx];
      const Complex q = q_table[static_cast<std::size_t>(points.norm(idx))];
      Complex t;
      if (symmetric_) {
        // Visit the pair {m, -m} once, from its lexicographically positive
        // member; -m has weight (-1)^k w(m) and conjugate-index phase.
        const auto lead = std::find_if(m.begin(), m.end(), [](std::int64_t x) { return x != 0; });
        if (lead != m.end() && *lead < 0) continue;
        const Complex w = weight(m);
        if (lead != m.end())
          t = w * q * (z_phase(idx, 1) + odd * z_phase(idx, -1));
        else
          t = w * q * z_phase(idx, 1);
      } else {
        t = weight(m) * q * z_phase(idx, 1);
      }
      all_sum.add(t);
      if (points.norm(idx) <= inner_norm) in_sum.add(t);
    }
    return {in_sum.value(), all_sum.value()};
  }

  const QuadraticForm& form_;
  unsigned k_;
  IntVector p_;
  std::int64_t modulus_;
  ComplexVector a_ell_;
  std::vector<IntVector> a_h_;
  std::vector<double> gram_diag_;
  double weight_scale_ = 0.0;
  bool symmetric_ = true;
};

double factorial(unsigned n) {
  double out = 1.0;
  for (unsigned i = 2; i <= n; ++i) out *= i;
  return out;
}

std::int64_t sigma1(std::int64_t m) {
  std::int64_t s = 0;
  for (std::int64_t d = 1; d * d <= m; ++d) {
    if (m % d != 0) continue;
    s += d;
    if (d * d != m) s += m / d;
  }
  return s;
}

}  // namespace

ThetaSpec ThetaSpec::make(QuadraticForm form, std::vector<IntVector> directions,
                          ComplexVector v, unsigned k) {
  DirectionSet dirs = DirectionSet::make(form, std::move(directions));
  SphericalVector sv = SphericalVector::make(form, dirs, std::move(v));
  return ThetaSpec{std::move(form), std::move(dirs), std::move(sv), k};
}

ThetaSpec ThetaSpec::with_exponent(unsigned exponent) const {
  ThetaSpec out = *this;
  out.k = exponent;
  return out;
}

ThetaSpec ThetaSpec::with_vector(ComplexVector w) const {
  ThetaSpec out = *this;
  out.v = SphericalVector::make(form, directions, std::move(w));
  return out;
}

Complex FourierExpansion::coefficient(std::int64_t l,
                                      std::span<const std::int64_t> nu) const {
  const auto it = entries_.find(FourierKey{l, IntVector(nu.begin(), nu.end())});
  return it == entries_.end() ? Complex(0.0) : it->second;
}

void FourierExpansion::add(const FourierKey& key, Complex value) {
  if (key.nu.size() != n_)
    throw Error(ErrorCode::kDimensionMismatch, "Fourier key has the wrong length");
  if (key.l < 0 || key.l > lmax_)
    throw Error(ErrorCode::kOutOfRange, "Fourier index l outside [0, lmax]");
  auto [it, inserted] = entries_.try_emplace(key, value);
  if (!inserted) it->second += value;
  if (it->second == Complex(0.0)) entries_.erase(it);
}

FourierExpansion& FourierExpansion::operator+=(const FourierExpansion& other) {
  if (other.n_ != n_)
    throw Error(ErrorCode::kDimensionMismatch, "expansions have different n");
  lmax_ = std::max(lmax_, other.lmax_);
  for (const auto& [key, c] : other.entries_) add(key, c);
  return *this;
}

FourierExpansion& FourierExpansion::operator*=(Complex scale) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    it->second *= scale;
    if (it->second == Complex(0.0))
      it = entries_.erase(it);
    else
      ++it;
  }
  return *this;
}

FourierExpansion operator+(FourierExpansion a, const FourierExpansion& b) {
  a += b;
  return a;
}

FourierExpansion operator*(Complex scale, FourierExpansion a) {
  a *= scale;
  return a;
}

FourierExpansion theta_coeffs(const ThetaSpec& spec, std::int64_t lmax) {
  if (lmax < 0) throw Error(ErrorCode::kInvalidArgument, "lmax must be non-negative");
  const PointSet points = enumerate_points(spec.form, lmax);
  const std::size_t n = spec.n();
  const double sign = spec.k % 2 == 0 ? 1.0 : -1.0;
  const auto& v = spec.v.v();

  // Accumulate in a dense-keyed map first so both members of a pair {m, -m}
  // receive bitwise negated (or equal) contributions in the same order.
  std::map<FourierKey, CompensatedSum> acc;
  std::vector<std::int64_t> nu(n);
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const auto m = points[idx];
    const auto lead = std::find_if(m.begin(), m.end(), [](std::int64_t x) { return x != 0; });
    if (lead != m.end() && *lead < 0) continue;
    for (std::size_t j = 0; j < n; ++j) nu[j] = spec.form.bilinear(m, spec.directions[j]);
    const Complex value = ipow(spec.form.bilinear(std::span<const Complex>(v), m), spec.k);
    FourierKey key{points.norm(idx), nu};
    if (lead == m.end()) {
      acc[key].add(value);
      continue;
    }
    FourierKey mirrored{points.norm(idx), IntVector(n)};
    for (std::size_t j = 0; j < n; ++j) mirrored.nu[j] = -nu[j];
    if (mirrored == key) {
      acc[key].add(value + sign * value);
    } else {
      acc[key].add(value);
      acc[mirrored].add(sign * value);
    }
  }

  FourierExpansion out(n, lmax);
  for (const auto& [key, s] : acc) {
    const Complex c = s.value();
    if (c != Complex(0.0)) out.add(key, c);
  }
  return out;
}

SeriesValue theta_eval_detailed(const ThetaSpec& spec, Complex tau,
                                std::span<const Complex> z, double eps) {
  const IntVector zero(spec.form.rank(), 0);
  const LatticeSum sum(spec.form, spec.directions, spec.v.v(), spec.k, zero, 1);
  return sum.evaluate(tau, z, eps);
}

Complex theta_eval(const ThetaSpec& spec, Complex tau, std::span<const Complex> z,
                   double eps) {
  return theta_eval_detailed(spec, tau, z, eps).value;
}

Complex eisenstein_e2(Complex tau, double eps) {
  require_upper_half_plane(tau);
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  const Complex q = std::exp(kTwoPiI * tau);
  const double aq = std::abs(q);
  CompensatedSum s;
  s.add(-1.0 / 12.0);
  Complex qm = 1.0;
  for (std::int64_t m = 1;; ++m) {
    qm *= q;
    s.add(2.0 * static_cast<double>(sigma1(m)) * qm);
    // sigma_1(j) <= j^2 and sum_{i>=0} (m+1+i)^2 x^i <= 2 (m+1)^2 / (1-x)^3.
    const double next = static_cast<double>(m + 1);
    const double tail =
        4.0 * next * next * std::pow(aq, next) / ((1.0 - aq) * (1.0 - aq) * (1.0 - aq));
    if (tail < 0.5 * eps) break;
    if (m > 100'000'000)
      throw Error(ErrorCode::kTruncationFailure, "E2 series did not converge");
  }
  return s.value();
}

std::vector<double> eisenstein_e2_coeffs(std::int64_t lmax) {
  if (lmax < 0) throw Error(ErrorCode::kInvalidArgument, "lmax must be non-negative");
  std::vector<double> out(static_cast<std::size_t>(lmax) + 1);
  out[0] = -1.0 / 12.0;
  for (std::int64_t m = 1; m <= lmax; ++m) out[m] = 2.0 * static_cast<double>(sigma1(m));
  return out;
}

Rational delta_coeff(unsigned t, unsigned k) {
  if (2 * t > k)
    throw Error(ErrorCode::kOutOfRange,
                "delta(t, k) requires 0 <= t <= floor(k/2); got t=" + std::to_string(t) +
                    ", k=" + std::to_string(k));
  // k! / ((k-2t)! t! 2^t) = prod_{i=k-2t+1}^{k} i / (t! 2^t)
  Rational out(1);
  for (unsigned i = k - 2 * t + 1; i <= k; ++i) out *= Rational(i);
  for (unsigned i = 1; i <= t; ++i) out /= Rational(2 * static_cast<std::int64_t>(i));
  if (out.denominator() != 1)
    throw Error(ErrorCode::kOverflow, "delta coefficient is not integral");
  return out;
}

SeriesValue psi_eval_detailed(const ThetaSpec& spec, Complex tau,
                              std::span<const Complex> z, double eps) {
  const unsigned terms = spec.k / 2 + 1;
  const Complex two_q = 2.0 * spec.v.q_of_v();
  // Single surviving term: Psi is theta_k itself.
  if (two_q == Complex(0.0) || terms == 1) return theta_eval_detailed(spec, tau, z, eps);
  const double part = eps / terms;
  SeriesValue out = theta_eval_detailed(spec, tau, z, part);
  const Complex e2 = eisenstein_e2(tau, part);
  for (unsigned t = 1; t < terms; ++t) {
    const double delta = boost::rational_cast<double>(delta_coeff(t, spec.k));
    const SeriesValue th = theta_eval_detailed(spec.with_exponent(spec.k - 2 * t), tau, z, part);
    out.value += delta * ipow(two_q * e2, t) * th.value;
    out.radius = std::max(out.radius, th.radius);
    out.points = std::max(out.points, th.points);
  }
  return out;
}

Complex psi_eval(const ThetaSpec& spec, Complex tau, std::span<const Complex> z,
                 double eps) {
  return psi_eval_detailed(spec, tau, z, eps).value;
}

FourierExpansion psi_coeffs(const ThetaSpec& spec, std::int64_t lmax) {
  FourierExpansion out = theta_coeffs(spec, lmax);
  const Complex two_q = 2.0 * spec.v.q_of_v();
  if (two_q == Complex(0.0)) return out;
  const std::vector<double> e2 = eisenstein_e2_coeffs(lmax);
  std::vector<Complex> e2_power(e2.size(), 0.0);
  e2_power[0] = 1.0;
  for (unsigned t = 1; 2 * t <= spec.k; ++t) {
    std::vector<Complex> next(e2.size(), 0.0);
    for (std::size_t a = 0; a < e2.size(); ++a)
      for (std::size_t b = 0; a + b < e2.size(); ++b) next[a + b] += e2_power[a] * e2[b];
    e2_power = std::move(next);
    const Complex scale =
        boost::rational_cast<double>(delta_coeff(t, spec.k)) * ipow(two_q, t);
    const FourierExpansion theta = theta_coeffs(spec.with_exponent(spec.k - 2 * t), lmax);
    for (const auto& [key, c] : theta.entries()) {
      for (std::int64_t a = 0; key.l + a <= lmax; ++a) {
        const Complex contribution = scale * e2_power[a] * c;
        if (contribution != Complex(0.0)) out.add(FourierKey{key.l + a, key.nu}, contribution);
      }
    }
  }
  return out;
}

TruncatedXPolynomial theta_generating_poly(const QuadraticForm& form,
                                           const DirectionSet& directions,
                                           const SphericalVector& v, Complex tau,
                                           std::span<const Complex> z, unsigned T,
                                           double eps) {
  ThetaSpec spec{form, directions, v, 0};
  TruncatedXPolynomial out;
  out.coefficients.reserve(T + 1);
  for (unsigned t = 0; t <= T; ++t) {
    spec.k = t;
    const Complex scale =
        std::pow(std::sqrt(2.0), static_cast<int>(t)) * ipow(kTwoPiI, t) / factorial(t);
    out.coefficients.push_back(scale * theta_eval(spec, tau, z, eps));
  }
  return out;
}

TruncatedXPolynomial e2_hat_poly_from_value(Complex q_of_v, Complex e2, unsigned T) {
  // exp(y X^2) with y = 2 Q(v) E2 (2 pi i)^2.
  const Complex y = 2.0 * q_of_v * e2 * kTwoPiI * kTwoPiI;
  TruncatedXPolynomial out;
  out.coefficients.assign(T + 1, 0.0);
  Complex power = 1.0;
  for (unsigned j = 0; 2 * j <= T; ++j) {
    out.coefficients[2 * j] = power / factorial(j);
    power *= y;
  }
  return out;
}

TruncatedXPolynomial e2_hat_poly(const SphericalVector& v, Complex tau, unsigned T,
                                 double eps) {
  if (v.q_of_v() == Complex(0.0)) {
    require_upper_half_plane(tau);
    return e2_hat_poly_from_value(0.0, 0.0, T);
  }
  return e2_hat_poly_from_value(v.q_of_v(), eisenstein_e2(tau, eps), T);
}

SeriesValue congruence_theta_eval_detailed(
    const QuadraticForm& form, std::span<const std::int64_t> p,
    std::span<const Complex> ell, unsigned k, const DirectionSet& directions,
    Complex tau, std::span<const Complex> z, double eps) {
  if (!is_admissible_residue(form, p, form.level()))
    throw Error(ErrorCode::kInadmissibleResidue, "A·p is not divisible by the level");
  const LatticeSum sum(form, directions, ell, k, p, form.level());
  return sum.evaluate(tau, z, eps);
}

Complex congruence_theta_eval(const QuadraticForm& form,
                              std::span<const std::int64_t> p,
                              std::span<const Complex> ell, unsigned k,
                              const DirectionSet& directions, Complex tau,
                              std::span<const Complex> z, double eps) {
  return congruence_theta_eval_detailed(form, p, ell, k, directions, tau, z, eps).value;
}

FourierExpansion z_derivative(const FourierExpansion& expansion, std::size_t i) {
  if (i >= expansion.n())
    throw Error(ErrorCode::kIndexOutOfRange,
                "direction index " + std::to_string(i) + " out of range");
  FourierExpansion out(expansion.n(), expansion.lmax());
  for (const auto& [key, c] : expansion.entries()) {
    if (key.nu[i] != 0) out.add(key, static_cast<double>(key.nu[i]) * c);
  }
  return out;
}

SphericalDecomposition spherical_decomposition(const QuadraticForm& form,
                                               const DirectionSet& directions,
                                               std::span<const Complex> v) {
  const std::size_t f = form.rank();
  const std::size_t n = directions.size();
  if (v.size() != f)
    throw Error(ErrorCode::kDimensionMismatch, "vector length must equal the rank");
  Eigen::MatrixXd g(n, n);
  Eigen::VectorXcd beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      g(i, j) = static_cast<double>(directions.gram()(i, j));
    beta(i) = form.bilinear(v, directions[i]);
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kSingularGram, "Gram matrix is not positive definite");
  const Eigen::VectorXcd alpha = llt.solve(beta.real()).cast<Complex>() +
                                 Complex(0.0, 1.0) * llt.solve(beta.imag()).cast<Complex>();
  SphericalDecomposition out;
  out.alpha.assign(alpha.data(), alpha.data() + n);
  out.u.assign(v.begin(), v.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < f; ++c)
      out.u[c] -= out.alpha[i] * static_cast<double>(directions[i][c]);
  return out;
}

}  // namespace jtheta
