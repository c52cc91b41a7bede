#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "jtheta/quadform.hpp"

namespace jtheta {

// Element (a b; c d) of Gamma_0(N).
class Gamma0Element {
 public:
  // Throws NotUnimodular if ad - bc != 1 and NotCongruent if c is not
  // divisible by N.
  static Gamma0Element make(std::int64_t a, std::int64_t b, std::int64_t c,
                            std::int64_t d, std::int64_t level);
  static Gamma0Element identity(std::int64_t level) { return make(1, 0, 0, 1, level); }

  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  std::int64_t c() const { return c_; }
  std::int64_t d() const { return d_; }
  std::int64_t level() const { return level_; }

  // c tau + d.
  Complex automorphy(Complex tau) const {
    return static_cast<double>(c_) * tau + static_cast<double>(d_);
  }

  Gamma0Element operator*(const Gamma0Element& rhs) const;
  Gamma0Element operator-() const { return make(-a_, -b_, -c_, -d_, level_); }
  bool operator==(const Gamma0Element&) const = default;

 private:
  Gamma0Element() = default;

  std::int64_t a_ = 1, b_ = 0, c_ = 0, d_ = 1, level_ = 1;
};

inline Gamma0Element gamma0_element(std::int64_t a, std::int64_t b, std::int64_t c,
                                    std::int64_t d, std::int64_t level) {
  return Gamma0Element::make(a, b, c, d, level);
}

// gamma together with a lattice translation (lambda, mu) in Z^n x Z^n.
struct JacobiGroupElement {
  Gamma0Element gamma;
  IntVector lambda;
  IntVector mu;
};

struct ActedPoint {
  Complex tau;
  ComplexVector z;
};

// (gamma tau, gamma z) = ((a tau + b)/(c tau + d), z/(c tau + d)).
ActedPoint act(const Gamma0Element& gamma, Complex tau, std::span<const Complex> z);

// Index matrix F = G/2 for a Gram matrix G.
Eigen::MatrixXd index_from_gram(const IntMatrix& gram);

// F[x] = x^T F x.
Complex index_apply(const Eigen::MatrixXd& index, std::span<const Complex> x);

// (c tau + d)^weight exp(2 pi i c F[z] / (c tau + d)).
Complex modular_factor(const Gamma0Element& gamma, int weight,
                       const Eigen::MatrixXd& index, Complex tau,
                       std::span<const Complex> z);

// exp(-2 pi i (tau F[lambda] + 2 z^T F lambda)); independent of mu.
Complex elliptic_factor(const Eigen::MatrixXd& index, Complex tau,
                        std::span<const Complex> z,
                        std::span<const std::int64_t> lambda,
                        std::span<const std::int64_t> mu);

}  // namespace jtheta
