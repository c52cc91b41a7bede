#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace jtheta {

using Complex = std::complex<double>;
using IntVector = std::vector<std::int64_t>;
using ComplexVector = std::vector<Complex>;

// Dense square integer matrix, row major.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);
  IntMatrix(std::size_t dim, std::vector<std::int64_t> row_major);

  static IntMatrix identity(std::size_t dim, std::int64_t scale = 1);

  std::size_t dim() const { return dim_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }
  std::int64_t& operator()(std::size_t i, std::size_t j) {
    return data_[i * dim_ + j];
  }
  std::span<const std::int64_t> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  const std::vector<std::int64_t>& data() const { return data_; }

  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::int64_t> data_;
};

// Exact determinant (fraction-free elimination, overflow checked).
std::int64_t determinant(const IntMatrix& m);
// Exact adjugate, adj(M)·M = det(M)·I.
IntMatrix adjugate(const IntMatrix& m);

// Positive definite even integral quadratic form Q(x) = x^T A x / 2 of even
// rank f = 2r, with bilinear form B(x, y) = x^T A y.
class QuadraticForm {
 public:
  // Throws NotSymmetric, OddDiagonal, NotPositiveDefinite or OddRank.
  static QuadraticForm validate(IntMatrix a);

  const IntMatrix& matrix() const { return a_; }
  const IntMatrix& adjugate() const { return adj_; }
  std::size_t rank() const { return a_.dim(); }
  std::size_t half_rank() const { return a_.dim() / 2; }
  std::int64_t det() const { return det_; }
  std::int64_t level() const { return level_; }

  std::int64_t bilinear(std::span<const std::int64_t> x,
                        std::span<const std::int64_t> y) const;
  std::int64_t quad(std::span<const std::int64_t> x) const;
  Complex bilinear(std::span<const Complex> x, std::span<const Complex> y) const;
  Complex bilinear(std::span<const Complex> x,
                   std::span<const std::int64_t> y) const;
  Complex quad(std::span<const Complex> x) const;

 private:
  QuadraticForm() = default;

  IntMatrix a_;
  IntMatrix adj_;
  std::int64_t det_ = 0;
  std::int64_t level_ = 0;
};

inline QuadraticForm validate_form(IntMatrix a) {
  return QuadraticForm::validate(std::move(a));
}

// alpha^T G alpha.
std::int64_t gram_apply(const IntMatrix& g, std::span<const std::int64_t> alpha);
Complex gram_apply(const IntMatrix& g, std::span<const Complex> alpha);

// Linearly independent integer directions h_1..h_n with Gram matrix
// G_ij = B(h_i, h_j). The Jacobi index is G/2.
class DirectionSet {
 public:
  static DirectionSet make(const QuadraticForm& form,
                           std::vector<IntVector> directions);

  std::size_t size() const { return h_.size(); }
  const std::vector<IntVector>& vectors() const { return h_; }
  const IntVector& operator[](std::size_t j) const { return h_[j]; }
  const IntMatrix& gram() const { return gram_; }

 private:
  DirectionSet() = default;

  std::vector<IntVector> h_;
  IntMatrix gram_;
};

// v in C^f together with cached Q(v) and the pairings B(v, h_j).
class SphericalVector {
 public:
  static SphericalVector make(const QuadraticForm& form,
                              const DirectionSet& directions, ComplexVector v);

  const ComplexVector& v() const { return v_; }
  Complex q_of_v() const { return q_of_v_; }
  const ComplexVector& pairings() const { return pairings_; }

 private:
  SphericalVector() = default;

  ComplexVector v_;
  Complex q_of_v_;
  ComplexVector pairings_;
};

// Kronecker symbol (a|n). Throws Undefined for (0|0).
int kronecker(std::int64_t a, std::int64_t n);

// Character eps(d) = ((-1)^r det A | d) for d > 0, eps(-d) = (-1)^r eps(d).
// Throws ZeroArgument for d = 0 and NonUnitValue when the symbol vanishes.
int epsilon(const QuadraticForm& form, std::int64_t d);

struct Admissibility {
  bool isotropic = false;
  bool orthogonal = false;
};

Admissibility check_admissible(const QuadraticForm& form,
                               const DirectionSet& directions,
                               const SphericalVector& v, double tol);

}  // namespace jtheta
