#include "jtheta/quadform.hpp"

#include <cstdlib>
#include <numeric>
#include <string>
#include <utility>

#include "checked.hpp"
#include "jtheta/error.hpp"

namespace jtheta {

using detail::checked_add;
using detail::checked_lcm;
using detail::checked_mul;
using detail::narrow;

IntMatrix::IntMatrix(
    std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& r : rows) {
    if (r.size() != dim_)
      throw Error(ErrorCode::kDimensionMismatch, "matrix must be square");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix::IntMatrix(std::size_t dim, std::vector<std::int64_t> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (data_.size() != dim_ * dim_)
    throw Error(ErrorCode::kDimensionMismatch, "matrix must be square");
}

IntMatrix IntMatrix::identity(std::size_t dim, std::int64_t scale) {
  IntMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = scale;
  return m;
}

namespace {

using Wide = __int128;

// Fraction-free Gaussian elimination. When `pivoting` is false the pivots are
// the leading principal minors and elimination stops at the first
// non-positive one, returning its index.
struct Bareiss {
  std::int64_t det = 0;
  std::size_t first_nonpositive_minor;
};

Bareiss bareiss(const IntMatrix& m, bool pivoting) {
  const std::size_t n = m.dim();
  std::vector<Wide> a(m.data().begin(), m.data().end());
  auto at = [&](std::size_t i, std::size_t j) -> Wide& { return a[i * n + j]; };
  Wide prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (!pivoting && at(k, k) <= 0) return {0, k};
    if (at(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && at(swap, k) == 0) ++swap;
      if (swap == n) return {0, n};
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        // Every intermediate value is a minor of m, so it fits once divided.
        const Wide num = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        at(i, j) = narrow(num / prev);
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  const std::int64_t d = n == 0 ? 1 : narrow(at(n - 1, n - 1));
  return {sign * d, n};
}

IntMatrix minor_without(const IntMatrix& m, std::size_t row, std::size_t col) {
  const std::size_t n = m.dim();
  IntMatrix out(n - 1);
  for (std::size_t i = 0, oi = 0; i < n; ++i) {
    if (i == row) continue;
    for (std::size_t j = 0, oj = 0; j < n; ++j) {
      if (j == col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

std::int64_t level_from_adjugate(const IntMatrix& adj, std::int64_t det) {
  // N·A^{-1} = N·adj/det must be integral with even diagonal.
  std::int64_t level = 1;
  const std::int64_t twice_det = checked_mul(2, det);
  for (std::size_t i = 0; i < adj.dim(); ++i) {
    for (std::size_t j = 0; j < adj.dim(); ++j) {
      const std::int64_t entry = adj(i, j);
      if (i == j) {
        level = checked_lcm(level,
                            twice_det / std::gcd(twice_det, std::abs(entry)));
      } else {
        level = checked_lcm(level, det / std::gcd(det, std::abs(entry)));
      }
    }
  }
  return level;
}

}  // namespace

std::int64_t determinant(const IntMatrix& m) { return bareiss(m, true).det; }

IntMatrix adjugate(const IntMatrix& m) {
  const std::size_t n = m.dim();
  IntMatrix adj(n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t cof = determinant(minor_without(m, j, i));
      adj(i, j) = ((i + j) % 2 == 0) ? cof : -cof;
    }
  }
  return adj;
}

QuadraticForm QuadraticForm::validate(IntMatrix a) {
  const std::size_t f = a.dim();
  if (f == 0)
    throw Error(ErrorCode::kDimensionMismatch, "empty quadratic form matrix");
  for (std::size_t i = 0; i < f; ++i) {
    for (std::size_t j = i + 1; j < f; ++j) {
      if (a(i, j) != a(j, i))
        throw Error(ErrorCode::kNotSymmetric,
                    "matrix is not symmetric at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
    }
  }
  for (std::size_t i = 0; i < f; ++i) {
    if (a(i, i) % 2 != 0)
      throw Error(ErrorCode::kOddDiagonal,
                  "diagonal entry " + std::to_string(i) + " is odd");
  }
  const Bareiss minors = bareiss(a, false);
  if (minors.first_nonpositive_minor != f)
    throw Error(ErrorCode::kNotPositiveDefinite,
                "leading principal minor of order " +
                    std::to_string(minors.first_nonpositive_minor + 1) +
                    " is not positive");
  if (f % 2 != 0)
    throw Error(ErrorCode::kOddRank,
                "rank " + std::to_string(f) + " is odd; an even rank is required");

  QuadraticForm q;
  q.det_ = minors.det;
  q.adj_ = jtheta::adjugate(a);
  q.level_ = level_from_adjugate(q.adj_, q.det_);
  q.a_ = std::move(a);
  return q;
}

std::int64_t QuadraticForm::bilinear(std::span<const std::int64_t> x,
                                     std::span<const std::int64_t> y) const {
  const std::size_t f = rank();
  if (x.size() != f || y.size() != f)
    throw Error(ErrorCode::kDimensionMismatch, "vector length must equal rank");
  Wide acc = 0;
  for (std::size_t i = 0; i < f; ++i) {
    Wide row = 0;
    for (std::size_t j = 0; j < f; ++j) row += Wide(a_(i, j)) * y[j];
    acc += Wide(x[i]) * row;
  }
  return narrow(acc);
}

std::int64_t QuadraticForm::quad(std::span<const std::int64_t> x) const {
  return bilinear(x, x) / 2;
}

Complex QuadraticForm::bilinear(std::span<const Complex> x,
                                std::span<const Complex> y) const {
  const std::size_t f = rank();
  if (x.size() != f || y.size() != f)
    throw Error(ErrorCode::kDimensionMismatch, "vector length must equal rank");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < f; ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < f; ++j)
      row += static_cast<double>(a_(i, j)) * y[j];
    acc += x[i] * row;
  }
  return acc;
}

Complex QuadraticForm::bilinear(std::span<const Complex> x,
                                std::span<const std::int64_t> y) const {
  const std::size_t f = rank();
  if (x.size() != f || y.size() != f)
    throw Error(ErrorCode::kDimensionMismatch, "vector length must equal rank");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < f; ++i) {
    std::int64_t row = 0;
    for (std::size_t j = 0; j < f; ++j)
      row = checked_add(row, checked_mul(a_(i, j), y[j]));
    acc += x[i] * static_cast<double>(row);
  }
  return acc;
}

Complex QuadraticForm::quad(std::span<const Complex> x) const {
  return bilinear(x, x) / 2.0;
}

std::int64_t gram_apply(const IntMatrix& g, std::span<const std::int64_t> alpha) {
  if (alpha.size() != g.dim())
    throw Error(ErrorCode::kDimensionMismatch, "vector length must equal n");
  Wide acc = 0;
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = 0; j < g.dim(); ++j)
      acc += Wide(alpha[i]) * g(i, j) * alpha[j];
  return narrow(acc);
}

Complex gram_apply(const IntMatrix& g, std::span<const Complex> alpha) {
  if (alpha.size() != g.dim())
    throw Error(ErrorCode::kDimensionMismatch, "vector length must equal n");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = 0; j < g.dim(); ++j)
      acc += alpha[i] * static_cast<double>(g(i, j)) * alpha[j];
  return acc;
}

DirectionSet DirectionSet::make(const QuadraticForm& form,
                                std::vector<IntVector> directions) {
  if (directions.empty())
    throw Error(ErrorCode::kDimensionMismatch, "at least one direction vector is required");
  const std::size_t n = directions.size();
  for (const auto& h : directions) {
    if (h.size() != form.rank())
      throw Error(ErrorCode::kDimensionMismatch,
                  "direction vector length must equal the rank");
  }
  IntMatrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g(i, j) = form.bilinear(directions[i], directions[j]);
  // A positive definite, so G is positive definite iff the h_j are independent.
  if (bareiss(g, false).first_nonpositive_minor != n)
    throw Error(ErrorCode::kLinearlyDependent,
                "direction vectors are linearly dependent");
  DirectionSet set;
  set.h_ = std::move(directions);
  set.gram_ = std::move(g);
  return set;
}

SphericalVector SphericalVector::make(const QuadraticForm& form,
                                      const DirectionSet& directions,
                                      ComplexVector v) {
  if (v.size() != form.rank())
    throw Error(ErrorCode::kDimensionMismatch,
                "spherical vector length must equal the rank");
  SphericalVector s;
  s.q_of_v_ = form.quad(v);
  s.pairings_.reserve(directions.size());
  for (const auto& h : directions.vectors())
    s.pairings_.push_back(form.bilinear(std::span<const Complex>(v), h));
  s.v_ = std::move(v);
  return s;
}

int kronecker(std::int64_t a, std::int64_t n) {
  if (a == 0 && n == 0)
    throw Error(ErrorCode::kUndefined, "Kronecker symbol (0|0) is undefined");
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;

  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  // Factor out powers of two using (a|2) = 0 for even a, else +-1 by a mod 8.
  int twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  if (twos > 0) {
    if (a % 2 == 0) return 0;
    const std::int64_t r8 = detail::mod_floor(a, 8);
    if ((twos % 2 == 1) && (r8 == 3 || r8 == 5)) result = -result;
  }
  // Jacobi symbol (a|n) for odd n > 0.
  a = detail::mod_floor(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r8 = n % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

int epsilon(const QuadraticForm& form, std::int64_t d) {
  if (d == 0)
    throw Error(ErrorCode::kZeroArgument, "epsilon(0) is not defined");
  const int parity = form.half_rank() % 2 == 0 ? 1 : -1;
  const std::int64_t disc = parity * form.det();
  const int value = kronecker(disc, d < 0 ? -d : d);
  if (value == 0)
    throw Error(ErrorCode::kNonUnitValue,
                "Kronecker symbol (" + std::to_string(disc) + "|" +
                    std::to_string(d) + ") vanishes; d is not coprime to the discriminant");
  return d < 0 ? parity * value : value;
}

Admissibility check_admissible(const QuadraticForm& form,
                               const DirectionSet& directions,
                               const SphericalVector& v, double tol) {
  if (v.v().size() != form.rank() || v.pairings().size() != directions.size())
    throw Error(ErrorCode::kDimensionMismatch,
                "spherical vector does not match form and directions");
  Admissibility out;
  out.isotropic = std::abs(v.q_of_v()) <= tol;
  double worst = 0.0;
  for (const Complex& b : v.pairings()) worst = std::max(worst, std::abs(b));
  out.orthogonal = worst <= tol;
  return out;
}

}  // namespace jtheta
