#include "jtheta/lattice_enum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "checked.hpp"
#include "jtheta/error.hpp"

namespace jtheta {

void PointSet::push_back(std::span<const std::int64_t> point, std::int64_t norm) {
  coords_.insert(coords_.end(), point.begin(), point.end());
  norms_.push_back(norm);
}

void PointSet::sort_lexicographic() {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto x = (*this)[a];
    const auto y = (*this)[b];
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  });
  std::vector<std::int64_t> coords;
  std::vector<std::int64_t> norms;
  coords.reserve(coords_.size());
  norms.reserve(norms_.size());
  for (std::size_t i : order) {
    const auto p = (*this)[i];
    coords.insert(coords.end(), p.begin(), p.end());
    norms.push_back(norms_[i]);
  }
  coords_ = std::move(coords);
  norms_ = std::move(norms);
}

bool PointSet::contains(std::span<const std::int64_t> point) const {
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto x = (*this)[mid];
    if (std::lexicographical_compare(x.begin(), x.end(), point.begin(), point.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo == size()) return false;
  const auto x = (*this)[lo];
  return std::equal(x.begin(), x.end(), point.begin(), point.end());
}

namespace {

constexpr double kGuard = 1e-9;

// Fincke–Pohst: visit every x in Z^f with (x - center)^T A (x - center) <=
// bound2 (a guard band is added; callers re-check exactly).
template <class Visit>
void fincke_pohst(const QuadraticForm& form, std::span<const double> center,
                  double bound2, Visit&& visit) {
  const auto f = static_cast<Eigen::Index>(form.rank());
  Eigen::MatrixXd a(f, f);
  for (Eigen::Index i = 0; i < f; ++i)
    for (Eigen::Index j = 0; j < f; ++j)
      a(i, j) = static_cast<double>(form.matrix()(i, j));
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  const Eigen::MatrixXd l = llt.matrixL();
  // x^T A x = sum_i qd_i (y_i + sum_{j>i} qo(i,j) y_j)^2.
  Eigen::VectorXd qd(f);
  Eigen::MatrixXd qo = Eigen::MatrixXd::Zero(f, f);
  for (Eigen::Index i = 0; i < f; ++i) {
    qd(i) = l(i, i) * l(i, i);
    for (Eigen::Index j = i + 1; j < f; ++j) qo(i, j) = l(j, i) / l(i, i);
  }

  const double budget0 = bound2 * (1.0 + kGuard) + kGuard;
  std::vector<double> budget(f + 1), mid(f);
  std::vector<std::int64_t> x(f), upper(f);
  auto bounds = [&](Eigen::Index i) {
    double shift = 0.0;
    for (Eigen::Index j = i + 1; j < f; ++j)
      shift += qo(i, j) * (static_cast<double>(x[j]) - center[j]);
    mid[i] = center[i] - shift;
    const double half = std::sqrt(std::max(0.0, budget[i + 1]) / qd(i));
    x[i] = static_cast<std::int64_t>(std::ceil(mid[i] - half - kGuard));
    upper[i] = static_cast<std::int64_t>(std::floor(mid[i] + half + kGuard));
  };

  budget[f] = budget0;
  Eigen::Index i = f - 1;
  bounds(i);
  while (true) {
    if (x[i] > upper[i]) {
      if (++i == f) return;
      ++x[i];
      continue;
    }
    const double t = static_cast<double>(x[i]) - mid[i];
    budget[i] = budget[i + 1] - qd(i) * t * t;
    if (i == 0) {
      visit(std::span<const std::int64_t>(x));
      ++x[0];
    } else {
      --i;
      bounds(i);
    }
  }
}

void check_radius(std::int64_t radius) {
  if (radius < 0)
    throw Error(ErrorCode::kInvalidArgument, "enumeration radius must be non-negative");
}

void check_cap(const PointSet& set, const EnumerationLimits& limits) {
  if (set.size() > limits.max_points)
    throw Error(ErrorCode::kRadiusTooLarge,
                "lattice enumeration exceeded the cap of " +
                    std::to_string(limits.max_points) + " points");
}

}  // namespace

PointSet enumerate_points(const QuadraticForm& form, std::int64_t radius,
                          EnumerationLimits limits) {
  check_radius(radius);
  PointSet out(form.rank());
  const std::vector<double> center(form.rank(), 0.0);
  fincke_pohst(form, center, 2.0 * static_cast<double>(radius),
               [&](std::span<const std::int64_t> m) {
                 const std::int64_t q = form.quad(m);
                 if (q > radius) return;
                 out.push_back(m, q);
                 check_cap(out, limits);
               });
  out.sort_lexicographic();
  return out;
}

PointSet enumerate_points(const QuadraticForm& form, const Rational& radius,
                          EnumerationLimits limits) {
  if (radius < 0)
    throw Error(ErrorCode::kInvalidArgument, "enumeration radius must be non-negative");
  return enumerate_points(form, boost::rational_cast<std::int64_t>(radius), limits);
}

bool is_admissible_residue(const QuadraticForm& form,
                           std::span<const std::int64_t> p, std::int64_t modulus) {
  if (p.size() != form.rank())
    throw Error(ErrorCode::kDimensionMismatch, "residue length must equal the rank");
  if (modulus <= 0)
    throw Error(ErrorCode::kInvalidArgument, "modulus must be positive");
  for (std::size_t i = 0; i < form.rank(); ++i) {
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < form.rank(); ++j)
      acc = detail::checked_add(acc, detail::checked_mul(form.matrix()(i, j), p[j]));
    if (acc % modulus != 0) return false;
  }
  return true;
}

PointSet enumerate_congruence(const QuadraticForm& form,
                              std::span<const std::int64_t> p,
                              std::int64_t modulus, const Rational& radius,
                              EnumerationLimits limits) {
  if (!is_admissible_residue(form, p, modulus))
    throw Error(ErrorCode::kInadmissibleResidue, "A·p is not divisible by the modulus");
  if (radius < 0)
    throw Error(ErrorCode::kInvalidArgument, "enumeration radius must be non-negative");
  // Q(m) <= radius·N^2 with Q(m) integral.
  const std::int64_t n2 = detail::checked_mul(modulus, modulus);
  const std::int64_t bound =
      boost::rational_cast<std::int64_t>(radius * Rational(n2));
  const std::size_t f = form.rank();

  // m = p + N·x, so (x + p/N)^T A (x + p/N) <= 2·bound/N^2.
  std::vector<double> center(f);
  for (std::size_t i = 0; i < f; ++i)
    center[i] = -static_cast<double>(p[i]) / static_cast<double>(modulus);
  PointSet out(f);
  std::vector<std::int64_t> m(f);
  fincke_pohst(form, center,
               2.0 * static_cast<double>(bound) / static_cast<double>(n2),
               [&](std::span<const std::int64_t> x) {
                 for (std::size_t i = 0; i < f; ++i)
                   m[i] = detail::checked_add(p[i], detail::checked_mul(modulus, x[i]));
                 const std::int64_t q = form.quad(m);
                 if (q > bound) return;
                 out.push_back(m, q);
                 check_cap(out, limits);
               });
  out.sort_lexicographic();
  return out;
}

}  // namespace jtheta
