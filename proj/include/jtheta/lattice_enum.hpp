#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "jtheta/quadform.hpp"
#include "jtheta/rational.hpp"

namespace jtheta {

// Flat, lexicographically sorted list of integer points together with their
// exact norms Q(m).
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return norms_.size(); }
  bool empty() const { return norms_.empty(); }

  std::span<const std::int64_t> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::int64_t norm(std::size_t i) const { return norms_[i]; }

  void push_back(std::span<const std::int64_t> point, std::int64_t norm);
  void sort_lexicographic();
  bool contains(std::span<const std::int64_t> point) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::int64_t> coords_;
  std::vector<std::int64_t> norms_;
};

struct EnumerationLimits {
  std::size_t max_points = 10'000'000;
};

// All m in Z^f with Q(m) <= radius, sorted lexicographically.
// Throws RadiusTooLarge once more than limits.max_points points are found.
PointSet enumerate_points(const QuadraticForm& form, std::int64_t radius,
                          EnumerationLimits limits = {});
PointSet enumerate_points(const QuadraticForm& form, const Rational& radius,
                          EnumerationLimits limits = {});

// All m ≡ p (mod modulus) with Q(m)/modulus^2 <= radius, sorted
// lexicographically. Requires A·p ≡ 0 (mod modulus), else InadmissibleResidue.
PointSet enumerate_congruence(const QuadraticForm& form,
                              std::span<const std::int64_t> p,
                              std::int64_t modulus, const Rational& radius,
                              EnumerationLimits limits = {});

// True when A·p ≡ 0 (mod modulus).
bool is_admissible_residue(const QuadraticForm& form,
                           std::span<const std::int64_t> p, std::int64_t modulus);

}  // namespace jtheta
