#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "jtheta/error.hpp"

namespace jtheta::detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out))
    throw Error(ErrorCode::kOverflow, "integer overflow in multiplication");
  return out;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out))
    throw Error(ErrorCode::kOverflow, "integer overflow in addition");
  return out;
}

inline std::int64_t narrow(__int128 x) {
  if (x > INT64_MAX || x < INT64_MIN)
    throw Error(ErrorCode::kOverflow, "integer overflow narrowing to 64 bits");
  return static_cast<std::int64_t>(x);
}

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  return checked_mul(a / g, b);
}

// Non-negative residue of x modulo m > 0.
inline std::int64_t mod_floor(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace jtheta::detail
