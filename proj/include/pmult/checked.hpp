#pragma once

#include <cstdint>
#include <string>

#include "pmult/errors.hpp"

namespace pmult {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 checked_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("overflow in " + std::to_string(a) + " * " + std::to_string(b));
  return r;
}

inline u64 checked_add(u64 a, u64 b) {
  u64 r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("overflow in " + std::to_string(a) + " + " + std::to_string(b));
  return r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("overflow in " + std::to_string(a) + " * " + std::to_string(b));
  return r;
}

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("overflow in " + std::to_string(a) + " + " + std::to_string(b));
  return r;
}

inline u64 checked_pow(u64 base, unsigned exp) {
  u64 r = 1;
  for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

constexpr bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

constexpr u64 gcd(u64 a, u64 b) {
  while (b) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace pmult
