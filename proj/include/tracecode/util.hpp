#pragma once

#include <cstdint>

#include "tracecode/errors.hpp"

namespace tracecode {

using int128 = __int128;

// Default cap on "field-operation equivalents" for brute-force paths.
inline constexpr int64_t kDefaultBudget = 100'000'000;

inline int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 overflow in addition");
  return r;
}

inline int64_t checked_sub(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 overflow in subtraction");
  return r;
}

inline int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 overflow in multiplication");
  return r;
}

inline int64_t checked_pow(int64_t base, int64_t exp) {
  int64_t r = 1;
  for (int64_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

inline int128 ipow128(int64_t base, int64_t exp) {
  int128 r = 1;
  for (int64_t i = 0; i < exp; ++i) r *= base;
  return r;
}

inline int64_t narrow128(int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("value does not fit in int64");
  return static_cast<int64_t>(v);
}

inline bool is_prime(int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (int64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

// Least nonnegative residue of a mod p.
inline int64_t mod_floor(int64_t a, int64_t p) {
  int64_t r = a % p;
  return r < 0 ? r + p : r;
}

inline int64_t mod_mul(int64_t a, int64_t b, int64_t p) {
  return static_cast<int64_t>(static_cast<int128>(a) * b % p);
}

inline int64_t mod_pow(int64_t base, int64_t exp, int64_t p) {
  int64_t r = 1;
  base = mod_floor(base, p);
  while (exp > 0) {
    if (exp & 1) r = mod_mul(r, base, p);
    base = mod_mul(base, base, p);
    exp >>= 1;
  }
  return r;
}

// Inverse mod a prime p; a must not be divisible by p.
inline int64_t mod_inverse(int64_t a, int64_t p) {
  a = mod_floor(a, p);
  if (a == 0) throw DivisionByZeroError("mod_inverse of 0");
  return mod_pow(a, p - 2, p);
}

}  // namespace tracecode
