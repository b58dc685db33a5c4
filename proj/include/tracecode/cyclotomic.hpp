#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tracecode/errors.hpp"

namespace tracecode {

// Exact element of Z[zeta_p], zeta_p a primitive p-th root of unity, stored
// in the canonical basis {1, zeta, ..., zeta^{p-2}}.  The representation is
// unique, so equality is a coefficient compare.  All coefficient arithmetic
// is overflow-checked; overflow raises OverflowError, never wraps.
class CycInt {
 public:
  explicit CycInt(int64_t p);  // zero
  static CycInt integer(int64_t p, int64_t n);
  static CycInt zeta_pow(int64_t p, int64_t e);

  int64_t prime() const { return p_; }
  const std::vector<int64_t>& coeffs() const { return c_; }
  bool is_zero() const;

  CycInt& operator+=(const CycInt& o);
  CycInt& operator-=(const CycInt& o);
  CycInt& operator*=(const CycInt& o);
  friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
  friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
  friend CycInt operator*(CycInt a, const CycInt& b) { return a *= b; }
  CycInt operator-() const;

  CycInt scaled(int64_t k) const;         // k * this
  CycInt mul_zeta_pow(int64_t e) const;   // this * zeta^e
  void add_scaled_zeta_pow(int64_t k, int64_t e);     // this += k * zeta^e
  void add_rotated(const CycInt& u, int64_t e);       // this += u * zeta^e

  // Galois automorphism sigma_a : zeta -> zeta^a; a must be a unit mod p.
  CycInt galois(int64_t a) const;

  std::optional<int64_t> try_rational() const;
  // The rational integer this element canonically represents; throws
  // NotRationalError if zeta terms remain.
  int64_t as_rational_integer() const;

  // Laurent-style rendering, e.g. "-3*z^1 + 3*z^2".  Among the
  // representatives mod (1 + zeta + ... + zeta^{p-1}) the printer picks the
  // sparsest one, preferring small coefficients.
  std::string to_string() const;
  static CycInt parse(int64_t p, std::string_view text);

  friend bool operator==(const CycInt&, const CycInt&) = default;

 private:
  int64_t p_ = 0;
  std::vector<int64_t> c_;  // size p-1
};

// (-1)^{(p-1)/2} p, the signed prime whose square root lies in Q(zeta_p).
int64_t p_star(int64_t p);

// Quadratic Gauss sum over GF(p): sum of bar_eta(c) zeta^c over c in GF(p)*.
// Its square equals p_star(p).
CycInt sqrt_p_star(int64_t p);

// sqrt(p*)^e computed as (p*)^{e/2} * sqrt_p_star(p)^{e mod 2}.
CycInt sqrt_p_star_pow(int64_t p, int64_t e);

// Sum of sigma_y(u) over all units y mod p.
CycInt galois_orbit_sum(const CycInt& u);

}  // namespace tracecode
