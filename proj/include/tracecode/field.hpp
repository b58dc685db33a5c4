#pragma once

#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "tracecode/errors.hpp"

namespace tracecode {

// Element of GF(p^m) as a coordinate vector over the power basis
// {1, alpha, ..., alpha^{m-1}} of the modulus root alpha.  Coordinate i is
// the coefficient of alpha^i, reduced to [0, p).
class FieldElement {
 public:
  FieldElement() = default;
  explicit FieldElement(std::vector<int32_t> coeffs) : c_(std::move(coeffs)) {}

  const std::vector<int32_t>& coeffs() const { return c_; }
  bool is_zero() const {
    for (int32_t v : c_)
      if (v != 0) return false;
    return true;
  }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  friend class FieldCtx;
  std::vector<int32_t> c_;
};

// Lexicographic order on coordinate vectors, constant term first.
bool lex_less(const FieldElement& a, const FieldElement& b);

// Irreducibility over GF(p) of a monic polynomial given as a coefficient
// vector, constant term first.  Checks x^{p^m} == x (mod f) and
// gcd(x^{p^d} - x, f) = 1 for every proper divisor d of m.
bool is_irreducible(const std::vector<int64_t>& f, int64_t p);

// The monic irreducible degree-m polynomial over GF(p) whose coefficient
// vector (c_0, ..., c_{m-1}) encodes the smallest integer sum c_i p^i.
// Deterministic across runs and platforms.
std::vector<int64_t> find_modulus(int64_t p, int m);

// Quadratic character of GF(p): +1 on nonzero squares, -1 on nonsquares,
// 0 at 0.
int bar_eta(int64_t a, int64_t p);

// A concrete GF(p^m): odd prime p, degree m >= 1, monic irreducible modulus.
// Immutable after construction; all operations are pure functions of
// (ctx, operands) and safe to call concurrently.
class FieldCtx {
 public:
  static constexpr int64_t kDefaultTraceTableCap = int64_t{1} << 22;

  FieldCtx(int64_t p, int m);
  FieldCtx(int64_t p, int m, std::vector<int64_t> modulus,
           int64_t trace_table_cap = kDefaultTraceTableCap);

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  int64_t p() const { return p_; }
  int m() const { return m_; }
  int64_t q() const { return q_; }
  int64_t m_p() const { return m_p_; }
  const std::vector<int64_t>& modulus() const { return modulus_; }
  std::string modulus_string() const;  // e.g. "1,2,0,1" for x^3+2x+1

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement alpha() const;  // the modulus root
  FieldElement from_residue(int64_t r) const;
  // Coordinate vector of length m; entries are reduced mod p.
  FieldElement make(const std::vector<int64_t>& coeffs) const;

  // Canonical enumeration: index = sum coeffs[i] * p^i, ascending.
  FieldElement element(int64_t index) const;
  void element_into(int64_t index, FieldElement& out) const;
  int64_t index_of(const FieldElement& x) const;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement div(const FieldElement& a, const FieldElement& b) const;  // b != 0
  FieldElement inv(const FieldElement& a) const;                         // a != 0
  FieldElement pow(const FieldElement& a, int64_t e) const;              // e >= 0
  FieldElement frobenius(const FieldElement& a) const;                   // a^p

  // In-place variants (alias-safe) for hot loops.
  void add_into(const FieldElement& a, const FieldElement& b, FieldElement& out) const;
  void sub_into(const FieldElement& a, const FieldElement& b, FieldElement& out) const;
  void mul_into(const FieldElement& a, const FieldElement& b, FieldElement& out) const;
  void frobenius_into(const FieldElement& a, FieldElement& out) const;

  int32_t trace(const FieldElement& x) const;  // Tr: GF(p^m) -> GF(p)
  int eta(const FieldElement& x) const;        // -1, 0, +1 via x^{(q-1)/2}

  bool trace_table_available() const { return q_ <= trace_cap_; }
  // Traces of all elements in canonical index order; built lazily, only for
  // q within the cap.
  std::span<const uint8_t> trace_table() const;

 private:
  void init_();
  void check_element_(const FieldElement& x) const;

  int64_t p_;
  int m_;
  int64_t q_;
  int64_t m_p_;
  std::vector<int64_t> modulus_;
  int64_t trace_cap_;

  std::vector<std::vector<int32_t>> alpha_pow_;  // alpha^k, k = 0 .. 2m-2
  std::vector<std::vector<int32_t>> frob_col_;   // coords of (alpha^j)^p
  std::vector<int32_t> tr_basis_;                // Tr(alpha^i)

  mutable std::once_flag trace_once_;
  mutable std::vector<uint8_t> trace_tab_;
};

}  // namespace tracecode
