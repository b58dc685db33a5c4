#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "tracecode/cyclotomic.hpp"
#include "tracecode/field.hpp"
#include "tracecode/linalg.hpp"
#include "tracecode/util.hpp"

namespace tracecode {

enum class CountMethod { closed, brute };

// Classification of b in GF(q)* for the closed-form codeword-weight counts.
// x_b is a solution of L(x) = -b^p, L(x) = x^{p^2} + x; when several exist
// the lexicographically smallest coordinate vector is taken.  The derived
// data (t1, t2, a_val) is independent of that choice.
struct BClass {
  FieldElement b;
  bool in_image = false;
  std::optional<FieldElement> x_b;
  std::optional<int32_t> t1;     // Tr(x_b^{p+1})
  std::optional<int32_t> t2;     // Tr(x_b)
  std::optional<int32_t> a_val;  // -m_p/4 + t2^2/(4 t1) in GF(p), when t1 != 0
};

nlohmann::ordered_json bclass_to_json(const BClass& c);

// Sum of zeta^{a2 c^2 + a1 c + a0} over c in GF(p), a2 != 0.  Evaluated by
// brute force and checked against the quadratic-completion closed form
// zeta^{a0 - a1^2/(4 a2)} * bar_eta(a2) * sqrt(p*).
CycInt quad_sum(int64_t p, int64_t a2, int64_t a1, int64_t a0);

// Character-sum machinery over a fixed GF(p^m): Gauss sums, the Weil sum
// S(a,b) = sum_x zeta^{Tr(a x^{p+1} + b x)} by brute force and in closed
// form, the linearized map L(x) = x^{p^2} + x, and the counting quantities
// (n0, N(b), M(b), N_a, N_{(a,0)}, Nbar_0) with closed-form fast paths.
//
// Stateless after construction; all methods are const and safe to call from
// concurrent workers.
class CharSums {
 public:
  explicit CharSums(const FieldCtx& ctx, int64_t budget = kDefaultBudget);

  const FieldCtx& ctx() const { return ctx_; }
  int64_t budget() const { return budget_; }

  // Sum of eta(c) zeta^{Tr(c)} over GF(q)*, computed by brute force and
  // checked against the closed form (-1)^{m-1} sqrt(p*)^m.
  CycInt gauss_sum_q() const;

  // Exact S(a,b) as a histogram of Tr(a x^{p+1} + b x); refuses when q
  // exceeds the budget.
  CycInt s_sum_brute(const FieldElement& a, const FieldElement& b) const;

  // Closed-form S(a,b), a != 0, dispatching on m odd / m even with the
  // permutation criterion a^{(q-1)/(p+1)} vs (-1)^{m/2}.
  CycInt s_sum_closed(const FieldElement& a, const FieldElement& b) const;

  // Full affine solution set of a^p x^{p^2} + a x = rhs, sorted
  // lexicographically; empty when unsolvable, else of size p^{kernel dim}.
  std::vector<FieldElement> linearized_solve(const FieldElement& a,
                                             const FieldElement& rhs) const;

  // Sum of S(c,-c) over c in GF(p)*, in closed form (cross-checked against
  // brute force on small fields).  Always a rational integer.
  const CycInt& sum_s_diag() const { return s_diag_; }
  int64_t sum_s_diag_int() const { return s_diag_int_; }

  // |{x in GF(q) : Tr(x^{p+1} - x) = 0}|; the code length is n0 - 1.
  int64_t n0() const { return n0_; }

  BClass classify_b(const FieldElement& b) const;

  // N(b) = |{x : Tr(x^{p+1} - x) = 0 and Tr(bx) = 0}| for b != 0.  The
  // closed method evaluates p^{m-2} + p^{-2}(sum_c S(c,-c) + M(b)) exactly.
  int64_t count_N(const FieldElement& b, CountMethod method) const;

  // M(b) = sum over y,z in GF(p)*, x in GF(q) of zeta^{Tr(y x^{p+1} + (bz-y)x)},
  // in closed form through the Galois-orbit sums; always a rational integer.
  // Cross-checked against the triple brute-force sum on small fields.
  CycInt m_sum(const FieldElement& b) const;
  CycInt m_sum_brute(const FieldElement& b) const;

  // N_a = |{x : Tr(x^{p+1}) = a}|.
  int64_t count_Na(int64_t a, CountMethod method) const;
  // N_{(a,0)} = |{x : Tr(x^{p+1}) = a and Tr(x) = 0}|.
  int64_t count_Na0(int64_t a, CountMethod method) const;
  // Nbar_0 = |{x : Tr(x^{p+1}) - Tr(x)^2 / m_p = 0}|; requires m_p != 0.
  int64_t count_Nbar0(CountMethod method) const;

 private:
  void require_budget_(int64_t ops, const char* what) const;
  int64_t m_closed_int_(int32_t t1, int32_t t2) const;
  int64_t count_N_closed_(const BClass& cls) const;
  CycInt s_diag_closed_() const;

  const FieldCtx& ctx_;
  int64_t budget_;
  std::unique_ptr<GfpSolver> l_solver_;  // for L(x) = x^{p^2} + x
  CycInt s_diag_;
  int64_t s_diag_int_ = 0;
  int64_t n0_ = 0;
  std::vector<int64_t> m_table_;  // M by (t1, t2), built for m >= 2
};

}  // namespace tracecode
