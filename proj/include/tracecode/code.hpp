#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracecode/charsum.hpp"
#include "tracecode/field.hpp"

namespace tracecode {

enum class EnumMethod { brute, walsh, fast };
const char* to_string(EnumMethod m);
EnumMethod enum_method_from_string(const std::string& s);

struct EnumOptions {
  EnumMethod method = EnumMethod::fast;
  int64_t budget = kDefaultBudget;
  int workers = 1;
};

// Weight multiset of a linear code: counts[w] = number of codewords of
// Hamming weight w for w >= 1.  The zero codeword (A_0 = 1) is implicit.
struct WeightDistribution {
  int64_t p = 0;
  int k = 0;
  int64_t n = 0;
  std::map<int64_t, int64_t> counts;

  int64_t min_weight() const;
  int64_t max_weight() const;
  int64_t codeword_total() const;  // 1 + sum of counts

  friend bool operator==(const WeightDistribution&, const WeightDistribution&) = default;
};

nlohmann::ordered_json distribution_json(const WeightDistribution& dist, const FieldCtx& ctx,
                                         EnumMethod method);
std::string distribution_csv(const WeightDistribution& dist);

struct PlessReport {
  bool count_ok = false;       // sum_{w>0} A_w = p^k - 1
  bool moment_ok = false;      // sum w A_w = (p-1) n p^{k-1}
  bool min_weight_ok = false;  // smallest nonzero weight >= 1
  bool dual_min_ok = false;    // no all-zero generator column => dual distance >= 2
  std::vector<std::string> diagnostics;
  bool all_ok() const { return count_ok && moment_ok && min_weight_ok && dual_min_ok; }
};

struct GeneratorMatrix {
  int64_t p = 0;
  int k = 0;
  int64_t n = 0;
  std::vector<std::vector<int32_t>> rows;
  int rank = 0;
  bool full_rank = false;
  // "p m n k" header line, then k rows of n space-separated digits.
  std::string to_text() const;
};

// The trace code with defining set D = {x in GF(q)* : Tr(x^{p+1} - x) = 0}:
// codewords are (Tr(b d_1), ..., Tr(b d_n)) for b in GF(q).  D is kept in
// the canonical field-element enumeration order.  The ctx must outlive the
// code.
class TraceCode {
 public:
  explicit TraceCode(const FieldCtx& ctx);  // requires m >= 2

  const FieldCtx& ctx() const { return ctx_; }
  const CharSums& sums() const { return sums_; }
  int64_t n() const { return static_cast<int64_t>(d_idx_.size()); }
  int k() const { return ctx_.m(); }
  const std::vector<int64_t>& defining_set_indices() const { return d_idx_; }
  FieldElement defining_element(int64_t i) const;

  std::vector<int32_t> codeword(const FieldElement& b) const;

  // Weight distribution by one of three independent methods.  All three
  // agree; brute and walsh are budget-gated, fast is always available.
  WeightDistribution weight_distribution(const EnumOptions& opts = {}) const;

  GeneratorMatrix generator_matrix() const;
  PlessReport pless_check(const WeightDistribution& dist) const;

 private:
  WeightDistribution enumerate_brute_(const EnumOptions& opts) const;
  WeightDistribution enumerate_walsh_(const EnumOptions& opts) const;
  WeightDistribution enumerate_fast_(const EnumOptions& opts) const;
  void check_distribution_(WeightDistribution& dist) const;

  const FieldCtx& ctx_;
  CharSums sums_;
  std::vector<int64_t> d_idx_;
};

}  // namespace tracecode
