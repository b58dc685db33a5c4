#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracecode/code.hpp"
#include "tracecode/util.hpp"

namespace tracecode {

enum class Regime { odd, even2mod4, even0mod4 };
Regime regime_of(int m);
const char* to_string(Regime r);

// Inputs for one table instantiation.  sign is (-1)^{((p-1)/2)((m-1)/2)}
// (only used for odd m) and eta_mp is bar_eta(m mod p).
struct TableParams {
  int64_t p;
  int m;
  int64_t m_p;
  int eta_mp;
  int sign;
};

// One closed-form row: weight and multiplicity as exact integer formulas.
struct TableRow {
  int128 (*weight)(const TableParams&);
  int128 (*multiplicity)(const TableParams&);
};

// The weight-distribution tables, selected by regime and whether m_p == 0.
// The prediction path and the consistency sweeps both consume these rows.
std::span<const TableRow> distribution_table(Regime regime, bool mp_zero);

// Closed-form code length n = n0 - 1; valid for m >= 2 (odd m needs m >= 3).
int64_t predicted_length(int64_t p, int m);

struct Prediction {
  int64_t p = 0;
  int m = 0;
  int64_t m_p = 0;
  Regime regime = Regime::odd;
  int64_t n = 0;
  WeightDistribution dist;
  std::vector<std::string> notes;  // degeneracy rules applied
};

// Instantiates the applicable table with exact integer arithmetic, dropping
// zero-multiplicity rows and merging equal weights.  Hypotheses: m >= 3 odd,
// or m = 2 (mod 4), or m = 0 (mod 4) with m >= 6; everything else raises
// HypothesisError.
Prediction predicted_distribution(int64_t p, int m);

struct RatioReport {
  bool pass = false;
  std::string case_label;
  int64_t w_min = 0;
  int64_t w_max = 0;
};

// Exact check of p * w_min > (p-1) * w_max over the nonzero weights.
RatioReport ratio_check(const WeightDistribution& dist, int64_t p);

// Previously reported weight enumerators for selected (p, m), with known
// misprints corrected; note is non-null when the published rendering had to
// be corrected.
struct ReferenceExample {
  int64_t p;
  int m;
  std::map<int64_t, int64_t> weights;
  const char* note;
};
const ReferenceExample* reference_example(int64_t p, int m);

struct WeightDiff {
  int64_t w;
  int64_t predicted;   // -1 when absent
  int64_t enumerated;  // -1 when absent
};

struct VerifyReport {
  int64_t p = 0;
  int m = 0;
  Regime regime = Regime::odd;
  bool hypothesis_ok = false;
  std::string hypothesis_message;
  int64_t n_predicted = 0;
  int64_t n_enumerated = 0;
  bool length_match = false;
  bool distribution_match = false;
  PlessReport pless;
  RatioReport ratio;
  std::vector<WeightDiff> mismatches;
  std::vector<std::string> notes;
  WeightDistribution enumerated;
  EnumMethod method = EnumMethod::fast;

  bool agree() const {
    return hypothesis_ok && length_match && distribution_match && pless.all_ok();
  }
  // 0 full agreement, 1 mismatch, 2 hypothesis rejection.
  int exit_code() const { return !hypothesis_ok ? 2 : (agree() ? 0 : 1); }
  nlohmann::ordered_json to_json() const;
};

// Runs prediction and enumeration, diffs them exactly, and attaches the
// Pless-moment and weight-ratio reports.
VerifyReport verify(const FieldCtx& ctx, const EnumOptions& opts = {});

}  // namespace tracecode
