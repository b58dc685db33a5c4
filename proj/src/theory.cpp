#include "tracecode/theory.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "tracecode/field.hpp"

namespace tracecode {

Regime regime_of(int m) {
  if (m % 2 == 1) return Regime::odd;
  return m % 4 == 2 ? Regime::even2mod4 : Regime::even0mod4;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::odd: return "odd";
    case Regime::even2mod4: return "even2mod4";
    case Regime::even0mod4: return "even0mod4";
  }
  return "?";
}

namespace {

int128 pw(const TableParams& t, int e) { return ipow128(t.p, e); }

// m odd, m_p = 0; s = (-1)^{((p-1)/2)((m-1)/2)}
const std::vector<TableRow> kOddMp0 = {
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2); },
     [](const TableParams& t) { return pw(t, t.m - 1) - 1; }},
    {[](const TableParams& t) { return (t.p - 1) * (pw(t, t.m - 2) - t.sign * pw(t, (t.m - 3) / 2)); },
     [](const TableParams& t) {
       return (t.p - 1) / 2 * (pw(t, t.m - 2) + t.sign * pw(t, (t.m - 1) / 2));
     }},
    {[](const TableParams& t) { return (t.p - 1) * (pw(t, t.m - 2) + t.sign * pw(t, (t.m - 3) / 2)); },
     [](const TableParams& t) {
       return (t.p - 1) / 2 * (pw(t, t.m - 2) - t.sign * pw(t, (t.m - 1) / 2));
     }},
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2) + t.sign * pw(t, (t.m - 3) / 2); },
     [](const TableParams& t) { return (t.p - 1) * (t.p - 1) * pw(t, t.m - 2) / 2; }},
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2) - t.sign * pw(t, (t.m - 3) / 2); },
     [](const TableParams& t) { return (t.p - 1) * (t.p - 1) * pw(t, t.m - 2) / 2; }},
};

// m odd, m_p != 0; u = eta_mp * sign
const std::vector<TableRow> kOddMp1 = {
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2); },
     [](const TableParams& t) {
       int128 u = t.eta_mp * t.sign;
       return pw(t, t.m - 2) - 1 + u * (t.p - 1) * pw(t, (t.m - 3) / 2);
     }},
    {[](const TableParams& t) {
       int128 u = t.eta_mp * t.sign;
       return (t.p - 1) * pw(t, t.m - 2) + u * pw(t, (t.m - 1) / 2);
     },
     [](const TableParams& t) {
       int128 u = t.eta_mp * t.sign;
       return pw(t, t.m - 2) * (t.p - 1) - u * (t.p - 1) * pw(t, (t.m - 3) / 2);
     }},
    {[](const TableParams& t) {
       int128 u = t.eta_mp * t.sign;
       return (t.p - 1) * pw(t, t.m - 2) + u * (t.p + 1) * pw(t, (t.m - 3) / 2);
     },
     [](const TableParams& t) {
       int128 u = t.eta_mp * t.sign;
       return (t.p - 1) * (t.p - 2) / 2 * pw(t, (t.m - 3) / 2) * (pw(t, (t.m - 1) / 2) - u);
     }},
    {[](const TableParams& t) {
       int128 u = t.eta_mp * t.sign;
       return (t.p - 1) * pw(t, t.m - 2) + u * (t.p - 1) * pw(t, (t.m - 3) / 2);
     },
     [](const TableParams& t) {
       int128 u = t.eta_mp * t.sign;
       return (t.p - 1) / 2 * (pw(t, t.m - 1) - u * pw(t, (t.m - 1) / 2));
     }},
    {[](const TableParams& t) {
       int128 u = t.eta_mp * t.sign;
       return (t.p - 1) * pw(t, t.m - 2) + u * pw(t, (t.m - 3) / 2);
     },
     [](const TableParams& t) {
       int128 u = t.eta_mp * t.sign;
       return (t.p - 1) * pw(t, t.m - 2) + u * (t.p - 1) * (t.p - 1) * pw(t, (t.m - 3) / 2);
     }},
};

// m = 2 (mod 4), m_p = 0
const std::vector<TableRow> kEven2Mp0 = {
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2); },
     [](const TableParams& t) { return pw(t, t.m - 2) - (t.p - 1) * pw(t, t.m / 2 - 1) - 1; }},
    {[](const TableParams& t) { return (t.p - 1) * (pw(t, t.m - 2) - pw(t, t.m / 2 - 1)); },
     [](const TableParams& t) { return (t.p - 1) * (2 * pw(t, t.m - 2) + pw(t, t.m / 2 - 1)); }},
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2) - (t.p - 2) * pw(t, t.m / 2 - 1); },
     [](const TableParams& t) { return (t.p - 1) * (t.p - 1) * pw(t, t.m - 2); }},
};

// m = 2 (mod 4), m_p != 0
const std::vector<TableRow> kEven2Mp1 = {
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2); },
     [](const TableParams& t) {
       return pw(t, t.m - 2) + (t.p - 1) / 2 * (pw(t, t.m - 1) + pw(t, t.m / 2)) - 1;
     }},
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2) + pw(t, t.m / 2 - 1); },
     [](const TableParams& t) { return (t.p - 1) * (2 * pw(t, t.m - 2) - pw(t, t.m / 2 - 1)); }},
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2) + 2 * pw(t, t.m / 2 - 1); },
     [](const TableParams& t) {
       return (t.p - 1) * (t.p - 2) / 2 * (pw(t, t.m - 2) - pw(t, t.m / 2 - 1));
     }},
};

// m = 0 (mod 4), m_p = 0
const std::vector<TableRow> kEven0Mp0 = {
    {[](const TableParams& t) {
       return pw(t, t.m - 2) * (t.p - 1) - (t.p - 1) * (t.p - 1) * pw(t, t.m / 2 - 1);
     },
     [](const TableParams& t) { return (static_cast<int128>(t.p) * t.p - 1) * pw(t, t.m - 2); }},
    {[](const TableParams& t) { return pw(t, t.m - 2) * (t.p - 1); },
     [](const TableParams& t) { return pw(t, t.m - 4) - (t.p - 1) * pw(t, t.m / 2 - 2) - 1; }},
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m / 2) * (pw(t, t.m / 2 - 2) - 1); },
     [](const TableParams& t) { return (t.p - 1) * (2 * pw(t, t.m - 4) + pw(t, t.m / 2 - 2)); }},
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2) - (t.p - 2) * pw(t, t.m / 2); },
     [](const TableParams& t) { return (t.p - 1) * (t.p - 1) * pw(t, t.m - 4); }},
};

// m = 0 (mod 4), m_p != 0
const std::vector<TableRow> kEven0Mp1 = {
    {[](const TableParams& t) { return (t.p - 1) * (pw(t, t.m / 2 - 1) + pw(t, t.m - 2)); },
     [](const TableParams& t) { return pw(t, t.m) - pw(t, t.m - 2); }},
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2); },
     [](const TableParams& t) {
       return pw(t, t.m - 4) + (t.p - 1) / 2 * (pw(t, t.m / 2 - 1) + pw(t, t.m - 3)) - 1;
     }},
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2) + pw(t, t.m / 2); },
     [](const TableParams& t) { return (t.p - 1) * (2 * pw(t, t.m - 4) - pw(t, t.m / 2 - 2)); }},
    {[](const TableParams& t) { return (t.p - 1) * pw(t, t.m - 2) + 2 * pw(t, t.m / 2); },
     [](const TableParams& t) {
       return (t.p - 1) * (t.p - 2) / 2 * (pw(t, t.m - 4) - pw(t, t.m / 2 - 2));
     }},
};

void validate_p(int64_t p) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
}

int odd_sign(int64_t p, int m) {
  return (((p - 1) / 2) * ((m - 1) / 2)) % 2 == 0 ? 1 : -1;
}

}  // namespace

std::span<const TableRow> distribution_table(Regime regime, bool mp_zero) {
  switch (regime) {
    case Regime::odd: return mp_zero ? kOddMp0 : kOddMp1;
    case Regime::even2mod4: return mp_zero ? kEven2Mp0 : kEven2Mp1;
    case Regime::even0mod4: return mp_zero ? kEven0Mp0 : kEven0Mp1;
  }
  throw Error("unknown regime");
}

int64_t predicted_length(int64_t p, int m) {
  validate_p(p);
  if (m < 2) throw HypothesisError("length formula requires m >= 2");
  if (m % 2 == 1) {
    const int64_t m_p = m % p;
    int128 n = ipow128(p, m - 1) - 1 +
               static_cast<int128>(odd_sign(p, m)) * bar_eta(m_p, p) * ipow128(p, (m - 1) / 2);
    return narrow128(n);
  }
  const int e = (m - 1 + ((m / 2) % 2 == 0 ? 1 : -1)) / 2;
  int128 n = ipow128(p, m - 1) - 1;
  n += (m % p == 0) ? -(static_cast<int128>(p - 1)) * ipow128(p, e) : ipow128(p, e);
  return narrow128(n);
}

Prediction predicted_distribution(int64_t p, int m) {
  validate_p(p);
  const Regime regime = m >= 2 ? regime_of(m) : Regime::odd;
  if (m % 2 == 1 && m < 3) throw HypothesisError("odd m requires m >= 3");
  if (m % 2 == 0 && m < 2) throw HypothesisError("even m requires m >= 2");
  if (m % 4 == 0 && m < 6)
    throw HypothesisError(
        "m = 0 (mod 4) requires m >= 6; the closed form does not cover m = 4 -- "
        "use enumeration instead");

  Prediction pred;
  pred.p = p;
  pred.m = m;
  pred.m_p = m % p;
  pred.regime = regime;
  pred.n = predicted_length(p, m);

  TableParams t{p, m, pred.m_p, bar_eta(pred.m_p, p), odd_sign(p, m)};
  pred.dist.p = p;
  pred.dist.k = m;
  pred.dist.n = pred.n;

  for (const TableRow& row : distribution_table(regime, pred.m_p == 0)) {
    const int128 w128 = row.weight(t);
    const int128 a128 = row.multiplicity(t);
    if (a128 < 0) throw Error("table produced a negative multiplicity");
    const int64_t w = narrow128(w128);
    const int64_t a = narrow128(a128);
    if (a == 0) {
      std::ostringstream os;
      os << "table row with weight " << w << " has multiplicity 0 and was dropped";
      pred.notes.push_back(os.str());
      continue;
    }
    if (w < 1 || w > pred.n) throw Error("table produced a weight outside [1, n]");
    auto [it, inserted] = pred.dist.counts.emplace(w, a);
    if (!inserted) {
      it->second = checked_add(it->second, a);
      std::ostringstream os;
      os << "two table rows share weight " << w << "; multiplicities merged";
      pred.notes.push_back(os.str());
    }
  }

  // Internal consistency: the table must satisfy the first two power moments.
  int128 count_sum = 0, moment_sum = 0;
  for (const auto& [w, a] : pred.dist.counts) {
    count_sum += a;
    moment_sum += static_cast<int128>(w) * a;
  }
  if (count_sum != ipow128(p, m) - 1)
    throw Error("table multiplicities do not sum to p^m - 1");
  if (moment_sum != static_cast<int128>(p - 1) * pred.n * ipow128(p, m - 1))
    throw Error("table violates the first power moment");
  return pred;
}

RatioReport ratio_check(const WeightDistribution& dist, int64_t p) {
  if (dist.counts.empty()) throw std::invalid_argument("ratio_check needs a nonzero distribution");
  RatioReport rep;
  rep.w_min = dist.min_weight();
  rep.w_max = dist.max_weight();
  rep.pass = static_cast<int128>(p) * rep.w_min > static_cast<int128>(p - 1) * rep.w_max;

  const int m = dist.k;
  const int64_t m_p = m % p;
  std::ostringstream os;
  if (m % 2 == 1) {
    if (m >= 5)
      os << "m >= 5 odd, m_p " << (m_p == 0 ? "= 0" : "!= 0");
    else
      os << "outside the ratio cases (odd m < 5)";
  } else if (m % 4 == 2) {
    if (m >= 6)
      os << "m >= 6, m = 2 (mod 4), m_p " << (m_p == 0 ? "= 0" : "!= 0");
    else
      os << "outside the ratio cases (m = 2)";
  } else {
    if (m >= 6)
      os << "m >= 6, m = 0 (mod 4), m_p " << (m_p == 0 ? "= 0" : "!= 0");
    else
      os << "outside the ratio cases (m = 4)";
  }
  rep.case_label = os.str();
  return rep;
}

const ReferenceExample* reference_example(int64_t p, int m) {
  static const std::vector<ReferenceExample> kExamples = {
      {3, 2, {{2, 6}, {3, 2}}, nullptr},
      {3, 3, {{4, 6}, {5, 6}, {6, 8}, {7, 6}}, nullptr},
      {5, 3, {{14, 36}, {15, 24}, {16, 60}, {19, 4}}, nullptr},
      {3, 5, {{42, 30}, {45, 60}, {48, 90}, {51, 42}, {54, 20}}, nullptr},
      {3, 6, {{144, 342}, {153, 324}, {162, 62}}, nullptr},
      {3, 8,
       {{1458, 350}, {1512, 5832}, {1539, 306}, {1620, 72}},
       "reference enumerator prints 32*z^1620, but the multiplicity sum must be 3^8 - 1 = "
       "6560, which forces 72; the printed 32 is a misprint"},
      {3, 9,
       {{4320, 2268}, {4347, 4374}, {4374, 6560}, {4401, 4374}, {4428, 2106}},
       nullptr},
      {5, 6,
       {{2500, 7124}, {2525, 4900}, {2550, 3600}},
       "reference enumerator prints 2525*z^4900 + 2550*z^3600 with weight and multiplicity "
       "transposed (weights 4900 and 3600 would exceed n = 3149)"},
      {5, 8,
       {{62500, 7124}, {63000, 375000}, {63125, 4900}, {63750, 3600}},
       nullptr},
  };
  for (const auto& e : kExamples)
    if (e.p == p && e.m == m) return &e;
  return nullptr;
}

nlohmann::ordered_json VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["m"] = m;
  j["regime"] = tracecode::to_string(regime);
  j["n_predicted"] = n_predicted;
  j["n_enumerated"] = n_enumerated;
  j["distribution_match"] =
      hypothesis_ok ? nlohmann::ordered_json(distribution_match) : nlohmann::ordered_json(nullptr);
  j["pless"] = pless.all_ok();
  j["ratio"] = {{"pass", ratio.pass}, {"case", ratio.case_label}};
  nlohmann::ordered_json mm = nlohmann::ordered_json::array();
  for (const auto& d : mismatches) {
    nlohmann::ordered_json e;
    e["w"] = d.w;
    e["predicted"] = d.predicted >= 0 ? nlohmann::ordered_json(d.predicted) : nullptr;
    e["enumerated"] = d.enumerated >= 0 ? nlohmann::ordered_json(d.enumerated) : nullptr;
    mm.push_back(e);
  }
  j["mismatches"] = mm;
  j["hypothesis_ok"] = hypothesis_ok;
  if (!hypothesis_message.empty()) j["hypothesis_message"] = hypothesis_message;
  j["notes"] = notes;
  nlohmann::ordered_json w = nlohmann::ordered_json::object();
  for (const auto& [weight, count] : enumerated.counts) w[std::to_string(weight)] = count;
  j["weights"] = w;
  j["method"] = tracecode::to_string(method);
  return j;
}

VerifyReport verify(const FieldCtx& ctx, const EnumOptions& opts) {
  VerifyReport rep;
  rep.p = ctx.p();
  rep.m = ctx.m();
  rep.regime = regime_of(ctx.m());
  rep.method = opts.method;

  rep.n_predicted = predicted_length(ctx.p(), ctx.m());

  Prediction pred;
  try {
    pred = predicted_distribution(ctx.p(), ctx.m());
    rep.hypothesis_ok = true;
    rep.notes = pred.notes;
  } catch (const HypothesisError& e) {
    rep.hypothesis_ok = false;
    rep.hypothesis_message = e.what();
  }

  TraceCode code(ctx);
  rep.enumerated = code.weight_distribution(opts);
  rep.n_enumerated = rep.enumerated.n;
  rep.length_match = rep.n_predicted == rep.n_enumerated;

  if (rep.hypothesis_ok) {
    std::vector<int64_t> weights;
    for (const auto& [w, a] : pred.dist.counts) weights.push_back(w);
    for (const auto& [w, a] : rep.enumerated.counts) weights.push_back(w);
    std::sort(weights.begin(), weights.end());
    weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
    for (int64_t w : weights) {
      auto ip = pred.dist.counts.find(w);
      auto ie = rep.enumerated.counts.find(w);
      const int64_t pv = ip == pred.dist.counts.end() ? -1 : ip->second;
      const int64_t ev = ie == rep.enumerated.counts.end() ? -1 : ie->second;
      if (pv != ev) rep.mismatches.push_back({w, pv, ev});
    }
    rep.distribution_match = rep.mismatches.empty();
  }

  rep.pless = code.pless_check(rep.enumerated);
  rep.ratio = ratio_check(rep.enumerated, ctx.p());

  if (const ReferenceExample* ref = reference_example(ctx.p(), ctx.m())) {
    if (ref->note) rep.notes.push_back(ref->note);
    if (ref->weights != rep.enumerated.counts)
      rep.notes.push_back("enumerated distribution differs from the stored reference enumerator");
    else
      rep.notes.push_back("enumerated distribution matches the stored reference enumerator");
  }
  return rep;
}

}  // namespace tracecode
