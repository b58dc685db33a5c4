#include "tracecode/code.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "tracecode/linalg.hpp"

namespace tracecode {

const char* to_string(EnumMethod m) {
  switch (m) {
    case EnumMethod::brute: return "brute";
    case EnumMethod::walsh: return "walsh";
    case EnumMethod::fast: return "fast";
  }
  return "?";
}

EnumMethod enum_method_from_string(const std::string& s) {
  if (s == "brute") return EnumMethod::brute;
  if (s == "walsh") return EnumMethod::walsh;
  if (s == "fast") return EnumMethod::fast;
  throw std::invalid_argument("unknown method: " + s);
}

int64_t WeightDistribution::min_weight() const {
  if (counts.empty()) throw Error("empty weight distribution");
  return counts.begin()->first;
}

int64_t WeightDistribution::max_weight() const {
  if (counts.empty()) throw Error("empty weight distribution");
  return counts.rbegin()->first;
}

int64_t WeightDistribution::codeword_total() const {
  int64_t total = 1;
  for (const auto& [w, a] : counts) total = checked_add(total, a);
  return total;
}

nlohmann::ordered_json distribution_json(const WeightDistribution& dist, const FieldCtx& ctx,
                                         EnumMethod method) {
  nlohmann::ordered_json j;
  j["p"] = dist.p;
  j["m"] = dist.k;
  j["modulus"] = ctx.modulus();
  j["n"] = dist.n;
  j["k"] = dist.k;
  nlohmann::ordered_json w = nlohmann::ordered_json::object();
  for (const auto& [weight, count] : dist.counts) w[std::to_string(weight)] = count;
  j["weights"] = w;
  j["method"] = to_string(method);
  return j;
}

std::string distribution_csv(const WeightDistribution& dist) {
  std::ostringstream os;
  os << "weight,count\n";
  for (const auto& [w, a] : dist.counts) os << w << ',' << a << '\n';
  return os.str();
}

std::string GeneratorMatrix::to_text() const {
  std::ostringstream os;
  os << p << ' ' << k << ' ' << n << ' ' << k << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ' ';
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

TraceCode::TraceCode(const FieldCtx& ctx) : ctx_(ctx), sums_(ctx) {
  if (ctx_.m() < 2) throw std::invalid_argument("the code construction requires m >= 2");
  const int64_t q = ctx_.q();

  FieldElement x, xp, xp1, d;
  const bool have_table = ctx_.trace_table_available();
  std::span<const uint8_t> traces;
  if (have_table) traces = ctx_.trace_table();
  for (int64_t idx = 1; idx < q; ++idx) {
    ctx_.element_into(idx, x);
    ctx_.frobenius_into(x, xp);
    ctx_.mul_into(xp, x, xp1);
    int32_t tr_x = have_table ? traces[static_cast<size_t>(idx)] : ctx_.trace(x);
    if (mod_floor(ctx_.trace(xp1) - tr_x, ctx_.p()) == 0) d_idx_.push_back(idx);
  }

  if (static_cast<int64_t>(d_idx_.size()) != sums_.n0() - 1)
    throw Error("defining-set size disagrees with the closed-form n0");
}

FieldElement TraceCode::defining_element(int64_t i) const {
  return ctx_.element(d_idx_.at(static_cast<size_t>(i)));
}

std::vector<int32_t> TraceCode::codeword(const FieldElement& b) const {
  std::vector<int32_t> w(d_idx_.size());
  FieldElement d, bd;
  for (size_t i = 0; i < d_idx_.size(); ++i) {
    ctx_.element_into(d_idx_[i], d);
    ctx_.mul_into(b, d, bd);
    w[i] = ctx_.trace(bd);
  }
  return w;
}

namespace {

// Partition [1, q) into `workers` chunks, run fn(first, last, slot) on each,
// then merge the per-slot histograms.
template <typename Fn>
std::map<int64_t, int64_t> parallel_histogram(int64_t q, int workers, Fn fn) {
  workers = std::max(1, workers);
  workers = static_cast<int>(std::min<int64_t>(workers, q - 1));
  std::vector<std::map<int64_t, int64_t>> parts(static_cast<size_t>(workers));
  if (workers == 1) {
    fn(int64_t{1}, q, parts[0]);
  } else {
    std::vector<std::thread> pool;
    const int64_t span = (q - 1 + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int64_t first = 1 + w * span;
      const int64_t last = std::min<int64_t>(q, first + span);
      if (first >= last) break;
      pool.emplace_back([&, first, last, w] { fn(first, last, parts[static_cast<size_t>(w)]); });
    }
    for (auto& t : pool) t.join();
  }
  std::map<int64_t, int64_t> merged;
  for (const auto& part : parts)
    for (const auto& [k, v] : part) merged[k] += v;
  return merged;
}

}  // namespace

WeightDistribution TraceCode::weight_distribution(const EnumOptions& opts) const {
  WeightDistribution dist;
  dist.p = ctx_.p();
  dist.k = ctx_.m();
  dist.n = n();
  switch (opts.method) {
    case EnumMethod::brute: dist = enumerate_brute_(opts); break;
    case EnumMethod::walsh: dist = enumerate_walsh_(opts); break;
    case EnumMethod::fast: dist = enumerate_fast_(opts); break;
  }
  check_distribution_(dist);
  return dist;
}

void TraceCode::check_distribution_(WeightDistribution& dist) const {
  int64_t total = 0;
  for (const auto& [w, a] : dist.counts) {
    if (w < 1 || w > dist.n) throw Error("weight outside [1, n] for a nonzero codeword");
    total += a;
  }
  if (total != ctx_.q() - 1) throw Error("weight multiplicities do not sum to q - 1");
}

WeightDistribution TraceCode::enumerate_brute_(const EnumOptions& opts) const {
  const int64_t q = ctx_.q();
  const int64_t p = ctx_.p();
  const int m = ctx_.m();
  const int64_t nn = n();
  if (q > opts.budget / std::max<int64_t>(nn, 1))
    throw BudgetExceededError("brute enumeration needs q*n trace evaluations, above budget; "
                              "use --method fast");

  // Tr(b d) is linear in the coordinates of b: precompute the linear forms
  // row_d[i] = Tr(alpha^i d).
  std::vector<int32_t> forms(d_idx_.size() * static_cast<size_t>(m));
  {
    FieldElement d, ai, aid;
    for (size_t j = 0; j < d_idx_.size(); ++j) {
      ctx_.element_into(d_idx_[j], d);
      for (int i = 0; i < m; ++i) {
        ai = FieldElement([&] {
          std::vector<int32_t> c(static_cast<size_t>(m), 0);
          c[static_cast<size_t>(i)] = 1;
          return c;
        }());
        ctx_.mul_into(ai, d, aid);
        forms[j * static_cast<size_t>(m) + static_cast<size_t>(i)] = ctx_.trace(aid);
      }
    }
  }

  auto worker = [&](int64_t first, int64_t last, std::map<int64_t, int64_t>& hist) {
    FieldElement b;
    for (int64_t idx = first; idx < last; ++idx) {
      ctx_.element_into(idx, b);
      const auto& bc = b.coeffs();
      int64_t zeros = 0;
      const int32_t* row = forms.data();
      for (size_t j = 0; j < d_idx_.size(); ++j, row += m) {
        int64_t acc = 0;
        for (int i = 0; i < m; ++i) acc += static_cast<int64_t>(row[i]) * bc[static_cast<size_t>(i)];
        if (acc % p == 0) ++zeros;
      }
      ++hist[nn - zeros];
    }
  };
  WeightDistribution dist{ctx_.p(), m, nn, parallel_histogram(q, opts.workers, worker)};
  return dist;
}

WeightDistribution TraceCode::enumerate_walsh_(const EnumOptions& opts) const {
  const int64_t q = ctx_.q();
  const int64_t p = ctx_.p();
  const int m = ctx_.m();
  const int64_t nn = n();
  if (q > opts.budget / std::max<int64_t>(p * m, 1))
    throw BudgetExceededError("walsh enumeration needs q*p*m exact ring operations, above "
                              "budget; use --method fast");

  // W(b) = sum_{x in D} zeta^{Tr(bx)}.  With the Gram form G_{ij} =
  // Tr(alpha^{i+j}) we have Tr(bx) = (Gb).x, so the sums for all b are the
  // radix-p decimation transform of the indicator of D, evaluated at Gb.
  std::vector<std::vector<int32_t>> gram(static_cast<size_t>(m),
                                         std::vector<int32_t>(static_cast<size_t>(m)));
  {
    FieldElement ai, aj, prod;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        std::vector<int32_t> ci(static_cast<size_t>(m), 0), cj(static_cast<size_t>(m), 0);
        ci[static_cast<size_t>(i)] = 1;
        cj[static_cast<size_t>(j)] = 1;
        ai = FieldElement(ci);
        aj = FieldElement(cj);
        ctx_.mul_into(ai, aj, prod);
        gram[static_cast<size_t>(i)][static_cast<size_t>(j)] = ctx_.trace(prod);
      }
  }

  std::vector<CycInt> f(static_cast<size_t>(q), CycInt(p));
  for (int64_t idx : d_idx_) f[static_cast<size_t>(idx)] = CycInt::integer(p, 1);

  // One decimation stage per coordinate axis; all arithmetic is exact.
  std::vector<CycInt> lane_in(static_cast<size_t>(p), CycInt(p));
  std::vector<CycInt> lane_out(static_cast<size_t>(p), CycInt(p));
  int64_t stride = 1;
  for (int axis = 0; axis < m; ++axis) {
    const int64_t block = stride * p;
    for (int64_t base = 0; base < q; base += block) {
      for (int64_t off = 0; off < stride; ++off) {
        for (int64_t j = 0; j < p; ++j)
          lane_in[static_cast<size_t>(j)] = f[static_cast<size_t>(base + off + j * stride)];
        for (int64_t k = 0; k < p; ++k) {
          CycInt acc(p);
          for (int64_t j = 0; j < p; ++j) acc.add_rotated(lane_in[static_cast<size_t>(j)], j * k);
          lane_out[static_cast<size_t>(k)] = std::move(acc);
        }
        for (int64_t k = 0; k < p; ++k)
          f[static_cast<size_t>(base + off + k * stride)] = lane_out[static_cast<size_t>(k)];
      }
    }
    stride = block;
  }

  std::map<int64_t, int64_t> hist;
  FieldElement b;
  std::vector<int64_t> u(static_cast<size_t>(m));
  for (int64_t idx = 1; idx < q; ++idx) {
    ctx_.element_into(idx, b);
    const auto& bc = b.coeffs();
    for (int i = 0; i < m; ++i) {
      int64_t acc = 0;
      for (int j = 0; j < m; ++j)
        acc += static_cast<int64_t>(gram[static_cast<size_t>(i)][static_cast<size_t>(j)]) *
               bc[static_cast<size_t>(j)];
      u[static_cast<size_t>(i)] = acc % p;
    }
    // N'(b) = #{x in D : Tr(bx) = 0} = (n + sum_{z != 0} W(zb)) / p
    CycInt acc = CycInt::integer(p, nn);
    for (int64_t z = 1; z < p; ++z) {
      int64_t uz_idx = 0;
      for (int i = m - 1; i >= 0; --i)
        uz_idx = uz_idx * p + (u[static_cast<size_t>(i)] * z) % p;
      acc += f[static_cast<size_t>(uz_idx)];
    }
    const int64_t r = acc.as_rational_integer();
    if (r % p != 0) throw Error("walsh: collapsed character sum not divisible by p");
    ++hist[nn - r / p];
  }
  return WeightDistribution{ctx_.p(), m, nn, std::move(hist)};
}

WeightDistribution TraceCode::enumerate_fast_(const EnumOptions& opts) const {
  const int64_t q = ctx_.q();
  const int64_t n0 = sums_.n0();
  auto worker = [&](int64_t first, int64_t last, std::map<int64_t, int64_t>& hist) {
    FieldElement b;
    for (int64_t idx = first; idx < last; ++idx) {
      ctx_.element_into(idx, b);
      const int64_t weight = n0 - sums_.count_N(b, CountMethod::closed);
      ++hist[weight];
    }
  };
  return WeightDistribution{ctx_.p(), ctx_.m(), n(),
                            parallel_histogram(q, opts.workers, worker)};
}

GeneratorMatrix TraceCode::generator_matrix() const {
  GeneratorMatrix g;
  g.p = ctx_.p();
  g.k = ctx_.m();
  g.n = n();
  for (int i = 0; i < ctx_.m(); ++i) {
    std::vector<int32_t> c(static_cast<size_t>(ctx_.m()), 0);
    c[static_cast<size_t>(i)] = 1;
    g.rows.push_back(codeword(FieldElement(c)));
  }
  GfpMatrix mat(ctx_.p(), ctx_.m(), static_cast<int>(g.n));
  for (int r = 0; r < ctx_.m(); ++r)
    for (int64_t c = 0; c < g.n; ++c)
      mat.at(r, static_cast<int>(c)) = g.rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
  g.rank = gfp_rank(std::move(mat));
  g.full_rank = g.rank == g.k;
  return g;
}

PlessReport TraceCode::pless_check(const WeightDistribution& dist) const {
  PlessReport rep;
  const int64_t p = ctx_.p();
  const int m = ctx_.m();

  int128 count_sum = 0;
  int128 moment_sum = 0;
  for (const auto& [w, a] : dist.counts) {
    count_sum += a;
    moment_sum += static_cast<int128>(w) * a;
  }
  const int128 expect_count = ipow128(p, m) - 1;
  const int128 expect_moment = static_cast<int128>(p - 1) * dist.n * ipow128(p, m - 1);

  rep.count_ok = count_sum == expect_count;
  if (!rep.count_ok)
    rep.diagnostics.push_back("sum of multiplicities does not equal p^m - 1");
  rep.moment_ok = moment_sum == expect_moment;
  if (!rep.moment_ok)
    rep.diagnostics.push_back("first power moment does not equal (p-1) n p^{m-1}");
  rep.min_weight_ok = !dist.counts.empty() && dist.counts.begin()->first >= 1;
  if (!rep.min_weight_ok) rep.diagnostics.push_back("minimum nonzero weight is not >= 1");

  // 0 is excluded from the defining set, so no generator column may vanish;
  // that gives dual minimum distance >= 2.
  rep.dual_min_ok = true;
  FieldElement d, ai, aid;
  for (size_t j = 0; j < d_idx_.size() && rep.dual_min_ok; ++j) {
    ctx_.element_into(d_idx_[j], d);
    bool all_zero = true;
    for (int i = 0; i < m && all_zero; ++i) {
      std::vector<int32_t> c(static_cast<size_t>(m), 0);
      c[static_cast<size_t>(i)] = 1;
      ai = FieldElement(c);
      ctx_.mul_into(ai, d, aid);
      if (ctx_.trace(aid) != 0) all_zero = false;
    }
    if (all_zero) {
      rep.dual_min_ok = false;
      rep.diagnostics.push_back("generator matrix has an all-zero column");
    }
  }
  return rep;
}

}  // namespace tracecode
