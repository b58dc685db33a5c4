#include "tracecode/charsum.hpp"

#include <algorithm>
#include <sstream>

namespace tracecode {

namespace {

// Cap for the internal closed-vs-brute self checks; above it the closed
// forms are returned unchecked (the test suites sweep them separately).
constexpr int64_t kSelfCheckOps = 200'000;

CycInt cyc_from_histogram(int64_t p, const std::vector<int64_t>& hist) {
  CycInt acc(p);
  for (int64_t e = 0; e < p; ++e)
    if (hist[static_cast<size_t>(e)] != 0) acc.add_scaled_zeta_pow(hist[static_cast<size_t>(e)], e);
  return acc;
}

}  // namespace

nlohmann::ordered_json bclass_to_json(const BClass& c) {
  nlohmann::ordered_json j;
  j["b"] = c.b.coeffs();
  j["in_image"] = c.in_image;
  j["t1"] = c.t1 ? nlohmann::ordered_json(*c.t1) : nlohmann::ordered_json(nullptr);
  j["t2"] = c.t2 ? nlohmann::ordered_json(*c.t2) : nlohmann::ordered_json(nullptr);
  j["a_val"] = c.a_val ? nlohmann::ordered_json(*c.a_val) : nlohmann::ordered_json(nullptr);
  return j;
}

CycInt quad_sum(int64_t p, int64_t a2, int64_t a1, int64_t a0) {
  a2 = mod_floor(a2, p);
  a1 = mod_floor(a1, p);
  a0 = mod_floor(a0, p);
  if (a2 == 0) throw std::invalid_argument("quad_sum: a2 must be nonzero mod p");
  std::vector<int64_t> hist(static_cast<size_t>(p), 0);
  for (int64_t c = 0; c < p; ++c)
    ++hist[static_cast<size_t>((a2 * c % p * c + a1 * c + a0) % p)];
  CycInt brute = cyc_from_histogram(p, hist);

  // Completion of the square: zeta^{a0 - a1^2 (4 a2)^{-1}} bar_eta(a2) sqrt(p*).
  int64_t shift = mod_floor(a0 - a1 * a1 % p * mod_inverse(4 * a2, p), p);
  CycInt closed = sqrt_p_star(p).scaled(bar_eta(a2, p)).mul_zeta_pow(shift);
  if (!(brute == closed)) throw Error("quad_sum: closed form disagrees with brute force");
  return brute;
}

CharSums::CharSums(const FieldCtx& ctx, int64_t budget)
    : ctx_(ctx), budget_(budget), s_diag_(ctx.p()) {
  const int m = ctx_.m();
  const int64_t p = ctx_.p();

  // L(x) = x^{p^2} + x as a matrix over GF(p): column j holds the
  // coordinates of frob^2(alpha^j) + alpha^j.
  GfpMatrix lm(p, m, m);
  FieldElement e, t;
  for (int j = 0; j < m; ++j) {
    std::vector<int32_t> basis(static_cast<size_t>(m), 0);
    basis[static_cast<size_t>(j)] = 1;
    e = FieldElement(basis);
    ctx_.frobenius_into(e, t);
    ctx_.frobenius_into(t, t);
    ctx_.add_into(t, e, t);
    for (int i = 0; i < m; ++i) lm.at(i, j) = t.coeffs()[static_cast<size_t>(i)];
  }
  l_solver_ = std::make_unique<GfpSolver>(lm);
  const int expect_kernel = (m % 4 == 0) ? 2 : 0;
  if (l_solver_->kernel_dim() != expect_kernel)
    throw Error("kernel of x^{p^2}+x has unexpected dimension");

  s_diag_ = s_diag_closed_();
  if ((p - 1) * ctx_.q() <= std::min(budget_, kSelfCheckOps)) {
    CycInt brute(p);
    for (int64_t c = 1; c < p; ++c) {
      FieldElement ce = ctx_.from_residue(c);
      brute += s_sum_brute(ce, ctx_.neg(ce));
    }
    if (!(brute == s_diag_)) throw Error("sum of S(c,-c): closed form disagrees with brute force");
  }
  s_diag_int_ = s_diag_.as_rational_integer();

  // n0 = p^{m-1} + (1/p) sum_c S(c,-c)
  if (s_diag_int_ % p != 0) throw Error("sum of S(c,-c) is not divisible by p");
  n0_ = ctx_.q() / p + s_diag_int_ / p;

  if (m >= 2) {
    m_table_.assign(static_cast<size_t>(p * p), 0);
    for (int64_t t1 = 0; t1 < p; ++t1)
      for (int64_t t2 = 0; t2 < p; ++t2)
        m_table_[static_cast<size_t>(t1 * p + t2)] =
            m_closed_int_(static_cast<int32_t>(t1), static_cast<int32_t>(t2));
  }
}

void CharSums::require_budget_(int64_t ops, const char* what) const {
  if (ops > budget_) {
    std::ostringstream os;
    os << what << " needs ~" << ops << " operations, above the budget of " << budget_
       << "; use the closed form or raise the budget";
    throw BudgetExceededError(os.str());
  }
}

CycInt CharSums::s_diag_closed_() const {
  const int64_t p = ctx_.p();
  const int m = ctx_.m();
  if (m % 2 == 1) {
    int64_t sign = ((p - 1) / 2) % 2 == 1 ? -1 : 1;
    return sqrt_p_star_pow(p, m + 1).scaled(sign * bar_eta(ctx_.m_p(), p));
  }
  const int64_t expo = (m + 1 + ((m / 2) % 2 == 0 ? 1 : -1)) / 2;
  const int64_t val = ctx_.m_p() == 0 ? -(p - 1) * checked_pow(p, expo) : checked_pow(p, expo);
  return CycInt::integer(p, val);
}

CycInt CharSums::gauss_sum_q() const {
  const int64_t p = ctx_.p();
  const int64_t q = ctx_.q();

  // Mark the nonzero squares in one multiplication pass.
  std::vector<uint8_t> sq(static_cast<size_t>(q), 0);
  FieldElement x, x2;
  for (int64_t idx = 1; idx < q; ++idx) {
    ctx_.element_into(idx, x);
    ctx_.mul_into(x, x, x2);
    sq[static_cast<size_t>(ctx_.index_of(x2))] = 1;
  }
  std::vector<int64_t> hist(static_cast<size_t>(p), 0);
  for (int64_t idx = 1; idx < q; ++idx) {
    ctx_.element_into(idx, x);
    hist[static_cast<size_t>(ctx_.trace(x))] += sq[static_cast<size_t>(idx)] ? 1 : -1;
  }
  CycInt brute = cyc_from_histogram(p, hist);

  CycInt closed = sqrt_p_star_pow(p, ctx_.m()).scaled(ctx_.m() % 2 == 0 ? -1 : 1);
  if (!(brute == closed)) throw Error("gauss_sum_q: closed form disagrees with brute force");
  return brute;
}

CycInt CharSums::s_sum_brute(const FieldElement& a, const FieldElement& b) const {
  require_budget_(ctx_.q(), "s_sum_brute");
  const int64_t p = ctx_.p();
  std::vector<int64_t> hist(static_cast<size_t>(p), 0);
  FieldElement x, xp, xp1, ax, bx;
  for (int64_t idx = 0; idx < ctx_.q(); ++idx) {
    ctx_.element_into(idx, x);
    ctx_.frobenius_into(x, xp);
    ctx_.mul_into(xp, x, xp1);  // x^{p+1}
    ctx_.mul_into(a, xp1, ax);
    ctx_.mul_into(b, x, bx);
    ++hist[static_cast<size_t>((ctx_.trace(ax) + ctx_.trace(bx)) % p)];
  }
  return cyc_from_histogram(p, hist);
}

std::vector<FieldElement> CharSums::linearized_solve(const FieldElement& a,
                                                     const FieldElement& rhs) const {
  if (a.is_zero()) throw std::invalid_argument("linearized_solve: a must be nonzero");
  const int m = ctx_.m();
  const int64_t p = ctx_.p();

  const GfpSolver* solver = l_solver_.get();
  std::unique_ptr<GfpSolver> local;
  if (!(a == ctx_.one())) {
    // f_a(x) = a^p x^{p^2} + a x, column j = f_a(alpha^j).
    FieldElement ap = ctx_.frobenius(a);
    GfpMatrix fm(p, m, m);
    FieldElement e, t, u;
    for (int j = 0; j < m; ++j) {
      std::vector<int32_t> basis(static_cast<size_t>(m), 0);
      basis[static_cast<size_t>(j)] = 1;
      e = FieldElement(basis);
      ctx_.frobenius_into(e, t);
      ctx_.frobenius_into(t, t);
      ctx_.mul_into(ap, t, t);
      ctx_.mul_into(a, e, u);
      ctx_.add_into(t, u, t);
      for (int i = 0; i < m; ++i) fm.at(i, j) = t.coeffs()[static_cast<size_t>(i)];
    }
    local = std::make_unique<GfpSolver>(fm);
    solver = local.get();
  }

  // Permutation criterion: kernel is trivial iff m is odd, or m is even and
  // a^{(q-1)/(p+1)} != (-1)^{m/2}.
  int expect_kernel = 0;
  if (m % 2 == 0) {
    FieldElement crit = ctx_.pow(a, (ctx_.q() - 1) / (p + 1));
    FieldElement target = (m / 2) % 2 == 0 ? ctx_.one() : ctx_.from_residue(p - 1);
    expect_kernel = crit == target ? 2 : 0;
  }
  if (solver->kernel_dim() != expect_kernel)
    throw Error("linearized map has unexpected kernel dimension");

  std::vector<int32_t> part;
  if (!solver->solve(rhs.coeffs(), part)) return {};

  std::vector<FieldElement> out;
  if (solver->kernel_dim() == 0) {
    out.emplace_back(std::move(part));
    return out;
  }
  const auto& kb = solver->kernel_basis();
  out.reserve(static_cast<size_t>(p * p));
  std::vector<int32_t> v(static_cast<size_t>(m));
  for (int64_t c1 = 0; c1 < p; ++c1)
    for (int64_t c2 = 0; c2 < p; ++c2) {
      for (int i = 0; i < m; ++i)
        v[static_cast<size_t>(i)] = static_cast<int32_t>(
            mod_floor(part[static_cast<size_t>(i)] + c1 * kb[0][static_cast<size_t>(i)] +
                          c2 * kb[1][static_cast<size_t>(i)],
                      p));
      out.emplace_back(v);
    }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

CycInt CharSums::s_sum_closed(const FieldElement& a, const FieldElement& b) const {
  if (a.is_zero()) throw std::invalid_argument("s_sum_closed: a must be nonzero");
  const int64_t p = ctx_.p();
  const int m = ctx_.m();

  auto sols = linearized_solve(a, ctx_.neg(ctx_.frobenius(b)));
  auto chi_exponent = [&](const FieldElement& x) {
    // Tr(-a x^{p+1}) mod p
    FieldElement xp = ctx_.frobenius(x);
    FieldElement xp1 = ctx_.mul(xp, x);
    FieldElement axp1 = ctx_.mul(a, xp1);
    return mod_floor(-ctx_.trace(axp1), p);
  };

  if (m % 2 == 1) {
    // permutation case: S(a,b) = sqrt(p*)^m eta(a) zeta^{-Tr(a x^{p+1})}
    return sqrt_p_star_pow(p, m).scaled(ctx_.eta(a)).mul_zeta_pow(chi_exponent(sols.front()));
  }

  const int64_t half_sign = (m / 2) % 2 == 0 ? 1 : -1;
  if (!sols.empty() && sols.size() == 1) {
    // still the permutation case: (-1)^{m/2} p^{m/2} zeta^{-Tr(a x^{p+1})}
    int64_t scale = half_sign * checked_pow(p, m / 2);
    return CycInt::integer(p, scale).mul_zeta_pow(chi_exponent(sols.front()));
  }
  if (sols.empty()) return CycInt(p);
  // non-permutation, solvable: -(-1)^{m/2} p^{m/2+1} zeta^{-Tr(a x^{p+1})}
  int64_t scale = -half_sign * checked_pow(p, m / 2 + 1);
  return CycInt::integer(p, scale).mul_zeta_pow(chi_exponent(sols.front()));
}

BClass CharSums::classify_b(const FieldElement& b) const {
  if (b.is_zero()) throw std::invalid_argument("classify_b: b must be nonzero");
  const int64_t p = ctx_.p();

  BClass cls;
  cls.b = b;
  auto sols = linearized_solve(ctx_.one(), ctx_.neg(ctx_.frobenius(b)));
  if (sols.empty()) {
    cls.in_image = false;
    return cls;
  }
  cls.in_image = true;

  auto class_data = [&](const FieldElement& x) {
    FieldElement xp = ctx_.frobenius(x);
    FieldElement xp1 = ctx_.mul(xp, x);
    int32_t t1 = ctx_.trace(xp1);
    int32_t t2 = ctx_.trace(x);
    std::optional<int32_t> a_val;
    if (t1 != 0) {
      int64_t inv4 = mod_inverse(4, p);
      a_val = static_cast<int32_t>(
          mod_floor(inv4 * mod_floor(-ctx_.m_p() + t2 * t2 % p * mod_inverse(t1, p), p), p));
    }
    return std::tuple(t1, t2, a_val);
  };

  auto [t1, t2, a_val] = class_data(sols.front());
  // For m = 0 (mod 4) the solution set is a coset of a 2-dimensional kernel;
  // the class data must not depend on the representative.
  for (size_t i = 1; i < sols.size(); ++i)
    if (class_data(sols[i]) != std::tuple(t1, t2, a_val))
      throw Error("classify_b: class data depends on the choice of x_b");

  cls.x_b = sols.front();
  cls.t1 = t1;
  cls.t2 = t2;
  cls.a_val = a_val;
  return cls;
}

int64_t CharSums::m_closed_int_(int32_t t1, int32_t t2) const {
  const int64_t p = ctx_.p();
  const int m = ctx_.m();

  // T = sum over z in GF(p)* of zeta^{-(t1 z^2 + t2 z)}
  CycInt t_sum(p);
  for (int64_t z = 1; z < p; ++z)
    t_sum.add_scaled_zeta_pow(1, mod_floor(-(t1 * z % p * z + t2 * z), p));

  const int64_t inv4 = mod_inverse(4, p);
  CycInt base = t_sum.mul_zeta_pow(mod_floor(-ctx_.m_p() * inv4, p));
  if (m % 2 == 1) {
    return galois_orbit_sum(sqrt_p_star_pow(p, m) * base).as_rational_integer();
  }
  const int64_t scale =
      (m % 4 == 2) ? -checked_pow(p, m / 2) : -checked_pow(p, m / 2 + 1);
  return checked_mul(galois_orbit_sum(base).as_rational_integer(), scale);
}

int64_t CharSums::count_N_closed_(const BClass& cls) const {
  const int64_t p = ctx_.p();
  if (ctx_.m() < 2) throw HypothesisError("closed N(b) needs m >= 2; use the brute method");
  int64_t mval = cls.in_image ? m_table_[static_cast<size_t>(*cls.t1 * p + *cls.t2)] : 0;
  int64_t num = checked_add(s_diag_int_, mval);
  if (num % (p * p) != 0) throw Error("N(b): sum of character sums not divisible by p^2");
  return checked_add(checked_pow(p, ctx_.m() - 2), num / (p * p));
}

int64_t CharSums::count_N(const FieldElement& b, CountMethod method) const {
  if (b.is_zero()) throw std::invalid_argument("count_N: b must be nonzero");
  if (method == CountMethod::closed) return count_N_closed_(classify_b(b));

  require_budget_(ctx_.q(), "count_N brute");
  int64_t count = 0;
  FieldElement x, xp, xp1, d, bx;
  for (int64_t idx = 0; idx < ctx_.q(); ++idx) {
    ctx_.element_into(idx, x);
    ctx_.frobenius_into(x, xp);
    ctx_.mul_into(xp, x, xp1);
    ctx_.sub_into(xp1, x, d);
    if (ctx_.trace(d) != 0) continue;
    ctx_.mul_into(b, x, bx);
    if (ctx_.trace(bx) == 0) ++count;
  }
  return count;
}

CycInt CharSums::m_sum(const FieldElement& b) const {
  if (b.is_zero()) throw std::invalid_argument("m_sum: b must be nonzero");
  const int64_t p = ctx_.p();
  if (ctx_.m() < 2) throw HypothesisError("closed M(b) needs m >= 2; use m_sum_brute");
  BClass cls = classify_b(b);
  int64_t closed = cls.in_image ? m_table_[static_cast<size_t>(*cls.t1 * p + *cls.t2)] : 0;
  if ((p - 1) * (p - 1) * ctx_.q() <= std::min(budget_, kSelfCheckOps)) {
    CycInt brute = m_sum_brute(b);
    if (!(brute == CycInt::integer(p, closed)))
      throw Error("M(b): closed form disagrees with brute force");
  }
  return CycInt::integer(p, closed);
}

CycInt CharSums::m_sum_brute(const FieldElement& b) const {
  if (b.is_zero()) throw std::invalid_argument("m_sum_brute: b must be nonzero");
  const int64_t p = ctx_.p();
  require_budget_((p - 1) * (p - 1) * ctx_.q(), "m_sum_brute");
  std::vector<int64_t> hist(static_cast<size_t>(p), 0);
  FieldElement x, xp, xp1, bx;
  for (int64_t idx = 0; idx < ctx_.q(); ++idx) {
    ctx_.element_into(idx, x);
    ctx_.frobenius_into(x, xp);
    ctx_.mul_into(xp, x, xp1);
    ctx_.mul_into(b, x, bx);
    const int64_t ta = ctx_.trace(xp1);
    const int64_t tx = ctx_.trace(x);
    const int64_t tb = ctx_.trace(bx);
    for (int64_t y = 1; y < p; ++y)
      for (int64_t z = 1; z < p; ++z)
        ++hist[static_cast<size_t>(mod_floor(y * (ta - tx) + z * tb, p))];
  }
  return cyc_from_histogram(p, hist);
}

int64_t CharSums::count_Na(int64_t a, CountMethod method) const {
  const int64_t p = ctx_.p();
  const int m = ctx_.m();
  a = mod_floor(a, p);

  if (method == CountMethod::brute) {
    require_budget_(ctx_.q(), "count_Na brute");
    int64_t count = 0;
    FieldElement x, xp, xp1;
    for (int64_t idx = 0; idx < ctx_.q(); ++idx) {
      ctx_.element_into(idx, x);
      ctx_.frobenius_into(x, xp);
      ctx_.mul_into(xp, x, xp1);
      if (ctx_.trace(xp1) == a) ++count;
    }
    return count;
  }

  const int64_t pm1 = checked_pow(p, m - 1);
  if (m % 2 == 1) {
    if (a == 0) return pm1;
    int64_t r = sqrt_p_star_pow(p, m + 1).as_rational_integer();
    return checked_add(pm1, r / p * bar_eta(-a, p));
  }
  const int64_t half = (m % 4 == 2) ? checked_pow(p, m / 2 - 1) : checked_pow(p, m / 2);
  return a == 0 ? checked_sub(pm1, half * (p - 1)) : checked_add(pm1, half);
}

int64_t CharSums::count_Na0(int64_t a, CountMethod method) const {
  const int64_t p = ctx_.p();
  const int m = ctx_.m();
  a = mod_floor(a, p);

  if (method == CountMethod::brute) {
    require_budget_(ctx_.q(), "count_Na0 brute");
    int64_t count = 0;
    FieldElement x, xp, xp1;
    for (int64_t idx = 0; idx < ctx_.q(); ++idx) {
      ctx_.element_into(idx, x);
      if (ctx_.trace(x) != 0) continue;
      ctx_.frobenius_into(x, xp);
      ctx_.mul_into(xp, x, xp1);
      if (ctx_.trace(xp1) == a) ++count;
    }
    return count;
  }

  if (m < 2) throw HypothesisError("closed N_{(a,0)} needs m >= 2; use the brute method");
  const int64_t pm2 = checked_pow(p, m - 2);
  if (ctx_.m_p() == 0) {
    if (m % 2 == 1) {
      if (a == 0) return pm2;
      int64_t r = sqrt_p_star_pow(p, m + 1).as_rational_integer();
      return checked_add(pm2, r / p * bar_eta(-a, p));
    }
    const int64_t half = (m % 4 == 2) ? checked_pow(p, m / 2 - 1) : checked_pow(p, m / 2);
    return a == 0 ? checked_sub(pm2, half * (p - 1)) : checked_add(pm2, half);
  }
  // m_p != 0
  if (m % 2 == 1) {
    int64_t r = sqrt_p_star_pow(p, m + 1).as_rational_integer();
    int64_t unit = bar_eta(-ctx_.m_p(), p) * (r / (p * p));
    return a == 0 ? checked_add(pm2, unit * (p - 1)) : checked_sub(pm2, unit);
  }
  if (a == 0) return pm2;
  const int64_t sign_p = ((p - 1) / 2) % 2 == 1 ? -1 : 1;
  const int64_t half = (m % 4 == 2) ? checked_pow(p, m / 2 - 1) : checked_pow(p, m / 2);
  return checked_sub(pm2, bar_eta(ctx_.m_p(), p) * bar_eta(a, p) * sign_p * half);
}

int64_t CharSums::count_Nbar0(CountMethod method) const {
  const int64_t p = ctx_.p();
  const int m = ctx_.m();
  if (ctx_.m_p() == 0) throw std::invalid_argument("Nbar_0 requires m_p != 0");

  if (method == CountMethod::brute) {
    require_budget_(ctx_.q(), "count_Nbar0 brute");
    const int64_t inv_mp = mod_inverse(ctx_.m_p(), p);
    int64_t count = 0;
    FieldElement x, xp, xp1;
    for (int64_t idx = 0; idx < ctx_.q(); ++idx) {
      ctx_.element_into(idx, x);
      ctx_.frobenius_into(x, xp);
      ctx_.mul_into(xp, x, xp1);
      int64_t tx = ctx_.trace(x);
      if (mod_floor(ctx_.trace(xp1) - inv_mp * tx % p * tx, p) == 0) ++count;
    }
    return count;
  }

  const int64_t pm1 = checked_pow(p, m - 1);
  if (m % 2 == 0) return pm1;
  int64_t r = sqrt_p_star_pow(p, m + 1).as_rational_integer();
  return checked_add(pm1, bar_eta(-ctx_.m_p(), p) * (r / p) * (p - 1));
}

}  // namespace tracecode
