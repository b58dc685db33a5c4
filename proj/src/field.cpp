#include "tracecode/field.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "tracecode/util.hpp"

namespace tracecode {

namespace {

// Dense polynomials over GF(p), constant term first.
using Poly = std::vector<int64_t>;

int poly_deg(const Poly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i] != 0) return i;
  return -1;
}

void poly_trim(Poly& f) { f.resize(static_cast<size_t>(poly_deg(f) + 1)); }

// a * b reduced by the monic polynomial f.
Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, int64_t p) {
  const int m = static_cast<int>(f.size()) - 1;
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  for (int k = static_cast<int>(r.size()) - 1; k >= m; --k) {
    int64_t c = r[k] % p;
    if (c == 0) continue;
    for (int i = 0; i < m; ++i) r[k - m + i] = mod_floor(r[k - m + i] - c * f[i], p);
    r[k] = 0;
  }
  r.resize(static_cast<size_t>(m));
  for (auto& v : r) v = mod_floor(v, p);
  return r;
}

Poly poly_powmod(Poly base, int64_t e, const Poly& f, int64_t p) {
  Poly r = {1};
  r.resize(f.size() - 1, 0);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, int64_t p) {
  poly_trim(a);
  poly_trim(b);
  while (poly_deg(b) >= 0) {
    // a mod b
    int db = poly_deg(b);
    int64_t lead_inv = mod_inverse(b[static_cast<size_t>(db)], p);
    while (poly_deg(a) >= db) {
      int da = poly_deg(a);
      int64_t c = mod_mul(a[static_cast<size_t>(da)], lead_inv, p);
      for (int i = 0; i <= db; ++i)
        a[static_cast<size_t>(da - db + i)] =
            mod_floor(a[static_cast<size_t>(da - db + i)] - c * b[static_cast<size_t>(i)], p);
      poly_trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace

bool lex_less(const FieldElement& a, const FieldElement& b) {
  return std::lexicographical_compare(a.coeffs().begin(), a.coeffs().end(), b.coeffs().begin(),
                                      b.coeffs().end());
}

bool is_irreducible(const std::vector<int64_t>& f, int64_t p) {
  const int m = static_cast<int>(f.size()) - 1;
  if (m < 1) return false;
  if (f[static_cast<size_t>(m)] != 1) throw std::invalid_argument("modulus must be monic");
  if (m == 1) return true;

  // x^{p^d} mod f for d = 1..m by iterated p-th powering.
  const Poly x = {0, 1};
  std::vector<Poly> frob_iter;
  Poly t = x;
  t.resize(f.size() - 1, 0);
  for (int d = 1; d <= m; ++d) {
    t = poly_powmod(t, p, f, p);
    frob_iter.push_back(t);
  }

  Poly xm = frob_iter[static_cast<size_t>(m - 1)];
  poly_trim(xm);
  if (!(xm.size() == 2 && xm[0] == 0 && xm[1] == 1)) return false;

  for (int d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    Poly g = frob_iter[static_cast<size_t>(d - 1)];
    g.resize(std::max<size_t>(g.size(), 2), 0);
    g[1] = mod_floor(g[1] - 1, p);  // x^{p^d} - x
    Poly gc = poly_gcd(g, f, p);
    if (poly_deg(gc) > 0) return false;
  }
  return true;
}

std::vector<int64_t> find_modulus(int64_t p, int m) {
  if (!is_prime(p) || p < 3) throw std::invalid_argument("p must be an odd prime");
  if (m < 1) throw std::invalid_argument("extension degree m must be >= 1");
  for (int64_t k = 0;; ++k) {
    std::vector<int64_t> f(static_cast<size_t>(m) + 1, 0);
    int64_t v = k;
    for (int i = 0; i < m; ++i) {
      f[static_cast<size_t>(i)] = v % p;
      v /= p;
    }
    if (v != 0) throw Error("no irreducible polynomial found");  // unreachable
    f[static_cast<size_t>(m)] = 1;
    if (is_irreducible(f, p)) return f;
  }
}

int bar_eta(int64_t a, int64_t p) {
  a = mod_floor(a, p);
  if (a == 0) return 0;
  return mod_pow(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

FieldCtx::FieldCtx(int64_t p, int m) : FieldCtx(p, m, find_modulus(p, m)) {}

FieldCtx::FieldCtx(int64_t p, int m, std::vector<int64_t> modulus, int64_t trace_table_cap)
    : p_(p), m_(m), modulus_(std::move(modulus)), trace_cap_(trace_table_cap) {
  if (!is_prime(p_) || p_ < 3) throw std::invalid_argument("p must be an odd prime");
  if (m_ < 1) throw std::invalid_argument("extension degree m must be >= 1");
  q_ = 1;
  for (int i = 0; i < m_; ++i) {
    if (q_ > (int64_t{1} << 62) / p_) throw std::invalid_argument("q = p^m too large");
    q_ *= p_;
  }
  m_p_ = m_ % p_;

  if (modulus_.size() != static_cast<size_t>(m_) + 1)
    throw std::invalid_argument("modulus must have m+1 coefficients");
  for (auto& c : modulus_) c = mod_floor(c, p_);
  if (modulus_.back() != 1)
    throw std::invalid_argument("modulus leading coefficient must be 1");
  if (!is_irreducible(modulus_, p_)) {
    std::ostringstream os;
    os << "modulus " << modulus_string() << " is reducible over GF(" << p_ << ")";
    throw std::invalid_argument(os.str());
  }
  init_();
}

void FieldCtx::init_() {
  const size_t mm = static_cast<size_t>(m_);

  // alpha^k for k = 0 .. 2m-2, reduced coordinates.
  alpha_pow_.assign(std::max<size_t>(2 * mm - 1, 1), std::vector<int32_t>(mm, 0));
  alpha_pow_[0][0] = 1;
  for (size_t k = 1; k < alpha_pow_.size(); ++k) {
    const auto& prev = alpha_pow_[k - 1];
    auto& cur = alpha_pow_[k];
    int64_t carry = prev[mm - 1];  // coefficient of alpha^{m}
    for (size_t i = 0; i < mm; ++i) {
      int64_t v = (i > 0 ? prev[i - 1] : 0) - carry * modulus_[i];
      cur[i] = static_cast<int32_t>(mod_floor(v, p_));
    }
  }

  // Frobenius x -> x^p as the matrix with columns (alpha^j)^p.
  frob_col_.assign(mm, std::vector<int32_t>(mm, 0));
  frob_col_[0][0] = 1;
  if (m_ > 1) {
    FieldElement ap = pow(alpha(), p_);
    FieldElement col = one();
    for (size_t j = 1; j < mm; ++j) {
      col = mul(col, ap);
      frob_col_[j] = col.c_;
    }
  }

  // Tr(alpha^i) by summing Frobenius iterates; the result must be scalar.
  tr_basis_.assign(mm, 0);
  for (size_t i = 0; i < mm; ++i) {
    FieldElement t(std::vector<int32_t>(alpha_pow_[i]));
    FieldElement acc = t;
    for (int k = 1; k < m_; ++k) {
      t = frobenius(t);
      acc = add(acc, t);
    }
    for (size_t j = 1; j < mm; ++j)
      if (acc.c_[j] != 0) throw Error("trace map produced a non-scalar value");
    tr_basis_[i] = acc.c_[0];
  }
}

std::string FieldCtx::modulus_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < modulus_.size(); ++i) {
    if (i) os << ',';
    os << modulus_[i];
  }
  return os.str();
}

FieldElement FieldCtx::zero() const { return FieldElement(std::vector<int32_t>(m_, 0)); }

FieldElement FieldCtx::one() const { return from_residue(1); }

FieldElement FieldCtx::alpha() const {
  std::vector<int32_t> c(m_, 0);
  if (m_ > 1)
    c[1] = 1;
  else
    c[0] = static_cast<int32_t>(mod_floor(-modulus_[0], p_));  // root of the linear modulus
  return FieldElement(std::move(c));
}

FieldElement FieldCtx::from_residue(int64_t r) const {
  std::vector<int32_t> c(m_, 0);
  c[0] = static_cast<int32_t>(mod_floor(r, p_));
  return FieldElement(std::move(c));
}

FieldElement FieldCtx::make(const std::vector<int64_t>& coeffs) const {
  if (coeffs.size() != static_cast<size_t>(m_))
    throw std::invalid_argument("element needs exactly m coordinates");
  std::vector<int32_t> c(m_);
  for (int i = 0; i < m_; ++i) c[i] = static_cast<int32_t>(mod_floor(coeffs[i], p_));
  return FieldElement(std::move(c));
}

FieldElement FieldCtx::element(int64_t index) const {
  FieldElement out;
  element_into(index, out);
  return out;
}

void FieldCtx::element_into(int64_t index, FieldElement& out) const {
  if (index < 0 || index >= q_) throw std::invalid_argument("element index out of range");
  out.c_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    out.c_[i] = static_cast<int32_t>(index % p_);
    index /= p_;
  }
}

int64_t FieldCtx::index_of(const FieldElement& x) const {
  check_element_(x);
  int64_t idx = 0;
  for (int i = m_ - 1; i >= 0; --i) idx = idx * p_ + x.c_[i];
  return idx;
}

void FieldCtx::check_element_(const FieldElement& x) const {
  if (x.c_.size() != static_cast<size_t>(m_))
    throw std::invalid_argument("element does not belong to this field");
}

FieldElement FieldCtx::add(const FieldElement& a, const FieldElement& b) const {
  FieldElement out;
  add_into(a, b, out);
  return out;
}

FieldElement FieldCtx::sub(const FieldElement& a, const FieldElement& b) const {
  FieldElement out;
  sub_into(a, b, out);
  return out;
}

FieldElement FieldCtx::neg(const FieldElement& a) const {
  check_element_(a);
  FieldElement out = a;
  for (auto& v : out.c_) v = static_cast<int32_t>(v == 0 ? 0 : p_ - v);
  return out;
}

FieldElement FieldCtx::mul(const FieldElement& a, const FieldElement& b) const {
  FieldElement out;
  mul_into(a, b, out);
  return out;
}

void FieldCtx::add_into(const FieldElement& a, const FieldElement& b, FieldElement& out) const {
  check_element_(a);
  check_element_(b);
  out.c_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    int32_t v = a.c_[i] + b.c_[i];
    out.c_[i] = v >= p_ ? static_cast<int32_t>(v - p_) : v;
  }
}

void FieldCtx::sub_into(const FieldElement& a, const FieldElement& b, FieldElement& out) const {
  check_element_(a);
  check_element_(b);
  out.c_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    int32_t v = a.c_[i] - b.c_[i];
    out.c_[i] = v < 0 ? static_cast<int32_t>(v + p_) : v;
  }
}

void FieldCtx::mul_into(const FieldElement& a, const FieldElement& b, FieldElement& out) const {
  check_element_(a);
  check_element_(b);
  const int mm = m_;
  static thread_local std::vector<int64_t> conv;
  conv.assign(static_cast<size_t>(2 * mm - 1), 0);
  for (int i = 0; i < mm; ++i) {
    if (a.c_[i] == 0) continue;
    const int64_t ai = a.c_[i];
    for (int j = 0; j < mm; ++j) conv[static_cast<size_t>(i + j)] += ai * b.c_[j];
  }
  // Fold alpha^k for k >= m through the precomputed reductions.
  out.c_.resize(mm);
  for (int i = 0; i < mm; ++i) {
    int64_t acc = conv[static_cast<size_t>(i)];
    for (int k = mm; k <= 2 * mm - 2; ++k)
      acc += conv[static_cast<size_t>(k)] * alpha_pow_[static_cast<size_t>(k)][static_cast<size_t>(i)];
    out.c_[i] = static_cast<int32_t>(mod_floor(acc, p_));
  }
}

void FieldCtx::frobenius_into(const FieldElement& a, FieldElement& out) const {
  check_element_(a);
  static thread_local std::vector<int64_t> acc;
  acc.assign(static_cast<size_t>(m_), 0);
  for (int j = 0; j < m_; ++j) {
    if (a.c_[j] == 0) continue;
    const int64_t aj = a.c_[j];
    const auto& col = frob_col_[static_cast<size_t>(j)];
    for (int i = 0; i < m_; ++i) acc[static_cast<size_t>(i)] += aj * col[static_cast<size_t>(i)];
  }
  out.c_.resize(m_);
  for (int i = 0; i < m_; ++i) out.c_[i] = static_cast<int32_t>(acc[static_cast<size_t>(i)] % p_);
}

FieldElement FieldCtx::frobenius(const FieldElement& a) const {
  FieldElement out;
  frobenius_into(a, out);
  return out;
}

FieldElement FieldCtx::div(const FieldElement& a, const FieldElement& b) const {
  return mul(a, inv(b));
}

FieldElement FieldCtx::inv(const FieldElement& a) const {
  check_element_(a);
  if (a.is_zero()) throw DivisionByZeroError("division by zero in GF(q)");
  return pow(a, q_ - 2);
}

FieldElement FieldCtx::pow(const FieldElement& a, int64_t e) const {
  check_element_(a);
  if (e < 0) throw std::invalid_argument("negative exponent");
  FieldElement base = a;
  FieldElement r = one();
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

int32_t FieldCtx::trace(const FieldElement& x) const {
  check_element_(x);
  int64_t acc = 0;
  for (int i = 0; i < m_; ++i) acc += static_cast<int64_t>(tr_basis_[i]) * x.c_[i];
  return static_cast<int32_t>(acc % p_);
}

int FieldCtx::eta(const FieldElement& x) const {
  check_element_(x);
  if (x.is_zero()) return 0;
  FieldElement r = pow(x, (q_ - 1) / 2);
  if (r == one()) return 1;
  if (r == from_residue(p_ - 1)) return -1;
  throw Error("eta: x^{(q-1)/2} is not +-1");
}

std::span<const uint8_t> FieldCtx::trace_table() const {
  std::call_once(trace_once_, [this] {
    if (!trace_table_available())
      throw Error("trace table unavailable: q exceeds the configured cap");
    trace_tab_.resize(static_cast<size_t>(q_));
    FieldElement x;
    for (int64_t idx = 0; idx < q_; ++idx) {
      element_into(idx, x);
      trace_tab_[static_cast<size_t>(idx)] = static_cast<uint8_t>(trace(x));
    }
  });
  return trace_tab_;
}

}  // namespace tracecode
