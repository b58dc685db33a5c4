#include "tracecode/cyclotomic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "tracecode/field.hpp"
#include "tracecode/util.hpp"

namespace tracecode {

namespace {

void require_same_prime(const CycInt& a, const CycInt& b) {
  if (a.prime() != b.prime())
    throw std::invalid_argument("cyclotomic operands live in different rings");
}

}  // namespace

CycInt::CycInt(int64_t p) : p_(p), c_(static_cast<size_t>(p - 1), 0) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("cyclotomic prime must be an odd prime");
}

CycInt CycInt::integer(int64_t p, int64_t n) {
  CycInt r(p);
  r.c_[0] = n;
  return r;
}

CycInt CycInt::zeta_pow(int64_t p, int64_t e) {
  CycInt r(p);
  e = mod_floor(e, p);
  if (e == p - 1) {
    // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
    for (auto& v : r.c_) v = -1;
  } else {
    r.c_[static_cast<size_t>(e)] = 1;
  }
  return r;
}

bool CycInt::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](int64_t v) { return v == 0; });
}

CycInt& CycInt::operator+=(const CycInt& o) {
  require_same_prime(*this, o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] = checked_add(c_[i], o.c_[i]);
  return *this;
}

CycInt& CycInt::operator-=(const CycInt& o) {
  require_same_prime(*this, o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] = checked_sub(c_[i], o.c_[i]);
  return *this;
}

CycInt& CycInt::operator*=(const CycInt& o) {
  require_same_prime(*this, o);
  // Accumulate over exponents mod p, then canonicalize by dropping
  // zeta^{p-1} via the relation 1 + zeta + ... + zeta^{p-1} = 0.
  std::vector<int64_t> acc(static_cast<size_t>(p_), 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j] == 0) continue;
      size_t e = (i + j) % static_cast<size_t>(p_);
      acc[e] = checked_add(acc[e], checked_mul(c_[i], o.c_[j]));
    }
  }
  const int64_t top = acc[static_cast<size_t>(p_ - 1)];
  for (size_t i = 0; i < c_.size(); ++i) c_[i] = checked_sub(acc[i], top);
  return *this;
}

CycInt CycInt::operator-() const {
  CycInt r(p_);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = checked_sub(0, c_[i]);
  return r;
}

CycInt CycInt::scaled(int64_t k) const {
  CycInt r(p_);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = checked_mul(c_[i], k);
  return r;
}

CycInt CycInt::mul_zeta_pow(int64_t e) const {
  CycInt r(p_);
  r.add_rotated(*this, e);
  return r;
}

void CycInt::add_scaled_zeta_pow(int64_t k, int64_t e) {
  e = mod_floor(e, p_);
  if (e == p_ - 1) {
    for (auto& v : c_) v = checked_sub(v, k);
  } else {
    c_[static_cast<size_t>(e)] = checked_add(c_[static_cast<size_t>(e)], k);
  }
}

void CycInt::add_rotated(const CycInt& u, int64_t e) {
  require_same_prime(*this, u);
  e = mod_floor(e, p_);
  std::vector<int64_t> acc(static_cast<size_t>(p_), 0);
  for (size_t j = 0; j < u.c_.size(); ++j)
    acc[(j + static_cast<size_t>(e)) % static_cast<size_t>(p_)] = u.c_[j];
  const int64_t top = acc[static_cast<size_t>(p_ - 1)];
  for (size_t i = 0; i < c_.size(); ++i)
    c_[i] = checked_add(c_[i], checked_sub(acc[i], top));
}

CycInt CycInt::galois(int64_t a) const {
  a = mod_floor(a, p_);
  if (a == 0) throw std::invalid_argument("galois: a must be a unit mod p");
  std::vector<int64_t> acc(static_cast<size_t>(p_), 0);
  for (size_t j = 0; j < c_.size(); ++j) {
    if (c_[j] == 0) continue;
    size_t e = static_cast<size_t>(mod_mul(static_cast<int64_t>(j), a, p_));
    acc[e] = checked_add(acc[e], c_[j]);
  }
  CycInt r(p_);
  const int64_t top = acc[static_cast<size_t>(p_ - 1)];
  for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = checked_sub(acc[i], top);
  return r;
}

std::optional<int64_t> CycInt::try_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return std::nullopt;
  return c_[0];
}

int64_t CycInt::as_rational_integer() const {
  auto r = try_rational();
  if (!r) throw NotRationalError("cyclotomic integer is not rational: " + to_string());
  return *r;
}

std::string CycInt::to_string() const {
  // Representatives differ by t * (1 + zeta + ... + zeta^{p-1}); pick the
  // sparsest, then the one with the smallest coefficients.
  std::vector<int64_t> candidates = {0};
  for (int64_t v : c_) candidates.push_back(-v);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<int64_t> best;
  int64_t best_t = 0;
  size_t best_nonzero = SIZE_MAX;
  int64_t best_maxabs = INT64_MAX;
  for (int64_t t : candidates) {
    std::vector<int64_t> rep(static_cast<size_t>(p_), t);
    for (size_t i = 0; i < c_.size(); ++i) rep[i] = checked_add(c_[i], t);
    size_t nonzero = 0;
    int64_t maxabs = 0;
    for (int64_t v : rep) {
      if (v != 0) ++nonzero;
      maxabs = std::max<int64_t>(maxabs, v < 0 ? -v : v);
    }
    bool better = nonzero < best_nonzero ||
                  (nonzero == best_nonzero && maxabs < best_maxabs) ||
                  (nonzero == best_nonzero && maxabs == best_maxabs &&
                   std::abs(t) < std::abs(best_t));
    if (better) {
      best = std::move(rep);
      best_t = t;
      best_nonzero = nonzero;
      best_maxabs = maxabs;
    }
  }

  std::ostringstream os;
  bool first = true;
  for (size_t e = 0; e < best.size(); ++e) {
    int64_t v = best[e];
    if (v == 0) continue;
    if (first) {
      if (v < 0) os << '-';
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    int64_t av = v < 0 ? -v : v;
    if (e == 0) {
      os << av;
    } else {
      if (av != 1) os << av << '*';
      os << "z^" << e;
    }
    first = false;
  }
  if (first) os << '0';
  return os.str();
}

CycInt CycInt::parse(int64_t p, std::string_view text) {
  CycInt r(p);
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  bool any = false;
  int sign = 1;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    sign = text[i] == '-' ? -1 : 1;
    ++i;
  }
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    int64_t coef = 1;
    bool have_coef = false;
    if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      coef = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        coef = checked_add(checked_mul(coef, 10), text[i] - '0');
        ++i;
      }
      have_coef = true;
    }
    skip_ws();
    if (i < text.size() && text[i] == '*') {
      ++i;
      skip_ws();
    }
    int64_t exponent = 0;
    bool have_z = false;
    if (i < text.size() && text[i] == 'z') {
      ++i;
      have_z = true;
      exponent = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        skip_ws();
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
          throw std::invalid_argument("cyclotomic parse: missing exponent");
        exponent = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          exponent = checked_add(checked_mul(exponent, 10), text[i] - '0');
          ++i;
        }
      }
    }
    if (!have_coef && !have_z)
      throw std::invalid_argument("cyclotomic parse: malformed term");
    r.add_scaled_zeta_pow(sign * coef, exponent);
    any = true;
    skip_ws();
    if (i >= text.size()) break;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
    } else {
      throw std::invalid_argument("cyclotomic parse: expected '+' or '-'");
    }
  }
  if (!any) throw std::invalid_argument("cyclotomic parse: empty input");
  return r;
}

int64_t p_star(int64_t p) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  return ((p - 1) / 2) % 2 == 0 ? p : -p;
}

CycInt sqrt_p_star(int64_t p) {
  CycInt r(p);
  for (int64_t c = 1; c < p; ++c) r.add_scaled_zeta_pow(bar_eta(c, p), c);
  return r;
}

CycInt sqrt_p_star_pow(int64_t p, int64_t e) {
  if (e < 0) throw std::invalid_argument("negative exponent");
  CycInt r = CycInt::integer(p, checked_pow(p_star(p), e / 2));
  if (e % 2 == 1) r *= sqrt_p_star(p);
  return r;
}

CycInt galois_orbit_sum(const CycInt& u) {
  CycInt acc(u.prime());
  for (int64_t y = 1; y < u.prime(); ++y) acc += u.galois(y);
  return acc;
}

}  // namespace tracecode
