#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "spinorbit/formal.hpp"
#include "spinorbit/rational.hpp"
#include "spinorbit/symbols.hpp"

namespace spinorbit {

// Generalized monomial:
//   coeff * consts * x^xp * y^yp * u^(up2/2) * (log r)^logp * theta^thp
//         * product(formal derivative factors)
// with u = x^2 + y^2. up2 stores twice the u-exponent so r = u^(1/2) is
// representable. logp, thp >= 0; xp, yp may be negative.
struct Monomial {
  GaussRat coeff;
  ConstMono consts;
  int xp = 0;
  int yp = 0;
  int up2 = 0;
  int logp = 0;
  int thp = 0;
  std::vector<FormalDerivative> formals;  // kept sorted

  int grade() const { return xp + yp + up2; }

  bool same_key(const Monomial& o) const {
    return xp == o.xp && yp == o.yp && up2 == o.up2 && logp == o.logp &&
           thp == o.thp && formals == o.formals &&
           const_mono_cmp(consts, o.consts) == 0;
  }

  // Graded-lexicographic key order; total and deterministic.
  static int cmp_key(const Monomial& a, const Monomial& b) {
    if (a.grade() != b.grade()) return a.grade() < b.grade() ? -1 : 1;
    if (a.xp != b.xp) return a.xp < b.xp ? -1 : 1;
    if (a.yp != b.yp) return a.yp < b.yp ? -1 : 1;
    if (a.up2 != b.up2) return a.up2 < b.up2 ? -1 : 1;
    if (a.logp != b.logp) return a.logp < b.logp ? -1 : 1;
    if (a.thp != b.thp) return a.thp < b.thp ? -1 : 1;
    if (a.formals != b.formals) return a.formals < b.formals ? -1 : 1;
    return const_mono_cmp(a.consts, b.consts);
  }

  bool is_constant_term() const {
    return xp == 0 && yp == 0 && up2 == 0 && logp == 0 && thp == 0 &&
           formals.empty();
  }
  bool has_formals() const { return !formals.empty(); }
};

inline Monomial mono_mul_raw(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.coeff = a.coeff * b.coeff;
  m.consts = const_mono_mul(a.consts, b.consts);
  m.xp = a.xp + b.xp;
  m.yp = a.yp + b.yp;
  m.up2 = a.up2 + b.up2;
  m.logp = a.logp + b.logp;
  m.thp = a.thp + b.thp;
  m.formals.resize(a.formals.size() + b.formals.size());
  std::merge(a.formals.begin(), a.formals.end(), b.formals.begin(),
             b.formals.end(), m.formals.begin());
  return m;
}

namespace detail {

inline long long binom(int n, int k) {
  long long r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - j + 1) / j;
  return r;
}

// Rewrites a raw monomial into canonical ones. Canonical form:
//  - u-powers that are nonnegative integers are expanded into x,y
//    polynomials; remaining monomials carry negative or half-odd u-powers;
//  - whenever a u-power remains, y^2 is reduced via y^2 = u - x^2 (and,
//    for negative y-powers, x^2 via x^2 = u - y^2), so the surviving
//    monomial basis is linearly independent.
inline void push_canonical(std::vector<Monomial>& out, Monomial m) {
  if (m.coeff.is_zero()) return;
  if (m.logp < 0 || m.thp < 0)
    throw Error("Monomial: negative log/theta power");
  const bool u_open = (m.up2 < 0) || (m.up2 % 2 != 0);
  if (!u_open && m.up2 > 0) {
    int n = m.up2 / 2;
    Monomial base = m;
    base.up2 = 0;
    for (int k = 0; k <= n; ++k) {
      Monomial t = base;
      t.coeff = base.coeff * GaussRat(binom(n, k));
      t.xp += 2 * k;
      t.yp += 2 * (n - k);
      push_canonical(out, t);
    }
    return;
  }
  if (u_open && m.yp >= 2) {
    Monomial a = m, b = m;
    a.yp -= 2;
    a.up2 += 2;
    b.yp -= 2;
    b.xp += 2;
    b.coeff = -b.coeff;
    push_canonical(out, a);
    push_canonical(out, b);
    return;
  }
  if (u_open && m.yp < 0 && m.xp >= 2) {
    Monomial a = m, b = m;
    a.xp -= 2;
    a.up2 += 2;
    b.xp -= 2;
    b.yp += 2;
    b.coeff = -b.coeff;
    push_canonical(out, a);
    push_canonical(out, b);
    return;
  }
  // both x,y powers negative: split via 1 = (x^2 + y^2)/u so such monomials
  // never coexist with the u-strata they overlap
  if (m.xp < 0 && m.yp < 0) {
    Monomial a = m, b = m;
    a.xp += 2;
    a.up2 -= 2;
    b.yp += 2;
    b.up2 -= 2;
    push_canonical(out, a);
    push_canonical(out, b);
    return;
  }
  out.push_back(std::move(m));
}

}  // namespace detail

// Canonical-form symbolic scalar expression: sorted, merged monomial list.
// Immutable in practice; every operation returns a fresh canonical value.
class Expr {
 public:
  Expr() = default;

  static Expr from_terms(std::vector<Monomial> raw) {
    std::vector<Monomial> expanded;
    expanded.reserve(raw.size());
    for (auto& m : raw) detail::push_canonical(expanded, std::move(m));
    std::sort(expanded.begin(), expanded.end(),
              [](const Monomial& a, const Monomial& b) {
                return Monomial::cmp_key(a, b) > 0;
              });
    std::vector<Monomial> merged;
    for (auto& m : expanded) {
      if (!merged.empty() && merged.back().same_key(m)) {
        merged.back().coeff += m.coeff;
        if (merged.back().coeff.is_zero()) merged.pop_back();
      } else {
        merged.push_back(std::move(m));
      }
    }
    Expr e;
    e.terms_ = std::move(merged);
    return e;
  }

  static Expr zero() { return Expr(); }
  static Expr rational(const Rational& q) { return scalar(GaussRat(q)); }
  static Expr integer(long long n) { return scalar(GaussRat(n)); }
  static Expr i() { return scalar(GaussRat::i()); }
  static Expr scalar(const GaussRat& c) {
    Monomial m;
    m.coeff = c;
    return from_terms({m});
  }
  static Expr x(int p = 1) {
    Monomial m;
    m.coeff = GaussRat(1);
    m.xp = p;
    return from_terms({m});
  }
  static Expr y(int p = 1) {
    Monomial m;
    m.coeff = GaussRat(1);
    m.yp = p;
    return from_terms({m});
  }
  // u^(num2/2); u_half(2) = u, u_half(1) = r, u_half(-2) = 1/u.
  static Expr u_half(int num2) {
    Monomial m;
    m.coeff = GaussRat(1);
    m.up2 = num2;
    return from_terms({m});
  }
  static Expr log_r(int p = 1) {
    Monomial m;
    m.coeff = GaussRat(1);
    m.logp = p;
    return from_terms({m});
  }
  static Expr theta(int p = 1) {
    Monomial m;
    m.coeff = GaussRat(1);
    m.thp = p;
    return from_terms({m});
  }
  static Expr constant(const SymbolicConstant& c, int p = 1) {
    Monomial m;
    m.coeff = GaussRat(1);
    if (p != 0) m.consts.push_back({c, p});
    return from_terms({m});
  }
  static Expr formal_factor(const FormalDerivative& f) {
    Monomial m;
    m.coeff = GaussRat(1);
    m.formals.push_back(f);
    return from_terms({m});
  }

  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool is_constant() const {
    for (const auto& m : terms_)
      if (!m.is_constant_term()) return false;
    return true;
  }
  bool has_formals() const {
    for (const auto& m : terms_)
      if (m.has_formals()) return true;
    return false;
  }

  // Splits into (constant part, non-constant part).
  std::pair<Expr, Expr> split_constant() const {
    std::vector<Monomial> c, n;
    for (const auto& m : terms_)
      (m.is_constant_term() ? c : n).push_back(m);
    return {from_terms(std::move(c)), from_terms(std::move(n))};
  }

  friend Expr operator+(const Expr& a, const Expr& b) {
    std::vector<Monomial> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return from_terms(std::move(t));
  }
  friend Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
  Expr operator-() const {
    Expr e = *this;
    for (auto& m : e.terms_) m.coeff = -m.coeff;
    return e;
  }
  friend Expr operator*(const Expr& a, const Expr& b) {
    std::vector<Monomial> t;
    t.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ma : a.terms_)
      for (const auto& mb : b.terms_) t.push_back(mono_mul_raw(ma, mb));
    return from_terms(std::move(t));
  }
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  friend Expr operator*(const GaussRat& c, const Expr& e) {
    Expr r = e;
    for (auto& m : r.terms_) m.coeff *= c;
    if (c.is_zero()) r.terms_.clear();
    return r;
  }
  friend Expr operator*(const Rational& c, const Expr& e) {
    return GaussRat(c) * e;
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k) {
      if (!(a.terms_[k].coeff == b.terms_[k].coeff)) return false;
      if (!a.terms_[k].same_key(b.terms_[k])) return false;
    }
    return true;
  }
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  // Multiplicative inverse, defined for single-monomial expressions without
  // log/theta/formal content. Division elsewhere is out of scope.
  Expr monomial_inverse() const {
    if (terms_.size() != 1)
      throw Error("Expr: inverse requires a single monomial");
    const Monomial& m = terms_[0];
    if (m.logp != 0 || m.thp != 0 || !m.formals.empty())
      throw Error("Expr: inverse of log/theta/formal factor");
    Monomial r;
    r.coeff = m.coeff.inverse();
    r.consts = const_mono_inv(m.consts);
    r.xp = -m.xp;
    r.yp = -m.yp;
    r.up2 = -m.up2;
    return from_terms({r});
  }

  friend Expr operator/(const Expr& a, const Expr& b) {
    return a * b.monomial_inverse();
  }

  Expr pow(int k) const {
    if (k < 0) return monomial_inverse().pow(-k);
    Expr r = integer(1);
    Expr base = *this;
    while (k > 0) {
      if (k & 1) r *= base;
      if (k > 1) base *= base;
      k >>= 1;
    }
    return r;
  }

  // Leading coefficient in the canonical term order.
  GaussRat lead_coeff() const {
    if (terms_.empty()) return GaussRat();
    return terms_[0].coeff;
  }

  // Divides by the leading coefficient (no-op for zero).
  Expr monic() const {
    if (terms_.empty()) return *this;
    return lead_coeff().inverse() * (*this);
  }

 private:
  std::vector<Monomial> terms_;
};

// e1 proportional to e2 by a nonzero scalar; returns the scale if so.
inline bool proportional(const Expr& a, const Expr& b, GaussRat* scale = nullptr) {
  if (a.is_zero() && b.is_zero()) {
    if (scale) *scale = GaussRat(1);
    return true;
  }
  if (a.is_zero() || b.is_zero()) return false;
  if (a.terms().size() != b.terms().size()) return false;
  if (!a.terms()[0].same_key(b.terms()[0])) return false;
  GaussRat q = a.terms()[0].coeff / b.terms()[0].coeff;
  if (a == q * b) {
    if (scale) *scale = q;
    return true;
  }
  return false;
}

// --- numeric evaluation -----------------------------------------------------

using EvalEnv = std::map<SymbolicConstant, double>;

inline std::complex<double> eval(const Monomial& m, double x, double y,
                                 const EvalEnv& env) {
  if (!m.formals.empty())
    throw Error("eval: formal factor " + m.formals[0].str() +
                " has no numeric value");
  double u = x * x + y * y;
  double v = 1.0;
  v *= std::pow(x, m.xp);
  v *= std::pow(y, m.yp);
  if (m.up2 != 0) v *= std::pow(u, 0.5 * m.up2);
  if (m.logp != 0) v *= std::pow(0.5 * std::log(u), m.logp);
  if (m.thp != 0) v *= std::pow(std::atan2(y, x), m.thp);
  for (const auto& [c, e] : m.consts) {
    auto it = env.find(c);
    if (it == env.end()) throw Error("eval: unbound constant " + c.str());
    v *= std::pow(it->second, e);
  }
  return std::complex<double>(m.coeff.re().to_double(),
                              m.coeff.im().to_double()) *
         v;
}

inline std::complex<double> eval(const Expr& e, double x, double y,
                                 const EvalEnv& env = {}) {
  std::complex<double> s = 0.0;
  for (const auto& m : e.terms()) s += eval(m, x, y, env);
  return s;
}

}  // namespace spinorbit
