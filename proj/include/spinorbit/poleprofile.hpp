#pragma once

#include <map>
#include <vector>

#include "spinorbit/expr.hpp"

namespace spinorbit {

// Profile functions with poles at x = 0 and x = -lambda, kept in
// partial-fraction form:
//   sum poly[k] x^k  +  sum pole0[k] x^-k  +  sum poleL[k] (x+lambda)^-k.
// Coefficients are constant Exprs; lambda is a single invertible monomial
// (a symbolic constant or an exact rational). Closed under d/dx and
// multiplication by powers of x, which is all the compatibility ODEs need.
class PoleProfile {
 public:
  explicit PoleProfile(Expr lambda) : lambda_(std::move(lambda)) {
    if (lambda_.terms().size() != 1)
      throw Error("PoleProfile: lambda must be a single monomial");
  }

  const Expr& lambda() const { return lambda_; }
  bool is_zero() const {
    return poly_.empty() && pole0_.empty() && poleL_.empty();
  }

  static PoleProfile atom(const Expr& lambda, int a, int b) {
    PoleProfile p(lambda);
    if (b >= 0) {
      for (int j = 0; j <= b; ++j)
        p.add_poly(b - j,
                   GaussRat(Rational(detail::binom(b, j))) * lambda.pow(j));
    } else {
      p.add_poleL(-b, Expr::integer(1));
    }
    for (int k = 0; k < a; ++k) p = p.mul_x();
    for (int k = 0; k > a; --k) p = p.mul_invx();
    return p;
  }

  PoleProfile scaled(const Expr& c) const {
    PoleProfile out(lambda_);
    for (const auto& [k, v] : poly_) out.add_poly(k, c * v);
    for (const auto& [k, v] : pole0_) out.add_pole0(k, c * v);
    for (const auto& [k, v] : poleL_) out.add_poleL(k, c * v);
    return out;
  }

  PoleProfile d_dx() const {
    PoleProfile out(lambda_);
    for (const auto& [k, v] : poly_)
      if (k > 0) out.add_poly(k - 1, GaussRat(k) * v);
    for (const auto& [k, v] : pole0_) out.add_pole0(k + 1, GaussRat(-k) * v);
    for (const auto& [k, v] : poleL_) out.add_poleL(k + 1, GaussRat(-k) * v);
    return out;
  }

  PoleProfile mul_x() const {
    PoleProfile out(lambda_);
    for (const auto& [k, v] : poly_) out.add_poly(k + 1, v);
    for (const auto& [k, v] : pole0_) {
      if (k == 1)
        out.add_poly(0, v);
      else
        out.add_pole0(k - 1, v);
    }
    // x (x+L)^-k = (x+L)^-(k-1) - L (x+L)^-k
    for (const auto& [k, v] : poleL_) {
      if (k == 1)
        out.add_poly(0, v);
      else
        out.add_poleL(k - 1, v);
      out.add_poleL(k, -(lambda_ * v));
    }
    return out;
  }

  PoleProfile mul_invx() const {
    PoleProfile out(lambda_);
    for (const auto& [k, v] : poly_) {
      if (k == 0)
        out.add_pole0(1, v);
      else
        out.add_poly(k - 1, v);
    }
    for (const auto& [k, v] : pole0_) out.add_pole0(k + 1, v);
    // 1/(x (x+L)^k) = (1/L) [ 1/(x (x+L)^(k-1)) - (x+L)^-k ]
    for (const auto& [k, v] : poleL_) {
      Expr linv = lambda_.monomial_inverse();
      Expr c = v;
      for (int j = k; j >= 1; --j) {
        out.add_poleL(j, -(linv * c));
        c = linv * c;
      }
      out.add_pole0(1, c);
    }
    return out;
  }

  friend PoleProfile operator+(const PoleProfile& a, const PoleProfile& b) {
    PoleProfile out = a;
    for (const auto& [k, v] : b.poly_) out.add_poly(k, v);
    for (const auto& [k, v] : b.pole0_) out.add_pole0(k, v);
    for (const auto& [k, v] : b.poleL_) out.add_poleL(k, v);
    return out;
  }
  friend PoleProfile operator-(const PoleProfile& a, const PoleProfile& b) {
    return a + b.scaled(Expr::integer(-1));
  }

  // Flattens to coordinates for exact rank computations; requires purely
  // rational coefficients (use after specializing the constants).
  std::vector<std::pair<std::pair<int, int>, GaussRat>> coordinates() const {
    std::vector<std::pair<std::pair<int, int>, GaussRat>> out;
    auto emit = [&](int kind, int k, const Expr& v) {
      if (v.is_zero()) return;
      if (v.terms().size() != 1 || !v.terms()[0].is_constant_term() ||
          !v.terms()[0].consts.empty())
        throw Error("PoleProfile: coordinates need rational coefficients");
      out.push_back({{kind, k}, v.terms()[0].coeff});
    };
    for (const auto& [k, v] : poly_) emit(0, k, v);
    for (const auto& [k, v] : pole0_) emit(1, k, v);
    for (const auto& [k, v] : poleL_) emit(2, k, v);
    return out;
  }

  const std::map<int, Expr>& poly() const { return poly_; }
  const std::map<int, Expr>& pole0() const { return pole0_; }
  const std::map<int, Expr>& poleL() const { return poleL_; }

  // Conversion to a plain Expr when no shifted poles remain.
  Expr to_expr() const {
    if (!poleL_.empty())
      throw Error("PoleProfile: shifted poles have no Expr form");
    Expr e;
    for (const auto& [k, v] : poly_) e += v * Expr::x(k);
    for (const auto& [k, v] : pole0_) e += v * Expr::x(-k);
    return e;
  }

 private:
  void add_poly(int k, const Expr& v) { accum(poly_, k, v); }
  void add_pole0(int k, const Expr& v) { accum(pole0_, k, v); }
  void add_poleL(int k, const Expr& v) { accum(poleL_, k, v); }
  static void accum(std::map<int, Expr>& m, int k, const Expr& v) {
    if (v.is_zero()) return;
    auto it = m.find(k);
    if (it == m.end()) {
      m.emplace(k, v);
    } else {
      it->second += v;
      if (it->second.is_zero()) m.erase(it);
    }
  }

  Expr lambda_;
  std::map<int, Expr> poly_;
  std::map<int, Expr> pole0_;
  std::map<int, Expr> poleL_;
};

// One term c(consts) x^p d^o of a profile ODE with non-monomial (shifted)
// solutions; applied over the PoleProfile class.
struct ProfileOdeTerm {
  Expr c;
  int xpow;
  int order;
};

inline PoleProfile apply_profile_ode(const std::vector<ProfileOdeTerm>& terms,
                                     const PoleProfile& v) {
  PoleProfile acc(v.lambda());
  std::vector<PoleProfile> dv = {v};
  int maxo = 0;
  for (const auto& t : terms) maxo = std::max(maxo, t.order);
  for (int k = 0; k < maxo; ++k) dv.push_back(dv.back().d_dx());
  for (const auto& t : terms) {
    PoleProfile p = dv[t.order].scaled(t.c);
    for (int k = 0; k < t.xpow; ++k) p = p.mul_x();
    acc = acc + p;
  }
  return acc;
}

}  // namespace spinorbit
