#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "spinorbit/calculus.hpp"
#include "spinorbit/expr.hpp"
#include "spinorbit/radial.hpp"

namespace spinorbit {

// --- univariate rational polynomials (characteristic polynomials) -------------

class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    trim();
  }
  static RationalPoly constant(const Rational& q) { return RationalPoly({q}); }
  static RationalPoly falling(int j) {
    // m (m-1) ... (m-j+1)
    RationalPoly p({Rational(1)});
    for (int k = 0; k < j; ++k) p = p * RationalPoly({Rational(-k), Rational(1)});
    return p;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }

  Rational eval(const Rational& m) const {
    Rational v(0);
    for (std::size_t k = c_.size(); k-- > 0;) v = v * m + c_[k];
    return v;
  }

  RationalPoly derivative() const {
    if (c_.size() <= 1) return RationalPoly();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k)
      d[k - 1] = c_[k] * Rational(static_cast<long long>(k));
    return RationalPoly(std::move(d));
  }

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
    std::vector<Rational> s(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) s[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) s[k] += b.c_[k];
    return RationalPoly(std::move(s));
  }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return RationalPoly();
    std::vector<Rational> p(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) p[i + j] += a.c_[i] * b.c_[j];
    return RationalPoly(std::move(p));
  }
  friend RationalPoly operator*(const Rational& q, const RationalPoly& b) {
    std::vector<Rational> p = b.c_;
    for (auto& v : p) v *= q;
    return RationalPoly(std::move(p));
  }
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
    return a.c_ == b.c_;
  }

  // Deflates by (m - root); the root must divide exactly.
  RationalPoly deflate(const Rational& root) const {
    std::vector<Rational> q(c_.size() - 1, Rational(0));
    Rational carry(0);
    for (std::size_t k = c_.size(); k-- > 1;) {
      carry = c_[k] + carry * root;
      q[k - 1] = carry;
    }
    if (!(c_[0] + carry * root == Rational(0)))
      throw Error("RationalPoly: deflation by a non-root");
    return RationalPoly(std::move(q));
  }

  // All rational roots with multiplicities; throws if the polynomial does not
  // factor completely over the rationals.
  std::map<Rational, int> rational_roots() const {
    if (is_zero()) throw Error("RationalPoly: zero polynomial has no roots");
    RationalPoly p = *this;
    std::map<Rational, int> roots;
    while (p.degree() > 0 && p.c_[0].is_zero()) {
      roots[Rational(0)] += 1;
      p = p.deflate(Rational(0));
    }
    while (p.degree() > 0) {
      // integerize and scan divisor candidates p/q
      long long scale = 1;
      for (const auto& c : p.c_) scale = std::lcm(scale, c.den());
      std::vector<long long> ic;
      for (const auto& c : p.c_) ic.push_back(c.num() * (scale / c.den()));
      long long a0 = std::llabs(ic.front()), an = std::llabs(ic.back());
      bool found = false;
      for (long long num = 1; num <= a0 && !found; ++num) {
        if (a0 % num != 0) continue;
        for (long long den = 1; den <= an && !found; ++den) {
          if (an % den != 0) continue;
          for (int sign = 1; sign >= -1 && !found; sign -= 2) {
            Rational cand(sign * num, den);
            if (p.eval(cand).is_zero()) {
              roots[cand] += 1;
              p = p.deflate(cand);
              found = true;
            }
          }
        }
      }
      if (!found)
        throw Error(
            "RationalPoly: no rational factorization; equation unsolvable by "
            "this module");
    }
    return roots;
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t k = c_.size(); k-- > 0;) {
      if (c_[k].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += c_[k].str();
      if (k > 0) s += "*m" + (k > 1 ? "^" + std::to_string(k) : "");
    }
    return s.empty() ? "0" : s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rational> c_;
};

// --- equidimensional ODEs -------------------------------------------------------

enum class OdeVar : std::uint8_t { R, X };

struct OdeTerm {
  Rational c;
  int power;  // monomial coefficient t^power
  int order;  // derivative order
};

// Linear ODE with monomial coefficients, c t^p V^(o), subject to the
// equidimensional constraint p - o = const across terms (so t^m maps to a
// multiple of t^(m+shift), and characteristic-root analysis applies).
class EquidimensionalODE {
 public:
  EquidimensionalODE(OdeVar var, std::vector<OdeTerm> terms)
      : var_(var), terms_(std::move(terms)) {
    if (terms_.empty()) throw Error("EquidimensionalODE: no terms");
    base_order_ = terms_[0].order;
    shift_ = terms_[0].power - terms_[0].order;
    for (const auto& t : terms_) {
      base_order_ = std::min(base_order_, t.order);
      if (t.power - t.order != shift_)
        throw Error("EquidimensionalODE: power - order is not constant");
      if (t.c.is_zero()) throw Error("EquidimensionalODE: zero coefficient");
    }
  }

  OdeVar var() const { return var_; }
  const std::vector<OdeTerm>& terms() const { return terms_; }
  int base_order() const { return base_order_; }
  int shift() const { return shift_; }
  int order() const {
    int n = 0;
    for (const auto& t : terms_) n = std::max(n, t.order);
    return n;
  }

  // p(m) with t^m mapping to p(m) t^(m+shift); roots (with multiplicity)
  // give the t^m log^k solution basis.
  RationalPoly characteristic_poly() const {
    RationalPoly p;
    for (const auto& t : terms_) p = p + t.c * RationalPoly::falling(t.order);
    return p;
  }

  // Applies the operator to a candidate, returning the canonical Expr.
  Expr apply(const Expr& candidate) const {
    if (var_ == OdeVar::R) {
      RadialSeries v = RadialSeries::from_expr(candidate);
      std::vector<RadialSeries> dv = {v};
      for (int k = 0; k < order(); ++k) dv.push_back(dv.back().d_dr());
      RadialSeries acc;
      for (const auto& t : terms_)
        acc = acc + dv[t.order].shifted(GaussRat(t.c), t.power);
      return acc.to_expr();
    }
    for (const auto& m : candidate.terms())
      if (m.yp != 0 || m.up2 != 0 || m.thp != 0)
        throw Error("EquidimensionalODE: candidate is not an x-profile");
    std::vector<Expr> dv = {candidate};
    for (int k = 0; k < order(); ++k) dv.push_back(diff(dv.back(), Var::X));
    Expr acc;
    for (const auto& t : terms_)
      acc += Rational(t.c) * (Expr::x(t.power) * dv[t.order]);
    return acc;
  }

 private:
  OdeVar var_;
  std::vector<OdeTerm> terms_;
  int base_order_;
  int shift_;
};

// --- solution bases -------------------------------------------------------------

struct BasisElement {
  Rational m;  // exponent of r (or x)
  int k;       // log power
  friend bool operator<(const BasisElement& a, const BasisElement& b) {
    if (!(a.m == b.m)) return a.m < b.m;
    return a.k < b.k;
  }
  friend bool operator==(const BasisElement& a, const BasisElement& b) {
    return a.m == b.m && a.k == b.k;
  }
};

struct RadialBasis {
  OdeVar var = OdeVar::R;
  std::vector<BasisElement> elems;  // sorted, distinct

  void normalize() {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  }
  std::size_t dim() const { return elems.size(); }
};

// Expr for one basis atom; integer exponents only (r^m = u^(m/2)).
inline Expr basis_expr(OdeVar var, const BasisElement& e) {
  if (!e.m.is_integer())
    throw Error("basis_expr: non-integer exponent has no Expr form");
  int m = static_cast<int>(e.m.num());
  if (var == OdeVar::R) {
    Monomial t;
    t.coeff = GaussRat(1);
    t.up2 = m;
    t.logp = e.k;
    return Expr::from_terms({t});
  }
  if (e.k != 0) throw Error("basis_expr: log atoms are radial-only here");
  return Expr::x(m);
}

// Full solution basis of the ODE from the characteristic roots; each root m
// of multiplicity mu contributes t^m log^j, j < mu. Every element is
// residual-checked before being returned.
inline RadialBasis solve_basis(const EquidimensionalODE& ode) {
  RadialBasis basis;
  basis.var = ode.var();
  auto roots = ode.characteristic_poly().rational_roots();
  for (const auto& [m, mult] : roots)
    for (int k = 0; k < mult; ++k) basis.elems.push_back({m, k});
  basis.normalize();
  for (const auto& e : basis.elems) {
    if (!e.m.is_integer()) continue;  // verified by construction only
    if (ode.var() == OdeVar::X && e.k > 0)
      throw Error("solve_basis: log solution on an x-profile equation");
    if (!ode.apply(basis_expr(ode.var(), e)).is_zero())
      throw Error("solve_basis: basis element has nonzero residual");
  }
  return basis;
}

// Exact span intersection by matching (exponent, log-power) atoms.
inline RadialBasis intersect(const RadialBasis& a, const RadialBasis& b) {
  if (a.var != b.var) throw Error("intersect: mixed variables");
  RadialBasis out;
  out.var = a.var;
  for (const auto& e : a.elems)
    if (std::find(b.elems.begin(), b.elems.end(), e) != b.elems.end())
      out.elems.push_back(e);
  out.normalize();
  return out;
}

// L(candidate); zero iff candidate solves the homogeneous equation.
inline Expr residual(const EquidimensionalODE& ode, const Expr& candidate) {
  return ode.apply(candidate);
}

// --- inhomogeneous solving -------------------------------------------------------

// Particular solution of L V = rhs by undetermined coefficients over the
// t^m log^k span, adding log powers at resonant exponents. The rhs carries
// Expr-valued (symbolic-constant) coefficients.
inline Expr solve_inhomogeneous(const EquidimensionalODE& ode, const Expr& rhs) {
  if (rhs.is_zero()) return Expr::zero();
  // decompose rhs into (exponent, logpow) -> constant Expr
  std::map<std::pair<int, int>, Expr> atoms;
  auto add_atom = [&](int e, int k, const Monomial& m) {
    Monomial c = m;
    c.up2 = 0;
    c.xp = 0;
    c.logp = 0;
    if (!c.formals.empty())
      throw Error("solve_inhomogeneous: rhs carries formal factors");
    atoms[{e, k}] += Expr::from_terms({c});
  };
  if (ode.var() == OdeVar::R) {
    RadialSeries s = RadialSeries::from_expr(rhs);
    for (const auto& m : s.terms()) add_atom(m.up2, m.logp, m);
  } else {
    for (const auto& m : rhs.terms()) {
      if (m.yp != 0 || m.up2 != 0 || m.thp != 0 || m.logp != 0)
        throw Error("solve_inhomogeneous: rhs is not an x-profile");
      add_atom(m.xp, 0, m);
    }
  }
  RationalPoly chi = ode.characteristic_poly();
  std::vector<RationalPoly> dchi = {chi};
  auto dchi_at = [&](int d) -> const RationalPoly& {
    while (static_cast<int>(dchi.size()) <= d)
      dchi.push_back(dchi.back().derivative());
    return dchi[d];
  };

  Expr solution;
  // group by exponent
  std::map<int, std::map<int, Expr>> by_exp;
  for (const auto& [key, c] : atoms) by_exp[key.first][key.second] = c;
  for (const auto& [e, logs] : by_exp) {
    Rational m = Rational(e) - Rational(ode.shift());
    int mult = 0;
    while (dchi_at(mult).eval(m).is_zero()) ++mult;
    int kmax = logs.rbegin()->first;
    // unknown coefficients c_s for s = mult .. kmax + mult; the action is
    //   L(t^m log^s) = t^e sum_j C(s,j) chi^(j)(m) log^(s-j)
    // triangular in s - j, solved top-down
    std::map<int, Expr> c;  // s -> Expr coefficient
    for (int j = kmax; j >= 0; --j) {
      Expr target;
      auto it = logs.find(j);
      if (it != logs.end()) target = it->second;
      // subtract contributions from already-known c_s, s > j + mult
      for (const auto& [s, cs] : c) {
        int d = s - j;
        if (d < 0 || d > s) continue;
        Rational f = Rational(detail::binom(s, d)) * dchi_at(d).eval(m);
        if (!f.is_zero()) target -= Rational(f) * cs;
      }
      int s = j + mult;
      Rational lead =
          Rational(detail::binom(s, mult)) * dchi_at(mult).eval(m);
      c[s] = Rational(lead.inverse()) * target;
    }
    if (!m.is_integer())
      throw Error("solve_inhomogeneous: non-integer particular exponent");
    for (const auto& [s, cs] : c) {
      if (cs.is_zero()) continue;
      solution += cs * basis_expr(ode.var(), {m, s});
    }
  }
  return solution;
}

// --- named equations of the engine's pipelines ----------------------------------

// r^3 V''' + 7 r^2 V'' + 9 r V' = 0
inline EquidimensionalODE ode_radial_first() {
  return EquidimensionalODE(OdeVar::R,
                            {{Rational(1), 3, 3}, {Rational(7), 2, 2},
                             {Rational(9), 1, 1}});
}

// r^2 V''' + 3 r V'' - 3 V' = 0
inline EquidimensionalODE ode_radial_second() {
  return EquidimensionalODE(OdeVar::R,
                            {{Rational(1), 2, 3}, {Rational(3), 1, 2},
                             {Rational(-3), 0, 1}});
}

// x V''' + 4 V'' = 0
inline EquidimensionalODE ode_profile_exception() {
  return EquidimensionalODE(OdeVar::X,
                            {{Rational(1), 1, 3}, {Rational(4), 0, 2}});
}

// 12 V' + 8 x V'' + x^2 V''' = 0
inline EquidimensionalODE ode_profile_reduced() {
  return EquidimensionalODE(OdeVar::X,
                            {{Rational(12), 0, 1}, {Rational(8), 1, 2},
                             {Rational(1), 2, 3}});
}

}  // namespace spinorbit
