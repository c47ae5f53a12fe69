#pragma once

#include <vector>

#include "spinorbit/expr.hpp"
#include "spinorbit/polar.hpp"

namespace spinorbit {

// Raw radial series: sum of monomials in u^(k/2), log r, symbolic constants
// and radial-family formal factors, kept un-expanded (canonical Expr form
// would rewrite positive integer u-powers into x,y polynomials). Used
// wherever d/dr and d/du act: substitution of radial values, ODE residuals.
class RadialSeries {
 public:
  RadialSeries() = default;

  static RadialSeries from_terms(std::vector<Monomial> raw) {
    RadialSeries s;
    for (auto& m : raw) {
      if (m.coeff.is_zero()) continue;
      if (m.xp != 0 || m.yp != 0 || m.thp != 0)
        throw Error("RadialSeries: non-radial monomial");
      s.add(std::move(m));
    }
    return s;
  }

  // Projects a rotation-invariant Expr onto its radial series; canonical
  // polynomials like x^2 + y^2 come back as u-powers. Throws when the value
  // is not radially symmetric.
  static RadialSeries from_expr(const Expr& e) {
    RadialSeries s;
    for (const auto& m : e.terms()) {
      for (const auto& f : m.formals)
        if (f.sig == ArgSig::Cartesian || f.sig == ArgSig::Profile)
          throw Error("RadialSeries: non-radial formal factor " + f.str());
      if (m.thp != 0) throw Error("RadialSeries: theta factor");
      if (m.xp < 0 || m.yp < 0)
        throw Error("RadialSeries: negative x/y power is not radial");
      auto laurent = detail::trig_laurent(m.xp, m.yp);
      int off = m.xp + m.yp;
      GaussRat c0 = laurent[off];
      if (c0.is_zero()) continue;
      Monomial t = m;
      t.coeff = m.coeff * c0;
      t.xp = 0;
      t.yp = 0;
      t.up2 = m.up2 + m.xp + m.yp;
      s.add(std::move(t));
    }
    if (!(s.to_expr() == e))
      throw Error("RadialSeries: expression is not radial");
    return s;
  }

  Expr to_expr() const { return Expr::from_terms(terms_); }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  RadialSeries d_dr() const {
    RadialSeries out;
    for (const auto& m : terms_) {
      if (m.up2 != 0) {
        Monomial t = m;
        t.coeff *= GaussRat(m.up2);
        t.up2 -= 1;
        out.add(std::move(t));
      }
      if (m.logp != 0) {
        Monomial t = m;
        t.coeff *= GaussRat(m.logp);
        t.logp -= 1;
        t.up2 -= 1;
        out.add(std::move(t));
      }
      for (std::size_t k = 0; k < m.formals.size(); ++k) {
        Monomial t = m;
        if (m.formals[k].sig == ArgSig::Radial) {
          t.formals[k].dx += 1;
        } else if (m.formals[k].sig == ArgSig::RadialSq) {
          // d/dr f(u) = 2r f'(u)
          t.formals[k].dx += 1;
          t.coeff *= GaussRat(2);
          t.up2 += 1;
        } else {
          throw Error("RadialSeries: stray formal factor");
        }
        std::sort(t.formals.begin(), t.formals.end());
        out.add(std::move(t));
      }
    }
    return out;
  }

  RadialSeries d_du() const {
    RadialSeries out;
    for (const auto& m : terms_) {
      if (m.up2 % 2 != 0)
        throw Error("RadialSeries: d/du on half-integer u-power");
      if (m.up2 != 0) {
        Monomial t = m;
        t.coeff *= GaussRat(Rational(m.up2, 2));
        t.up2 -= 2;
        out.add(std::move(t));
      }
      if (m.logp != 0) {
        Monomial t = m;
        t.coeff *= GaussRat(Rational(m.logp, 2));
        t.logp -= 1;
        t.up2 -= 2;
        out.add(std::move(t));
      }
      for (std::size_t k = 0; k < m.formals.size(); ++k) {
        Monomial t = m;
        if (m.formals[k].sig == ArgSig::RadialSq) {
          t.formals[k].dx += 1;
        } else if (m.formals[k].sig == ArgSig::Radial) {
          // d/du f(r) = (1/(2r)) f'(r)
          t.formals[k].dx += 1;
          t.coeff *= GaussRat(Rational(1, 2));
          t.up2 -= 1;
        } else {
          throw Error("RadialSeries: stray formal factor");
        }
        std::sort(t.formals.begin(), t.formals.end());
        out.add(std::move(t));
      }
    }
    return out;
  }

  // multiply by q * u^(k/2) * log^l
  RadialSeries shifted(const GaussRat& q, int up2, int logp = 0) const {
    RadialSeries out;
    for (const auto& m : terms_) {
      Monomial t = m;
      t.coeff *= q;
      t.up2 += up2;
      t.logp += logp;
      out.add(std::move(t));
    }
    return out;
  }

  friend RadialSeries operator+(const RadialSeries& a, const RadialSeries& b) {
    RadialSeries out = a;
    for (const auto& m : b.terms_) out.add(m);
    return out;
  }
  friend RadialSeries operator-(const RadialSeries& a, const RadialSeries& b) {
    RadialSeries out = a;
    for (auto m : b.terms_) {
      m.coeff = -m.coeff;
      out.add(std::move(m));
    }
    return out;
  }

 private:
  void add(Monomial m) {
    if (m.coeff.is_zero()) return;
    for (auto& t : terms_) {
      if (t.same_key(m)) {
        t.coeff += m.coeff;
        if (t.coeff.is_zero()) {
          t = terms_.back();
          terms_.pop_back();
        }
        return;
      }
    }
    terms_.push_back(std::move(m));
  }

  std::vector<Monomial> terms_;
};

}  // namespace spinorbit
