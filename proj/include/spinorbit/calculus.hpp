#pragma once

#include <map>
#include <optional>
#include <vector>

#include "spinorbit/expr.hpp"
#include "spinorbit/polar.hpp"
#include "spinorbit/radial.hpp"

namespace spinorbit {

enum class Var : std::uint8_t { X, Y };

namespace detail {

// Monomial with one factor removed/adjusted; helper for product-rule terms.
inline Monomial with_coeff(const Monomial& m, const GaussRat& c) {
  Monomial r = m;
  r.coeff = c;
  return r;
}

}  // namespace detail

// Partial derivative d/dx or d/dy. Closed on the monomial class: derivatives
// of theta and log r are rational in x, y, u; formal factors raise their
// derivative multi-index (IV1' = V1).
inline Expr diff(const Expr& e, Var v) {
  std::vector<Monomial> out;
  const bool dx = (v == Var::X);
  for (const auto& m : e.terms()) {
    // power of x or y
    {
      int p = dx ? m.xp : m.yp;
      if (p != 0) {
        Monomial t = m;
        t.coeff *= GaussRat(p);
        (dx ? t.xp : t.yp) -= 1;
        out.push_back(t);
      }
    }
    // u^(up2/2): d/dx = up2 * x * u^((up2-2)/2)
    if (m.up2 != 0) {
      Monomial t = m;
      t.coeff *= GaussRat(m.up2);
      t.up2 -= 2;
      (dx ? t.xp : t.yp) += 1;
      out.push_back(t);
    }
    // (log r)^k: d/dx log r = x/u, d/dy = y/u
    if (m.logp != 0) {
      Monomial t = m;
      t.coeff *= GaussRat(m.logp);
      t.logp -= 1;
      t.up2 -= 2;
      (dx ? t.xp : t.yp) += 1;
      out.push_back(t);
    }
    // theta^k: d/dx theta = -y/u, d/dy theta = x/u
    if (m.thp != 0) {
      Monomial t = m;
      t.coeff *= GaussRat(dx ? -m.thp : m.thp);
      t.thp -= 1;
      t.up2 -= 2;
      (dx ? t.yp : t.xp) += 1;
      out.push_back(t);
    }
    // formal factors
    for (std::size_t k = 0; k < m.formals.size(); ++k) {
      const FormalDerivative& f = m.formals[k];
      Monomial t = m;
      t.formals.erase(t.formals.begin() + k);
      auto attach = [&](const FormalDerivative& g) {
        auto pos = std::lower_bound(t.formals.begin(), t.formals.end(), g);
        t.formals.insert(pos, g);
      };
      switch (f.sig) {
        case ArgSig::Cartesian: {
          FormalDerivative g = f;
          (dx ? g.dx : g.dy) += 1;
          attach(g);
          out.push_back(t);
          break;
        }
        case ArgSig::RadialSq: {
          // d/dx f(u) = 2x f'(u)
          FormalDerivative g = f;
          g.dx += 1;
          attach(g);
          t.coeff *= GaussRat(2);
          (dx ? t.xp : t.yp) += 1;
          out.push_back(t);
          break;
        }
        case ArgSig::Radial: {
          // d/dx f(r) = (x/r) f'(r)
          FormalDerivative g = f;
          g.dx += 1;
          attach(g);
          (dx ? t.xp : t.yp) += 1;
          t.up2 -= 1;
          out.push_back(t);
          break;
        }
        case ArgSig::Profile: {
          if (!dx) break;  // d/dy f(x) = 0
          if (f.kind == FuncKind::IV1 && f.dx == 0) {
            attach(formal(FuncKind::V1, ArgSig::Profile, 0));
          } else {
            FormalDerivative g = f;
            g.dx += 1;
            attach(g);
          }
          out.push_back(t);
          break;
        }
      }
    }
  }
  return Expr::from_terms(std::move(out));
}

inline Expr diff(const Expr& e, Var v, int n) {
  Expr r = e;
  for (int k = 0; k < n; ++k) r = diff(r, v);
  return r;
}

// d/dr on radially symmetric expressions.
inline Expr diff_r(const Expr& e) {
  return RadialSeries::from_expr(e).d_dr().to_expr();
}

// d/du on radially symmetric expressions with integer u-powers.
inline Expr diff_u(const Expr& e) {
  return RadialSeries::from_expr(e).d_du().to_expr();
}

// d/dx on profile expressions (pure powers of x plus profile formals).
inline Expr diff_x_profile(const Expr& e) { return diff(e, Var::X); }

// Rewrites every RadialSq-signature formal derivative f^{(k)}(u) into d/dr
// derivatives f_{,r...}(r) with coefficients in the monomial class, using
// d/du = (1/(2r)) d/dr. Rejects Cartesian/Profile formal factors.
inline Expr radial_reduce(const Expr& e) {
  // reduce one formal of RadialSq signature and derivative order k
  auto reduce_formal = [](FuncKind kind, int nu, int k) -> Expr {
    Expr cur =
        Expr::formal_factor(FormalDerivative{kind, nu, ArgSig::Radial, 0, 0});
    for (int j = 0; j < k; ++j) {
      // apply d/du = (1/2) u^(-1/2) d/dr
      cur = Rational(1, 2) * (Expr::u_half(-1) * diff_r(cur));
    }
    return cur;
  };
  std::vector<Monomial> pending = e.terms();
  Expr result;
  for (auto& m : pending) {
    Expr term = Expr::from_terms({detail::with_coeff(m, m.coeff)});
    bool changed = true;
    while (changed) {
      changed = false;
      // find a RadialSq formal in some term and rewrite it
      for (const auto& t : term.terms()) {
        for (std::size_t k = 0; k < t.formals.size(); ++k) {
          const auto& f = t.formals[k];
          if (f.sig == ArgSig::Cartesian || f.sig == ArgSig::Profile)
            throw Error("radial_reduce: non-radial formal factor " + f.str());
          if (f.sig == ArgSig::RadialSq) {
            Monomial rest = t;
            rest.formals.erase(rest.formals.begin() + k);
            Expr remainder = term - Expr::from_terms({t});
            term = remainder + Expr::from_terms({rest}) *
                                   reduce_formal(f.kind, f.nu, f.dx);
            changed = true;
            break;
          }
        }
        if (changed) break;
      }
    }
    result += term;
  }
  return result;
}

// --- substitution ------------------------------------------------------------

// Binds a formal function to a concrete expression. The value's variable
// content must match the signature; derivatives of the value are taken with
// the signature's derivative operator.
struct FormalBinding {
  FuncKind kind;
  int nu = -1;
  ArgSig sig;
  Expr value;
};

namespace detail {

// Derivative tower of a bound value under its signature's derivative
// operator; radial signatures run over the raw RadialSeries view so positive
// u-powers survive repeated d/dr.
class BoundValue {
 public:
  BoundValue(ArgSig sig, const Expr& value) : sig_(sig) {
    switch (sig) {
      case ArgSig::Cartesian:
        cart_ = {value};
        break;
      case ArgSig::Radial:
      case ArgSig::RadialSq:
        radial_ = {RadialSeries::from_expr(value)};
        break;
      case ArgSig::Profile:
        for (const auto& m : value.terms()) {
          if (m.yp != 0 || m.up2 != 0 || m.logp != 0 || m.thp != 0)
            throw Error("substitute: value is not an x-profile");
          for (const auto& f : m.formals)
            if (f.sig != ArgSig::Profile)
              throw Error("substitute: value carries foreign formal factor");
        }
        cart_ = {value};
        break;
    }
  }

  Expr derivative(int dx, int dy) {
    if (sig_ == ArgSig::Radial || sig_ == ArgSig::RadialSq) {
      while (static_cast<int>(radial_.size()) <= dx)
        radial_.push_back(sig_ == ArgSig::Radial ? radial_.back().d_dr()
                                                 : radial_.back().d_du());
      return radial_[dx].to_expr();
    }
    auto key = std::make_pair(dx, dy);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Expr v = diff(diff(cart_[0], Var::X, dx), Var::Y, dy);
    cache_.emplace(key, v);
    return v;
  }

 private:
  ArgSig sig_;
  std::vector<Expr> cart_;
  std::vector<RadialSeries> radial_;
  std::map<std::pair<int, int>, Expr> cache_;
};

}  // namespace detail

// Replaces every formal derivative of the bound function by the matching
// concrete derivative of the bound value; the result is canonical.
inline Expr substitute(const Expr& e, const FormalBinding& binding) {
  detail::BoundValue bound(binding.sig, binding.value);
  Expr out;
  for (const auto& m : e.terms()) {
    Expr term = Expr::scalar(m.coeff);
    Monomial bare = m;
    bare.coeff = GaussRat(1);
    bare.formals.clear();
    term *= Expr::from_terms({bare});
    for (const auto& f : m.formals) {
      if (f.kind == binding.kind && f.nu == binding.nu) {
        if (f.sig != binding.sig)
          throw Error("substitute: signature mismatch on " + f.str());
        term *= bound.derivative(f.dx, f.dy);
      } else {
        term *= Expr::formal_factor(f);
      }
    }
    out += term;
  }
  return out;
}

inline Expr substitute_all(Expr e, const std::vector<FormalBinding>& bindings) {
  for (const auto& b : bindings) e = substitute(e, b);
  return e;
}

// Replaces a symbolic constant by a concrete expression. Negative powers of
// the constant require the replacement to be a single invertible monomial.
inline Expr substitute_const(const Expr& e, const SymbolicConstant& c,
                             const Expr& value) {
  Expr out;
  for (const auto& m : e.terms()) {
    int p = 0;
    Monomial rest = m;
    for (std::size_t k = 0; k < rest.consts.size(); ++k) {
      if (rest.consts[k].first == c) {
        p = rest.consts[k].second;
        rest.consts.erase(rest.consts.begin() + k);
        break;
      }
    }
    Expr term = Expr::from_terms({rest});
    if (p != 0) term *= value.pow(p);
    out += term;
  }
  return out;
}

// --- collection ---------------------------------------------------------------

enum class Atom : std::uint8_t { X, Y, U2, Log, Theta };

inline int atom_power(const Monomial& m, Atom a) {
  switch (a) {
    case Atom::X: return m.xp;
    case Atom::Y: return m.yp;
    case Atom::U2: return m.up2;
    case Atom::Log: return m.logp;
    case Atom::Theta: return m.thp;
  }
  return 0;
}

// Groups terms by the power of one atom, stripping that atom. The returned
// coefficients are free of it, and e = sum over k of atom^k * coeff[k].
inline std::map<int, Expr> collect_powers(const Expr& e, Atom a) {
  std::map<int, std::vector<Monomial>> groups;
  for (const auto& m : e.terms()) {
    Monomial t = m;
    int p = atom_power(m, a);
    switch (a) {
      case Atom::X: t.xp = 0; break;
      case Atom::Y: t.yp = 0; break;
      case Atom::U2: t.up2 = 0; break;
      case Atom::Log: t.logp = 0; break;
      case Atom::Theta: t.thp = 0; break;
    }
    groups[p].push_back(t);
  }
  std::map<int, Expr> out;
  for (auto& [p, v] : groups) {
    Expr g = Expr::from_terms(std::move(v));
    if (!g.is_zero()) out.emplace(p, std::move(g));
  }
  return out;
}

// collect() against a marker list; each marker must be a pure power of one
// shared atom. Key -1 holds the remainder (powers outside the marker set).
struct Collected {
  std::map<int, Expr> by_power;
  Expr remainder;
};

inline Collected collect(const Expr& e, Atom a, const std::vector<int>& powers) {
  Collected c;
  auto groups = collect_powers(e, a);
  for (auto& [p, coeff] : groups) {
    if (std::find(powers.begin(), powers.end(), p) != powers.end()) {
      c.by_power[p] = coeff;
    } else {
      Monomial marker;
      marker.coeff = GaussRat(1);
      switch (a) {
        case Atom::X: marker.xp = p; break;
        case Atom::Y: marker.yp = p; break;
        case Atom::U2: marker.up2 = p; break;
        case Atom::Log: marker.logp = p; break;
        case Atom::Theta: marker.thp = p; break;
      }
      c.remainder += Expr::from_terms({marker}) * coeff;
    }
  }
  return c;
}

// --- antiderivative -----------------------------------------------------------

// Termwise antiderivative with respect to x or y for expressions whose
// monomials are plain Laurent monomials in x and y (no u/log/theta content in
// the integration variable). Throws on x^-1-type terms.
inline Expr antiderive(const Expr& e, Var v) {
  std::vector<Monomial> out;
  const bool dx = (v == Var::X);
  for (const auto& m : e.terms()) {
    if (m.up2 != 0 || m.logp != 0 || m.thp != 0)
      throw Error("antiderive: term has u/log/theta dependence");
    for (const auto& f : m.formals)
      if (!(f.sig == ArgSig::Profile && !dx))
        throw Error("antiderive: formal factor depends on variable");
    int p = dx ? m.xp : m.yp;
    if (p == -1) throw Error("antiderive: x^-1 term has no monomial primitive");
    Monomial t = m;
    t.coeff *= GaussRat(Rational(1, p + 1));
    (dx ? t.xp : t.yp) += 1;
    out.push_back(t);
  }
  return Expr::from_terms(std::move(out));
}

// Angular momentum applied to a scalar function: L3 f = i (y f_x - x f_y).
inline Expr l3_of(const Expr& f) {
  return Expr::i() * (Expr::y() * diff(f, Var::X) - Expr::x() * diff(f, Var::Y));
}

}  // namespace spinorbit
