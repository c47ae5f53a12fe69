#pragma once

#include <map>
#include <utility>
#include <vector>

#include "spinorbit/calculus.hpp"
#include "spinorbit/expr.hpp"

namespace spinorbit {

// Spin-diagonal coefficient a + b*s3 over the scalar expression ring; the
// product follows s3^2 = Id.
struct SpinExpr {
  Expr id;
  Expr s3;

  bool is_zero() const { return id.is_zero() && s3.is_zero(); }

  friend SpinExpr operator+(const SpinExpr& a, const SpinExpr& b) {
    return {a.id + b.id, a.s3 + b.s3};
  }
  friend SpinExpr operator-(const SpinExpr& a, const SpinExpr& b) {
    return {a.id - b.id, a.s3 - b.s3};
  }
  SpinExpr operator-() const { return {-id, -s3}; }
  friend SpinExpr operator*(const SpinExpr& a, const SpinExpr& b) {
    return {a.id * b.id + a.s3 * b.s3, a.id * b.s3 + a.s3 * b.id};
  }
  friend bool operator==(const SpinExpr& a, const SpinExpr& b) {
    return a.id == b.id && a.s3 == b.s3;
  }

  SpinExpr diffed(Var v) const { return {diff(id, v), diff(s3, v)}; }
};

inline SpinExpr spin_id(const Expr& e) { return {e, Expr::zero()}; }
inline SpinExpr spin_s3(const Expr& e) { return {Expr::zero(), e}; }

// d/dx^nx d/dy^ny
struct DerivMonomial {
  int nx = 0;
  int ny = 0;
  int order() const { return nx + ny; }
  friend bool operator<(const DerivMonomial& a, const DerivMonomial& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.nx < b.nx;
  }
  friend bool operator==(const DerivMonomial& a, const DerivMonomial& b) {
    return a.nx == b.nx && a.ny == b.ny;
  }
};

// Normal-ordered differential operator: coefficient functions multiply from
// the left, all derivatives stand to the right. Canonical map with no zero
// coefficients; equality is map equality.
class Operator {
 public:
  Operator() = default;

  static Operator term(DerivMonomial dm, SpinExpr c) {
    Operator op;
    if (!c.is_zero()) op.terms_.emplace(dm, std::move(c));
    return op;
  }
  static Operator mult(SpinExpr c) { return term({0, 0}, std::move(c)); }
  static Operator identity() { return mult(spin_id(Expr::integer(1))); }
  // p1 = -i d/dx
  static Operator p1() {
    return term({1, 0}, spin_id(-Expr::i()));
  }
  // p2 = -i d/dy
  static Operator p2() {
    return term({0, 1}, spin_id(-Expr::i()));
  }
  // L3 = i (y d/dx - x d/dy)
  static Operator l3() {
    Operator op;
    op.terms_.emplace(DerivMonomial{1, 0}, spin_id(Expr::i() * Expr::y()));
    op.terms_.emplace(DerivMonomial{0, 1}, spin_id(-(Expr::i() * Expr::x())));
    return op;
  }

  const std::map<DerivMonomial, SpinExpr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int order() const {
    int n = 0;
    for (const auto& [dm, c] : terms_) n = std::max(n, dm.order());
    return n;
  }

  SpinExpr coefficient(DerivMonomial dm) const {
    auto it = terms_.find(dm);
    return it == terms_.end() ? SpinExpr{} : it->second;
  }

  void add_term(DerivMonomial dm, const SpinExpr& c) {
    auto it = terms_.find(dm);
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_.emplace(dm, c);
    } else {
      SpinExpr s = it->second + c;
      if (s.is_zero())
        terms_.erase(it);
      else
        it->second = std::move(s);
    }
  }

  friend Operator operator+(const Operator& a, const Operator& b) {
    Operator r = a;
    for (const auto& [dm, c] : b.terms_) r.add_term(dm, c);
    return r;
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    Operator r = a;
    for (const auto& [dm, c] : b.terms_) r.add_term(dm, -c);
    return r;
  }
  Operator& operator+=(const Operator& o) { return *this = *this + o; }
  Operator& operator-=(const Operator& o) { return *this = *this - o; }

  static Operator scale(const GaussRat& q, const Operator& a) {
    Operator r;
    Expr s = Expr::scalar(q);
    for (const auto& [dm, c] : a.terms_)
      r.add_term(dm, SpinExpr{s * c.id, s * c.s3});
    return r;
  }
  static Operator scale(const Expr& s, const Operator& a) {
    Operator r;
    for (const auto& [dm, c] : a.terms_)
      r.add_term(dm, SpinExpr{s * c.id, s * c.s3});
    return r;
  }

  friend bool operator==(const Operator& a, const Operator& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const Operator& a, const Operator& b) {
    return !(a == b);
  }

 private:
  std::map<DerivMonomial, SpinExpr> terms_;
};

// Normal-ordered product. The generalized Leibniz rule moves each derivative
// monomial through the right factor's coefficients:
//   d^i d^j (f .) = sum C(i,k) C(j,l) (d^(i-k) d^(j-l) f) d^k d^l.
inline Operator compose(const Operator& A, const Operator& B) {
  Operator out;
  for (const auto& [da, ca] : A.terms()) {
    for (const auto& [db, cb] : B.terms()) {
      // precompute mixed derivatives of cb up to (da.nx, da.ny)
      std::vector<std::vector<SpinExpr>> d(da.nx + 1,
                                           std::vector<SpinExpr>(da.ny + 1));
      d[0][0] = cb;
      for (int i = 0; i <= da.nx; ++i)
        for (int j = 0; j <= da.ny; ++j) {
          if (i > 0)
            d[i][j] = d[i - 1][j].diffed(Var::X);
          else if (j > 0)
            d[i][j] = d[i][j - 1].diffed(Var::Y);
        }
      for (int k = 0; k <= da.nx; ++k) {
        for (int l = 0; l <= da.ny; ++l) {
          GaussRat c(detail::binom(da.nx, k) * detail::binom(da.ny, l));
          const SpinExpr& df = d[da.nx - k][da.ny - l];
          SpinExpr coeff = ca * df;
          coeff.id = c * coeff.id;
          coeff.s3 = c * coeff.s3;
          out.add_term({k + db.nx, l + db.ny}, coeff);
        }
      }
    }
  }
  return out;
}

inline Operator commutator(const Operator& A, const Operator& B) {
  return compose(A, B) - compose(B, A);
}

inline Operator anticommutator(const Operator& A, const Operator& B) {
  return compose(A, B) + compose(B, A);
}

// Spinor of two concrete scalar components.
struct Spinor {
  Expr up;
  Expr dn;
  bool is_zero() const { return up.is_zero() && dn.is_zero(); }
  friend bool operator==(const Spinor& a, const Spinor& b) {
    return a.up == b.up && a.dn == b.dn;
  }
};

// Componentwise action on a concrete spinor; s3 flips the sign of the lower
// component. Rejects formal factors in the argument.
inline Spinor apply(const Operator& A, const Spinor& psi) {
  if (psi.up.has_formals() || psi.dn.has_formals())
    throw Error("apply: spinor must be concrete");
  Spinor out;
  for (const auto& [dm, c] : A.terms()) {
    Expr du = diff(diff(psi.up, Var::X, dm.nx), Var::Y, dm.ny);
    Expr dn = diff(diff(psi.dn, Var::X, dm.nx), Var::Y, dm.ny);
    out.up += (c.id + c.s3) * du;
    out.dn += (c.id - c.s3) * dn;
  }
  return out;
}

// Binds a formal function inside every coefficient of an operator.
inline Operator substitute_op(const Operator& A, const FormalBinding& binding) {
  Operator out;
  for (const auto& [dm, c] : A.terms())
    out.add_term(dm, SpinExpr{substitute(c.id, binding),
                              substitute(c.s3, binding)});
  return out;
}

// --- builders -------------------------------------------------------------------

enum class SystemKind : std::uint8_t { Generic, Rotational, XProfile, Oscillator };

// The Hamiltonian (1/2)(p1^2 + p2^2) + V0 + V1 s3 L3 + (1/2) s3 (L3 V1) for
// each potential class. The oscillator takes V1 = gam constant,
// V0 = gam^2 (x^2+y^2)/2.
inline Operator build_hamiltonian(SystemKind kind) {
  Operator p1 = Operator::p1(), p2 = Operator::p2(), l3 = Operator::l3();
  Operator kinetic = Operator::scale(
      GaussRat(Rational(1, 2)), compose(p1, p1) + compose(p2, p2));
  Expr v0, v1;
  switch (kind) {
    case SystemKind::Generic:
      v0 = Expr::formal_factor(formal(FuncKind::V0, ArgSig::Cartesian));
      v1 = Expr::formal_factor(formal(FuncKind::V1, ArgSig::Cartesian));
      break;
    case SystemKind::Rotational:
      v0 = Expr::formal_factor(formal(FuncKind::V0, ArgSig::RadialSq));
      v1 = Expr::formal_factor(formal(FuncKind::V1, ArgSig::RadialSq));
      break;
    case SystemKind::XProfile: {
      v1 = Expr::formal_factor(formal(FuncKind::V1, ArgSig::Profile));
      v0 = Rational(1, 2) * (Expr::y(2) * v1 * v1) +
           Expr::formal_factor(formal(FuncKind::F, ArgSig::Profile));
      break;
    }
    case SystemKind::Oscillator: {
      Expr g = Expr::constant(sym(ConstFamily::Gamma));
      v1 = g;
      v0 = Rational(1, 2) * (g * g * (Expr::x(2) + Expr::y(2)));
      break;
    }
  }
  Operator H = kinetic + Operator::mult(spin_id(v0));
  H += compose(Operator::mult(spin_s3(v1)), l3);
  H += Operator::mult(spin_s3(Rational(1, 2) * l3_of(v1)));
  return H;
}

struct AnsatzOptions {
  bool include_l3sq = false;
};

// General integral-of-motion ansatz. Order 1:
//   (1/2){F1, p1} + (1/2){F2, p2} + F3
// with unknown Cartesian F_mu = F_mu0 + F_mu1 s3. Order 2 adds the
// constant-coefficient blocks G1 (L3p1+p1L3) + G2 (L3p2+p2L3) + G3 (p1^2-p2^2)
// + 2 G4 p1p2 and, when requested, G5 L3^2.
inline Operator build_ansatz(int order, AnsatzOptions opt = {}) {
  if (order != 1 && order != 2) throw Error("build_ansatz: order must be 1 or 2");
  auto fmu = [](FuncKind k) {
    return SpinExpr{
        Expr::formal_factor(FormalDerivative{k, 0, ArgSig::Cartesian, 0, 0}),
        Expr::formal_factor(FormalDerivative{k, 1, ArgSig::Cartesian, 0, 0})};
  };
  Operator p1 = Operator::p1(), p2 = Operator::p2(), l3 = Operator::l3();
  Operator half = Operator::mult(spin_id(Expr::rational(Rational(1, 2))));
  Operator X = compose(half, anticommutator(Operator::mult(fmu(FuncKind::F1)), p1));
  X += compose(half, anticommutator(Operator::mult(fmu(FuncKind::F2)), p2));
  X += Operator::mult(fmu(FuncKind::F3));
  if (order == 2) {
    auto gtau = [](int tau) {
      return SpinExpr{Expr::constant(sym(ConstFamily::G, tau, 0)),
                      Expr::constant(sym(ConstFamily::G, tau, 1))};
    };
    X += compose(Operator::mult(gtau(1)),
                 compose(l3, p1) + compose(p1, l3));
    X += compose(Operator::mult(gtau(2)),
                 compose(l3, p2) + compose(p2, l3));
    X += compose(Operator::mult(gtau(3)),
                 compose(p1, p1) - compose(p2, p2));
    X += compose(Operator::mult(gtau(4)),
                 Operator::scale(GaussRat(2), compose(p1, p2)));
    if (opt.include_l3sq)
      X += compose(Operator::mult(gtau(5)), compose(l3, l3));
  }
  return X;
}

}  // namespace spinorbit
