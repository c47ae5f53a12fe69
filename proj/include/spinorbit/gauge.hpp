#pragma once

#include <optional>
#include <utility>

#include "spinorbit/calculus.hpp"
#include "spinorbit/expr.hpp"

namespace spinorbit {

// Diagonal gauge transformation U = diag(e^{i alpha}, e^{-i alpha}) with
// alpha = alpha(y/x). Only alpha-dot (the kappa-derivative, stored as a
// degree-zero Expr in x and y) enters the potential transformation law;
// alpha itself is materialized when it integrates to c*theta or c*y/x,
// which covers every case the pipelines produce.
struct GaugeFunction {
  Expr alpha_dot;
  std::optional<Expr> alpha;

  static GaugeFunction identity() { return {Expr::zero(), Expr::zero()}; }
};

// (V0, V1) -> (V0 + (1 + y^2/x^2)(alpha_dot^2/(2x^2) + alpha_dot V1),
//              V1 + alpha_dot / x^2)
inline std::pair<Expr, Expr> transform(const Expr& v0, const Expr& v1,
                                       const GaugeFunction& g) {
  if (v0.has_formals() || v1.has_formals())
    throw Error("transform: potentials must be concrete");
  Expr ad = g.alpha_dot;
  Expr x2inv = Expr::x(-2);
  Expr v1t = v1 + ad * x2inv;
  Expr v0t = v0 + (Expr::integer(1) + Expr::y(2) * x2inv) *
                      (Rational(1, 2) * (ad * ad * x2inv) + ad * v1);
  return {v0t, v1t};
}

// Finds the gauge annulling the removable part of V1 (c/r^2 for rotational
// potentials, c/x^2 for x-profiles) and returns it with the normalized V1.
// Throws when the non-constant part is not of removable shape.
inline std::pair<GaugeFunction, Expr> normalize(const Expr& v1) {
  auto [constant, rest] = v1.split_constant();
  if (rest.is_zero()) return {GaugeFunction::identity(), v1};
  if (rest.terms().size() == 1) {
    const Monomial& m = rest.terms()[0];
    bool radial_term = m.xp == 0 && m.yp == 0 && m.up2 == -2 && m.logp == 0 &&
                       m.thp == 0 && m.formals.empty();
    bool profile_term = m.xp == -2 && m.yp == 0 && m.up2 == 0 && m.logp == 0 &&
                        m.thp == 0 && m.formals.empty();
    if (radial_term) {
      // c/u: alpha_dot = -c x^2/u integrates to -c theta
      Expr c = Expr::from_terms({detail::with_coeff(m, m.coeff)});
      Monomial cm = m;
      cm.up2 = 0;
      Expr cconst = Expr::from_terms({cm});
      GaugeFunction g;
      g.alpha_dot = -(cconst * Expr::x(2) * Expr::u_half(-2));
      g.alpha = -(cconst * Expr::theta());
      return {g, constant};
    }
    if (profile_term) {
      // c/x^2: alpha_dot = -c, alpha = -c y/x
      Monomial cm = m;
      cm.xp = 0;
      Expr cconst = Expr::from_terms({cm});
      GaugeFunction g;
      g.alpha_dot = -cconst;
      g.alpha = -(cconst * Expr::y() * Expr::x(-1));
      return {g, constant};
    }
  }
  throw Error("normalize: non-constant part of V1 is not gauge-removable");
}

}  // namespace spinorbit
