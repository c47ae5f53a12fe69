#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "spinorbit/calculus.hpp"
#include "spinorbit/expr.hpp"
#include "spinorbit/io.hpp"
#include "spinorbit/polar.hpp"

using namespace spinorbit;

namespace {

Expr E(const std::string& s) { return parse_expression(s); }

// Random generator for property tests: monomials over x, y, u^(k/2), log r,
// theta, two constants and the radial formals, with small rational
// coefficients.
struct Rng {
  std::mt19937 gen{20240811u};
  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  }
  Monomial monomial(bool with_atoms = true) {
    Monomial m;
    m.coeff = GaussRat(Rational(uniform(-5, 5), uniform(1, 3)));
    if (m.coeff.is_zero()) m.coeff = GaussRat(1);
    m.xp = uniform(-2, 3);
    m.yp = uniform(-2, 3);
    if (with_atoms) {
      m.up2 = uniform(-3, 2);
      m.logp = uniform(0, 2);
      m.thp = uniform(0, 1);
      if (uniform(0, 3) == 0)
        m.consts.push_back({sym(ConstFamily::Gamma, 1), uniform(1, 2)});
      if (uniform(0, 4) == 0)
        m.formals.push_back(formal(FuncKind::V1, ArgSig::RadialSq, uniform(0, 2)));
      std::sort(m.formals.begin(), m.formals.end());
    }
    return m;
  }
  Expr expr(int nterms, bool with_atoms = true) {
    std::vector<Monomial> t;
    for (int k = 0; k < nterms; ++k) t.push_back(monomial(with_atoms));
    return Expr::from_terms(std::move(t));
  }
  Expr poly(int deg) {
    std::vector<Monomial> t;
    for (int k = 0; k < 5; ++k) {
      Monomial m;
      m.coeff = GaussRat(uniform(-4, 4));
      m.xp = uniform(0, deg);
      m.yp = uniform(0, deg - m.xp);
      t.push_back(m);
    }
    return Expr::from_terms(std::move(t));
  }
};

double fd_derivative(const Expr& e, double x, double y, double h) {
  auto f = [&](double t) { return eval(e, t, y).real(); };
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
         (12 * h);
}

}  // namespace

TEST_CASE("canonicalization merges and kills hidden zeros") {
  CHECK(E("x*y - y*x").is_zero());
  CHECK(E("2*x*y + 3*x*y") == E("5*x*y"));
  CHECK(E("x^2 + y^2 - r2").is_zero());
  CHECK(E("x^2*r2^-1 + y^2*r2^-1 - 1").is_zero());
  CHECK(E("(x^2+y^2)^3 - r2^3").is_zero());
  // y^2 reduction against half powers: y^2*r = r^3 - x^2*r
  CHECK(E("y^2*r2^(1/2) - r2^(3/2) + x^2*r2^(1/2)").is_zero());
  // negative-power interplay
  CHECK(E("y^-1 - x^2*y^-1*r2^-1 - y*r2^-1").is_zero());
  CHECK(E("x^2*y^-2*r2^-1 - y^-2 + r2^-1").is_zero());
}

TEST_CASE("canonicalize is order independent and idempotent") {
  Rng rng;
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<Monomial> terms;
    for (int k = 0; k < 6; ++k) terms.push_back(rng.monomial());
    std::vector<Monomial> shuffled = terms;
    std::shuffle(shuffled.begin(), shuffled.end(), rng.gen);
    Expr a = Expr::from_terms(terms);
    Expr b = Expr::from_terms(shuffled);
    CHECK(a == b);
    Expr c = Expr::from_terms(a.terms());
    CHECK(a == c);
  }
}

TEST_CASE("canonical zero matches numeric zero on random combinations") {
  Rng rng;
  for (int iter = 0; iter < 50; ++iter) {
    Expr a = rng.expr(3);
    // a*b - b*a is identically zero however represented
    Expr b = rng.expr(2);
    Expr z = a * b - b * a;
    CHECK(z.is_zero());
  }
}

TEST_CASE("derivatives of the basic atoms") {
  CHECK(diff(E("th"), Var::X) == E("-y*r2^-1"));
  CHECK(diff(E("th"), Var::Y) == E("x*r2^-1"));
  CHECK(diff(Expr::log_r(), Var::X) == E("x*r2^-1"));
  CHECK(diff(E("V1(r2)"), Var::X) == E("2*x*D[V1(r2); r2]"));
  CHECK(diff(E("V1(r)"), Var::X) == E("x*r2^(-1/2)*D[V1(r); r]"));
  CHECK(diff(E("F(x)"), Var::Y).is_zero());
  CHECK(diff(E("IV1(x)"), Var::X) == E("V1(x)"));
  CHECK(diff(E("r2^(1/2)"), Var::X) == E("x*r2^(-1/2)"));
}

TEST_CASE("finite-difference oracle for diff") {
  // d/dx of r^-2 log r along the y = 0 slice at x = 1.3
  Expr e = Expr::u_half(-2) * Expr::log_r();
  Expr de = diff(e, Var::X);
  double x = 1.3, y = 0.0;
  double sym = eval(de, x, y).real();
  double fd = fd_derivative(e, x, y, 1e-3);
  CHECK(std::abs(sym - fd) <= 1e-10);
}

TEST_CASE("Leibniz rule on random pairs") {
  Rng rng;
  for (int iter = 0; iter < 100; ++iter) {
    Expr a = rng.expr(3);
    Expr b = rng.expr(3);
    Var v = iter % 2 ? Var::X : Var::Y;
    CHECK(diff(a * b, v) == diff(a, v) * b + a * diff(b, v));
  }
}

TEST_CASE("mixed partials commute") {
  Rng rng;
  for (int iter = 0; iter < 100; ++iter) {
    Expr e = rng.expr(3);
    CHECK(diff(diff(e, Var::X), Var::Y) == diff(diff(e, Var::Y), Var::X));
  }
}

TEST_CASE("closure: double derivatives stay in the class") {
  Rng rng;
  for (int iter = 0; iter < 50; ++iter) {
    Expr e = Expr::from_terms({rng.monomial()});
    Expr d2 = diff(diff(e, Var::X), Var::X);
    for (const auto& m : d2.terms()) {
      CHECK(m.logp >= 0);
      CHECK(m.thp >= 0);
    }
  }
}

TEST_CASE("radial_reduce chain rules") {
  CHECK(radial_reduce(E("D[V1(r2); r2]")) ==
        E("1/2*r2^(-1/2)*D[V1(r); r]"));
  // d^2/dx^2 V1(u) written through d/dr derivatives
  Expr d2 = diff(diff(E("V1(r2)"), Var::X), Var::X);
  Expr red = radial_reduce(d2);
  Expr expected = E("x^2*r2^-1*D[V1(r); r,r] + r2^(-1/2)*D[V1(r); r] "
                    "- x^2*r2^(-3/2)*D[V1(r); r]");
  CHECK(red == expected);
  // constant V1: all radial derivatives vanish after substitution
  Expr c = substitute(red, {FuncKind::V1, -1, ArgSig::Radial,
                            Expr::constant(sym(ConstFamily::Gamma, 2))});
  CHECK(c.is_zero());
  CHECK_THROWS_AS(radial_reduce(E("D[V1(x,y); x]")), Error);
}

TEST_CASE("radial_reduce agrees with finite differences on V1(r) = r^4") {
  // with V1(u) = u^2, d^2/dx^2 V1 = 2u + 4x^2... check reduce+substitute
  Expr d2 = radial_reduce(diff(diff(E("V1(r2)"), Var::X), Var::X));
  Expr bound = substitute(d2, {FuncKind::V1, -1, ArgSig::Radial,
                               Expr::u_half(4)});  // r^4
  Expr direct = diff(diff(E("r2^2"), Var::X), Var::X);
  CHECK(bound == direct);
  double x = 0.7, y = -0.4;
  double fd = fd_derivative(diff(E("r2^2"), Var::X), x, y, 1e-3);
  CHECK(std::abs(eval(bound, x, y).real() - fd) <= 1e-8);
}

TEST_CASE("substitute examples") {
  // V1 := gam2 constant kills V1_r
  CHECK(substitute(E("D[V1(r); r]"),
                   {FuncKind::V1, -1, ArgSig::Radial,
                    Expr::constant(sym(ConstFamily::Gamma, 2))})
            .is_zero());
  // V1 := -gam1/(2 r^2) + gam2, second radial derivative
  Expr v1 = E("-1/2*gam[1]*r2^-1 + gam[2]");
  Expr d2 = substitute(E("D[V1(r); r,r]"),
                       {FuncKind::V1, -1, ArgSig::Radial, v1});
  CHECK(d2 == E("-3*gam[1]*r2^-2"));
  CHECK_THROWS_AS(substitute(E("V1(r)"), {FuncKind::V1, -1, ArgSig::Radial,
                                          Expr::x()}),
                  Error);
}

TEST_CASE("collect by y powers") {
  Expr e = E("a[0]*y + b[0]");
  auto parts = collect_powers(e, Atom::Y);
  CHECK(parts.at(1) == E("a[0]"));
  CHECK(parts.at(0) == E("b[0]"));
  CHECK(collect_powers(Expr::zero(), Atom::Y).empty());
  // marker-list form with a remainder bucket
  Collected c = collect(E("a[0]*y + b[0] + x*y^3"), Atom::Y, {0, 1});
  CHECK(c.by_power.at(1) == E("a[0]"));
  CHECK(c.by_power.at(0) == E("b[0]"));
  CHECK(c.remainder == E("x*y^3"));
  // reassembly identity
  Expr back = c.remainder;
  for (auto& [p, coeff] : c.by_power) back += Expr::y(p) * coeff;
  CHECK(back == E("a[0]*y + b[0] + x*y^3"));
}

TEST_CASE("division is restricted to monomial divisors") {
  CHECK(E("x^2*y") / E("x") == E("x*y"));
  CHECK(E("gam[2]*x") / E("gam[2]") == E("x"));
  CHECK_THROWS_AS(E("x") / E("x + y"), Error);
  CHECK_THROWS_AS(E("x") / E("log_r2"), Error);
  CHECK_THROWS_AS(E("x") / E("V1(x,y)"), Error);
}

TEST_CASE("polar form of the double angle identities") {
  PolarExpr p = polar_form(E("x^2 - y^2"));
  CHECK(p.radial_part(2, PolarExpr::Trig::Cos) == E("r2"));
  CHECK(p.radial_part(2, PolarExpr::Trig::Sin).is_zero());
  CHECK(p.radial_part(0, PolarExpr::Trig::Cos).is_zero());
  PolarExpr q = polar_form(E("2*x*y"));
  CHECK(q.radial_part(2, PolarExpr::Trig::Sin) == E("r2"));
  // G1 x + G2 y = r (G1 cos th + G2 sin th)
  PolarExpr g = polar_form(E("G[1,0]*x + G[2,0]*y"));
  CHECK(g.radial_part(1, PolarExpr::Trig::Cos) == E("G[1,0]*r2^(1/2)"));
  CHECK(g.radial_part(1, PolarExpr::Trig::Sin) == E("G[2,0]*r2^(1/2)"));
}

TEST_CASE("polar round trip on polynomials up to degree 6") {
  Rng rng;
  for (int iter = 0; iter < 40; ++iter) {
    Expr e = rng.poly(6);
    CHECK(to_cartesian(polar_form(e)) == e);
  }
  CHECK_THROWS_AS(polar_form(E("th^2*r2^-1")), Error);
}

TEST_CASE("printer and parser round trip") {
  Rng rng;
  for (int iter = 0; iter < 60; ++iter) {
    Expr e = rng.expr(4);
    CHECK(parse_expression(print_expr(e)) == e);
  }
  CHECK(print_expr(Expr::zero()) == "0");
  CHECK(parse_expression("0").is_zero());
  // grammar corner cases
  CHECK(E("log_r2") == GaussRat(2) * Expr::log_r());
  CHECK(E("-3/2*i*x^-2") == Expr::scalar(GaussRat(Rational(0), Rational(-3, 2))) *
                                Expr::x(-2));
  CHECK_THROWS_AS(E("x + * y"), ParseError);
  CHECK_THROWS_AS(E("qq[1]"), ParseError);
  try {
    E("x + * y");
  } catch (const ParseError& err) {
    CHECK(err.line == 1);
    CHECK(err.col == 5);
  }
}

TEST_CASE("antiderivative") {
  CHECK(antiderive(E("x^2*y"), Var::X) == E("1/3*x^3*y"));
  CHECK(antiderive(E("x^-2"), Var::X) == E("-x^-1"));
  CHECK_THROWS_AS(antiderive(E("x^-1"), Var::X), Error);
  Rng rng;
  for (int iter = 0; iter < 20; ++iter) {
    Expr e = rng.poly(4);
    CHECK(diff(antiderive(e, Var::Y), Var::Y) == e);
  }
}

TEST_CASE("substitute_const replaces constants") {
  Expr e = E("gam[2]^2*x + gam[1]");
  Expr r = substitute_const(e, sym(ConstFamily::Gamma, 2), Expr::zero());
  CHECK(r == E("gam[1]"));
  Expr s = substitute_const(e, sym(ConstFamily::Gamma, 2),
                            Expr::constant(sym(ConstFamily::Lambda, 1)));
  CHECK(s == E("lam[1]^2*x + gam[1]"));
}
