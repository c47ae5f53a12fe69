#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "spinorbit/io.hpp"
#include "spinorbit/operator.hpp"

using namespace spinorbit;

namespace {

Expr E(const std::string& s) { return parse_expression(s); }
Operator O(const std::string& s) { return parse_operator(s); }

struct Rng {
  std::mt19937 gen{987654u};
  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  }
  Expr poly(int deg) {
    std::vector<Monomial> t;
    for (int k = 0; k < 3; ++k) {
      Monomial m;
      m.coeff = GaussRat(Rational(uniform(-3, 3), uniform(1, 2)),
                         Rational(uniform(-1, 1)));
      m.xp = uniform(0, deg);
      m.yp = uniform(0, deg - m.xp);
      t.push_back(m);
    }
    return Expr::from_terms(std::move(t));
  }
  Operator op() {
    Operator A;
    for (int k = 0; k < 3; ++k) {
      DerivMonomial dm{uniform(0, 2), 0};
      dm.ny = uniform(0, 2 - dm.nx);
      A.add_term(dm, SpinExpr{poly(2), uniform(0, 1) ? poly(1) : Expr::zero()});
    }
    return A;
  }
  Spinor spinor() { return Spinor{poly(3), poly(3)}; }
};

}  // namespace

TEST_CASE("compose expands the Leibniz rule") {
  // d/dx against a function: (d f) + f d; built from p1 = -i d/dx
  Operator dx = Operator::scale(GaussRat::i(), Operator::p1());
  Operator f = Operator::mult(spin_id(E("V1(x,y)")));
  Operator c = compose(dx, f);
  CHECK(c.coefficient({0, 0}).id == E("D[V1(x,y); x]"));
  CHECK(c.coefficient({1, 0}).id == E("V1(x,y)"));
  CHECK(compose(Operator::p1(), Operator::p2()) ==
        compose(Operator::p2(), Operator::p1()));
}

TEST_CASE("s3 squares to the identity in products") {
  Operator a = O("s3*V1(r2)*L3");
  Operator sq = compose(a, a);
  for (const auto& [dm, c] : sq.terms()) CHECK(c.s3.is_zero());
  CHECK(!sq.is_zero());
}

TEST_CASE("basic commutators") {
  CHECK(commutator(Operator::p1(), Operator::p2()).is_zero());
  CHECK(commutator(Operator::l3(), Operator::p1()) == O("i*p2"));
  CHECK(commutator(Operator::l3(), Operator::p2()) == O("-i*p1"));
  CHECK(O("[L3, p1]") == O("i*p2"));
}

TEST_CASE("symmetrized product matches f*p1 + (1/2)(p1 f)") {
  Operator f = Operator::mult(spin_id(E("V1(x,y)")));
  Operator lhs = Operator::scale(GaussRat(Rational(1, 2)),
                                 anticommutator(f, Operator::p1()));
  Operator rhs = compose(f, Operator::p1()) +
                 Operator::mult(spin_id(Rational(1, 2) * (-Expr::i()) *
                                        E("D[V1(x,y); x]")));
  CHECK(lhs == rhs);
}

TEST_CASE("apply acts componentwise with s3 sign flip") {
  Operator s3 = O("s3");
  Spinor psi{E("x"), E("y^2")};
  Spinor r = apply(s3, psi);
  CHECK(r.up == E("x"));
  CHECK(r.dn == E("-y^2"));
  Spinor q = apply(O("p1^2"), Spinor{E("x^3"), Expr::zero()});
  CHECK(q.up == E("-6*x"));
  CHECK(q.dn.is_zero());
  Spinor l = apply(Operator::l3(), Spinor{E("x"), Expr::zero()});
  CHECK(l.up == E("i*y"));
  CHECK(l.dn.is_zero());
  CHECK_THROWS_AS(apply(s3, Spinor{E("V1(x,y)"), Expr::zero()}), Error);
}

TEST_CASE("normal ordering is sound under application") {
  Rng rng;
  for (int iter = 0; iter < 60; ++iter) {
    Operator A = rng.op(), B = rng.op();
    Spinor psi = rng.spinor();
    CHECK(apply(compose(A, B), psi) == apply(A, apply(B, psi)));
  }
}

TEST_CASE("compose is associative; commutators satisfy Jacobi") {
  Rng rng;
  for (int iter = 0; iter < 100; ++iter) {
    Operator A = rng.op(), B = rng.op(), C = rng.op();
    CHECK(commutator(A, B) == Operator() - commutator(B, A));
    Operator j = commutator(commutator(A, B), C) +
                 commutator(commutator(B, C), A) +
                 commutator(commutator(C, A), B);
    CHECK(j.is_zero());
  }
}

TEST_CASE("hamiltonian builders") {
  Operator h = build_hamiltonian(SystemKind::Oscillator);
  CHECK(h == O("1/2*p1^2 + 1/2*p2^2 + 1/2*gam^2*x^2 + 1/2*gam^2*y^2 "
               "+ gam*s3*L3"));
  Operator g = build_hamiltonian(SystemKind::Generic);
  Operator g0 =
      substitute_op(g, {FuncKind::V1, -1, ArgSig::Cartesian, Expr::zero()});
  CHECK(g0 == O("1/2*p1^2 + 1/2*p2^2 + V0(x,y)"));
  Operator xprof = build_hamiltonian(SystemKind::XProfile);
  Operator expect =
      O("1/2*p1^2 + 1/2*p2^2 + 1/2*y^2*V1(x)^2 + F(x) + V1(x)*s3*L3 "
        "+ 1/2*i*y*D[V1(x); x]*s3");
  CHECK(xprof == expect);
}

TEST_CASE("ansatz slots") {
  Operator x1 = build_ansatz(1);
  SpinExpr c = x1.coefficient({1, 0});
  CHECK(c.id == E("-i*F1_0(x,y)"));
  CHECK(c.s3 == E("-i*F1_1(x,y)"));
  auto count_G = [](const Operator& op) {
    std::set<int> taus;
    for (const auto& [dm, s] : op.terms())
      for (const Expr* e : {&s.id, &s.s3})
        for (const auto& m : e->terms())
          for (const auto& [sc, p] : m.consts)
            if (sc.fam == ConstFamily::G) taus.insert(sc.i0);
    return taus.size();
  };
  CHECK(count_G(build_ansatz(2)) == 4);
  CHECK(count_G(build_ansatz(2, {true})) == 5);
}

TEST_CASE("known first-order integrals commute with their hamiltonians") {
  Operator h = build_hamiltonian(SystemKind::Rotational);
  Operator x = compose(Operator::mult(SpinExpr{E("w[0]"), E("w[1]")}),
                       Operator::l3());
  CHECK(commutator(h, x).is_zero());
  Operator hx = build_hamiltonian(SystemKind::XProfile);
  Operator xx = O("p2 - s3*IV1(x)");
  CHECK(commutator(hx, xx).is_zero());
}

TEST_CASE("operator print/parse round trip") {
  Rng rng;
  for (int iter = 0; iter < 40; ++iter) {
    Operator A = rng.op();
    CHECK(parse_operator(print_operator(A)) == A);
  }
  CHECK(print_operator(Operator()) == "0");
  Operator half_anti = O("1/2*{V1(x), p2}");
  CHECK(half_anti ==
        Operator::scale(GaussRat(Rational(1, 2)),
                        anticommutator(Operator::mult(spin_id(E("V1(x)"))),
                                       Operator::p2())));
  // scalar division inside operator products
  CHECK(O("{V1(x), p2}/2") == half_anti);
  CHECK(O("L3^2/4") == Operator::scale(GaussRat(Rational(1, 4)),
                                       compose(Operator::l3(),
                                               Operator::l3())));
  CHECK_THROWS_AS(O("p1/L3"), ParseError);
}
