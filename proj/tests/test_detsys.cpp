#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spinorbit/detsys.hpp"
#include "spinorbit/pipeline.hpp"

using namespace spinorbit;

namespace {
Expr E(const std::string& s) { return parse_expression(s); }

const char* kFixtureDir = SPINORBIT_FIXTURE_DIR;

struct Rng {
  std::mt19937 gen{555u};
  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  }
  Expr poly(int deg) {
    std::vector<Monomial> t;
    for (int k = 0; k < 4; ++k) {
      Monomial m;
      m.coeff = GaussRat(uniform(-4, 4));
      m.xp = uniform(0, deg);
      m.yp = uniform(0, deg - m.xp);
      t.push_back(m);
    }
    return Expr::from_terms(std::move(t));
  }
};
}  // namespace

TEST_CASE("free particle momentum gives an empty system") {
  Operator h = build_hamiltonian(SystemKind::Generic);
  h = substitute_op(h, {FuncKind::V1, -1, ArgSig::Cartesian, Expr::zero()});
  h = substitute_op(h, {FuncKind::V0, -1, ArgSig::Cartesian, Expr::zero()});
  DeterminingSystem ds = derive_determining(h, Operator::p1());
  CHECK(ds.empty());
}

TEST_CASE("solve_leading recognizes the Killing block") {
  Operator h = build_hamiltonian(SystemKind::Generic);
  DeterminingSystem ds = derive_determining(h, build_ansatz(1));
  KillingSolution ks = solve_leading(ds);
  for (const auto& c : ds.block(2))
    CHECK(substitute_all(c.lhs, ks.bindings).is_zero());
  // a perturbed block is rejected
  DeterminingSystem bogus = ds;
  bogus.constraints[0].lhs = E("D[F1_0(x,y); x] + x");
  CHECK_THROWS_AS(solve_leading(bogus), Error);
}

TEST_CASE("exactness identities for the eliminations") {
  Rng rng;
  for (int iter = 0; iter < 100; ++iter) {
    Expr f1 = rng.poly(4), f2 = rng.poly(4), f3 = rng.poly(5);
    Expr a = diff(f1, Var::X);
    Expr b = diff(f2, Var::Y);
    Expr c = diff(f1, Var::Y) + diff(f2, Var::X);
    CHECK(eliminate_vector(a, b, c).is_zero());
    CHECK(eliminate_gradient(diff(f3, Var::X), diff(f3, Var::Y)).is_zero());
  }
}

TEST_CASE("verify_solution flags perturbed bindings") {
  Operator h = build_hamiltonian(SystemKind::Rotational);
  DeterminingSystem ds = derive_determining(h, build_ansatz(2));
  DeterminingSystem dsI = pipeline_detail::zero_g_constants(ds, {3, 4});
  DeterminingSystem second;
  for (auto& c : dsI.block(2)) second.constraints.push_back(c);
  std::vector<FormalBinding> bind{
      {FuncKind::V1, -1, ArgSig::RadialSq,
       E("-1/2*r2^-1*(gam[1] + 3/2*gam[2] + 3/2*gam[2]*log_r2) + gam[3]")}};
  for (int nu = 0; nu <= 1; ++nu) {
    bind.push_back({FuncKind::F1, nu, ArgSig::Cartesian,
                    pipeline_detail::case1_f1(nu)});
    bind.push_back({FuncKind::F2, nu, ArgSig::Cartesian,
                    pipeline_detail::case1_f2(nu)});
  }
  CHECK(verify_solution(second, bind).verified());
  // gam[3] -> gam[3] + 1 in one slot breaks it
  auto perturbed = bind;
  perturbed[0].value = substitute_const(
      perturbed[0].value, sym(ConstFamily::Gamma, 3),
      Expr::constant(sym(ConstFamily::Gamma, 3)) + Expr::integer(1));
  CHECK(!verify_solution(second, perturbed).verified());
}

TEST_CASE("satisfying bindings annihilate the commutator pointwise") {
  // the oscillator integral written in ansatz form: X+ = (i dx - gam y) I+
  Operator h = build_hamiltonian(SystemKind::Generic);
  Operator x1 = build_ansatz(1);
  DeterminingSystem ds = derive_determining(h, x1);
  Expr g = Expr::constant(sym(ConstFamily::Gamma));
  std::vector<FormalBinding> bind = {
      {FuncKind::V1, -1, ArgSig::Cartesian, g},
      {FuncKind::V0, -1, ArgSig::Cartesian,
       Rational(1, 2) * (g * g * (Expr::x(2) + Expr::y(2)))},
      {FuncKind::F1, 0, ArgSig::Cartesian, Expr::integer(-1)},
      {FuncKind::F1, 1, ArgSig::Cartesian, Expr::integer(-1)},
      {FuncKind::F2, 0, ArgSig::Cartesian, Expr::zero()},
      {FuncKind::F2, 1, ArgSig::Cartesian, Expr::zero()},
      {FuncKind::F3, 0, ArgSig::Cartesian, -(g * Expr::y())},
      {FuncKind::F3, 1, ArgSig::Cartesian, -(g * Expr::y())},
  };
  CHECK(verify_solution(ds, bind).verified());
  Operator hb = h, xb = x1;
  for (const auto& b : bind) {
    hb = substitute_op(hb, b);
    xb = substitute_op(xb, b);
  }
  Operator c = commutator(hb, xb);
  CHECK(c.is_zero());
  Rng rng;
  for (int k = 0; k < 5; ++k) {
    Spinor psi{rng.poly(3), rng.poly(3)};
    CHECK(apply(c, psi).is_zero());
  }
}

TEST_CASE("fixture parsing and matching") {
  auto lines = parse_fixture("# comment\n t1: x + y = 0\n t2: 2*x \n");
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].tag == "t1");
  CHECK(lines[0].lhs == E("x + y"));
  CHECK(lines[1].lhs == E("2*x"));
  CHECK_THROWS_AS(parse_fixture("notag\n"), Error);
  CHECK_THROWS_AS(parse_fixture("t: x = 1\n"), Error);
  std::vector<Constraint> derived = {
      {Sector::I, {0, 0}, E("3*x + 3*y")},
      {Sector::I, {0, 0}, E("x")},
  };
  FixtureMatch m = match_fixture(lines, derived);
  CHECK(m.matched_count == 2);
  CHECK(m.items[0].scale == GaussRat(3));
  // monomial-scale matching
  CHECK(proportional_monomial(E("2*x^3*r2^-1 + 2*x*y^2*r2^-1"), E("x")));
  CHECK(!proportional_monomial(E("x + y"), E("x - y")));
}

TEST_CASE("high-derivative reduction against gradient data") {
  Rng rng;
  for (int iter = 0; iter < 20; ++iter) {
    Expr f3 = rng.poly(4);
    Expr p = diff(f3, Var::X), q = diff(f3, Var::Y);
    // an expression containing second derivatives of F3_0
    Expr e = E("x*D[F3_0(x,y); x,x] + y*D[F3_0(x,y); x,y] "
               "- D[F3_0(x,y); y,y] + D[F3_0(x,y); x]");
    Expr reduced = reduce_high_derivatives(e, FuncKind::F3, 0, p, q);
    Expr direct =
        Expr::x() * diff(f3, Var::X, 2) +
        Expr::y() * diff(diff(f3, Var::X), Var::Y) - diff(f3, Var::Y, 2) +
        Expr::formal_factor(formal(FuncKind::F3, ArgSig::Cartesian, 1, 0, 0));
    CHECK(reduced == direct);
  }
}

TEST_CASE("an explicit second-order integral exists for the reduced branches") {
  // build the complete X2, including F3 by quadrature, and check [H, X2] = 0
  // as an operator identity
  struct Case {
    std::vector<int> zero_taus;
    const char* v1;
    const char* f;
  };
  for (const Case& cs : {Case{{1, 4, 5}, "1/6*alp[1]*x^-2 + alp[3]",
                              "1/72*alp[1]^2*x^-2 + 1/2*alp[3]^2*x^2"},
                         Case{{2, 5, 4}, "-1/2*alp[2]*x^-2 + alp[3]",
                              "1/8*alp[2]^2*x^-2 + 1/2*alp[3]^2*x^2"}}) {
    Operator h = build_hamiltonian(SystemKind::XProfile);
    Operator x2 = build_ansatz(2, {true});
    DeterminingSystem ds = derive_determining(h, x2);
    DeterminingSystem dsr = pipeline_detail::zero_g_constants(ds, cs.zero_taus);
    std::vector<FormalBinding> bind{
        {FuncKind::V1, -1, ArgSig::Profile, E(cs.v1)},
        {FuncKind::F, -1, ArgSig::Profile, E(cs.f)}};
    DeterminingSystem sub = substitute_system(dsr, bind);
    for (int nu = 0; nu <= 1; ++nu) {
      auto v = pipeline_detail::solve_vector_data(sub, nu);
      auto [f1p, f2p] = integrate_vector_pair(v.a, v.b, v.c);
      bind.push_back({FuncKind::F1, nu, ArgSig::Cartesian, f1p});
      bind.push_back({FuncKind::F2, nu, ArgSig::Cartesian, f2p});
    }
    DeterminingSystem bound = substitute_system(dsr, bind);
    for (int nu = 0; nu <= 1; ++nu) {
      auto g = pipeline_detail::solve_f3_data(bound, nu);
      Expr f3 = antiderive(g.p, Var::X);
      Expr rest = g.q - diff(f3, Var::Y);
      for (const auto& m : rest.terms()) REQUIRE(m.xp == 0);
      f3 += antiderive(rest, Var::Y);
      bind.push_back({FuncKind::F3, nu, ArgSig::Cartesian, f3});
    }
    Operator hb = h, xb = x2;
    for (const auto& b : bind) {
      hb = substitute_op(hb, b);
      xb = substitute_op(xb, b);
    }
    for (int nu = 0; nu <= 1; ++nu)
      for (int tau : cs.zero_taus) {
        Operator out;
        for (auto& [dm, c] : xb.terms())
          out.add_term(
              dm, SpinExpr{substitute_const(c.id, sym(ConstFamily::G, tau, nu),
                                            Expr::zero()),
                           substitute_const(c.s3, sym(ConstFamily::G, tau, nu),
                                            Expr::zero())});
        xb = out;
      }
    CHECK(commutator(hb, xb).is_zero());
  }
}

TEST_CASE("theorem pipelines succeed end to end") {
  PipelineContext ctx{kFixtureDir};
  auto rot = theorem1_rotational(ctx);
  auto xp = theorem1_xprofile(ctx);
  int leaves = 0;
  for (const auto& reports : {rot, xp}) {
    for (const auto& br : reports) {
      INFO(br.id);
      CHECK(br.all_ok());
      if (br.leaf) {
        ++leaves;
        CHECK(br.verdict == "constant");
      }
    }
  }
  CHECK(leaves == 8);
  // the forced-constraint records named by the theorem are present
  auto has_check = [](const std::vector<BranchReport>& rs,
                      const std::string& id, const std::string& tag) {
    for (const auto& br : rs) {
      if (br.id != id) continue;
      for (const auto& c : br.checks)
        if (c.tag == tag && c.ok()) return true;
    }
    return false;
  };
  CHECK(has_check(rot, "rotational/caseI", "theta terms force gam[2] = 0"));
  CHECK(has_check(rot, "rotational/caseII",
                  "first harmonic forces chi[1]*chi[5/6,nu] = 0"));
  CHECK(has_check(rot, "rotational/caseII/chi5=chi6=0",
                  "zero-order equations force chi[1] = 0"));
  CHECK(has_check(xp, "x-profile/A/reduced", "compatibility forces fc[2] = 0"));
  CHECK(has_check(xp, "x-profile/identification",
                  "alp2 -> -alp1/3 identifies the potential pairs"));
}
