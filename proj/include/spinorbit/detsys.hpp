#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinorbit/io.hpp"
#include "spinorbit/operator.hpp"

namespace spinorbit {

enum class Sector : std::uint8_t { I, S3 };

inline const char* sector_name(Sector s) { return s == Sector::I ? "I" : "s3"; }

// One determining equation: the (sector, derivative-monomial) coefficient of
// [H, X], canonicalized, scaled to a unit leading coefficient, required to
// vanish.
struct Constraint {
  Sector sector;
  DerivMonomial deriv;
  Expr lhs;

  std::string str() const {
    return std::string(sector_name(sector)) + " d" + std::to_string(deriv.nx) +
           std::to_string(deriv.ny) + ": " + print_expr(lhs) + " = 0";
  }
};

struct DeterminingSystem {
  std::vector<Constraint> constraints;  // descending derivative order

  std::vector<Constraint> block(int order) const {
    std::vector<Constraint> out;
    for (const auto& c : constraints)
      if (c.deriv.order() == order) out.push_back(c);
    return out;
  }
  int max_order() const {
    int n = -1;
    for (const auto& c : constraints) n = std::max(n, c.deriv.order());
    return n;
  }
  bool empty() const { return constraints.empty(); }
};

// Splits [H, X] by derivative monomial and spin sector into canonical
// constraints; together they are equivalent to [H, X] = 0.
inline DeterminingSystem derive_determining(const Operator& H,
                                            const Operator& X) {
  Operator c = commutator(H, X);
  DeterminingSystem ds;
  for (auto it = c.terms().rbegin(); it != c.terms().rend(); ++it) {
    const auto& [dm, coeff] = *it;
    if (!coeff.id.is_zero())
      ds.constraints.push_back({Sector::I, dm, coeff.id.monic()});
    if (!coeff.s3.is_zero())
      ds.constraints.push_back({Sector::S3, dm, coeff.s3.monic()});
  }
  return ds;
}

inline DeterminingSystem substitute_system(
    const DeterminingSystem& ds, const std::vector<FormalBinding>& bindings) {
  DeterminingSystem out;
  for (const auto& c : ds.constraints) {
    Expr lhs = substitute_all(c.lhs, bindings);
    if (!lhs.is_zero()) out.constraints.push_back({c.sector, c.deriv, lhs.monic()});
  }
  return out;
}

// --- leading (Killing) block -----------------------------------------------------

// Solution of the leading block f_x = 0, g_y = 0, f_y + g_x = 0 per sector:
// F1nu = w_nu y + a_nu, F2nu = -w_nu x + b_nu with fresh constants.
struct KillingSolution {
  std::vector<FormalBinding> bindings;
};

inline KillingSolution killing_solution() {
  KillingSolution ks;
  for (int nu = 0; nu <= 1; ++nu) {
    Expr w = Expr::constant(sym(ConstFamily::Omega, nu));
    Expr a = Expr::constant(sym(ConstFamily::A, nu));
    Expr b = Expr::constant(sym(ConstFamily::B, nu));
    ks.bindings.push_back({FuncKind::F1, nu, ArgSig::Cartesian,
                           w * Expr::y() + a});
    ks.bindings.push_back({FuncKind::F2, nu, ArgSig::Cartesian,
                           -(w * Expr::x()) + b});
  }
  return ks;
}

// Verifies the top block of the system has the Killing structure and returns
// the parametrized solution; throws when the block is not of Killing form.
inline KillingSolution solve_leading(const DeterminingSystem& ds) {
  int top = ds.max_order();
  auto block = ds.block(top);
  auto pattern = [&](FuncKind k, int nu, int dx, int dy) {
    return Expr::formal_factor(FormalDerivative{k, nu, ArgSig::Cartesian,
                                                dx, dy});
  };
  for (int nu = 0; nu <= 1; ++nu) {
    Expr fx = pattern(FuncKind::F1, nu, 1, 0).monic();
    Expr gy = pattern(FuncKind::F2, nu, 0, 1).monic();
    Expr mixed = (pattern(FuncKind::F1, nu, 0, 1) +
                  pattern(FuncKind::F2, nu, 1, 0))
                     .monic();
    for (const Expr& want : {fx, gy, mixed}) {
      bool found = false;
      for (const auto& c : block)
        if (c.lhs == want) found = true;
      if (!found)
        throw Error("solve_leading: leading block is not of Killing form");
    }
  }
  if (block.size() != 6)
    throw Error("solve_leading: unexpected leading block size");
  KillingSolution ks = killing_solution();
  for (const auto& c : block)
    if (!substitute_all(c.lhs, ks.bindings).is_zero())
      throw Error("solve_leading: solution does not annihilate the block");
  return ks;
}

// --- eliminations ------------------------------------------------------------------

// Compatibility of F1_x = A, F2_y = B, F1_y + F2_x = C: A_yy + B_xx - C_xy.
inline Expr eliminate_vector(const Expr& a, const Expr& b, const Expr& c) {
  return diff(diff(a, Var::Y), Var::Y) + diff(diff(b, Var::X), Var::X) -
         diff(diff(c, Var::X), Var::Y);
}

// Compatibility of F3_x = P, F3_y = Q: P_y - Q_x.
inline Expr eliminate_gradient(const Expr& p, const Expr& q) {
  return diff(p, Var::Y) - diff(q, Var::X);
}

// --- solving single constraints for formal derivatives ---------------------------

// The unique constraint term carrying exactly the target formal derivative
// with a numeric coefficient; returns the solved right-hand side, i.e.
// target = -(rest)/coeff.
inline Expr solve_constraint_for(const Expr& lhs, const FormalDerivative& f) {
  std::optional<GaussRat> coeff;
  std::vector<Monomial> rest;
  for (const auto& m : lhs.terms()) {
    if (m.formals.size() == 1 && m.formals[0] == f && m.xp == 0 && m.yp == 0 &&
        m.up2 == 0 && m.logp == 0 && m.thp == 0 && m.consts.empty()) {
      if (coeff) throw Error("solve_constraint_for: duplicate target term");
      coeff = m.coeff;
    } else {
      for (const auto& g : m.formals)
        if (g == f)
          throw Error("solve_constraint_for: target appears with variable "
                      "coefficient");
      rest.push_back(m);
    }
  }
  if (!coeff) throw Error("solve_constraint_for: target not present");
  return (-coeff->inverse()) * Expr::from_terms(std::move(rest));
}

// Replaces second and higher derivatives of the function (kind, nu) using
// first-derivative data f_x = P, f_y = Q; first derivatives stay symbolic.
inline Expr reduce_high_derivatives(const Expr& e, FuncKind kind, int nu,
                                    const Expr& p, const Expr& q) {
  std::vector<Monomial> out;
  Expr acc;
  for (const auto& m : e.terms()) {
    bool rewritten = false;
    for (std::size_t k = 0; k < m.formals.size(); ++k) {
      const auto& f = m.formals[k];
      if (f.kind == kind && f.nu == nu && f.order() >= 2) {
        Expr repl;
        if (f.dx >= 1)
          repl = diff(diff(p, Var::X, f.dx - 1), Var::Y, f.dy);
        else
          repl = diff(q, Var::Y, f.dy - 1);
        Monomial bare = m;
        bare.formals.erase(bare.formals.begin() + k);
        acc += Expr::from_terms({bare}) * repl;
        rewritten = true;
        break;
      }
    }
    if (!rewritten) out.push_back(m);
  }
  Expr plain = Expr::from_terms(std::move(out));
  if (acc.is_zero()) return plain;
  // rewritten parts may have produced fresh high derivatives
  return plain + reduce_high_derivatives(acc, kind, nu, p, q);
}

// --- residual verification ---------------------------------------------------------

struct ResidualReport {
  struct Item {
    std::size_t index;
    Sector sector;
    DerivMonomial deriv;
    Expr residual;
  };
  std::vector<Item> nonzero;
  bool verified() const { return nonzero.empty(); }
};

// Substitutes bindings into every constraint and reports nonzero residuals.
inline ResidualReport verify_solution(const DeterminingSystem& ds,
                                      const std::vector<FormalBinding>& bindings) {
  ResidualReport r;
  for (std::size_t k = 0; k < ds.constraints.size(); ++k) {
    const auto& c = ds.constraints[k];
    Expr res = substitute_all(c.lhs, bindings);
    if (!res.is_zero()) r.nonzero.push_back({k, c.sector, c.deriv, res});
  }
  return r;
}

// --- fixtures ----------------------------------------------------------------------

struct FixtureLine {
  std::string tag;
  Expr lhs;
};

// One constraint per line, "tag: expression = 0"; '#' starts a comment.
inline std::vector<FixtureLine> parse_fixture(const std::string& text) {
  std::vector<FixtureLine> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto nonspace = line.find_first_not_of(" \t\r");
    if (nonspace == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw Error("fixture: missing tag separator in '" + line + "'");
    std::string tag = line.substr(nonspace, colon - nonspace);
    while (!tag.empty() && (tag.back() == ' ' || tag.back() == '\t'))
      tag.pop_back();
    std::string body = line.substr(colon + 1);
    auto eq = body.rfind('=');
    if (eq != std::string::npos) {
      std::string rhs = body.substr(eq + 1);
      if (rhs.find_first_not_of(" \t\r0") != std::string::npos)
        throw Error("fixture: right-hand side must be 0 in '" + line + "'");
      body = body.substr(0, eq);
    }
    out.push_back({tag, parse_expression(body)});
  }
  return out;
}

inline std::vector<FixtureLine> load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("fixture: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fixture(ss.str());
}

// Divides out the monomial content shared by every term (x, y, u powers and
// symbolic-constant powers) and scales the leading coefficient to one. Two
// expressions agree up to a rational-times-monomial factor iff their
// normalized forms are identical.
inline Expr strip_monomial_content(const Expr& e) {
  if (e.is_zero()) return e;
  const auto& ts = e.terms();
  int min_x = ts[0].xp, min_y = ts[0].yp, min_u = ts[0].up2;
  std::map<SymbolicConstant, int> min_c;
  for (const auto& [sc, p] : ts[0].consts) min_c[sc] = p;
  for (std::size_t k = 1; k < ts.size(); ++k) {
    min_x = std::min(min_x, ts[k].xp);
    min_y = std::min(min_y, ts[k].yp);
    min_u = std::min(min_u, ts[k].up2);
    std::map<SymbolicConstant, int> cur;
    for (const auto& [sc, p] : ts[k].consts) cur[sc] = p;
    for (auto it = min_c.begin(); it != min_c.end();) {
      auto found = cur.find(it->first);
      int other = found == cur.end() ? 0 : found->second;
      it->second = std::min(it->second, other);
      it = it->second == 0 ? min_c.erase(it) : std::next(it);
    }
    for (const auto& [sc, p] : cur)
      if (p < 0 && !min_c.count(sc)) min_c[sc] = std::min(0, p);
  }
  Monomial divisor;
  divisor.coeff = GaussRat(1);
  divisor.xp = min_x;
  divisor.yp = min_y;
  divisor.up2 = min_u;
  for (const auto& [sc, p] : min_c)
    if (p != 0) divisor.consts.push_back({sc, p});
  Expr stripped = e * Expr::from_terms({divisor}).monomial_inverse();
  return stripped.monic();
}

inline bool proportional_monomial(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return strip_monomial_content(a) == strip_monomial_content(b);
}

// Proportional matching of fixture lines against derived constraints.
struct FixtureMatch {
  struct Item {
    std::string tag;
    bool matched;
    std::size_t constraint_index;
    GaussRat scale;  // derived = scale * fixture
  };
  std::vector<Item> items;
  std::size_t matched_count = 0;
  bool all_matched(std::size_t total_constraints) const {
    return matched_count == items.size() &&
           matched_count == total_constraints;
  }
};

inline FixtureMatch match_fixture(const std::vector<FixtureLine>& fixture,
                                  const std::vector<Constraint>& derived,
                                  bool allow_monomial_scale = false) {
  FixtureMatch result;
  std::vector<bool> used(derived.size(), false);
  for (const auto& line : fixture) {
    FixtureMatch::Item item{line.tag, false, 0, GaussRat(1)};
    for (std::size_t k = 0; k < derived.size(); ++k) {
      if (used[k]) continue;
      GaussRat scale;
      bool ok = proportional(derived[k].lhs, line.lhs, &scale);
      if (!ok && allow_monomial_scale &&
          proportional_monomial(derived[k].lhs, line.lhs)) {
        ok = true;
        scale = GaussRat(0);  // scale carries a monomial factor
      }
      if (ok) {
        used[k] = true;
        item.matched = true;
        item.constraint_index = k;
        item.scale = scale;
        ++result.matched_count;
        break;
      }
    }
    result.items.push_back(item);
  }
  return result;
}

// --- auxiliary solving steps shared by the case-tree pipelines ---------------------

// Particular solution of F1_x = A, F2_y = B, F1_y + F2_x = C by termwise
// integration; requires the compatibility A_yy + B_xx - C_xy = 0.
inline std::pair<Expr, Expr> integrate_vector_pair(const Expr& a, const Expr& b,
                                                   const Expr& c) {
  Expr f1 = antiderive(a, Var::X);
  Expr f2 = antiderive(b, Var::Y);
  Expr d = c - diff(f1, Var::Y) - diff(f2, Var::X);
  Expr dx_part, dy_part;
  for (const auto& m : d.terms()) {
    if (m.yp == 0)
      dx_part += Expr::from_terms({m});
    else if (m.xp == 0)
      dy_part += Expr::from_terms({m});
    else
      throw Error("integrate_vector_pair: mixed remainder, not integrable");
  }
  f1 += antiderive(dy_part, Var::Y);
  f2 += antiderive(dx_part, Var::X);
  return {f1, f2};
}

// Replaces every derivative of F3_nu using the gradient data F3_x = p,
// F3_y = q (all orders >= 1).
inline Expr bind_f3_gradient(const Expr& e, int nu, const Expr& p,
                             const Expr& q) {
  Expr out;
  for (const auto& m : e.terms()) {
    Expr term = Expr::scalar(m.coeff);
    Monomial bare = m;
    bare.coeff = GaussRat(1);
    bare.formals.clear();
    term *= Expr::from_terms({bare});
    for (const auto& f : m.formals) {
      if (f.kind == FuncKind::F3 && f.nu == nu && f.order() >= 1) {
        Expr repl = f.dx >= 1 ? diff(diff(p, Var::X, f.dx - 1), Var::Y, f.dy)
                              : diff(q, Var::Y, f.dy - 1);
        term *= repl;
      } else {
        term *= Expr::formal_factor(f);
      }
    }
    out += term;
  }
  return out;
}

}  // namespace spinorbit
