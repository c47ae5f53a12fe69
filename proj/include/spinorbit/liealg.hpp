#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "spinorbit/detsys.hpp"
#include "spinorbit/linalg.hpp"
#include "spinorbit/operator.hpp"

namespace spinorbit {

// The eight first-order symmetry generators of the oscillator system, with
// symbolic coupling gam:
//   L+- = L3 I+-, X+- = (i d/dx -+ gam y) I+-, Y+- = (i d/dy +- gam x) I+-,
//   I+- = Id +- s3.
struct GeneratorSet {
  std::array<std::string, 8> names = {"L+", "X+", "Y+", "I+",
                                      "L-", "X-", "Y-", "I-"};
  std::array<Operator, 8> ops;

  GeneratorSet() {
    Expr g = Expr::constant(sym(ConstFamily::Gamma));
    Operator idx = Operator::term({1, 0}, spin_id(Expr::i()));  // i d/dx
    Operator idy = Operator::term({0, 1}, spin_id(Expr::i()));  // i d/dy
    for (int s = 0; s <= 1; ++s) {
      Expr sign = s == 0 ? Expr::integer(1) : Expr::integer(-1);
      Operator ipm = Operator::mult(SpinExpr{Expr::integer(1), sign});
      Operator x = compose(idx - Operator::mult(spin_id(sign * (g * Expr::y()))),
                           ipm);
      Operator y = compose(idy + Operator::mult(spin_id(sign * (g * Expr::x()))),
                           ipm);
      ops[4 * s + 0] = compose(Operator::l3(), ipm);
      ops[4 * s + 1] = x;
      ops[4 * s + 2] = y;
      ops[4 * s + 3] = ipm;
    }
  }

  const Operator& at(const std::string& name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) return ops[k];
    throw Error("GeneratorSet: unknown generator " + name);
  }
};

// Expansion coefficients of commutators over the eight-generator basis;
// entries are constant expressions in gam (Gaussian-rational coefficients).
class StructureTable {
 public:
  using Key = std::pair<std::size_t, std::size_t>;

  void set(Key k, std::array<Expr, 8> coeffs) { entries_[k] = std::move(coeffs); }
  const std::array<Expr, 8>& at(Key k) const {
    auto it = entries_.find(k);
    if (it == entries_.end()) throw Error("StructureTable: missing entry");
    return it->second;
  }
  const std::map<Key, std::array<Expr, 8>>& entries() const { return entries_; }

 private:
  std::map<Key, std::array<Expr, 8>> entries_;
};

namespace detail {

// Flattens operators over (derivative monomial, sector, monomial key with
// the gam-power stripped); coordinates are Gaussian rationals per gam power.
struct OperatorFlattener {
  std::map<std::string, std::size_t> rows;

  static constexpr int kMaxGamPow = 3;

  std::string key(const DerivMonomial& dm, int sector, const Monomial& m,
                  int gam_pow) const {
    Monomial bare = m;
    bare.coeff = GaussRat(1);
    ConstMono stripped;
    for (const auto& [sc, p] : bare.consts)
      if (!(sc == sym(ConstFamily::Gamma))) stripped.push_back({sc, p});
    bare.consts = stripped;
    return std::to_string(dm.nx) + "," + std::to_string(dm.ny) + "|" +
           std::to_string(sector) + "|" + std::to_string(gam_pow) + "|" +
           print_expr(Expr::from_terms({bare}));
  }

  void touch(const Operator& op) {
    for (const auto& [dm, c] : op.terms()) {
      int sector = 0;
      for (const Expr* e : {&c.id, &c.s3}) {
        for (const auto& m : e->terms())
          rows.emplace(key(dm, sector, m, gam_pow(m)), rows.size());
        ++sector;
      }
    }
  }

  static int gam_pow(const Monomial& m) {
    for (const auto& [sc, p] : m.consts)
      if (sc == sym(ConstFamily::Gamma)) return p;
    return 0;
  }

  std::vector<GaussRat> coords(const Operator& op) const {
    std::vector<GaussRat> v(rows.size(), GaussRat(0));
    for (const auto& [dm, c] : op.terms()) {
      int sector = 0;
      for (const Expr* e : {&c.id, &c.s3}) {
        for (const auto& m : e->terms()) {
          auto it = rows.find(key(dm, sector, m, gam_pow(m)));
          if (it == rows.end()) throw Error("flatten: unseen coordinate");
          v[it->second] += m.coeff;
        }
        ++sector;
      }
    }
    return v;
  }
};

}  // namespace detail

// All 28 unordered commutators expanded exactly over the basis; throws when
// a commutator does not close (coefficients are gam-polynomials of degree
// at most two).
inline StructureTable commutator_table(const GeneratorSet& gen) {
  // candidate columns: generator times gam^d
  detail::OperatorFlattener flat;
  std::vector<Operator> columns;
  std::vector<std::pair<std::size_t, int>> column_ids;
  Expr g = Expr::constant(sym(ConstFamily::Gamma));
  for (std::size_t k = 0; k < 8; ++k) {
    Expr gp = Expr::integer(1);
    for (int d = 0; d < detail::OperatorFlattener::kMaxGamPow; ++d) {
      columns.push_back(Operator::scale(gp, gen.ops[k]));
      column_ids.push_back({k, d});
      flat.touch(columns.back());
      gp *= g;
    }
  }
  std::vector<Operator> brackets;
  std::vector<StructureTable::Key> keys;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) {
      brackets.push_back(commutator(gen.ops[i], gen.ops[j]));
      keys.push_back({i, j});
      flat.touch(brackets.back());
    }
  GaussMatrix m;
  m.rows.assign(flat.rows.size(),
                std::vector<GaussRat>(columns.size(), GaussRat(0)));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    auto v = flat.coords(columns[c]);
    for (std::size_t r = 0; r < v.size(); ++r) m.rows[r][c] = v[r];
  }
  StructureTable table;
  for (std::size_t b = 0; b < brackets.size(); ++b) {
    auto rhs = flat.coords(brackets[b]);
    auto sol = solve(m, rhs);
    if (!sol)
      throw Error("commutator_table: bracket does not close in the basis");
    std::array<Expr, 8> coeffs;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if ((*sol)[c].is_zero()) continue;
      auto [gi, d] = column_ids[c];
      Expr term = Expr::scalar((*sol)[c]);
      for (int k = 0; k < d; ++k) term *= g;
      coeffs[gi] += term;
    }
    // confirm the expansion exactly
    Operator recon;
    for (std::size_t gi = 0; gi < 8; ++gi)
      recon += Operator::scale(coeffs[gi], gen.ops[gi]);
    if (!(recon == brackets[b]))
      throw Error("commutator_table: expansion check failed");
    table.set(keys[b], std::move(coeffs));
  }
  return table;
}

struct DecompositionReport {
  bool cross_sector_vanish = true;
  bool centers_central = true;
  bool e2_pattern = true;
  bool mirror_under_gamma_flip = true;
  bool hamiltonian_commutes = true;
  bool jacobi = true;

  bool ok() const {
    return cross_sector_vanish && centers_central && e2_pattern &&
           mirror_under_gamma_flip && hamiltonian_commutes && jacobi;
  }
};

// Confirms the direct-sum structure: the two four-generator sectors commute,
// I+- are central, rotations mix the translations, translations commute into
// the central element, and the minus sector mirrors the plus sector under
// gam -> -gam.
inline DecompositionReport verify_decomposition(const GeneratorSet& gen,
                                                const StructureTable& t) {
  DecompositionReport rep;
  auto coeffs_zero = [](const std::array<Expr, 8>& c) {
    for (const auto& e : c)
      if (!e.is_zero()) return false;
    return true;
  };
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 4; j < 8; ++j)
      if (!coeffs_zero(t.at({i, j}))) rep.cross_sector_vanish = false;
  for (std::size_t c : {std::size_t(3), std::size_t(7)})
    for (std::size_t j = 0; j < 8; ++j) {
      if (j == c) continue;
      auto key = std::minmax(c, j);
      if (!coeffs_zero(t.at({key.first, key.second})))
        rep.centers_central = false;
    }
  // e(2) pattern with central extension, per sector at offset 0 and 4:
  // [L, X] ~ Y, [L, Y] ~ X, [X, Y] ~ I
  for (std::size_t off : {std::size_t(0), std::size_t(4)}) {
    auto only = [&](const std::array<Expr, 8>& c, std::size_t allowed) {
      for (std::size_t k = 0; k < 8; ++k)
        if (k != allowed && !c[k].is_zero()) return false;
      return !c[allowed].is_zero();
    };
    if (!only(t.at({off + 0, off + 1}), off + 2)) rep.e2_pattern = false;
    if (!only(t.at({off + 0, off + 2}), off + 1)) rep.e2_pattern = false;
    if (!only(t.at({off + 1, off + 2}), off + 3)) rep.e2_pattern = false;
  }
  // minus sector = plus sector with gam -> -gam
  Expr g = Expr::constant(sym(ConstFamily::Gamma));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      const auto& plus = t.at({i, j});
      const auto& minus = t.at({i + 4, j + 4});
      for (std::size_t k = 0; k < 4; ++k) {
        Expr flipped = substitute_const(plus[k], sym(ConstFamily::Gamma), -g);
        if (!(flipped == minus[k + 4] ||
              (plus[k].is_zero() && minus[k + 4].is_zero())))
          rep.mirror_under_gamma_flip = false;
      }
    }
  Operator h = build_hamiltonian(SystemKind::Oscillator);
  for (const auto& op : gen.ops)
    if (!commutator(h, op).is_zero()) rep.hamiltonian_commutes = false;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j)
      for (std::size_t k = j + 1; k < 8; ++k) {
        Operator jac =
            commutator(commutator(gen.ops[i], gen.ops[j]), gen.ops[k]) +
            commutator(commutator(gen.ops[j], gen.ops[k]), gen.ops[i]) +
            commutator(commutator(gen.ops[k], gen.ops[i]), gen.ops[j]);
        if (!jac.is_zero()) rep.jacobi = false;
      }
  return rep;
}

inline std::string table_entry_str(const GeneratorSet& gen,
                                   const StructureTable& t,
                                   std::size_t i, std::size_t j) {
  const auto& coeffs = t.at({i, j});
  std::string s;
  for (std::size_t k = 0; k < 8; ++k) {
    if (coeffs[k].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + print_expr(coeffs[k]) + ")*" + gen.names[k];
  }
  return s.empty() ? "0" : s;
}

}  // namespace spinorbit
