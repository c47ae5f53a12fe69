#pragma once

#include <map>
#include <string>
#include <vector>

#include "spinorbit/expr.hpp"

namespace spinorbit {

// Expression in the Fourier-radial form
//   sum over k of [cos(k theta) or sin(k theta)] * (radial part),
// the shape the compatibility conditions take in polar coordinates. Radial
// parts are expressions in r (u-half-powers, log r, radial formals); a single
// theta power may ride along in the radial slot.
class PolarExpr {
 public:
  enum class Trig : std::uint8_t { Cos, Sin };
  struct Key {
    int k;
    Trig t;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.k != b.k) return a.k < b.k;
      return a.t < b.t;
    }
    friend bool operator==(const Key& a, const Key& b) {
      return a.k == b.k && a.t == b.t;
    }
  };

  void add(int k, Trig t, const Expr& radial) {
    if (radial.is_zero()) return;
    if (k == 0 && t == Trig::Sin) return;  // sin(0) = 0
    auto key = Key{k, t};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, radial);
    } else {
      it->second += radial;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const std::map<Key, Expr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Expr radial_part(int k, Trig t) const {
    auto it = terms_.find(Key{k, t});
    return it == terms_.end() ? Expr::zero() : it->second;
  }

  friend bool operator==(const PolarExpr& a, const PolarExpr& b) {
    return a.terms_ == b.terms_;
  }

 private:
  std::map<Key, Expr> terms_;
};

namespace detail {

// Laurent coefficients of ((z + 1/z)/2)^a * ((z - 1/z)/(2i))^b, indexed by
// the power of z (shifted by a+b so indices stay nonnegative).
inline std::vector<GaussRat> trig_laurent(int a, int b) {
  std::vector<GaussRat> cur = {GaussRat(1)};  // constant 1, offset 0
  auto mul_binomial = [&](const GaussRat& plus, const GaussRat& minus) {
    // multiply by (plus*z + minus/z); offsets shift by one
    std::vector<GaussRat> next(cur.size() + 2);
    for (std::size_t j = 0; j < cur.size(); ++j) {
      next[j + 2] += cur[j] * plus;
      next[j] += cur[j] * minus;
    }
    cur = std::move(next);
  };
  GaussRat half(Rational(1, 2));
  GaussRat half_over_i = GaussRat(Rational(1, 2)) * GaussRat::i().inverse();
  for (int j = 0; j < a; ++j) mul_binomial(half, half);
  for (int j = 0; j < b; ++j) mul_binomial(half_over_i, -half_over_i);
  return cur;  // coefficient of z^(idx - (a+b))
}

}  // namespace detail

// Converts a Cartesian expression to Fourier-radial form by substituting
// x = r cos(theta), y = r sin(theta) and linearizing the trigonometric
// products. Inputs must be free of Cartesian/Profile formal factors and of
// negative x/y powers; theta powers above 1 are rejected, not dropped.
inline PolarExpr polar_form(const Expr& e) {
  PolarExpr out;
  for (const auto& m : e.terms()) {
    if (m.xp < 0 || m.yp < 0)
      throw Error("polar_form: negative x/y power has no Fourier form");
    if (m.thp > 1)
      throw Error("polar_form: theta power > 1 leaves non-Fourier residue");
    for (const auto& f : m.formals)
      if (f.sig == ArgSig::Cartesian || f.sig == ArgSig::Profile)
        throw Error("polar_form: non-radial formal factor " + f.str());
    Monomial radial = m;
    radial.xp = 0;
    radial.yp = 0;
    radial.up2 = m.up2 + m.xp + m.yp;
    Expr rad = Expr::from_terms({radial});
    auto laurent = detail::trig_laurent(m.xp, m.yp);
    int off = m.xp + m.yp;
    out.add(0, PolarExpr::Trig::Cos,
            off < static_cast<int>(laurent.size()) && !laurent[off].is_zero()
                ? Expr::scalar(laurent[off]) * rad
                : Expr::zero());
    for (int k = 1; k <= off; ++k) {
      GaussRat cpos = (off + k < static_cast<int>(laurent.size()))
                          ? laurent[off + k]
                          : GaussRat();
      GaussRat cneg = (off - k >= 0) ? laurent[off - k] : GaussRat();
      GaussRat ccos = cpos + cneg;
      GaussRat csin = GaussRat::i() * (cpos - cneg);
      if (!ccos.is_zero())
        out.add(k, PolarExpr::Trig::Cos, Expr::scalar(ccos) * rad);
      if (!csin.is_zero())
        out.add(k, PolarExpr::Trig::Sin, Expr::scalar(csin) * rad);
    }
  }
  return out;
}

// Inverse conversion: cos(k theta) r^k = Re (x+iy)^k, sin(k theta) r^k =
// Im (x+iy)^k; the radial parts re-acquire the u^(-k/2) balance.
inline Expr to_cartesian(const PolarExpr& p) {
  Expr out;
  for (const auto& [key, radial] : p.terms()) {
    Expr harm;
    for (int j = 0; j <= key.k; ++j) {
      bool even = (j % 2 == 0);
      if ((key.t == PolarExpr::Trig::Cos) != even) continue;
      GaussRat c(Rational(detail::binom(key.k, j)));
      int q = (key.t == PolarExpr::Trig::Cos) ? j / 2 : (j - 1) / 2;
      if (q % 2 == 1) c = -c;
      Monomial t;
      t.coeff = c;
      t.xp = key.k - j;
      t.yp = j;
      t.up2 = -key.k;
      harm += Expr::from_terms({t});
    }
    if (key.k == 0) harm = Expr::integer(1);
    out += radial * harm;
  }
  return out;
}

inline std::string trig_str(const PolarExpr::Key& key) {
  if (key.k == 0) return "1";
  std::string arg =
      key.k == 1 ? "th" : std::to_string(key.k) + "*th";
  return (key.t == PolarExpr::Trig::Cos ? "cos(" : "sin(") + arg + ")";
}

}  // namespace spinorbit
