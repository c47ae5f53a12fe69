#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinorbit/expr.hpp"
#include "spinorbit/operator.hpp"

namespace spinorbit {

// --- printing -----------------------------------------------------------------

namespace detail {

inline void append_pow(std::string& s, const std::string& base, int p) {
  if (p == 0) return;
  if (!s.empty()) s += "*";
  s += base;
  if (p != 1) s += "^" + std::to_string(p);
}

}  // namespace detail

// Canonical text form; parse(print(e)) == e exactly.
inline std::string print_expr(const Expr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& m : e.terms()) {
    // fold the (1/2)^logp from log r = (1/2) log_r2 into the coefficient
    GaussRat c = m.coeff * GaussRat(Rational(1, 2)).pow(m.logp);
    bool neg = c.is_real() ? c.re().sign() < 0
                           : (c.re().is_zero() && c.im().sign() < 0);
    if (first) {
      if (neg) {
        out += "-";
        c = -c;
      }
      first = false;
    } else {
      out += neg ? " - " : " + ";
      if (neg) c = -c;
    }
    std::string factors;
    for (const auto& [sc, p] : m.consts) detail::append_pow(factors, sc.str(), p);
    detail::append_pow(factors, "x", m.xp);
    detail::append_pow(factors, "y", m.yp);
    if (m.up2 != 0) {
      if (!factors.empty()) factors += "*";
      factors += "r2";
      if (m.up2 % 2 == 0) {
        int k = m.up2 / 2;
        if (k != 1) factors += "^" + std::to_string(k);
      } else {
        factors += "^(" + std::to_string(m.up2) + "/2)";
      }
    }
    detail::append_pow(factors, "log_r2", m.logp);
    detail::append_pow(factors, "th", m.thp);
    for (const auto& f : m.formals) {
      if (!factors.empty()) factors += "*";
      factors += f.str();
    }
    if (factors.empty()) {
      out += c.str();
    } else if (c.is_one()) {
      out += factors;
    } else {
      out += c.str() + "*" + factors;
    }
  }
  return out;
}

inline std::string print_spin(const SpinExpr& s) {
  std::string id = "(" + print_expr(s.id) + ")";
  std::string s3 = "(" + print_expr(s.s3) + ")*s3";
  if (s.s3.is_zero()) return id;
  if (s.id.is_zero()) return s3;
  return "(" + id + " + " + s3 + ")";
}

// Operators print over the momentum tokens: d/dx^a d/dy^b = i^(a+b) p1^a p2^b.
inline std::string print_operator(const Operator& op) {
  if (op.terms().empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = op.terms().rbegin(); it != op.terms().rend(); ++it) {
    const auto& [dm, coeff] = *it;
    SpinExpr scaled = coeff;
    GaussRat phase = GaussRat::i().pow(dm.nx + dm.ny);
    scaled.id = phase * scaled.id;
    scaled.s3 = phase * scaled.s3;
    if (!first) out += " + ";
    first = false;
    std::string s = print_spin(scaled);
    if (dm.nx > 0) {
      s += "*p1";
      if (dm.nx > 1) s += "^" + std::to_string(dm.nx);
    }
    if (dm.ny > 0) {
      s += "*p2";
      if (dm.ny > 1) s += "^" + std::to_string(dm.ny);
    }
    out += s;
  }
  return out;
}

// --- lexer ---------------------------------------------------------------------

struct ParseError : Error {
  ParseError(const std::string& what, int line, int col)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line(line),
        col(col) {}
  int line, col;
};

namespace detail {

enum class Tok : std::uint8_t {
  Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen,
  LBracket, RBracket, LBrace, RBrace, Comma, Semi, Eq, End,
};

struct Token {
  Tok kind;
  std::string text;
  long long value = 0;
  int line = 1, col = 1;
};

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t k = 0;
  auto push = [&](Tok t, std::string s) {
    out.push_back(Token{t, std::move(s), 0, line, col});
  };
  while (k < src.size()) {
    char c = src[k];
    if (c == '\n') {
      ++line;
      col = 1;
      ++k;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++k;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = k;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      Token t{Tok::Number, src.substr(k, j - k), 0, line, col};
      t.value = std::stoll(t.text);
      out.push_back(t);
      col += static_cast<int>(j - k);
      k = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = k;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      push(Tok::Ident, src.substr(k, j - k));
      col += static_cast<int>(j - k);
      k = j;
      continue;
    }
    Tok t;
    switch (c) {
      case '+': t = Tok::Plus; break;
      case '-': t = Tok::Minus; break;
      case '*': t = Tok::Star; break;
      case '/': t = Tok::Slash; break;
      case '^': t = Tok::Caret; break;
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      case '[': t = Tok::LBracket; break;
      case ']': t = Tok::RBracket; break;
      case '{': t = Tok::LBrace; break;
      case '}': t = Tok::RBrace; break;
      case ',': t = Tok::Comma; break;
      case ';': t = Tok::Semi; break;
      case '=': t = Tok::Eq; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line,
                         col);
    }
    push(t, std::string(1, c));
    ++col;
    ++k;
  }
  out.push_back(Token{Tok::End, "", 0, line, col});
  return out;
}

inline std::optional<ConstFamily> family_of(const std::string& s) {
  for (ConstFamily f :
       {ConstFamily::Omega, ConstFamily::A, ConstFamily::B, ConstFamily::Gamma,
        ConstFamily::Chi, ConstFamily::Alpha, ConstFamily::Zeta, ConstFamily::Eps,
        ConstFamily::Lambda, ConstFamily::G, ConstFamily::C})
    if (s == family_name(f)) return f;
  return std::nullopt;
}

struct FuncId {
  FuncKind kind;
  int nu;
};

inline std::optional<FuncId> func_of(const std::string& s) {
  if (s == "V0") return FuncId{FuncKind::V0, -1};
  if (s == "V1") return FuncId{FuncKind::V1, -1};
  if (s == "F") return FuncId{FuncKind::F, -1};
  if (s == "IV1") return FuncId{FuncKind::IV1, -1};
  for (auto [name, kind] : {std::pair<const char*, FuncKind>{"F1", FuncKind::F1},
                            {"F2", FuncKind::F2},
                            {"F3", FuncKind::F3}}) {
    std::string n = name;
    if (s == n + "_0") return FuncId{kind, 0};
    if (s == n + "_1") return FuncId{kind, 1};
  }
  return std::nullopt;
}

// Recursive-descent parser over the operator grammar. Scalar expressions are
// the order-zero, spin-free fragment of the same grammar.
class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

  Operator parse_operator() {
    Operator op = parse_sum();
    expect(Tok::End, "end of input");
    return op;
  }

  Expr parse_expression() {
    Operator op = parse_sum();
    expect(Tok::End, "end of input");
    return to_scalar(op);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool accept(Tok t) {
    if (peek().kind == t) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(Tok t, const std::string& what) {
    if (!accept(t))
      throw ParseError("expected " + what + ", got '" + peek().text + "'",
                       peek().line, peek().col);
  }

  Expr to_scalar(const Operator& op) {
    if (op.terms().empty()) return Expr::zero();
    if (op.terms().size() != 1)
      throw ParseError("operator where scalar expression expected",
                       toks_[0].line, toks_[0].col);
    const auto& [dm, coeff] = *op.terms().begin();
    if (dm.nx != 0 || dm.ny != 0 || !coeff.s3.is_zero())
      throw ParseError("operator where scalar expression expected",
                       toks_[0].line, toks_[0].col);
    return coeff.id;
  }

  Operator parse_sum() {
    Operator acc;
    bool neg = accept(Tok::Minus);
    acc = parse_product();
    if (neg) acc = Operator::scale(GaussRat(-1), acc);
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = next().kind == Tok::Minus;
      Operator rhs = parse_product();
      if (minus) rhs = Operator::scale(GaussRat(-1), rhs);
      acc = acc + rhs;
    }
    return acc;
  }

  Operator parse_product() {
    Operator acc = parse_power();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      bool div = next().kind == Tok::Slash;
      Operator rhs = parse_power();
      if (div) {
        Expr s = to_scalar_factor(rhs);
        acc = compose(acc, Operator::mult(SpinExpr{s.monomial_inverse(),
                                                   Expr::zero()}));
      } else {
        acc = compose(acc, rhs);
      }
    }
    return acc;
  }

  Expr to_scalar_factor(const Operator& op) {
    if (op.terms().size() == 1) {
      const auto& [dm, coeff] = *op.terms().begin();
      if (dm.nx == 0 && dm.ny == 0 && coeff.s3.is_zero()) return coeff.id;
    }
    throw ParseError("divisor must be a scalar monomial", peek().line,
                     peek().col);
  }

  Operator parse_power() {
    Operator base = parse_primary();
    if (accept(Tok::Caret)) {
      auto [num, den] = parse_exponent();
      if (den == 2) {
        // half-integer exponents only on the scalar r2 atom
        Expr s = to_scalar_factor(base);
        if (s.terms().size() != 1 || s.terms()[0].up2 != 2 ||
            !s.terms()[0].coeff.is_one() || s.terms()[0].xp != 0 ||
            s.terms()[0].yp != 0)
          throw ParseError("half-integer exponent requires base r2",
                           peek().line, peek().col);
        return Operator::mult(
            SpinExpr{Expr::u_half(static_cast<int>(num)), Expr::zero()});
      }
      if (num < 0) {
        Expr s = to_scalar_factor(base);
        return Operator::mult(
            SpinExpr{s.pow(static_cast<int>(num)), Expr::zero()});
      }
      Operator acc = Operator::identity();
      for (long long k = 0; k < num; ++k) acc = compose(acc, base);
      return acc;
    }
    return base;
  }

  // exponent := INT | -INT | (INT/2) | (-INT/2) | (expr-int) parenthesized
  std::pair<long long, int> parse_exponent() {
    bool paren = accept(Tok::LParen);
    bool neg = accept(Tok::Minus);
    if (peek().kind != Tok::Number)
      throw ParseError("expected integer exponent", peek().line, peek().col);
    long long n = next().value;
    if (neg) n = -n;
    int den = 1;
    if (paren && accept(Tok::Slash)) {
      if (peek().kind != Tok::Number || peek().value != 2)
        throw ParseError("only /2 fractional exponents supported", peek().line,
                         peek().col);
      next();
      den = 2;
    }
    if (paren) expect(Tok::RParen, "')'");
    return {n, den};
  }

  Operator parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        return Operator::mult(
            SpinExpr{Expr::integer(t.value), Expr::zero()});
      }
      case Tok::Minus: {
        next();
        return Operator::scale(GaussRat(-1), parse_primary());
      }
      case Tok::LParen: {
        next();
        Operator inner = parse_sum();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::LBracket: {
        next();
        Operator a = parse_sum();
        expect(Tok::Comma, "','");
        Operator b = parse_sum();
        expect(Tok::RBracket, "']'");
        return commutator(a, b);
      }
      case Tok::LBrace: {
        next();
        Operator a = parse_sum();
        expect(Tok::Comma, "','");
        Operator b = parse_sum();
        expect(Tok::RBrace, "'}'");
        return anticommutator(a, b);
      }
      case Tok::Ident:
        return parse_ident();
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.line, t.col);
    }
  }

  Operator parse_ident() {
    Token t = next();
    const std::string& s = t.text;
    auto scalar = [](const Expr& e) {
      return Operator::mult(SpinExpr{e, Expr::zero()});
    };
    if (s == "i") return scalar(Expr::i());
    if (s == "x") return scalar(Expr::x());
    if (s == "y") return scalar(Expr::y());
    if (s == "r2") {
      // bind the exponent here so negative and half powers of u stay atomic
      if (accept(Tok::Caret)) {
        auto [num, den] = parse_exponent();
        return scalar(Expr::u_half(static_cast<int>(den == 2 ? num : 2 * num)));
      }
      return scalar(Expr::u_half(2));
    }
    if (s == "th") return scalar(Expr::theta());
    if (s == "log_r2") return scalar(GaussRat(2) * Expr::log_r());
    if (s == "p1") return Operator::p1();
    if (s == "p2") return Operator::p2();
    if (s == "L3") return Operator::l3();
    if (s == "s3") return Operator::mult(SpinExpr{Expr::zero(), Expr::integer(1)});
    if (s == "Id") return Operator::identity();
    if (s == "D") return scalar(parse_derivative());
    if (auto fid = func_of(s)) {
      ArgSig sig = parse_call_signature();
      return scalar(Expr::formal_factor(
          FormalDerivative{fid->kind, fid->nu, sig, 0, 0}));
    }
    if (auto fam = family_of(s)) {
      int i0 = -1, i1 = -1;
      if (accept(Tok::LBracket)) {
        if (peek().kind != Tok::Number)
          throw ParseError("expected constant index", peek().line, peek().col);
        i0 = static_cast<int>(next().value);
        if (accept(Tok::Comma)) {
          if (peek().kind != Tok::Number)
            throw ParseError("expected constant index", peek().line, peek().col);
          i1 = static_cast<int>(next().value);
        }
        expect(Tok::RBracket, "']'");
      }
      return scalar(Expr::constant(sym(*fam, i0, i1)));
    }
    throw ParseError("unknown identifier '" + s + "'", t.line, t.col);
  }

  ArgSig parse_call_signature() {
    expect(Tok::LParen, "'('");
    Token a = next();
    if (a.kind != Tok::Ident)
      throw ParseError("expected argument name", a.line, a.col);
    ArgSig sig;
    if (a.text == "x") {
      if (accept(Tok::Comma)) {
        Token b = next();
        if (b.kind != Tok::Ident || b.text != "y")
          throw ParseError("expected 'y'", b.line, b.col);
        sig = ArgSig::Cartesian;
      } else {
        sig = ArgSig::Profile;
      }
    } else if (a.text == "r") {
      sig = ArgSig::Radial;
    } else if (a.text == "r2") {
      sig = ArgSig::RadialSq;
    } else {
      throw ParseError("bad argument signature '" + a.text + "'", a.line, a.col);
    }
    expect(Tok::RParen, "')'");
    return sig;
  }

  // D[V1(r2); r2, r2] etc.
  Expr parse_derivative() {
    expect(Tok::LBracket, "'['");
    Token ft = next();
    if (ft.kind != Tok::Ident)
      throw ParseError("expected function name", ft.line, ft.col);
    auto fid = func_of(ft.text);
    if (!fid) throw ParseError("unknown function '" + ft.text + "'", ft.line, ft.col);
    ArgSig sig = parse_call_signature();
    expect(Tok::Semi, "';'");
    int dx = 0, dy = 0;
    while (true) {
      Token v = next();
      if (v.kind != Tok::Ident)
        throw ParseError("expected derivative variable", v.line, v.col);
      if (v.text == "y") {
        if (sig != ArgSig::Cartesian)
          throw ParseError("y-derivative on one-argument function", v.line,
                           v.col);
        ++dy;
      } else if ((v.text == "x" &&
                  (sig == ArgSig::Cartesian || sig == ArgSig::Profile)) ||
                 (v.text == "r" && sig == ArgSig::Radial) ||
                 (v.text == "r2" && sig == ArgSig::RadialSq)) {
        ++dx;
      } else {
        throw ParseError("derivative variable '" + v.text +
                             "' does not match signature",
                         v.line, v.col);
      }
      if (!accept(Tok::Comma)) break;
    }
    expect(Tok::RBracket, "']'");
    return Expr::formal_factor(FormalDerivative{fid->kind, fid->nu, sig, dx, dy});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expression(const std::string& text) {
  return detail::Parser(text).parse_expression();
}

inline Operator parse_operator(const std::string& text) {
  return detail::Parser(text).parse_operator();
}

}  // namespace spinorbit
