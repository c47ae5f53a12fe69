#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "spinorbit/rational.hpp"

namespace spinorbit {

// Families of symbolic constants appearing in the determining systems and
// their solutions. Printed names are the ASCII tokens of the shared grammar.
enum class ConstFamily : std::uint8_t {
  Omega,   // w
  A,       // a
  B,       // b
  Gamma,   // gam
  Chi,     // chi
  Alpha,   // alp
  Zeta,    // zet
  Eps,     // eps
  Lambda,  // lam
  G,       // G
  C,       // fc (free integration constants)
};

inline const char* family_name(ConstFamily f) {
  switch (f) {
    case ConstFamily::Omega: return "w";
    case ConstFamily::A: return "a";
    case ConstFamily::B: return "b";
    case ConstFamily::Gamma: return "gam";
    case ConstFamily::Chi: return "chi";
    case ConstFamily::Alpha: return "alp";
    case ConstFamily::Zeta: return "zet";
    case ConstFamily::Eps: return "eps";
    case ConstFamily::Lambda: return "lam";
    case ConstFamily::G: return "G";
    case ConstFamily::C: return "fc";
  }
  return "?";
}

// A named constant: family tag plus up to two small indices (-1 = unused).
// Constants commute with everything; equality is family+indices.
struct SymbolicConstant {
  ConstFamily fam = ConstFamily::C;
  int i0 = -1;
  int i1 = -1;

  friend bool operator==(const SymbolicConstant& a, const SymbolicConstant& b) {
    return a.fam == b.fam && a.i0 == b.i0 && a.i1 == b.i1;
  }
  friend bool operator!=(const SymbolicConstant& a, const SymbolicConstant& b) {
    return !(a == b);
  }
  friend bool operator<(const SymbolicConstant& a, const SymbolicConstant& b) {
    return std::tie(a.fam, a.i0, a.i1) < std::tie(b.fam, b.i0, b.i1);
  }

  std::string str() const {
    std::string s = family_name(fam);
    if (i0 >= 0) {
      s += "[" + std::to_string(i0);
      if (i1 >= 0) s += "," + std::to_string(i1);
      s += "]";
    }
    return s;
  }
};

inline SymbolicConstant sym(ConstFamily f, int i0 = -1, int i1 = -1) {
  return SymbolicConstant{f, i0, i1};
}

// Product of symbolic-constant powers, sorted, exponents nonzero.
using ConstPow = std::pair<SymbolicConstant, int>;
using ConstMono = std::vector<ConstPow>;

inline ConstMono const_mono_mul(const ConstMono& a, const ConstMono& b) {
  ConstMono out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      int e = a[i].second + b[j].second;
      if (e != 0) out.push_back({a[i].first, e});
      ++i;
      ++j;
    }
  }
  return out;
}

inline ConstMono const_mono_inv(const ConstMono& a) {
  ConstMono out = a;
  for (auto& p : out) p.second = -p.second;
  return out;
}

inline int const_mono_cmp(const ConstMono& a, const ConstMono& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k].first != b[k].first) return a[k].first < b[k].first ? -1 : 1;
    if (a[k].second != b[k].second) return a[k].second < b[k].second ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

}  // namespace spinorbit
