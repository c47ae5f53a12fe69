#pragma once

#include <string>
#include <tuple>

#include "spinorbit/rational.hpp"

namespace spinorbit {

// Uninterpreted functions the engine differentiates formally. V0, V1, F are
// the potentials; F1, F2, F3 the unknown coefficient functions of an
// integral-of-motion ansatz (carrying a spin-sector index); IV1 is the
// x-antiderivative of V1, with d/dx IV1 = V1 built into diff().
enum class FuncKind : std::uint8_t { V0, V1, F, F1, F2, F3, IV1 };

// Argument signature of a formal function.
enum class ArgSig : std::uint8_t {
  Cartesian,  // f(x, y)
  Radial,     // f(r)
  RadialSq,   // f(u), u = x^2 + y^2
  Profile,    // f(x)
};

inline const char* func_name(FuncKind k) {
  switch (k) {
    case FuncKind::V0: return "V0";
    case FuncKind::V1: return "V1";
    case FuncKind::F: return "F";
    case FuncKind::F1: return "F1";
    case FuncKind::F2: return "F2";
    case FuncKind::F3: return "F3";
    case FuncKind::IV1: return "IV1";
  }
  return "?";
}

inline const char* sig_arglist(ArgSig s) {
  switch (s) {
    case ArgSig::Cartesian: return "x,y";
    case ArgSig::Radial: return "r";
    case ArgSig::RadialSq: return "r2";
    case ArgSig::Profile: return "x";
  }
  return "?";
}

// One formal derivative factor. Cartesian derivatives store the sorted
// multi-index as (dx, dy) counts; one-argument signatures use dx as the
// derivative order.
struct FormalDerivative {
  FuncKind kind = FuncKind::V1;
  int nu = -1;  // spin sector for F1/F2/F3, -1 otherwise
  ArgSig sig = ArgSig::Cartesian;
  int dx = 0;
  int dy = 0;

  int order() const { return dx + dy; }

  std::string func_str() const {
    std::string s = func_name(kind);
    if (nu >= 0) s += "_" + std::to_string(nu);
    return s;
  }

  std::string str() const {
    std::string head = func_str() + "(" + sig_arglist(sig) + ")";
    if (dx == 0 && dy == 0) return head;
    std::string vars;
    const char* v1 = sig == ArgSig::Radial     ? "r"
                     : sig == ArgSig::RadialSq ? "r2"
                                               : "x";
    for (int k = 0; k < dx; ++k) {
      if (!vars.empty()) vars += ",";
      vars += v1;
    }
    for (int k = 0; k < dy; ++k) {
      if (!vars.empty()) vars += ",";
      vars += "y";
    }
    return "D[" + head + "; " + vars + "]";
  }

  friend bool operator==(const FormalDerivative& a, const FormalDerivative& b) {
    return std::tie(a.kind, a.nu, a.sig, a.dx, a.dy) ==
           std::tie(b.kind, b.nu, b.sig, b.dx, b.dy);
  }
  friend bool operator<(const FormalDerivative& a, const FormalDerivative& b) {
    return std::tie(a.kind, a.nu, a.sig, a.dx, a.dy) <
           std::tie(b.kind, b.nu, b.sig, b.dx, b.dy);
  }
};

inline FormalDerivative formal(FuncKind k, ArgSig s, int dx = 0, int dy = 0,
                               int nu = -1) {
  if (s != ArgSig::Cartesian && dy != 0)
    throw Error("FormalDerivative: y-derivative on one-argument signature");
  return FormalDerivative{k, nu, s, dx, dy};
}

}  // namespace spinorbit
