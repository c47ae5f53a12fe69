#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "spinorbit/calculus.hpp"
#include "spinorbit/gauge.hpp"
#include "spinorbit/operator.hpp"

namespace spinorbit {

using Cplx = std::complex<double>;

// Closed-form test function: polynomial in x, y times an optional Gaussian
// envelope exp(-(x^2+y^2)/2). Derivatives stay in the family and are exact.
struct NumFunc {
  bool gaussian = false;
  std::map<std::pair<int, int>, double> coeffs;

  static NumFunc polynomial(std::map<std::pair<int, int>, double> c) {
    return {false, std::move(c)};
  }
  static NumFunc gaussian_times(std::map<std::pair<int, int>, double> c) {
    return {true, std::move(c)};
  }

  double eval(double x, double y) const {
    double p = 0;
    for (const auto& [ij, c] : coeffs)
      p += c * std::pow(x, ij.first) * std::pow(y, ij.second);
    if (gaussian) p *= std::exp(-0.5 * (x * x + y * y));
    return p;
  }

  NumFunc dx() const {
    NumFunc r;
    r.gaussian = gaussian;
    for (const auto& [ij, c] : coeffs) {
      if (ij.first > 0) r.coeffs[{ij.first - 1, ij.second}] += c * ij.first;
      if (gaussian) r.coeffs[{ij.first + 1, ij.second}] -= c;
    }
    return r;
  }
  NumFunc dy() const {
    NumFunc r;
    r.gaussian = gaussian;
    for (const auto& [ij, c] : coeffs) {
      if (ij.second > 0) r.coeffs[{ij.first, ij.second - 1}] += c * ij.second;
      if (gaussian) r.coeffs[{ij.first, ij.second + 1}] -= c;
    }
    return r;
  }
  NumFunc derive(int nx, int ny) const {
    NumFunc r = *this;
    for (int k = 0; k < nx; ++k) r = r.dx();
    for (int k = 0; k < ny; ++k) r = r.dy();
    return r;
  }
};

struct TestSpinor {
  NumFunc up, dn;

  // default probe: (1 + x + x^2 y) e^{-r^2/2} and (y - x y) e^{-r^2/2}
  static TestSpinor default_probe() {
    TestSpinor s;
    s.up = NumFunc::gaussian_times({{{0, 0}, 1.0}, {{1, 0}, 1.0},
                                    {{2, 1}, 1.0}});
    s.dn = NumFunc::gaussian_times({{{0, 1}, 1.0}, {{1, 1}, -1.0}});
    return s;
  }
};

// Uniform sample grid on [-1,1]^2; the lines |x| < x_exclude are skipped
// because the gauge formulas divide by x.
struct GridSpec {
  int n = 21;
  double lo = -1.0, hi = 1.0;
  double x_exclude = 1e-3;
  double tol_residual = 1e-10;
  double tol_fd = 1e-8;

  std::vector<std::pair<double, double>> points() const {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) {
      double x = lo + (hi - lo) * i / (n - 1);
      if (std::abs(x) < x_exclude) continue;
      for (int j = 0; j < n; ++j) {
        double y = lo + (hi - lo) * j / (n - 1);
        pts.push_back({x, y});
      }
    }
    return pts;
  }
};

namespace detail {

inline Cplx eval_spin_part(const Expr& e, double x, double y,
                           const EvalEnv& env) {
  return e.is_zero() ? Cplx(0.0) : eval(e, x, y, env);
}

}  // namespace detail

// Exact symbolic application of an operator to a test spinor at one point:
// coefficients evaluate numerically, derivatives of the spinor are the
// family's closed forms.
inline std::pair<Cplx, Cplx> apply_numeric(const Operator& op,
                                           const TestSpinor& psi, double x,
                                           double y, const EvalEnv& env = {}) {
  Cplx up = 0, dn = 0;
  for (const auto& [dm, c] : op.terms()) {
    Cplx cid = detail::eval_spin_part(c.id, x, y, env);
    Cplx cs3 = detail::eval_spin_part(c.s3, x, y, env);
    double du = psi.up.derive(dm.nx, dm.ny).eval(x, y);
    double dv = psi.dn.derive(dm.nx, dm.ny).eval(x, y);
    up += (cid + cs3) * du;
    dn += (cid - cs3) * dv;
  }
  return {up, dn};
}

// Max absolute value of (A psi) over the grid and both components.
inline double residual_norm(const Operator& op, const TestSpinor& psi,
                            const GridSpec& grid, const EvalEnv& env = {}) {
  double worst = 0;
  for (auto [x, y] : grid.points()) {
    auto [up, dn] = apply_numeric(op, psi, x, y, env);
    worst = std::max({worst, std::abs(up), std::abs(dn)});
  }
  return worst;
}

namespace detail {

// 4th-order central stencils, step h.
inline double fd1(const std::function<double(double)>& f, double t, double h) {
  return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) /
         (12 * h);
}
inline double fd2(const std::function<double(double)>& f, double t, double h) {
  return (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) -
          f(t - 2 * h)) /
         (12 * h * h);
}

inline double fd_derivative(const NumFunc& f, int nx, int ny, double x,
                            double y, double h) {
  if (nx == 0 && ny == 0) return f.eval(x, y);
  if (nx == 1 && ny == 0)
    return fd1([&](double t) { return f.eval(t, y); }, x, h);
  if (nx == 0 && ny == 1)
    return fd1([&](double t) { return f.eval(x, t); }, y, h);
  if (nx == 2 && ny == 0)
    return fd2([&](double t) { return f.eval(t, y); }, x, h);
  if (nx == 0 && ny == 2)
    return fd2([&](double t) { return f.eval(x, t); }, y, h);
  if (nx == 1 && ny == 1)
    return fd1(
        [&](double t) {
          return fd1([&](double s) { return f.eval(s, t); }, x, h);
        },
        y, h);
  throw Error("fd_derivative: derivative order above 2");
}

}  // namespace detail

// Re-evaluates apply(A, psi) with the spinor derivatives replaced by central
// finite differences; returns the max discrepancy against the exact route.
inline double fd_cross_check(const Operator& op, const TestSpinor& psi,
                             const GridSpec& grid, const EvalEnv& env = {},
                             double h = 1e-3) {
  if (op.order() > 2) throw Error("fd_cross_check: operator order above 2");
  double worst = 0;
  for (auto [x, y] : grid.points()) {
    Cplx up = 0, dn = 0;
    for (const auto& [dm, c] : op.terms()) {
      Cplx cid = detail::eval_spin_part(c.id, x, y, env);
      Cplx cs3 = detail::eval_spin_part(c.s3, x, y, env);
      double du = detail::fd_derivative(psi.up, dm.nx, dm.ny, x, y, h);
      double dv = detail::fd_derivative(psi.dn, dm.nx, dm.ny, x, y, h);
      up += (cid + cs3) * du;
      dn += (cid - cs3) * dv;
    }
    auto [eu, ed] = apply_numeric(op, psi, x, y, env);
    worst = std::max({worst, std::abs(up - eu), std::abs(dn - ed)});
  }
  return worst;
}

namespace detail {

// phi = e^{i s alpha} B with exact derivatives up to second order: the
// alpha-derivatives are symbolic (rational in x, y), the base function is a
// closed-form family member, so no finite differences enter.
struct PhasedFunction {
  int sign;
  const NumFunc* base;
  Expr ax, ay, axx, axy, ayy;

  // derivative of phi divided by the phase factor
  Cplx reduced(int nx, int ny, double x, double y, const EvalEnv& env) const {
    const Cplx is = Cplx(0, sign);
    auto ev = [&](const Expr& e) { return eval(e, x, y, env); };
    double b = base->eval(x, y);
    double bx = base->dx().eval(x, y), by = base->dy().eval(x, y);
    if (nx == 0 && ny == 0) return b;
    if (nx == 1 && ny == 0) return bx + is * ev(ax) * b;
    if (nx == 0 && ny == 1) return by + is * ev(ay) * b;
    double bxx = base->dx().dx().eval(x, y);
    double byy = base->dy().dy().eval(x, y);
    double bxy = base->dx().dy().eval(x, y);
    if (nx == 2 && ny == 0) {
      Cplx a1 = is * ev(ax);
      return bxx + 2.0 * a1 * bx + (is * ev(axx) + a1 * a1) * b;
    }
    if (nx == 0 && ny == 2) {
      Cplx a1 = is * ev(ay);
      return byy + 2.0 * a1 * by + (is * ev(ayy) + a1 * a1) * b;
    }
    if (nx == 1 && ny == 1) {
      Cplx a1 = is * ev(ax), a2 = is * ev(ay);
      return bxy + a1 * by + a2 * bx + (is * ev(axy) + a1 * a2) * b;
    }
    throw Error("PhasedFunction: derivative order above 2");
  }
};

}  // namespace detail

// Numerical verification that conjugating H[V0, V1] by the gauge phases
// U = diag(e^{i alpha}, e^{-i alpha}) reproduces H built from the transformed
// potentials. Both sides act on the test spinor through exact closed-form
// derivatives; the phases cancel pointwise, so no branch bookkeeping is
// needed.
inline double conjugation_check(const Expr& v0, const Expr& v1,
                                const GaugeFunction& g, const GridSpec& grid,
                                const EvalEnv& env = {}) {
  if (!g.alpha) throw Error("conjugation_check: alpha is not materialized");
  auto [v0t, v1t] = transform(v0, v1, g);
  TestSpinor psi = TestSpinor::default_probe();
  Expr ax = diff(*g.alpha, Var::X), ay = diff(*g.alpha, Var::Y);
  detail::PhasedFunction up{+1, &psi.up, ax, ay, diff(ax, Var::X),
                            diff(ax, Var::Y), diff(ay, Var::Y)};
  detail::PhasedFunction dn = up;
  dn.sign = -1;
  dn.base = &psi.dn;
  const Cplx I(0, 1);
  double worst = 0;
  for (auto [x, y] : grid.points()) {
    Cplx v0v = eval(v0, x, y, env);
    Cplx v1v = eval(v1, x, y, env);
    Expr l3v1e = l3_of(v1);
    Cplx l3v1 = l3v1e.is_zero() ? Cplx(0) : eval(l3v1e, x, y, env);
    // conjugated side: the phase of each component cancels against U^-1
    auto lhs_component = [&](const detail::PhasedFunction& f, double s3) {
      Cplx lap = f.reduced(2, 0, x, y, env) + f.reduced(0, 2, x, y, env);
      Cplx l3f = I * (y * f.reduced(1, 0, x, y, env) -
                      x * f.reduced(0, 1, x, y, env));
      Cplx val = f.reduced(0, 0, x, y, env);
      return -0.5 * lap + v0v * val + s3 * v1v * l3f + 0.5 * s3 * l3v1 * val;
    };
    Cplx lhs_up = lhs_component(up, +1.0);
    Cplx lhs_dn = lhs_component(dn, -1.0);
    // transformed side on the bare spinor
    Cplx v0tv = eval(v0t, x, y, env);
    Cplx v1tv = eval(v1t, x, y, env);
    Expr l3v1te = l3_of(v1t);
    Cplx l3v1tv = l3v1te.is_zero() ? Cplx(0) : eval(l3v1te, x, y, env);
    auto rhs_component = [&](const NumFunc& f, double s3) {
      double lap = f.derive(2, 0).eval(x, y) + f.derive(0, 2).eval(x, y);
      Cplx l3f = I * (y * f.derive(1, 0).eval(x, y) -
                      x * f.derive(0, 1).eval(x, y));
      double val = f.eval(x, y);
      return -0.5 * lap + v0tv * val + s3 * v1tv * l3f +
             0.5 * s3 * l3v1tv * val;
    };
    Cplx rhs_up = rhs_component(psi.up, +1.0);
    Cplx rhs_dn = rhs_component(psi.dn, -1.0);
    worst = std::max(
        {worst, std::abs(lhs_up - rhs_up), std::abs(lhs_dn - rhs_dn)});
  }
  return worst;
}

}  // namespace spinorbit
