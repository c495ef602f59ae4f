#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

// Four-site chain Hamiltonian with equidistant diagonal (-3,-1,1,3) and
// antisymmetric off-diagonal couplings (b, a, c), where the upper coupling
// carries the up-down asymmetry through b = sqrt(c^2 + f^2).  Its secular
// equation is the quartic
//
//     E^4 - A E^2 - 4 f^2 E + C = 0,
//     A = 10 - a^2 - 2 c^2 - f^2,
//     C = (3 + c^2)^2 + f^2 (3 + c^2) - 9 a^2.

namespace rdom {

// Coupling triple (a, c, f).  The secular coefficients contain only even
// powers of the couplings, so inputs are canonicalized to absolute values:
// the parameter space is the positive octant and b is unambiguous.
struct Couplings {
  double a = 0.0;
  double c = 0.0;
  double f = 0.0;

  Couplings() = default;
  Couplings(double a_, double c_, double f_)
      : a(std::abs(a_)), c(std::abs(c_)), f(std::abs(f_)) {
    if (!std::isfinite(a_) || !std::isfinite(c_) || !std::isfinite(f_))
      throw std::invalid_argument("Couplings: non-finite input");
    if (!std::isfinite(b()))
      throw std::invalid_argument("Couplings: b = sqrt(c^2+f^2) overflows");
  }

  // Derived upper coupling.
  double b() const { return std::hypot(c, f); }
};

struct Matrix4 {
  std::array<std::array<double, 4>, 4> m{};

  double operator()(int i, int j) const { return m[i][j]; }
  double& operator()(int i, int j) { return m[i][j]; }

  double trace() const { return m[0][0] + m[1][1] + m[2][2] + m[3][3]; }
};

inline Matrix4 build_hamiltonian(const Couplings& k) {
  const double b = k.b();
  Matrix4 h;
  h.m = {{{-3.0, b, 0.0, 0.0},
          {-b, -1.0, k.a, 0.0},
          {0.0, -k.a, 1.0, k.c},
          {0.0, 0.0, -k.c, 3.0}}};
  return h;
}

// Coefficients of the secular quartic E^4 - A E^2 - 4 f^2 E + C.
// f2 is the tilt strength f^2 (the linear coefficient divided by -4).
struct SecularQuartic {
  double A = 0.0;
  double C = 0.0;
  double f2 = 0.0;
};

// C has three printed algebraic forms.  Form (ii) below has the fewest
// cancellations at large c and is the one returned; the other two are
// evaluated as built-in consistency checks.  Disagreement signals an
// implementation bug, not bad input.
inline SecularQuartic secular_quartic(const Couplings& k) {
  const double a2 = k.a * k.a;
  const double c2 = k.c * k.c;
  const double f2 = k.f * k.f;

  const double A = 10.0 - a2 - 2.0 * c2 - f2;

  const double c_i = 9.0 + 6.0 * c2 - 9.0 * a2 + 3.0 * f2 + c2 * c2 + f2 * c2;
  const double c_ii = (3.0 + c2) * (3.0 + c2) + f2 * (3.0 + c2) - 9.0 * a2;
  const double h = 3.0 + c2 + 0.5 * f2;
  const double c_iii = h * h - (9.0 * a2 + 0.25 * f2 * f2);

  const double tol = 1e-9 * (1.0 + std::abs(c_ii));
  if (std::abs(c_i - c_ii) > tol || std::abs(c_iii - c_ii) > tol)
    throw std::runtime_error("secular_quartic: C forms disagree beyond tolerance");

  return {A, c_ii, f2};
}

// Y(E) = E^4 - A E^2 - 4 f^2 E + C, Horner form.
inline double eval_secular(const SecularQuartic& q, double e) {
  if (!std::isfinite(e))
    throw std::invalid_argument("eval_secular: non-finite E");
  return ((e * e - q.A) * e - 4.0 * q.f2) * e + q.C;
}

}  // namespace rdom
