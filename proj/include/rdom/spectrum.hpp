#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "rdom/eig.hpp"
#include "rdom/model.hpp"

// Ground-truth spectra: eigenvalues of the physical matrix, roots of the
// secular quartic through its companion matrix, reality classification,
// and the self-duality residual max_j |E_j + E_{5-j}|.

namespace rdom {

enum class Classification { AllReal, OneComplexPair, TwoComplexPairs, DegenerateReal };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::AllReal: return "AllReal";
    case Classification::OneComplexPair: return "OneComplexPair";
    case Classification::TwoComplexPairs: return "TwoComplexPairs";
    case Classification::DegenerateReal: return "DegenerateReal";
  }
  return "?";
}

// Two-tier reality band: a root counts as real when
// |Im E| <= abs_tol + rel_tol * max_j |E_j|.
struct RealityTolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;

  void validate() const {
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0))
      throw std::invalid_argument("RealityTolerance: tolerances must be >= 0");
    if (abs_tol == 0.0 && rel_tol == 0.0)
      throw std::invalid_argument("RealityTolerance: at least one tolerance must be > 0");
  }
};

struct SpectrumResult {
  Roots4 roots;
  Classification classification;
  double tol_used;
};

inline Roots4 matrix_eigenvalues(const Matrix4& m) { return dense4_eigenvalues(m.m); }

// Roots of E^4 - A E^2 - 4 f^2 E + C via the companion matrix (already
// upper Hessenberg).  Independent of build_hamiltonian: the input
// coefficients come from the printed formulas, not from the matrix.
inline Roots4 quartic_roots(const SecularQuartic& q) {
  detail::Raw4 companion = {{{0.0, q.A, 4.0 * q.f2, -q.C},
                             {1.0, 0.0, 0.0, 0.0},
                             {0.0, 1.0, 0.0, 0.0},
                             {0.0, 0.0, 1.0, 0.0}}};
  return dense4_eigenvalues(companion);
}

inline double spectral_scale(const Roots4& roots) {
  double s = 0.0;
  for (const auto& e : roots) s = std::max(s, std::abs(e));
  return s;
}

inline Classification classify_reality(const Roots4& roots, RealityTolerance tol = {}) {
  tol.validate();
  const double band = tol.abs_tol + tol.rel_tol * spectral_scale(roots);
  int complex_count = 0;
  for (const auto& e : roots)
    if (std::abs(e.imag()) > band) ++complex_count;
  if (complex_count == 0) {
    // adjacent near-coincidence flags an exceptional point
    for (int j = 0; j < 3; ++j)
      if (roots[j + 1].real() - roots[j].real() <= tol.abs_tol * 10.0)
        return Classification::DegenerateReal;
    return Classification::AllReal;
  }
  return complex_count <= 2 ? Classification::OneComplexPair
                            : Classification::TwoComplexPairs;
}

inline SpectrumResult spectrum_of(const Couplings& k, RealityTolerance tol = {}) {
  SpectrumResult r;
  r.roots = matrix_eigenvalues(build_hamiltonian(k));
  r.classification = classify_reality(r.roots, tol);
  r.tol_used = tol.abs_tol + tol.rel_tol * spectral_scale(r.roots);
  return r;
}

// max_j |E_j + E_{5-j}|; zero iff the spectrum is reflection-symmetric.
inline double self_duality_residual(const Roots4& roots, RealityTolerance tol = {}) {
  tol.validate();
  const double band = tol.abs_tol + tol.rel_tol * spectral_scale(roots);
  for (const auto& e : roots)
    if (std::abs(e.imag()) > band)
      throw std::invalid_argument("self_duality_residual: spectrum is not all-real");
  double worst = 0.0;
  for (int j = 0; j < 4; ++j)
    worst = std::max(worst, std::abs(roots[j].real() + roots[3 - j].real()));
  return worst;
}

// Signs of the root shifts induced by the asymmetry tilt: the roots of
// E^4 - A E^2 - 4 f^2 E + C against the roots of the same curve with the
// tilt switched off (E^4 - A E^2 + C, identical A and C).  Inside the
// physical domain the pattern is (+, -, -, +); zero shifts satisfy it
// nonstrictly.
struct RootShiftSigns {
  std::array<int, 4> sign{};  // each -1, 0 or +1

  bool matches_duality_breaking_pattern() const {
    return sign[0] >= 0 && sign[1] <= 0 && sign[2] <= 0 && sign[3] >= 0;
  }
};

inline RootShiftSigns root_shift_signs(const Couplings& k, RealityTolerance tol = {},
                                       double zero_tol = 1e-11) {
  const SecularQuartic q = secular_quartic(k);
  const Roots4 tilted = quartic_roots(q);
  const Roots4 untilted = quartic_roots({q.A, q.C, 0.0});
  const auto real_spectrum = [&](const Roots4& r) {
    const Classification cls = classify_reality(r, tol);
    return cls == Classification::AllReal || cls == Classification::DegenerateReal;
  };
  if (!real_spectrum(tilted))
    throw std::invalid_argument("root_shift_signs: tilted spectrum is not all-real");
  if (!real_spectrum(untilted))
    throw std::invalid_argument("root_shift_signs: untilted spectrum is not all-real");
  const double scale = std::max(spectral_scale(tilted), spectral_scale(untilted));
  const double band = zero_tol * (1.0 + scale);
  RootShiftSigns out;
  for (int j = 0; j < 4; ++j) {
    const double d = tilted[j].real() - untilted[j].real();
    out.sign[j] = std::abs(d) <= band ? 0 : (d > 0.0 ? 1 : -1);
  }
  return out;
}

// Coefficients (1, c1, c2, c3, c4) of det(E I - M) by Faddeev-LeVerrier.
// For the chain Hamiltonian they match (1, 0, -A, -4 f^2, C).
inline std::array<double, 5> char_poly(const Matrix4& m) {
  auto mul = [](const detail::Raw4& x, const detail::Raw4& y) {
    detail::Raw4 r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += x[i][k] * y[k][j];
        r[i][j] = s;
      }
    return r;
  };
  auto tr = [](const detail::Raw4& x) { return x[0][0] + x[1][1] + x[2][2] + x[3][3]; };

  std::array<double, 5> c{1.0, 0.0, 0.0, 0.0, 0.0};
  detail::Raw4 mk = m.m;
  for (int k = 1; k <= 4; ++k) {
    c[k] = -tr(mk) / k;
    if (k == 4) break;
    detail::Raw4 shifted = mk;
    for (int i = 0; i < 4; ++i) shifted[i][i] += c[k];
    mk = mul(m.m, shifted);
  }
  return c;
}

inline double determinant(const Matrix4& m) { return char_poly(m)[4]; }

}  // namespace rdom
