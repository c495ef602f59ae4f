#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "rdom/model.hpp"
#include "rdom/spectrum.hpp"

using namespace rdom;

namespace {

bool close(const std::complex<double>& z, double re, double im, double tol) {
  return std::abs(z - std::complex<double>(re, im)) <= tol;
}

}  // namespace

TEST_CASE("matrix_eigenvalues: anchors") {
  SUBCASE("diagonal spectrum") {
    const Roots4 r = matrix_eigenvalues(build_hamiltonian(Couplings(0, 0, 0)));
    CHECK(close(r[0], -3, 0, 1e-12));
    CHECK(close(r[1], -1, 0, 1e-12));
    CHECK(close(r[2], 1, 0, 1e-12));
    CHECK(close(r[3], 3, 0, 1e-12));
  }
  SUBCASE("decoupled block, real regime (f = 0.5)") {
    const Roots4 r = matrix_eigenvalues(build_hamiltonian(Couplings(0, 0, 0.5)));
    const double s = std::sqrt(0.75);
    CHECK(close(r[0], -2 - s, 0, 1e-12));
    CHECK(close(r[1], -2 + s, 0, 1e-12));
    CHECK(close(r[2], 1, 0, 1e-12));
    CHECK(close(r[3], 3, 0, 1e-12));
  }
  SUBCASE("decoupled block, complex regime (f = 1.5)") {
    const Roots4 r = matrix_eigenvalues(build_hamiltonian(Couplings(0, 0, 1.5)));
    const double s = std::sqrt(1.25);
    CHECK(close(r[0], -2, -s, 1e-12));
    CHECK(close(r[1], -2, s, 1e-12));
    CHECK(close(r[2], 1, 0, 1e-12));
    CHECK(close(r[3], 3, 0, 1e-12));
  }
}

TEST_CASE("quartic_roots: anchors") {
  SUBCASE("biquadratic factorization (E^2-1)(E^2-9)") {
    const Roots4 r = quartic_roots({10, 9, 0});
    CHECK(close(r[0], -3, 0, 1e-12));
    CHECK(close(r[1], -1, 0, 1e-12));
    CHECK(close(r[2], 1, 0, 1e-12));
    CHECK(close(r[3], 3, 0, 1e-12));
  }
  SUBCASE("degenerate double pair (E^2-2)^2") {
    const Roots4 r = quartic_roots({4, 4, 0});
    const double s2 = std::sqrt(2.0);
    CHECK(close(r[0], -s2, 0, 1e-7));
    CHECK(close(r[1], -s2, 0, 1e-7));
    CHECK(close(r[2], s2, 0, 1e-7));
    CHECK(close(r[3], s2, 0, 1e-7));
  }
  SUBCASE("matches the matrix route at (1,1,1)") {
    const Roots4 rq = quartic_roots(secular_quartic(Couplings(1, 1, 1)));
    const Roots4 rm = matrix_eigenvalues(build_hamiltonian(Couplings(1, 1, 1)));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(rq[i] - rm[i]) <= 1e-9);
  }
}

TEST_CASE("classify_reality") {
  CHECK(classify_reality({{-3.0, -1.0, 1.0, 3.0}}) == Classification::AllReal);
  CHECK(classify_reality({{{-2.0, -1.118}, {-2.0, 1.118}, {1.0, 0.0}, {3.0, 0.0}}}) ==
        Classification::OneComplexPair);
  const double s2 = std::sqrt(2.0);
  CHECK(classify_reality({{-s2, -s2, s2, s2}}) == Classification::DegenerateReal);
  CHECK(classify_reality({{{0.0, -2.0}, {0.0, -1.0}, {0.0, 1.0}, {0.0, 2.0}}}) ==
        Classification::TwoComplexPairs);
  CHECK_THROWS_AS(classify_reality({{-3.0, -1.0, 1.0, 3.0}}, RealityTolerance{0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(classify_reality({{-3.0, -1.0, 1.0, 3.0}}, RealityTolerance{-1, 1}),
                  std::invalid_argument);
}

TEST_CASE("self_duality_residual") {
  CHECK(self_duality_residual({{-3.0, -1.0, 1.0, 3.0}}) == 0.0);
  SUBCASE("f = 0 spectra are self-dual") {
    const Roots4 r = matrix_eigenvalues(build_hamiltonian(Couplings(1, 1, 0)));
    REQUIRE(classify_reality(r) == Classification::AllReal);
    CHECK(self_duality_residual(r) < 1e-10);
  }
  SUBCASE("f > 0 breaks the duality") {
    const Roots4 r = matrix_eigenvalues(build_hamiltonian(Couplings(0, 0, 0.5)));
    const double expected = 1.0 - std::sqrt(0.75);  // |(-2-sqrt(0.75)) + 3|
    CHECK(self_duality_residual(r) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(self_duality_residual(r) > 0.1);
  }
  SUBCASE("rejects non-real spectra") {
    const Roots4 r = matrix_eigenvalues(build_hamiltonian(Couplings(0, 0, 1.5)));
    CHECK_THROWS_AS(self_duality_residual(r), std::invalid_argument);
  }
}

TEST_CASE("root_shift_signs: tilt pattern (+,-,-,+)") {
  SUBCASE("(0,0,0.5): strict pattern") {
    const RootShiftSigns s = root_shift_signs(Couplings(0, 0, 0.5));
    CHECK(s.sign[0] == 1);
    CHECK(s.sign[1] == -1);
    CHECK(s.sign[2] == -1);
    CHECK(s.sign[3] == 1);
    CHECK(s.matches_duality_breaking_pattern());
  }
  SUBCASE("(1,1,0.3)") {
    const RootShiftSigns s = root_shift_signs(Couplings(1, 1, 0.3));
    CHECK(s.sign[0] == 1);
    CHECK(s.sign[1] == -1);
    CHECK(s.sign[2] == -1);
    CHECK(s.sign[3] == 1);
    CHECK(s.matches_duality_breaking_pattern());
  }
  SUBCASE("f = 0: zero shifts satisfy the pattern nonstrictly") {
    const RootShiftSigns s = root_shift_signs(Couplings(1, 1, 0));
    for (int i = 0; i < 4; ++i) CHECK(s.sign[i] == 0);
    CHECK(s.matches_duality_breaking_pattern());
  }
  SUBCASE("precondition: tilted spectrum must be real") {
    CHECK_THROWS_AS(root_shift_signs(Couplings(1, 1, 1)), std::invalid_argument);
  }
  SUBCASE("precondition: untilted spectrum must be real (interior point with C < 0)") {
    const Couplings k(1.085, 0.2, 0.657);
    REQUIRE(classify_reality(matrix_eigenvalues(build_hamiltonian(k))) ==
            Classification::AllReal);
    REQUIRE(secular_quartic(k).C < 0.0);
    CHECK_THROWS_AS(root_shift_signs(k), std::invalid_argument);
  }
}

TEST_CASE("spectrum_of bundles roots, classification, and the band used") {
  const SpectrumResult r = spectrum_of(Couplings(0, 0, 1.5));
  CHECK(r.classification == Classification::OneComplexPair);
  CHECK(r.tol_used == 1e-10 + 1e-12 * spectral_scale(r.roots));
  for (int i = 1; i < 4; ++i) {
    CHECK(r.roots[i - 1].real() <= r.roots[i].real());
    if (r.roots[i - 1].real() == r.roots[i].real())
      CHECK(r.roots[i - 1].imag() <= r.roots[i].imag());
  }
  const RealityTolerance loose{1e-3, 1e-3};
  CHECK(spectrum_of(Couplings(0, 0, 1.5), loose).tol_used > 1e-3);
}

TEST_CASE("Vieta suite on the quartic route") {
  oracle::Rng rng(401);
  for (int n = 0; n < 100000; ++n) {
    const Couplings k(rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(0, 4));
    const SecularQuartic q = secular_quartic(k);
    const Roots4 r = quartic_roots(q);
    const double s = spectral_scale(r);
    const double tol = 1e-9 * (1.0 + s * s * s * s);
    const std::complex<double> sum = r[0] + r[1] + r[2] + r[3];
    const std::complex<double> pair = r[0] * r[1] + r[0] * r[2] + r[0] * r[3] +
                                      r[1] * r[2] + r[1] * r[3] + r[2] * r[3];
    const std::complex<double> triple = r[0] * r[1] * r[2] + r[0] * r[1] * r[3] +
                                        r[0] * r[2] * r[3] + r[1] * r[2] * r[3];
    const std::complex<double> prod = r[0] * r[1] * r[2] * r[3];
    CHECK(std::abs(sum) <= tol);
    CHECK(std::abs(pair - std::complex<double>(-q.A)) <= tol);
    CHECK(std::abs(triple - std::complex<double>(4.0 * q.f2)) <= tol);
    CHECK(std::abs(prod - std::complex<double>(q.C)) <= tol);
    // sum of squares = 2A (trace of H^2)
    const std::complex<double> sq = r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3];
    CHECK(std::abs(sq - std::complex<double>(2.0 * q.A)) <= 1e-9 * (1.0 + 2.0 * std::abs(q.A)));
  }
}

TEST_CASE("the two root paths agree elementwise") {
  oracle::Rng rng(409);
  for (int n = 0; n < 100000; ++n) {
    const Couplings k(rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(0, 4));
    const Roots4 rm = matrix_eigenvalues(build_hamiltonian(k));
    const Roots4 rq = quartic_roots(secular_quartic(k));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(rm[i] - rq[i]) <= 1e-9);
  }
}

TEST_CASE("non-real roots come in conjugate pairs") {
  oracle::Rng rng(419);
  for (int n = 0; n < 20000; ++n) {
    const Couplings k(rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(0, 4));
    const Roots4 r = matrix_eigenvalues(build_hamiltonian(k));
    const double band = 1e-10 + 1e-12 * spectral_scale(r);
    for (int i = 0; i < 4; ++i) {
      if (std::abs(r[i].imag()) <= band) continue;
      bool partnered = false;
      for (int j = 0; j < 4; ++j)
        if (std::abs(std::conj(r[i]) - r[j]) <= 1e-9) partnered = true;
      CHECK(partnered);
    }
  }
}

TEST_CASE("f = 0: every all-real spectrum is self-dual") {
  oracle::Rng rng(421);
  int seen = 0;
  // the all-real region covers only a few percent of the window, so sample
  // until enough spectra qualify
  for (int n = 0; n < 300000 && seen < 10000; ++n) {
    const Couplings k(rng.uniform(0, 4), rng.uniform(0, 4), 0);
    const Roots4 r = matrix_eigenvalues(build_hamiltonian(k));
    if (classify_reality(r) != Classification::AllReal) continue;
    ++seen;
    CHECK(self_duality_residual(r) < 1e-10);
  }
  CHECK(seen >= 10000);
}

TEST_CASE("rightmost pair stays separated for f > 1e-3") {
  oracle::Rng rng(431);
  double min_gap = 1e300;
  int seen = 0;
  for (int n = 0; n < 50000; ++n) {
    const Couplings k(rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(1e-3, 2));
    const Roots4 r = matrix_eigenvalues(build_hamiltonian(k));
    const Classification cls = classify_reality(r);
    if (cls != Classification::AllReal && cls != Classification::DegenerateReal)
      continue;
    ++seen;
    min_gap = std::min(min_gap, r[3].real() - r[2].real());
  }
  CHECK(seen > 500);
  CHECK(min_gap > 0.0);
}
