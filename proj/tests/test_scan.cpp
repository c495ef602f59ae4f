#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rdom/domain.hpp"
#include "rdom/scan.hpp"

using namespace rdom;

TEST_CASE("scan_slice: shape, ordering, and f = 0 agreement") {
  SliceSpec spec;
  spec.fixed_f = 0.0;
  spec.a_steps = spec.c_steps = 101;
  const ClassifiedGrid grid = scan_slice(spec);
  CHECK(grid.cells.size() == 10201);
  // row-major: a index outer, c index inner
  CHECK(grid.cells[0].a == 0.0);
  CHECK(grid.cells[0].c == 0.0);
  CHECK(grid.cells[100].a == 0.0);
  CHECK(grid.cells[100].c == 4.0);
  CHECK(grid.cells[101].a == spec.a_at(1));
  CHECK(grid.summary.disagreements == 0);
  CHECK(grid.summary.inside > 0);
  CHECK(grid.summary.outside > 0);
}

TEST_CASE("scan_slice: f = 0.5 keeps an interior containing the origin") {
  SliceSpec spec;
  spec.fixed_f = 0.5;
  spec.a_steps = spec.c_steps = 101;
  const ClassifiedGrid grid = scan_slice(spec);
  CHECK(grid.summary.inside > 0);
  CHECK(grid.cells[0].verdict == Verdict::Inside);  // (a, c) = (0, 0)
  CHECK(grid.summary.disagreements == 0);
}

TEST_CASE("scan_slice: f = 3 exceeds every f_upper, all outside") {
  SliceSpec spec;
  spec.fixed_f = 3.0;
  spec.a_steps = spec.c_steps = 51;
  const ClassifiedGrid grid = scan_slice(spec);
  CHECK(grid.summary.inside == 0);
  CHECK(grid.summary.boundary == 0);
  CHECK(grid.summary.all_real == 0);
  CHECK(grid.summary.degenerate == 0);
}

TEST_CASE("scan_slice: deterministic across thread counts") {
  SliceSpec spec;
  spec.fixed_f = 0.25;
  spec.a_steps = spec.c_steps = 41;
  const ClassifiedGrid serial = scan_slice(spec, {}, {}, 1);
  const ClassifiedGrid threaded = scan_slice(spec, {}, {}, 4);
  REQUIRE(serial.cells.size() == threaded.cells.size());
  for (std::size_t i = 0; i < serial.cells.size(); ++i) {
    CHECK(serial.cells[i].a == threaded.cells[i].a);
    CHECK(serial.cells[i].c == threaded.cells[i].c);
    CHECK(serial.cells[i].verdict == threaded.cells[i].verdict);
    CHECK(serial.cells[i].slack == threaded.cells[i].slack);
    CHECK(serial.cells[i].oracle == threaded.cells[i].oracle);
  }
}

TEST_CASE("scan_slice: shrinkage probe as f grows (reported, not asserted)") {
  // empirical observation only: no monotonicity theorem is claimed
  std::string counts;
  long prev = -1;
  bool monotone = true;
  for (const double f : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5}) {
    SliceSpec spec;
    spec.fixed_f = f;
    spec.a_steps = spec.c_steps = 41;
    const ClassifiedGrid grid = scan_slice(spec);
    if (prev >= 0 && grid.summary.inside > prev) monotone = false;
    prev = grid.summary.inside;
    counts += std::to_string(grid.summary.inside) + " ";
  }
  counts += monotone ? "(non-increasing)" : "(NOT monotone)";
  MESSAGE("inside-cell counts over f = 0, 0.25, ..., 1.5: ", counts);
  CHECK(prev >= 0);
}

TEST_CASE("scan_slice: rejects invalid slice specs") {
  SliceSpec bad;
  bad.a_steps = 1;
  CHECK_THROWS_AS(scan_slice(bad), std::invalid_argument);
  SliceSpec negf;
  negf.fixed_f = -1.0;
  CHECK_THROWS_AS(scan_slice(negf), std::invalid_argument);
  SliceSpec flipped;
  flipped.a_lo = 3.0;
  flipped.a_hi = 1.0;
  CHECK_THROWS_AS(scan_slice(flipped), std::invalid_argument);
}

TEST_CASE("trace_boundary: f = 0 lands on the closed-form boundary") {
  const BoundaryTrace trace = trace_boundary(0.0, 32, 1e-8);
  CHECK(trace.points.size() == 32);
  for (const TracePoint& p : trace.points) {
    CHECK(p.probes_ok);
    CHECK(std::abs(p.slack) <= trace.method_tol);
    const SecularQuartic q = secular_quartic(Couplings(p.a, p.c, 0.0));
    const double residual = std::min(std::abs(q.C), std::abs(q.A * q.A / 4.0 - q.C));
    CHECK(residual <= 1e-8);
  }
  for (std::size_t i = 1; i < trace.points.size(); ++i)
    CHECK(trace.points[i].ray_angle > trace.points[i - 1].ray_angle);
}

TEST_CASE("trace_boundary: f = 0.5 probes straddle the oracle transition") {
  const BoundaryTrace trace = trace_boundary(0.5, 8, 1e-8);
  CHECK(trace.points.size() == 8);
  for (const TracePoint& p : trace.points) {
    CHECK(p.probes_ok);
    const double dx = std::cos(p.ray_angle), dy = std::sin(p.ray_angle);
    const double t = 1e-6;  // oracle probes need room to resolve the pair
    const Classification in_cls = classify_reality(matrix_eigenvalues(
        build_hamiltonian(Couplings(p.a - t * dx, p.c - t * dy, 0.5))));
    const Classification out_cls = classify_reality(matrix_eigenvalues(
        build_hamiltonian(Couplings(p.a + t * dx, p.c + t * dy, 0.5))));
    CHECK(oracle_real(in_cls));
    CHECK(!oracle_real(out_cls));
  }
}

TEST_CASE("trace_boundary: no interior seed at large f") {
  CHECK_THROWS_AS(trace_boundary(3.0, 8, 1e-8), NoInteriorSeed);
}

TEST_CASE("figure1_data: sign changes count the real energies") {
  SUBCASE("diagonal case has four crossings") {
    const CurveData cd = figure1_data(Couplings(0, 0, 0), -4, 4, 400);
    CHECK(cd.x.size() == 400);
    CHECK(sign_changes(cd) == 4);
  }
  SUBCASE("complex pair leaves two crossings") {
    const CurveData cd = figure1_data(Couplings(0, 0, 1.5), -4, 4, 400);
    CHECK(sign_changes(cd) == 2);
  }
  SUBCASE("random points match the oracle real-root count") {
    oracle::Rng rng(601);
    int checked = 0;
    while (checked < 100) {
      const Couplings k(rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(0, 2));
      const Roots4 r = matrix_eigenvalues(build_hamiltonian(k));
      const double scale = spectral_scale(r);
      const double lo = -scale - 1.0, hi = scale + 1.0;
      const int steps = 4001;
      const double step = (hi - lo) / (steps - 1);
      int real_count = 0;
      double min_gap = 1e300;
      double prev = 0.0;
      bool have_prev = false;
      bool degenerate = false;
      for (const auto& e : r) {
        if (std::abs(e.imag()) > 1e-9 * (1.0 + scale)) {
          if (std::abs(e.imag()) < 10.0 * step) degenerate = true;  // near-tangent
          continue;
        }
        ++real_count;
        if (have_prev) min_gap = std::min(min_gap, e.real() - prev);
        prev = e.real();
        have_prev = true;
      }
      if (degenerate || (real_count >= 2 && min_gap < 3.0 * step)) continue;
      ++checked;
      const CurveData cd = figure1_data(k, lo, hi, steps);
      CHECK(sign_changes(cd) == real_count);
    }
  }
}

TEST_CASE("figure2_data: crossings sit at the critical points") {
  SUBCASE("f = 0: crossings at -sqrt3, 0, sqrt3") {
    const CurveData cd = figure2_data(6.0, 0.0, -2.5, 2.5, 2001);
    CHECK(sign_changes(cd) == 3);
  }
  SUBCASE("f = 1: the two negative crossings match critical_points") {
    const int steps = 2001;
    const CurveData cd = figure2_data(6.0, 1.0, -2.5, 0.5, steps);
    const double step = 3.0 / (steps - 1);
    const CriticalPoints cp = critical_points(6.0, phi_of(6.0, 1.0));
    std::vector<double> crossings;
    for (std::size_t i = 1; i < cd.x.size(); ++i) {
      const double d0 = cd.left[i - 1] - cd.right[i - 1];
      const double d1 = cd.left[i] - cd.right[i];
      if (d0 == 0.0 || d0 * d1 < 0.0) crossings.push_back(0.5 * (cd.x[i - 1] + cd.x[i]));
    }
    REQUIRE(crossings.size() >= 2);
    CHECK(std::abs(crossings[0] - cp.z_min) <= step);
    CHECK(std::abs(crossings[1] - cp.z_max) <= step);
  }
  SUBCASE("f above f_upper: at most one crossing at negative z") {
    const double f = f_upper(6.0) + 0.1;
    const CurveData cd = figure2_data(6.0, f, -2.5, 0.0, 2001);
    CHECK(sign_changes(cd) <= 1);
  }
}
