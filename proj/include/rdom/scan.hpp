#pragma once

#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rdom/domain.hpp"
#include "rdom/model.hpp"
#include "rdom/spectrum.hpp"

// Grid classification of (a, c) slices at fixed f, ray-fan bisection
// tracing of the domain boundary, and sampled-curve data for the two
// graphical constructions (secular quartic vs tilt line, slope cubic vs
// constant).

namespace rdom {

namespace detail {

// Cells are independent; results land by index, so the output is
// deterministic regardless of scheduling.  The first worker exception is
// captured and rethrown on the calling thread.
template <typename Fn>
void parallel_for(long n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || n < 256) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  const long chunk = (n + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < threads; ++t) {
    const long lo = t * chunk;
    const long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn, &error, &error_mutex] {
      try {
        for (long i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

struct SliceSpec {
  double fixed_f = 0.0;
  double a_lo = 0.0, a_hi = 4.0;
  int a_steps = 101;
  double c_lo = 0.0, c_hi = 4.0;
  int c_steps = 101;

  void validate() const {
    if (!std::isfinite(fixed_f) || fixed_f < 0.0)
      throw std::invalid_argument("SliceSpec: fixed_f must be finite and >= 0");
    if (!std::isfinite(a_lo) || !std::isfinite(a_hi) || !std::isfinite(c_lo) ||
        !std::isfinite(c_hi))
      throw std::invalid_argument("SliceSpec: non-finite window");
    if (a_lo > a_hi || c_lo > c_hi)
      throw std::invalid_argument("SliceSpec: lo > hi");
    if (a_steps < 2 || c_steps < 2)
      throw std::invalid_argument("SliceSpec: steps must be >= 2");
  }

  double a_at(int i) const { return a_lo + i * (a_hi - a_lo) / (a_steps - 1); }
  double c_at(int j) const { return c_lo + j * (c_hi - c_lo) / (c_steps - 1); }
};

struct GridCell {
  double a = 0.0;
  double c = 0.0;
  Verdict verdict = Verdict::Outside;
  double slack = 0.0;
  Classification oracle = Classification::AllReal;
  bool eigen_ok = true;
  bool agree = true;
};

struct ScanSummary {
  long inside = 0, outside = 0, boundary = 0;
  long all_real = 0, one_pair = 0, two_pairs = 0, degenerate = 0;
  long eigen_failures = 0;
  long compared = 0;       // cells with |slack| >= exclusion_band
  long disagreements = 0;  // among compared cells
  double exclusion_band = 1e-6;
  double agreement_rate = 1.0;
};

struct ClassifiedGrid {
  SliceSpec spec;
  std::vector<GridCell> cells;  // row-major: a index outer, c index inner
  ScanSummary summary;
};

inline bool oracle_real(Classification c) {
  return c == Classification::AllReal || c == Classification::DegenerateReal;
}

// Analytic verdict and oracle classification on every grid node.  Numeric
// failures are recorded per cell and never abort the scan.
inline ClassifiedGrid scan_slice(const SliceSpec& spec,
                                 const MembershipPolicy& policy = {},
                                 RealityTolerance tol = {}, unsigned threads = 0) {
  spec.validate();
  tol.validate();
  ClassifiedGrid grid;
  grid.spec = spec;
  grid.cells.resize(static_cast<long>(spec.a_steps) * spec.c_steps);

  detail::parallel_for(
      static_cast<long>(grid.cells.size()), threads, [&](long idx) {
        const int i = static_cast<int>(idx / spec.c_steps);
        const int j = static_cast<int>(idx % spec.c_steps);
        GridCell cell;
        cell.a = spec.a_at(i);
        cell.c = spec.c_at(j);
        const Couplings k(cell.a, cell.c, spec.fixed_f);
        const Membership mem = membership_analytic(k, policy);
        cell.verdict = mem.verdict;
        cell.slack = mem.slack;
        try {
          cell.oracle = classify_reality(matrix_eigenvalues(build_hamiltonian(k)), tol);
        } catch (const EigenFailure&) {
          cell.eigen_ok = false;
        }
        if (cell.eigen_ok && cell.verdict != Verdict::Boundary)
          cell.agree = (cell.verdict == Verdict::Inside) == oracle_real(cell.oracle);
        grid.cells[idx] = cell;
      });

  ScanSummary& s = grid.summary;
  for (const GridCell& cell : grid.cells) {
    switch (cell.verdict) {
      case Verdict::Inside: ++s.inside; break;
      case Verdict::Outside: ++s.outside; break;
      case Verdict::Boundary: ++s.boundary; break;
    }
    if (!cell.eigen_ok) {
      ++s.eigen_failures;
      continue;
    }
    switch (cell.oracle) {
      case Classification::AllReal: ++s.all_real; break;
      case Classification::OneComplexPair: ++s.one_pair; break;
      case Classification::TwoComplexPairs: ++s.two_pairs; break;
      case Classification::DegenerateReal: ++s.degenerate; break;
    }
    if (std::abs(cell.slack) >= s.exclusion_band) {
      ++s.compared;
      if (!cell.agree) ++s.disagreements;
    }
  }
  s.agreement_rate =
      s.compared == 0 ? 1.0
                      : static_cast<double>(s.compared - s.disagreements) / s.compared;
  return grid;
}

struct NoInteriorSeed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TracePoint {
  double ray_angle = 0.0;
  double a = 0.0;
  double c = 0.0;
  double slack = 0.0;    // analytic slack at the returned point
  bool probes_ok = true; // probes at +-tol along the ray have opposite signs
};

struct BoundaryTrace {
  double fixed_f = 0.0;
  std::vector<TracePoint> points;  // ordered by ray angle
  double method_tol = 0.0;
  double seed_a = 0.0, seed_c = 0.0;
};

namespace detail {

inline double slack_at(double a, double c, double f, const MembershipPolicy& policy) {
  return membership_analytic(Couplings(a, c, f), policy).slack;
}

}  // namespace detail

// Casts a fan of rays from an interior seed and bisects each ray on the
// sign of the analytic slack.  Bisection runs to the floating-point limit
// of the bracket, so the residual slack at the returned points is far
// below tol; tol is the probe separation used for validation.
inline BoundaryTrace trace_boundary(double fixed_f, int rays, double tol,
                                    const MembershipPolicy& policy = {},
                                    unsigned threads = 0) {
  if (!(rays >= 8)) throw std::invalid_argument("trace_boundary: rays must be >= 8");
  if (!(tol > 0.0)) throw std::invalid_argument("trace_boundary: tol must be > 0");
  if (!std::isfinite(fixed_f) || fixed_f < 0.0)
    throw std::invalid_argument("trace_boundary: fixed_f must be finite and >= 0");

  // coarse scan of the standard window for the deepest interior point
  double best_slack = 0.0;
  double seed_a = 0.0, seed_c = 0.0;
  bool found = false;
  constexpr int coarse = 81;
  for (int i = 0; i < coarse; ++i) {
    for (int j = 0; j < coarse; ++j) {
      const double a = 4.0 * i / (coarse - 1);
      const double c = 4.0 * j / (coarse - 1);
      const Membership mem = membership_analytic(Couplings(a, c, fixed_f), policy);
      if (mem.verdict == Verdict::Inside && mem.slack > best_slack) {
        best_slack = mem.slack;
        seed_a = a;
        seed_c = c;
        found = true;
      }
    }
  }
  if (!found)
    throw NoInteriorSeed("trace_boundary: no interior cell in the coarse scan at f = " +
                         std::to_string(fixed_f));

  BoundaryTrace trace;
  trace.fixed_f = fixed_f;
  trace.method_tol = tol;
  trace.seed_a = seed_a;
  trace.seed_c = seed_c;
  trace.points.resize(rays);

  detail::parallel_for(rays, threads, [&](long k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / rays;
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    auto slack_along = [&](double r) {
      return detail::slack_at(seed_a + r * dx, seed_c + r * dy, fixed_f, policy);
    };

    // march outward to bracket the first sign change
    double r_in = 0.0;
    double r_out = 0.25;
    while (slack_along(r_out) > 0.0) {
      r_in = r_out;
      r_out += 0.25;
      if (r_out > 64.0)
        throw std::runtime_error("trace_boundary: ray failed to exit the domain");
    }
    // bisect to the floating-point limit of the bracket
    for (int it = 0; it < 200 && (r_out - r_in) > 1e-16 * std::max(1.0, r_out); ++it) {
      const double mid = 0.5 * (r_in + r_out);
      if (mid <= r_in || mid >= r_out) break;
      (slack_along(mid) > 0.0 ? r_in : r_out) = mid;
    }
    const double r_b = 0.5 * (r_in + r_out);

    TracePoint p;
    p.ray_angle = angle;
    p.a = seed_a + r_b * dx;
    p.c = seed_c + r_b * dy;
    p.slack = slack_along(r_b);
    p.probes_ok = slack_along(r_b - tol) > 0.0 && slack_along(r_b + tol) < 0.0;
    trace.points[k] = p;
  });
  return trace;
}

// Two sampled curves over a shared abscissa grid.
struct CurveData {
  std::vector<double> x;
  std::vector<double> left;
  std::vector<double> right;
};

// Left side E^4 - A E^2 + C of the secular equation against the tilt line
// 4 f^2 E; their intersections are the real energies.
inline CurveData figure1_data(const Couplings& k, double e_lo, double e_hi, int steps) {
  if (steps < 2) throw std::invalid_argument("figure1_data: steps must be >= 2");
  if (!(e_lo <= e_hi)) throw std::invalid_argument("figure1_data: lo > hi");
  const SecularQuartic q = secular_quartic(k);
  CurveData cd;
  cd.x.reserve(steps);
  cd.left.reserve(steps);
  cd.right.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double e = e_lo + i * (e_hi - e_lo) / (steps - 1);
    cd.x.push_back(e);
    cd.left.push_back((e * e - q.A) * e * e + q.C);
    cd.right.push_back(4.0 * q.f2 * e);
  }
  return cd;
}

// Slope cubic 4z^3 - 2Az against the constant 4f^2; the negative
// crossings are the critical points z_min and z_max.
inline CurveData figure2_data(double a_coeff, double f, double z_lo, double z_hi,
                              int steps) {
  if (!(a_coeff > 0.0)) throw std::domain_error("figure2_data: requires A > 0");
  if (steps < 2) throw std::invalid_argument("figure2_data: steps must be >= 2");
  if (!(z_lo <= z_hi)) throw std::invalid_argument("figure2_data: lo > hi");
  CurveData cd;
  cd.x.reserve(steps);
  cd.left.reserve(steps);
  cd.right.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double z = z_lo + i * (z_hi - z_lo) / (steps - 1);
    cd.x.push_back(z);
    cd.left.push_back(4.0 * z * z * z - 2.0 * a_coeff * z);
    cd.right.push_back(4.0 * f * f);
  }
  return cd;
}

// Strict sign changes of left - right; exact zeros extend the previous sign.
inline int sign_changes(const CurveData& cd) {
  int count = 0;
  int last = 0;
  for (std::size_t i = 0; i < cd.x.size(); ++i) {
    const double d = cd.left[i] - cd.right[i];
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace rdom
