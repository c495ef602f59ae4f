#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rdom/model.hpp"

// Closed-form construction of the spectral-reality domain: the asymmetry
// ceiling f_upper, the angle phi, trigonometric critical points of the
// secular curve, the C-window (C_minus, C_plus), the (alpha, delta, phi)
// chart with its shifted B-bounds, and the membership tests.
//
// The source formulas use open ranges phi in (0, pi/2); here the endpoints
// are closed and handled by the exact factored limits, so that f = 0 (the
// self-dual reference case) and f = f_upper are usable inputs.

namespace rdom {

inline constexpr double half_pi = std::numbers::pi / 2.0;

// Largest asymmetry for which the slope cubic 4z^3 - 2Az - 4f^2 = 0 still
// has its two negative real roots: f_upper = (A^3/54)^(1/4).
inline double f_upper(double a_coeff) {
  if (!(a_coeff > 0.0))
    throw std::domain_error("f_upper: requires A > 0");
  return std::pow(a_coeff * a_coeff * a_coeff / 54.0, 0.25);
}

struct FExceedsUpper : std::domain_error {
  double excess;  // f - f_upper(A)
  explicit FExceedsUpper(double excess_)
      : std::domain_error("phi_of: f exceeds f_upper(A)"), excess(excess_) {}
};

// Asymmetry angle: f^2 = f_upper(A)^2 cos(phi), phi in [0, pi/2].
inline double phi_of(double a_coeff, double f) {
  if (!(f >= 0.0) || !std::isfinite(f))
    throw std::invalid_argument("phi_of: f must be finite and >= 0");
  const double fu = f_upper(a_coeff);
  if (f > fu) throw FExceedsUpper(f - fu);
  if (f == 0.0) return half_pi;
  if (f == fu) return 0.0;
  return std::acos(std::min((f * f) / (fu * fu), 1.0));
}

// Locations of the leftmost minimum (z_min) and subsequent maximum (z_max)
// of the secular curve Y(z): the two negative roots of 4z^3 - 2Az = 4f^2,
//
//   z_min = -sqrt(2A/3) cos((pi - phi)/3) in [-sqrt(A/2), -sqrt(A/6)],
//   z_max = -sqrt(2A/3) cos((phi + pi)/3) in [-sqrt(A/6), 0].
struct CriticalPoints {
  double z_min;
  double z_max;
  double f_upper;
  double phi;
};

inline CriticalPoints critical_points(double a_coeff, double phi) {
  if (!(a_coeff > 0.0))
    throw std::domain_error("critical_points: requires A > 0");
  if (!(phi >= 0.0 && phi <= half_pi))
    throw std::domain_error("critical_points: phi outside [0, pi/2]");
  const double fu = f_upper(a_coeff);
  if (phi == half_pi)  // f = 0: cubic factors as 2z(2z^2 - A)
    return {-std::sqrt(a_coeff / 2.0), 0.0, fu, phi};
  if (phi == 0.0) {  // f = f_upper: double root at the slope maximum
    const double z = -std::sqrt(a_coeff / 6.0);
    return {z, z, fu, phi};
  }
  const double s = std::sqrt(2.0 * a_coeff / 3.0);
  const double pi = std::numbers::pi;
  return {-s * std::cos((pi - phi) / 3.0), -s * std::cos((phi + pi) / 3.0), fu, phi};
}

// Reality window for C:  C_minus = (A/2) z_max^2 + 3 f^2 z_max, and C_plus
// the same expression at z_min.  The f = 0 limit is the exact biquadratic
// window (0, A^2/4).
struct CBounds {
  double c_minus;
  double c_plus;
};

namespace detail {

inline CBounds c_bounds_at(double a_coeff, double phi, double f2) {
  if (phi == half_pi) return {0.0, a_coeff * a_coeff / 4.0};
  const CriticalPoints cp = critical_points(a_coeff, phi);
  return {(a_coeff / 2.0) * cp.z_max * cp.z_max + 3.0 * f2 * cp.z_max,
          (a_coeff / 2.0) * cp.z_min * cp.z_min + 3.0 * f2 * cp.z_min};
}

}  // namespace detail

inline CBounds c_bounds(double a_coeff, double f) {
  if (f == 0.0) return {0.0, a_coeff * a_coeff / 4.0};
  return detail::c_bounds_at(a_coeff, phi_of(a_coeff, f), f * f);
}

// delta-independent closed form of the same window in the (alpha, phi)
// chart:  C = (100/3) sin^4(alpha) cos((pi±phi)/3) [cos((pi±phi)/3) - cos(phi)],
// with + for C_minus and - for C_plus.
inline CBounds c_bounds_angles_form(double alpha, double phi) {
  const double pi = std::numbers::pi;
  const double s2 = std::sin(alpha) * std::sin(alpha);
  const double lead = (100.0 / 3.0) * s2 * s2;
  const double cphi = phi == half_pi ? 0.0 : std::cos(phi);
  const double cm = std::cos((pi + phi) / 3.0);
  const double cp = std::cos((pi - phi) / 3.0);
  return {lead * cm * (cm - cphi), lead * cp * (cp - cphi)};
}

enum class Verdict { Inside, Outside, Boundary };

enum class MembershipReason {
  Interior,
  ANonpositive,
  FExceedsUpper,
  CBelowMinus,
  CAbovePlus,
};

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Inside: return "Inside";
    case Verdict::Outside: return "Outside";
    case Verdict::Boundary: return "Boundary";
  }
  return "?";
}

inline const char* to_string(MembershipReason r) {
  switch (r) {
    case MembershipReason::Interior: return "interior";
    case MembershipReason::ANonpositive: return "A-nonpositive";
    case MembershipReason::FExceedsUpper: return "f-exceeds-upper";
    case MembershipReason::CBelowMinus: return "C-below-minus";
    case MembershipReason::CAbovePlus: return "C-above-plus";
  }
  return "?";
}

// slack is the signed distance to the nearest bound in the C coordinate;
// Boundary iff |slack| <= band.  When the A > 0 or f <= f_upper gate fails
// there is no C distance, and slack is a negative surrogate in that gate's
// coordinate, kept below -band so the Boundary rule cannot fire.
struct Membership {
  Verdict verdict;
  double slack;
  MembershipReason reason;
};

struct MembershipPolicy {
  double band_scale = 1e-9;

  double band(double c_coeff) const { return band_scale * (1.0 + std::abs(c_coeff)); }
};

namespace detail {

inline Membership classify_window(double c_coeff, double lo, double hi, double band) {
  const double s_lo = c_coeff - lo;
  const double s_hi = hi - c_coeff;
  const double slack = std::min(s_lo, s_hi);
  const MembershipReason active =
      s_lo <= s_hi ? MembershipReason::CBelowMinus : MembershipReason::CAbovePlus;
  if (slack > band) return {Verdict::Inside, slack, MembershipReason::Interior};
  if (slack < -band) return {Verdict::Outside, slack, active};
  return {Verdict::Boundary, slack, active};
}

}  // namespace detail

// Analytic membership test for the reality domain:
//   f > 0:  A > 0, f <= f_upper(A), C in [C_minus, C_plus];
//   f = 0:  A >= 0, C in [0, A^2/4]  (biquadratic rule; A = 0, C = 0 is
//           the quadruple-merger point and classifies Boundary).
inline Membership membership_analytic(const Couplings& k,
                                      const MembershipPolicy& policy = {}) {
  const SecularQuartic q = secular_quartic(k);
  const double band = policy.band(q.C);

  if ((k.f > 0.0 && q.A <= 0.0) || (k.f == 0.0 && q.A < 0.0))
    return {Verdict::Outside, std::min(q.A, 0.0) - 2.0 * band,
            MembershipReason::ANonpositive};

  if (k.f == 0.0)
    return detail::classify_window(q.C, 0.0, q.A * q.A / 4.0, band);

  const double fu = f_upper(q.A);
  if (k.f > fu)
    return {Verdict::Outside, (fu - k.f) - 2.0 * band,
            MembershipReason::FExceedsUpper};

  const CBounds cb = detail::c_bounds_at(q.A, phi_of(q.A, k.f), k.f * k.f);
  return detail::classify_window(q.C, cb.c_minus, cb.c_plus, band);
}

// Chart point: A = 10 sin^2(alpha), a^2 = 10 cos^2(alpha) sin^2(delta),
// 2c^2 + f^2 = 10 cos^2(alpha) cos^2(delta), f^2 = f_upper(A)^2 cos(phi).
struct ReparamPoint {
  double alpha;  // (0, pi/2]
  double delta;  // [0, pi/2]
  double phi;    // [0, pi/2]
};

struct NotRepresentable : std::domain_error {
  using std::domain_error::domain_error;
};

namespace detail {

inline void check_reparam_ranges(const ReparamPoint& p) {
  if (!(p.alpha > 0.0 && p.alpha <= half_pi))
    throw NotRepresentable("reparam: alpha outside (0, pi/2]");
  if (!(p.delta >= 0.0 && p.delta <= half_pi))
    throw NotRepresentable("reparam: delta outside [0, pi/2]");
  if (!(p.phi >= 0.0 && p.phi <= half_pi))
    throw NotRepresentable("reparam: phi outside [0, pi/2]");
}

// cos^2 with the closed-endpoint limit pinned exactly.
inline double cos2_snapped(double angle) {
  if (angle == half_pi) return 0.0;
  const double c = std::cos(angle);
  return c * c;
}

inline double f2_of_chart(double a_coeff, double phi) {
  if (phi == half_pi) return 0.0;
  return std::sqrt(a_coeff * a_coeff * a_coeff / 54.0) * std::cos(phi);
}

}  // namespace detail

inline ReparamPoint to_reparam(const Couplings& k) {
  const SecularQuartic q = secular_quartic(k);
  if (!(q.A > 0.0)) throw NotRepresentable("to_reparam: A <= 0");
  if (k.f > f_upper(q.A)) throw NotRepresentable("to_reparam: f > f_upper(A)");

  // atan2 forms stay accurate at the chart edges, where asin of a
  // near-unit argument would lose the complement
  const double off = k.a * k.a + 2.0 * k.c * k.c + k.f * k.f;  // = 10 cos^2(alpha)
  const double alpha = std::atan2(std::sqrt(q.A), std::sqrt(off));
  double delta = 0.0;  // convention: delta = 0 when cos(alpha) = 0 (a is forced to 0)
  if (off > 0.0)
    delta = std::atan2(k.a, std::sqrt(2.0 * k.c * k.c + k.f * k.f));
  return {alpha, delta, phi_of(q.A, k.f)};
}

// Inverse chart map.  The (alpha, delta, phi) box overcovers the physical
// octant; points with c^2 < 0 are rejected as not representable.
inline Couplings from_reparam(const ReparamPoint& p) {
  detail::check_reparam_ranges(p);
  const double sa = std::sin(p.alpha);
  const double a_coeff = 10.0 * sa * sa;
  const double cos2a = detail::cos2_snapped(p.alpha);
  const double f2 = detail::f2_of_chart(a_coeff, p.phi);
  const double sd = std::sin(p.delta);
  const double cos2d = detail::cos2_snapped(p.delta);
  const double a2 = 10.0 * cos2a * sd * sd;
  const double c2 = (10.0 * cos2a * cos2d - f2) / 2.0;
  if (c2 < 0.0)
    throw NotRepresentable("from_reparam: c^2 < 0 (chart point has no real c)");
  return {std::sqrt(a2), std::sqrt(c2), std::sqrt(f2)};
}

// Shifted positive window:  B = C_bound + 90 cos^2(alpha) + 135 + f^4/4.
struct BBounds {
  double b_minus;
  double b_plus;
};

inline BBounds b_bounds(double alpha, double phi) {
  if (!(alpha > 0.0 && alpha <= half_pi))
    throw std::domain_error("b_bounds: alpha outside (0, pi/2]");
  if (!(phi >= 0.0 && phi <= half_pi))
    throw std::domain_error("b_bounds: phi outside [0, pi/2]");
  const double sa = std::sin(alpha);
  const double a_coeff = 10.0 * sa * sa;
  const double cos2a = detail::cos2_snapped(alpha);
  const double f2 = detail::f2_of_chart(a_coeff, phi);
  const CBounds cb = detail::c_bounds_at(a_coeff, phi, f2);
  const double shift = 90.0 * cos2a + 135.0 + 0.25 * f2 * f2;
  const double bm = cb.c_minus + shift;
  const double bp = cb.c_plus + shift;
  if (bm < -1e-9 || bp < -1e-9)
    throw std::runtime_error("b_bounds: negative shifted bound (formula misuse)");
  return {std::max(bm, 0.0), std::max(bp, 0.0)};
}

// Membership in the chart: sqrt(B_minus) <= 12 + 5 cos^2(alpha) cos^2(delta)
// <= sqrt(B_plus).  Since mid^2 - B equals C - C_bound, the slack is folded
// back to the C coordinate, so verdicts line up with membership_analytic.
inline Membership membership_reparam(const ReparamPoint& p,
                                     const MembershipPolicy& policy = {}) {
  (void)from_reparam(p);  // validates ranges and representability
  const double sa = std::sin(p.alpha);
  const double a_coeff = 10.0 * sa * sa;
  const double cos2a = detail::cos2_snapped(p.alpha);
  const double cos2d = detail::cos2_snapped(p.delta);
  const double f2 = detail::f2_of_chart(a_coeff, p.phi);
  const BBounds bb = b_bounds(p.alpha, p.phi);

  const double mid = 12.0 + 5.0 * cos2a * cos2d;
  const double shift = 90.0 * cos2a + 135.0 + 0.25 * f2 * f2;
  const double c_coeff = mid * mid - shift;
  return detail::classify_window(mid * mid, bb.b_minus, bb.b_plus,
                                 policy.band(c_coeff));
}

// Solution set in delta of the two-sided constraint at fixed (alpha, phi),
// clipped to [0, pi/2] and filtered to chart points with c^2 >= 0.  The
// set can be empty; emptiness is a value, not an error.
struct DeltaInterval {
  bool empty = true;
  double delta_lo = 0.0;
  double delta_hi = 0.0;
};

inline DeltaInterval delta_interval(double alpha, double phi) {
  if (!(alpha > 0.0 && alpha <= half_pi))
    throw std::domain_error("delta_interval: alpha outside (0, pi/2]");
  if (!(phi >= 0.0 && phi <= half_pi))
    throw std::domain_error("delta_interval: phi outside [0, pi/2]");
  const double sa = std::sin(alpha);
  const double a_coeff = 10.0 * sa * sa;
  const double cos2a = detail::cos2_snapped(alpha);
  const double f2 = detail::f2_of_chart(a_coeff, phi);
  const BBounds bb = b_bounds(alpha, phi);
  const double root_lo = std::sqrt(bb.b_minus);
  const double root_hi = std::sqrt(bb.b_plus);

  if (cos2a == 0.0) {
    // middle term is constantly 12; c^2 >= 0 forces f = 0
    if (f2 > 0.0) return {};
    if (root_lo <= 12.0 && 12.0 <= root_hi) return {false, 0.0, half_pi};
    return {};
  }

  // 12 + 5 cos^2(alpha) u with u = cos^2(delta) is increasing in u
  const double denom = 5.0 * cos2a;
  const double u_lo = (root_lo - 12.0) / denom;
  const double u_hi = (root_hi - 12.0) / denom;
  const double u_cfilter = f2 / (10.0 * cos2a);
  const double u1 = std::max({u_lo, 0.0, u_cfilter});
  const double u2 = std::min(u_hi, 1.0);
  if (u1 > u2) return {};
  const double d_lo = std::acos(std::sqrt(std::clamp(u2, 0.0, 1.0)));
  const double d_hi = std::acos(std::sqrt(std::clamp(u1, 0.0, 1.0)));
  return {false, d_lo, d_hi};
}

}  // namespace rdom
