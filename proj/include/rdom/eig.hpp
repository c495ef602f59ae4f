#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

// Dense 4x4 real nonsymmetric eigenvalue solver: Gaussian-elimination
// reduction to upper Hessenberg form followed by the Francis double-shift
// QR iteration, eigenvalues only.  Classic EISPACK elmhes/hqr structure.

namespace rdom {

using Roots4 = std::array<std::complex<double>, 4>;

struct EigenFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

using Raw4 = std::array<std::array<double, 4>, 4>;

inline double sign_with(double magnitude, double sign_source) {
  return sign_source >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Stabilized elementary similarity transformations to upper Hessenberg form.
inline void to_hessenberg(Raw4& a) {
  constexpr int n = 4;
  for (int m = 1; m < n - 1; ++m) {
    double x = 0.0;
    int i = m;
    for (int j = m; j < n; ++j) {
      if (std::abs(a[j][m - 1]) > std::abs(x)) {
        x = a[j][m - 1];
        i = j;
      }
    }
    if (i != m) {
      for (int j = m - 1; j < n; ++j) std::swap(a[i][j], a[m][j]);
      for (int j = 0; j < n; ++j) std::swap(a[j][i], a[j][m]);
    }
    if (x != 0.0) {
      for (int j = m + 1; j < n; ++j) {
        double y = a[j][m - 1];
        if (y != 0.0) {
          y /= x;
          a[j][m - 1] = y;
          for (int k = m; k < n; ++k) a[j][k] -= y * a[m][k];
          for (int k = 0; k < n; ++k) a[k][m] += y * a[k][j];
        }
      }
    }
  }
  // the multipliers stored below the subdiagonal are not part of H
  a[2][0] = a[3][0] = a[3][1] = 0.0;
}

// Francis double-shift QR on an upper Hessenberg matrix; false on
// convergence failure (not observed for this bounded 4x4 family).
inline bool hqr(Raw4& a, Roots4& out) {
  constexpr int n = 4;
  const double eps = std::numeric_limits<double>::epsilon();
  double p = 0, q = 0, r = 0, s = 0, u, v, w, x, y, z;
  int l = 0;

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a[i][j]);
  if (anorm == 0.0) {
    out = {0.0, 0.0, 0.0, 0.0};
    return true;
  }

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    do {
      for (l = nn; l > 0; --l) {
        s = std::abs(a[l - 1][l - 1]) + std::abs(a[l][l]);
        if (s == 0.0) s = anorm;
        if (std::abs(a[l][l - 1]) <= eps * s) {
          a[l][l - 1] = 0.0;
          break;
        }
      }
      x = a[nn][nn];
      if (l == nn) {
        out[nn--] = x + t;
      } else {
        y = a[nn - 1][nn - 1];
        w = a[nn][nn - 1] * a[nn - 1][nn];
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_with(z, p);
            out[nn - 1] = out[nn] = x + z;
            if (z != 0.0) out[nn] = x - w / z;
          } else {
            out[nn] = std::complex<double>(x + p, -z);
            out[nn - 1] = std::conj(out[nn]);
          }
          nn -= 2;
        } else {
          if (its == 120) return false;
          if (its != 0 && its % 10 == 0) {
            // exceptional shift; near-biquadratic companions have spectra
            // symmetric about zero and can stall the plain double shift
            t += x;
            for (int i = 0; i < nn + 1; ++i) a[i][i] -= x;
            s = std::abs(a[nn][nn - 1]) + std::abs(a[nn - 1][nn - 2]);
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          for (m = nn - 2; m >= l; --m) {
            z = a[m][m];
            r = x - z;
            s = y - z;
            p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
            q = a[m + 1][m + 1] - z - r - s;
            r = a[m + 2][m + 1];
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            u = std::abs(a[m][m - 1]) * (std::abs(q) + std::abs(r));
            v = std::abs(p) *
                (std::abs(a[m - 1][m - 1]) + std::abs(z) + std::abs(a[m + 1][m + 1]));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a[i + 2][i] = 0.0;
            if (i != m) a[i + 2][i - 1] = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a[k][k - 1];
              q = a[k + 1][k - 1];
              r = 0.0;
              if (k + 1 != nn) r = a[k + 2][k - 1];
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            s = sign_with(std::sqrt(p * p + q * q + r * r), p);
            if (s != 0.0) {
              if (k == m) {
                if (l != m) a[k][k - 1] = -a[k][k - 1];
              } else {
                a[k][k - 1] = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j < nn + 1; ++j) {
                p = a[k][j] + q * a[k + 1][j];
                if (k + 1 != nn) {
                  p += r * a[k + 2][j];
                  a[k + 2][j] -= p * z;
                }
                a[k + 1][j] -= p * y;
                a[k][j] -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i < mmin + 1; ++i) {
                p = x * a[i][k] + y * a[i][k + 1];
                if (k + 1 != nn) {
                  p += z * a[i][k + 2];
                  a[i][k + 2] -= p * r;
                }
                a[i][k + 1] -= p * q;
                a[i][k] -= p;
              }
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return true;
}

inline bool is_hessenberg(const Raw4& a) {
  return a[2][0] == 0.0 && a[3][0] == 0.0 && a[3][1] == 0.0;
}

}  // namespace detail

// Ascending by real part, ties by imaginary part.
inline void sort_roots(Roots4& roots) {
  std::sort(roots.begin(), roots.end(),
            [](const std::complex<double>& lhs, const std::complex<double>& rhs) {
              if (lhs.real() != rhs.real()) return lhs.real() < rhs.real();
              return lhs.imag() < rhs.imag();
            });
}

// Eigenvalues of a general real 4x4 matrix, sorted.
inline Roots4 dense4_eigenvalues(detail::Raw4 a) {
  for (const auto& row : a)
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("dense4_eigenvalues: non-finite entry");
  if (!detail::is_hessenberg(a)) detail::to_hessenberg(a);
  Roots4 out;
  if (!detail::hqr(a, out))
    throw EigenFailure("dense4_eigenvalues: QR iteration did not converge");
  sort_roots(out);
  return out;
}

}  // namespace rdom
