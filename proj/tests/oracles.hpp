#pragma once

// Test-side reference implementations, deliberately written without the
// library's solvers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

/// Fixed-step gradient descent on sum u^2/2 + sum 1/|u_i - u_j|. The
/// potential is convex on the ordered region, so a step of 1/L with L a
/// Gershgorin bound on the Hessian converges without energy comparisons
/// (which stall at round-off long before the gradient is small).
inline std::vector<double> chain_positions(std::size_t n) {
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = static_cast<double>(i) - 0.5 * static_cast<double>(n - 1);
  for (int it = 0; it < 1000000; ++it) {
    std::vector<double> g(n);
    double gmax = 0.0;
    double bound = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = u[i];
      double row = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = u[i] - u[j];
        g[i] -= std::copysign(1.0 / (d * d), d);
        row += 4.0 / std::abs(d * d * d);
      }
      bound = std::max(bound, row);
      gmax = std::max(gmax, std::abs(g[i]));
    }
    if (gmax < 1e-14) break;
    for (std::size_t i = 0; i < n; ++i) u[i] -= g[i] / bound;
  }
  return u;
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix (row-major), ascending.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// O(n^2) DFT, forward sign exp(-i ...), unnormalized.
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x, bool inverse) {
  const std::size_t n = x.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>((k * i) % n) / static_cast<double>(n);
      acc += x[i] * std::polar(1.0, ang);
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace oracle
