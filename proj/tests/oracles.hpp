#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is dense and deliberately naive.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tumorsim/kernel.hpp"
#include "tumorsim/velocity.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t n, std::size_t m) { return Matrix(n, std::vector<double>(m, 0.0)); }

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    }
    if (a[p][k] == 0.0) throw std::runtime_error("dense_solve: singular");
    std::swap(a[p], a[k]);
    std::swap(b[p], b[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

inline Matrix band_to_dense(const std::vector<double>& lower, const std::vector<double>& diag,
                            const std::vector<double>& upper) {
  const std::size_t n = diag.size();
  Matrix a = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = diag[i];
    if (i + 1 < n) {
      a[i][i + 1] = upper[i];
      a[i + 1][i] = lower[i];
    }
  }
  return a;
}

struct DenseSystem {
  Matrix a;
  std::vector<double> rhs;
};

// Global matrix over nodes 0..Jn built element by element, then the Dirichlet
// node 0 is removed.
inline DenseSystem velocity_system(const std::vector<double>& alpha, std::size_t Jn,
                                   const tumorsim::ModelParams& p, double h) {
  const std::size_t N = Jn + 1;
  Matrix a = zeros(N, N);
  std::vector<double> f(N, 0.0);
  for (std::size_t e = 0; e < Jn; ++e) {
    const double al = alpha[e];
    const double w = p.k * al / (1.0 - al);
    const double local_mass[2][2] = {{w * h / 3.0, w * h / 6.0}, {w * h / 6.0, w * h / 3.0}};
    const double local_stiff[2][2] = {{p.mu * al / h, -p.mu * al / h}, {-p.mu * al / h, p.mu * al / h}};
    const double H = tumorsim::stress(al, p);
    const double local_load[2] = {-H, H};  // integral of H * phi' over the cell
    const std::size_t idx[2] = {e, e + 1};
    for (int r = 0; r < 2; ++r) {
      f[idx[r]] += local_load[r];
      for (int c = 0; c < 2; ++c) a[idx[r]][idx[c]] += local_mass[r][c] + local_stiff[r][c];
    }
  }
  DenseSystem out{zeros(Jn, Jn), std::vector<double>(Jn)};
  for (std::size_t i = 1; i < N; ++i) {
    out.rhs[i - 1] = f[i];
    for (std::size_t j = 1; j < N; ++j) out.a[i - 1][j - 1] = a[i][j];
  }
  return out;
}

// Lumped mass, stiffness and lumped uptake assembled per element over nodes
// 0..Jn; the Dirichlet value 1 at node Jn is moved to the right-hand side.
inline DenseSystem oxygen_system(const std::vector<double>& alpha, const std::vector<double>& c_prev,
                                 std::size_t Jn, const tumorsim::ModelParams& p, double h,
                                 double delta) {
  const std::size_t N = Jn + 1;
  Matrix a = zeros(N, N);
  std::vector<double> mass(N, 0.0);
  for (std::size_t e = 0; e < Jn; ++e) {
    const std::size_t idx[2] = {e, e + 1};
    for (int r = 0; r < 2; ++r) {
      const std::size_t i = idx[r];
      const double weight = 1.0 + p.Q1hat * std::abs(c_prev[i]);
      mass[i] += h / 2.0;
      a[i][i] += h / 2.0 + p.Q * delta * (h * alpha[e] / 4.0) / weight;
      for (int c = 0; c < 2; ++c) {
        a[i][idx[c]] += delta * p.lambda * (r == c ? 1.0 : -1.0) / h;
      }
    }
  }
  DenseSystem out{zeros(Jn, Jn), std::vector<double>(Jn)};
  for (std::size_t i = 0; i < Jn; ++i) {
    out.rhs[i] = mass[i] * c_prev[i] - a[i][Jn] * 1.0;
    for (std::size_t j = 0; j < Jn; ++j) out.a[i][j] = a[i][j];
  }
  return out;
}

// Scan from the right for the last cell at or above the threshold.
inline std::size_t radius_scan(const std::vector<double>& alpha, double thr) {
  std::size_t J = 0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] >= thr) J = j + 1;
  }
  return J;
}

// Fixed-point iteration for alpha + delta*d*(alpha - thr)^+ = K.
inline double sink_fixed_point(double K, double d, double delta, double thr) {
  double a = K;
  for (int it = 0; it < 200; ++it) {
    const double excess = a > thr ? a - thr : 0.0;
    const double next = K - delta * d * excess;
    if (std::abs(next - a) < 1e-17) break;
    a = 0.5 * (a + next);
  }
  return a;
}

// Per-cell upwind update with the four flux terms spelled out.
inline std::vector<double> upwind_update(const std::vector<double>& alpha, const std::vector<double>& u,
                                         const std::vector<double>& b, const std::vector<double>& d,
                                         double h, double delta, double thr) {
  const std::size_t J = alpha.size();
  std::vector<double> out(J);
  auto pos = [](double v) { return v > 0 ? v : 0.0; };
  auto neg = [](double v) { return v < 0 ? -v : 0.0; };
  for (std::size_t j = 0; j < J; ++j) {
    const double am = j == 0 ? alpha[0] : alpha[j - 1];
    const double ap = j + 1 < J ? alpha[j + 1] : 0.0;
    const double out_right = pos(u[j + 1]) * alpha[j];
    const double in_right = neg(u[j + 1]) * ap;
    const double in_left = pos(u[j]) * am;
    const double out_left = neg(u[j]) * alpha[j];
    const double K = alpha[j] - delta / h * (out_right - in_right - in_left + out_left) +
                     delta * pos(alpha[j] - thr) * (1 - alpha[j]) * b[j];
    out[j] = sink_fixed_point(K, d[j], delta, thr);
  }
  return out;
}

}  // namespace oracle
