#pragma once

#include <array>
#include <cmath>

namespace qtensor::detail {

// Cyclic Jacobi for small symmetric matrices (row-major).  Eigenvectors end
// up in the columns of v: a = v diag(d) v^T.
template <int N>
inline void jacobi_eig(std::array<double, N * N> a, std::array<double, N>& d,
                       std::array<double, N * N>& v) {
  for (int i = 0; i < N * N; ++i) v[i] = 0;
  for (int i = 0; i < N; ++i) v[i * N + i] = 1;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0, diag = 0;
    for (int p = 0; p < N; ++p) {
      diag += std::fabs(a[p * N + p]);
      for (int q = p + 1; q < N; ++q) off += std::fabs(a[p * N + q]);
    }
    if (off == 0.0 || off <= 1e-16 * (diag + off)) break;
    for (int p = 0; p < N - 1; ++p)
      for (int q = p + 1; q < N; ++q) {
        double apq = a[p * N + q];
        if (apq == 0.0) continue;
        double tau = (a[q * N + q] - a[p * N + p]) / (2 * apq);
        double t =
            (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1 + tau * tau));
        double c = 1 / std::sqrt(1 + t * t), s = t * c;
        for (int k = 0; k < N; ++k) {
          double akp = a[k * N + p], akq = a[k * N + q];
          a[k * N + p] = c * akp - s * akq;
          a[k * N + q] = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          double apk = a[p * N + k], aqk = a[q * N + k];
          a[p * N + k] = c * apk - s * aqk;
          a[q * N + k] = s * apk + c * aqk;
        }
        for (int k = 0; k < N; ++k) {
          double vkp = v[k * N + p], vkq = v[k * N + q];
          v[k * N + p] = c * vkp - s * vkq;
          v[k * N + q] = s * vkp + c * vkq;
        }
      }
  }
  for (int i = 0; i < N; ++i) d[i] = a[i * N + i];
}

}  // namespace qtensor::detail
