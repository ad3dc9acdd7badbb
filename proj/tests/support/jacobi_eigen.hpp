#pragma once

// Test-side dense symmetric eigensolver (cyclic Jacobi rotations), used as an
// independent oracle for the production tridiagonal path.

#include <cmath>
#include <vector>

namespace testsupport {

// A is n x n row-major symmetric; returns eigenvalues ascending, A is
// destroyed.  V (optional) receives eigenvectors as columns (row-major).
inline std::vector<double> jacobi_eigenvalues(std::vector<double> A, int n,
                                              std::vector<double>* V = nullptr) {
  if (V) {
    V->assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) (*V)[std::size_t(i) * n + i] = 1.0;
  }
  auto at = [&](int i, int j) -> double& { return A[std::size_t(i) * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-26) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        if (V)
          for (int k = 0; k < n; ++k) {
            const double vkp = (*V)[std::size_t(k) * n + p];
            const double vkq = (*V)[std::size_t(k) * n + q];
            (*V)[std::size_t(k) * n + p] = c * vkp - s * vkq;
            (*V)[std::size_t(k) * n + q] = s * vkp + c * vkq;
          }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  // sort ascending (with eigenvector columns if present)
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (ev[j] < ev[i]) {
        std::swap(ev[i], ev[j]);
        if (V)
          for (int k = 0; k < n; ++k)
            std::swap((*V)[std::size_t(k) * n + i], (*V)[std::size_t(k) * n + j]);
      }
  return ev;
}

}  // namespace testsupport
