#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vexp {

// Dense symmetric matrix stored row-major.
struct SymMatrix {
  std::size_t n = 0;
  std::vector<double> a;  // n*n

  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct EigenDecomposition {
  std::vector<double> values;           // descending
  std::vector<std::vector<double>> vectors;  // vectors[k] is the k-th eigenvector
};

// Cyclic Jacobi eigendecomposition for symmetric matrices.
// Sweeps until every off-diagonal entry is below `threshold` relative to the
// Frobenius scale of the input, or `maxSweeps` is hit.
inline EigenDecomposition jacobi_eigensymm(SymMatrix m, double threshold = 1e-12,
                                           int maxSweeps = 100) {
  const std::size_t n = m.n;
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double scale = 0.0;
  for (double x : m.a) scale += x * x;
  scale = std::sqrt(scale);
  if (scale == 0.0) scale = 1.0;
  const double tol = threshold * scale;

  for (int sweep = 0; sweep < maxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::fabs(m(p, q)));
    if (off <= tol) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::fabs(apq) <= tol * 1e-2) continue;
        const double app = m(p, p), aqq = m(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  EigenDecomposition out;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = m(i, i);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[k][i] = v[i * n + order[k]];
    // deterministic sign: first entry of nonnegligible magnitude is positive
    for (std::size_t i = 0; i < n; ++i) {
      if (std::fabs(out.vectors[k][i]) > 1e-9) {
        if (out.vectors[k][i] < 0)
          for (double& x : out.vectors[k]) x = -x;
        break;
      }
    }
  }
  return out;
}

}  // namespace vexp
