#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "vexp/errors.hpp"
#include "vexp/graph.hpp"
#include "vexp/jacobi.hpp"
#include "vexp/rng.hpp"

namespace vexp {

// Gram-matrix relaxation data: one slack per vertex, one difference
// constraint ||v_j - v_i||^2 <= alpha_i per ordered pair (i, j ~ i), and the
// centering normalization <X, I - J/n> = 1.
struct SdpProblem {
  std::size_t n = 0;
  std::vector<std::pair<VertexId, VertexId>> constraints;  // (i, j) with j ~ i
  std::vector<std::vector<std::size_t>> byVertex;          // constraint ids per i
};

struct SdpResiduals {
  double maxConstraintViolation = 0.0;
  double normalizationDeviation = 0.0;
  double minEigenvalue = 0.0;
  double dualityGap = 0.0;
};

struct SdpSolution {
  SymMatrix gram;
  std::vector<double> alphas;
  double value = 0.0;
  SdpResiduals residuals;
  bool converged = false;
  int iterations = 0;
};

inline SdpProblem build_sdp(const WeightedGraph& g) {
  if (g.size() < 2) throw Disconnected("lambda_inf needs at least two vertices");
  if (!g.is_connected()) throw Disconnected("graph must be connected");
  SdpProblem p;
  p.n = g.size();
  p.byVertex.resize(p.n);
  for (VertexId i = 0; i < p.n; ++i)
    for (VertexId j : g.neighbors(i)) {
      p.byVertex[i].push_back(p.constraints.size());
      p.constraints.emplace_back(i, j);
    }
  return p;
}

// Rayleigh-type quotient whose minimum over x is lambda_inf; any evaluation
// upper-bounds it.
inline double lambda_inf_quotient(const WeightedGraph& g, const std::vector<double>& x,
                                  double tol = 1e-12) {
  const std::size_t n = g.size();
  if (x.size() != n) throw DegenerateVector("vector size mismatch");
  double sum = 0.0, sumSq = 0.0;
  for (double xi : x) {
    sum += xi;
    sumSq += xi * xi;
  }
  const double denom = sumSq - sum * sum / static_cast<double>(n);
  if (denom <= tol * std::max(1.0, sumSq)) throw DegenerateVector("constant vector");
  double num = 0.0;
  for (VertexId i = 0; i < n; ++i) {
    double m = 0.0;
    for (VertexId j : g.neighbors(i)) m = std::max(m, (x[i] - x[j]) * (x[i] - x[j]));
    num += m;
  }
  return num / denom;
}

namespace detail {

// d_ij(X) = X_ii + X_jj - 2 X_ij
inline double pair_distance(const SymMatrix& x, VertexId i, VertexId j) {
  return x(i, i) + x(j, j) - 2.0 * x(i, j);
}

// <X, I - J/n>
inline double centering_value(const SymMatrix& x) {
  double tr = 0.0, total = 0.0;
  for (std::size_t i = 0; i < x.n; ++i) {
    tr += x(i, i);
    for (std::size_t j = 0; j < x.n; ++j) total += x(i, j);
  }
  return tr - total / static_cast<double>(x.n);
}

// Objective Sum_i max_{j~i} d_ij(X); also fills the per-vertex slacks.
inline double sdp_objective(const SdpProblem& p, const SymMatrix& x,
                            std::vector<double>* alphas = nullptr) {
  double val = 0.0;
  if (alphas) alphas->assign(p.n, 0.0);
  for (std::size_t i = 0; i < p.n; ++i) {
    double m = 0.0;
    for (std::size_t c : p.byVertex[i]) {
      auto [ci, cj] = p.constraints[c];
      m = std::max(m, pair_distance(x, ci, cj));
    }
    val += m;
    if (alphas) (*alphas)[i] = m;
  }
  return val;
}

// Euclidean projection of v onto the probability simplex.
inline void project_simplex(std::vector<double>& v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) {
      theta = t;
      k = i + 1;
    }
  }
  if (k == 0) theta = (cum - 1.0) / static_cast<double>(u.size());
  for (double& x : v) x = std::max(0.0, x - theta);
}

// Project onto the PSD cone; reports the most negative eigenvalue clamped.
inline double project_psd(SymMatrix& x, double jacobiThreshold) {
  auto eig = jacobi_eigensymm(x, jacobiThreshold);
  const std::size_t n = x.n;
  double minEig = 0.0;
  for (double v : eig.values) minEig = std::min(minEig, v);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        if (eig.values[k] > 0) s += eig.values[k] * eig.vectors[k][i] * eig.vectors[k][j];
      x(i, j) = s;
    }
  return minEig;
}

// Second-smallest eigenvalue (smallest on the complement of the all-ones
// direction): the dual value of the weighted constraint combination.
inline double dual_value(const SymMatrix& m, double jacobiThreshold) {
  auto eig = jacobi_eigensymm(m, jacobiThreshold);
  // drop the eigenvalue whose eigenvector is closest to the constant
  const std::size_t n = m.n;
  std::size_t dropIdx = 0;
  double bestAlign = -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    double dot = 0.0, norm = 0.0;
    for (double v : eig.vectors[k]) {
      dot += v;
      norm += v * v;
    }
    const double align = std::fabs(dot) / std::sqrt(norm * static_cast<double>(n));
    if (align > bestAlign) {
      bestAlign = align;
      dropIdx = k;
    }
  }
  double minOther = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k)
    if (k != dropIdx) minOther = std::min(minOther, eig.values[k]);
  return minOther;
}

// Exact projection onto PSD ∩ {<X, I - J/n> = 1} for matrices with zero row
// sums (the iteration stays in that subspace, where I - J/n acts as the
// identity).  KKT reduces to water-filling on the non-constant eigenvalues:
// mu_k = max(0, lambda_k + theta) with Sum mu_k = 1.
inline void project_feasible(SymMatrix& x, double jacobiThreshold) {
  const std::size_t n = x.n;
  auto eig = jacobi_eigensymm(x, jacobiThreshold);
  // the constant direction is unconstrained beyond PSD; its eigenvalue is ~0
  std::size_t constIdx = 0;
  double bestAlign = -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    double dot = 0.0, norm = 0.0;
    for (double v : eig.vectors[k]) {
      dot += v;
      norm += v * v;
    }
    const double align = std::fabs(dot) / std::sqrt(norm * static_cast<double>(n));
    if (align > bestAlign) {
      bestAlign = align;
      constIdx = k;
    }
  }
  std::vector<std::size_t> idx;
  std::vector<double> lam;
  for (std::size_t k = 0; k < n; ++k)
    if (k != constIdx) {
      idx.push_back(k);
      lam.push_back(eig.values[k]);
    }
  project_simplex(lam);
  std::vector<double> mu(n, 0.0);
  mu[constIdx] = std::max(0.0, eig.values[constIdx]);
  for (std::size_t t = 0; t < idx.size(); ++t) mu[idx[t]] = lam[t];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        if (mu[k] > 0) s += mu[k] * eig.vectors[k][i] * eig.vectors[k][j];
      x(i, j) = s;
    }
}

}  // namespace detail

// First-order primal-dual solve of the relaxation: alternates (a) dual
// slack-weight updates by simplex projection, (b) a primal step against the
// weighted constraint combination, (c) PSD-cone projection followed by
// rescaling onto the normalization constraint.  The dual iterate certifies a
// lower bound (second-smallest eigenvalue of the combined constraint matrix),
// so the reported gap bounds the distance to the true optimum.
inline SdpSolution solve(const SdpProblem& p, double tol = 1e-6, int maxIter = 5000,
                         std::uint64_t seed = 0, double jacobiThreshold = 1e-12) {
  (void)seed;  // deterministic scheme; seed kept for interface stability
  const std::size_t n = p.n;
  const std::size_t m = p.constraints.size();
  if (!(tol > 0)) throw Error("tol must be positive");

  // feasible start: X = (I - J/n)/(n-1)
  SymMatrix x(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      x(i, j) = ((i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(n)) /
                static_cast<double>(n - 1);
  std::vector<double> w(m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c : p.byVertex[i]) w[c] = 1.0 / static_cast<double>(p.byVertex[i].size());

  const double opNorm = 2.0 * std::sqrt(static_cast<double>(m));
  double sigma = 1.0 / opNorm, tau = 1.0 / opNorm;

  SymMatrix xBar = x;
  SymMatrix bestX = x;
  std::vector<double> alphas;
  double bestVal = detail::sdp_objective(p, x, &alphas);
  double bestGap = std::numeric_limits<double>::infinity();
  double bestDual = -std::numeric_limits<double>::infinity();
  int it = 0;
  SymMatrix mw(n);

  for (it = 1; it <= maxIter; ++it) {
    // (a) dual update: per-vertex simplex projection of w + sigma*d(xBar)
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> wi;
      wi.reserve(p.byVertex[i].size());
      for (std::size_t c : p.byVertex[i]) {
        auto [ci, cj] = p.constraints[c];
        wi.push_back(w[c] + sigma * detail::pair_distance(xBar, ci, cj));
      }
      detail::project_simplex(wi);
      std::size_t k = 0;
      for (std::size_t c : p.byVertex[i]) w[c] = wi[k++];
    }

    // combined constraint matrix M(w)
    std::fill(mw.a.begin(), mw.a.end(), 0.0);
    for (std::size_t c = 0; c < m; ++c) {
      auto [i, j] = p.constraints[c];
      mw(i, i) += w[c];
      mw(j, j) += w[c];
      mw(i, j) -= w[c];
      mw(j, i) -= w[c];
    }

    // (b) primal step, (c) PSD projection + normalization rescale
    SymMatrix xOld = x;
    for (std::size_t k = 0; k < x.a.size(); ++k) x.a[k] -= tau * mw.a[k];
    detail::project_feasible(x, jacobiThreshold);
    for (std::size_t k = 0; k < x.a.size(); ++k) xBar.a[k] = 2.0 * x.a[k] - xOld.a[k];

    const double primal = detail::sdp_objective(p, x, &alphas);
    const double dual = detail::dual_value(mw, jacobiThreshold);
    bestDual = std::max(bestDual, dual);
    if (primal < bestVal) {
      bestVal = primal;
      bestX = x;
    }
    const double gap = bestVal - bestDual;
    if (gap < bestGap) bestGap = gap;
    if (bestGap <= tol * std::max(1.0, bestVal)) break;
  }

  SdpSolution sol;
  sol.gram = bestX;
  sol.value = detail::sdp_objective(p, bestX, &sol.alphas);
  sol.iterations = std::min(it, maxIter);
  sol.residuals.maxConstraintViolation = 0.0;  // alphas are the exact maxima
  sol.residuals.normalizationDeviation = std::fabs(detail::centering_value(bestX) - 1.0);
  auto eig = jacobi_eigensymm(bestX, jacobiThreshold);
  sol.residuals.minEigenvalue = eig.values.empty() ? 0.0 : eig.values.back();
  sol.residuals.dualityGap = std::max(0.0, bestGap);
  sol.converged = bestGap <= tol * std::max(1.0, sol.value);
  return sol;
}

// Recover an embedding V with V V^T = gram (within rankTol) from the
// eigendecomposition; dimension is the numerical rank.
inline std::vector<std::vector<double>> factorize(const SdpSolution& sol, double rankTol = 1e-8) {
  const std::size_t n = sol.gram.n;
  auto eig = jacobi_eigensymm(sol.gram);
  for (double v : eig.values)
    if (v < -rankTol) throw NotPSD("gram matrix has a negative eigenvalue");
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < n; ++k)
    if (eig.values[k] > rankTol) keep.push_back(k);
  std::vector<std::vector<double>> v(n, std::vector<double>(keep.size(), 0.0));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const double s = std::sqrt(eig.values[keep[c]]);
    for (std::size_t i = 0; i < n; ++i) v[i][c] = s * eig.vectors[keep[c]][i];
  }
  return v;
}

}  // namespace vexp
