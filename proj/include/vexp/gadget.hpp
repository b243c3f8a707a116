#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "vexp/errors.hpp"
#include "vexp/jacobi.hpp"
#include "vexp/rng.hpp"

namespace vexp {

// States of the chain H(eps), in this fixed order.
enum ChainState : int { kS = 0, kT = 1, kTP = 2, kSP = 3 };

// The 4-state Markov chain H(eps) with its full spectral data.  The basis
// e_k is orthonormal in the mu-inner product (E_mu[e_j e_k] = delta_jk),
// e_0 = 1, eigenvalues sorted descending.
struct GadgetChain {
  double epsilon = 0.0;
  std::array<std::array<double, 4>, 4> transition{};  // [from][to]
  std::array<double, 4> stationary{};
  std::array<double, 4> eigenvalues{};
  std::array<std::array<double, 4>, 4> basis{};  // basis[k][x] = e_k(x)

  double gap() const { return 1.0 - eigenvalues[1]; }
};

inline GadgetChain build_chain(double eps) {
  if (!(eps > 0.0) || !(eps < 0.25)) throw BadEpsilon("epsilon must lie in (0, 1/4)");
  GadgetChain c;
  c.epsilon = eps;
  const double p = eps / (1.0 - 2.0 * eps);
  c.transition[kS] = {1.0 - p, p, 0.0, 0.0};
  c.transition[kT] = {0.5, 0.0, 0.5, 0.0};
  c.transition[kTP] = {0.0, 0.5, 0.0, 0.5};
  c.transition[kSP] = {0.0, 0.0, p, 1.0 - p};
  c.stationary = {0.5 - eps, eps, eps, 0.5 - eps};

  // reversible chain: D^{1/2} P D^{-1/2} is symmetric
  SymMatrix sym(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      sym(i, j) = std::sqrt(c.stationary[i]) * c.transition[i][j] / std::sqrt(c.stationary[j]);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double avg = 0.5 * (sym(i, j) + sym(j, i));
      sym(i, j) = sym(j, i) = avg;
    }
  auto eig = jacobi_eigensymm(sym);
  for (int k = 0; k < 4; ++k) {
    c.eigenvalues[k] = eig.values[k];
    for (int x = 0; x < 4; ++x)
      c.basis[k][x] = eig.vectors[k][x] / std::sqrt(c.stationary[x]);
    // sign convention: first entry of e_k positive
    if (c.basis[k][0] < 0)
      for (int x = 0; x < 4; ++x) c.basis[k][x] = -c.basis[k][x];
  }
  // pin e_0 to the exact constant
  for (int x = 0; x < 4; ++x) c.basis[0][x] = 1.0;
  return c;
}

// F on V_H^R as a dense table; coordinate i is the i-th base-4 digit of the
// index (coordinate 0 least significant).
struct ProductFunction {
  std::size_t r = 0;
  std::vector<double> table;
};

inline std::size_t table_size(std::size_t r) {
  std::size_t s = 1;
  for (std::size_t i = 0; i < r; ++i) s *= 4;
  return s;
}

struct GadgetTuple {
  std::vector<int> x;
  std::vector<std::vector<int>> ys;  // d neighbors
};

inline int sample_state(const std::array<double, 4>& dist, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  for (int s = 0; s < 3; ++s) {
    r -= dist[s];
    if (r < 0) return s;
  }
  return 3;
}

inline GadgetTuple sample_constraint(const GadgetChain& chain, std::size_t r, std::size_t d,
                                     Rng& rng) {
  if (r < 1 || d < 1) throw Error("R and d must be at least 1");
  GadgetTuple out;
  out.x.resize(r);
  for (std::size_t i = 0; i < r; ++i) out.x[i] = sample_state(chain.stationary, rng);
  out.ys.assign(d, std::vector<int>(r));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < r; ++i)
      out.ys[j][i] = sample_state(chain.transition[out.x[i]], rng);
  return out;
}

struct DictatorValue {
  double numerator = 0.0;
  double var1 = 0.0;
};

// Exact completeness value of the dictator cut F(x) = 1{x_i in {s,t}}: the
// tuple crosses iff x_i in {t,t'} (prob 2eps) and at least one of the d
// neighbors takes its probability-1/2 t<->t' transition.
inline DictatorValue dictator_value_exact(double eps, std::size_t d) {
  if (!(eps > 0.0) || !(eps < 0.25)) throw BadEpsilon("epsilon must lie in (0, 1/4)");
  if (d < 1) throw Error("d must be at least 1");
  return {2.0 * eps * (1.0 - std::pow(0.5, static_cast<double>(d))), 0.5};
}

inline double dictator_cut(const std::vector<int>& x, std::size_t coord = 0) {
  return (x[coord] == kS || x[coord] == kT) ? 1.0 : 0.0;
}

struct ValueEstimate {
  double numerator = 0.0;
  double numeratorStderr = 0.0;
  double var1 = 0.0;
  double var1Stderr = 0.0;
  double ratio = 0.0;
  double ratioStderr = 0.0;
};

// Monte Carlo estimate of the gadget value of F with jackknife errors.
inline ValueEstimate estimate_value(const GadgetChain& chain, std::size_t r, std::size_t d,
                                    const std::function<double(const std::vector<int>&)>& f,
                                    std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error("samples must be at least 1");
  Rng rng = make_rng(seed, "gadget-estimate");
  std::vector<double> nums(samples), vars(samples);
  std::vector<int> y(r);
  for (std::size_t s = 0; s < samples; ++s) {
    auto tup = sample_constraint(chain, r, d, rng);
    const double fx = f(tup.x);
    double m = 0.0;
    for (const auto& yj : tup.ys) m = std::max(m, std::fabs(f(yj) - fx));
    nums[s] = m;
    for (std::size_t i = 0; i < r; ++i) y[i] = sample_state(chain.stationary, rng);
    std::vector<int> x2(r);
    for (std::size_t i = 0; i < r; ++i) x2[i] = sample_state(chain.stationary, rng);
    vars[s] = std::fabs(f(x2) - f(y));
  }
  const double n = static_cast<double>(samples);
  double sumN = 0.0, sumV = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    sumN += nums[s];
    sumV += vars[s];
  }
  ValueEstimate est;
  est.numerator = sumN / n;
  est.var1 = sumV / n;
  est.ratio = est.var1 > 0 ? est.numerator / est.var1 : 0.0;

  double sqN = 0.0, sqV = 0.0, sqR = 0.0;
  const double ratioBase = est.ratio;
  for (std::size_t s = 0; s < samples; ++s) {
    const double ln = (sumN - nums[s]) / (n - 1.0);
    const double lv = (sumV - vars[s]) / (n - 1.0);
    sqN += (ln - est.numerator) * (ln - est.numerator);
    sqV += (lv - est.var1) * (lv - est.var1);
    if (lv > 0) {
      const double lr = ln / lv;
      sqR += (lr - ratioBase) * (lr - ratioBase);
    }
  }
  const double scale = (n - 1.0) / n;
  est.numeratorStderr = std::sqrt(scale * sqN);
  est.var1Stderr = std::sqrt(scale * sqV);
  est.ratioStderr = std::sqrt(scale * sqR);
  return est;
}

namespace detail {

// Apply a 4x4 kernel along every coordinate of a 4^R table.
inline void tensor_apply(std::vector<double>& t, std::size_t r,
                         const std::array<std::array<double, 4>, 4>& m) {
  std::size_t stride = 1;
  std::vector<double> in(4);
  for (std::size_t coord = 0; coord < r; ++coord) {
    for (std::size_t block = 0; block < t.size(); block += stride * 4)
      for (std::size_t off = 0; off < stride; ++off) {
        for (int a = 0; a < 4; ++a) in[a] = t[block + off + stride * a];
        for (int a = 0; a < 4; ++a) {
          double s = 0.0;
          for (int b = 0; b < 4; ++b) s += m[a][b] * in[b];
          t[block + off + stride * a] = s;
        }
      }
    stride *= 4;
  }
}

}  // namespace detail

// f_hat_sigma = E_{mu^R}[F e_sigma], indexed like the table (sigma_i = i-th
// base-4 digit).
inline std::vector<double> multilinear_coeffs(const GadgetChain& chain,
                                              const ProductFunction& f) {
  if (f.r > 8) throw TooLargeR("exact tables capped at R = 8");
  if (f.table.size() != table_size(f.r)) throw Error("table size mismatch");
  std::array<std::array<double, 4>, 4> m{};
  for (int k = 0; k < 4; ++k)
    for (int x = 0; x < 4; ++x) m[k][x] = chain.stationary[x] * chain.basis[k][x];
  std::vector<double> coeffs = f.table;
  detail::tensor_apply(coeffs, f.r, m);
  return coeffs;
}

// Reconstruct the table from coefficients: F(x) = Sum_sigma f_hat e_sigma(x).
inline ProductFunction from_coeffs(const GadgetChain& chain, std::size_t r,
                                   const std::vector<double>& coeffs) {
  if (coeffs.size() != table_size(r)) throw Error("coefficient size mismatch");
  std::array<std::array<double, 4>, 4> m{};
  for (int x = 0; x < 4; ++x)
    for (int k = 0; k < 4; ++k) m[x][k] = chain.basis[k][x];
  ProductFunction f;
  f.r = r;
  f.table = coeffs;
  detail::tensor_apply(f.table, r, m);
  return f;
}

inline std::size_t sigma_weight(std::size_t idx) {
  std::size_t w = 0;
  while (idx) {
    if (idx % 4 != 0) ++w;
    idx /= 4;
  }
  return w;
}

inline double influence(const std::vector<double>& coeffs, std::size_t r, std::size_t i) {
  if (i >= r) throw Error("coordinate out of range");
  std::size_t div = 1;
  for (std::size_t k = 0; k < i; ++k) div *= 4;
  double s = 0.0;
  for (std::size_t idx = 0; idx < coeffs.size(); ++idx)
    if ((idx / div) % 4 != 0) s += coeffs[idx] * coeffs[idx];
  return s;
}

inline double variance(const std::vector<double>& coeffs) {
  double s = 0.0;
  for (std::size_t idx = 1; idx < coeffs.size(); ++idx)
    if (sigma_weight(idx) > 0) s += coeffs[idx] * coeffs[idx];
  return s;
}

inline double high_degree_variance(const std::vector<double>& coeffs, std::size_t p) {
  double s = 0.0;
  for (std::size_t idx = 1; idx < coeffs.size(); ++idx)
    if (sigma_weight(idx) > p) s += coeffs[idx] * coeffs[idx];
  return s;
}

// Gamma_{1-eta} applied per coordinate: ((1-eta) I + eta P)^{tensor R}.  In
// coefficient space this multiplies f_hat_sigma by
// prod_{i in sigma} (1 - eta + eta lambda_{sigma_i}).
inline ProductFunction noise_operator(const GadgetChain& chain, const ProductFunction& f,
                                      double eta) {
  if (!(eta >= 0.0) || !(eta <= 1.0)) throw Error("eta must lie in [0,1]");
  std::array<std::array<double, 4>, 4> m{};
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      m[x][y] = (x == y ? 1.0 - eta : 0.0) + eta * chain.transition[x][y];
  ProductFunction out;
  out.r = f.r;
  out.table = f.table;
  detail::tensor_apply(out.table, f.r, m);
  return out;
}

}  // namespace vexp
