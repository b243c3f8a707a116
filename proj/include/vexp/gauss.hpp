#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "vexp/errors.hpp"
#include "vexp/rng.hpp"

namespace vexp {

// Standard normal CDF through std::erf (double-precision accurate).
inline double normal_cdf(double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); }

// The Gaussian graph: X ~ N(0, I_n), neighbors Y ~ N(Lambda X, Sigma), both
// diagonal; d neighbors per constraint.
struct GaussianGraphSpec {
  std::vector<double> lambda;
  std::vector<double> sigma;
  std::size_t d = 1;

  std::size_t dim() const { return lambda.size(); }

  double eps_floor() const {
    double m = std::numeric_limits<double>::infinity();
    for (double s : sigma) m = std::min(m, s);
    return m;
  }

  void validate() const {
    if (lambda.empty() || lambda.size() != sigma.size()) throw Error("bad spec dimensions");
    for (double l : lambda)
      if (std::fabs(l) > 1.0 + 1e-12) throw Error("|lambda_i| must be <= 1");
    for (double s : sigma)
      if (!(s > 0)) throw Error("sigma_i must be positive");
    if (d < 1) throw Error("d must be at least 1");
  }
};

using RealFunction = std::function<double(const std::vector<double>&)>;

struct IndicatorSet {
  std::function<bool(const std::vector<double>&)> contains;

  RealFunction as_function() const {
    auto c = contains;
    return [c](const std::vector<double>& x) { return c(x) ? 1.0 : 0.0; };
  }
};

inline IndicatorSet halfspace(std::vector<double> direction, double offset) {
  return {[direction = std::move(direction), offset](const std::vector<double>& x) {
    double dot = 0.0;
    for (std::size_t i = 0; i < direction.size(); ++i) dot += direction[i] * x[i];
    return dot <= offset;
  }};
}

inline IndicatorSet ball(double radius) {
  return {[radius](const std::vector<double>& x) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    return sq <= radius * radius;
  }};
}

inline IndicatorSet band(double a, double b) {
  return {[a, b](const std::vector<double>& x) { return x[0] >= a && x[0] <= b; }};
}

struct IsoEstimate {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  double numeratorStderr = 0.0;
  double denominatorStderr = 0.0;
};

namespace detail {

inline std::vector<double> gauss_vector(std::size_t n, std::normal_distribution<double>& nd,
                                        Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = nd(rng);
  return x;
}

}  // namespace detail

// Monte Carlo estimates for every neighbor count in `ds` with common random
// numbers: one draw of max(ds) neighbors per sample, prefix maxima for the
// numerators (hence monotone in d by construction), shared denominator.
inline std::vector<IsoEstimate> estimate_isoperimetry_sweep(const GaussianGraphSpec& spec,
                                                            const RealFunction& f,
                                                            const std::vector<std::size_t>& ds,
                                                            std::size_t samples,
                                                            std::uint64_t seed) {
  spec.validate();
  if (samples < 1000) throw Error("samples must be at least 1000");
  if (ds.empty()) throw Error("need at least one neighbor count");
  std::size_t maxD = 0;
  for (std::size_t d : ds) {
    if (d < 1) throw Error("d must be at least 1");
    maxD = std::max(maxD, d);
  }
  const std::size_t n = spec.dim();
  Rng rng = make_rng(seed, "gauss-iso");
  std::normal_distribution<double> nd(0.0, 1.0);

  std::vector<double> numSum(ds.size(), 0.0), numSq(ds.size(), 0.0);
  double denSum = 0.0, denSq = 0.0;
  std::vector<double> y(n);
  for (std::size_t s = 0; s < samples; ++s) {
    auto x = detail::gauss_vector(n, nd, rng);
    const double fx = f(x);
    double runningMax = 0.0;
    std::vector<double> prefixMax(maxD);
    for (std::size_t j = 0; j < maxD; ++j) {
      for (std::size_t i = 0; i < n; ++i)
        y[i] = spec.lambda[i] * x[i] + std::sqrt(spec.sigma[i]) * nd(rng);
      runningMax = std::max(runningMax, std::fabs(f(y) - fx));
      prefixMax[j] = runningMax;
    }
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const double v = prefixMax[ds[k] - 1];
      numSum[k] += v;
      numSq[k] += v * v;
    }
    auto a = detail::gauss_vector(n, nd, rng);
    auto b = detail::gauss_vector(n, nd, rng);
    const double dv = std::fabs(f(a) - f(b));
    denSum += dv;
    denSq += dv * dv;
  }

  const double m = static_cast<double>(samples);
  std::vector<IsoEstimate> out(ds.size());
  const double den = denSum / m;
  const double denStderr = std::sqrt(std::max(0.0, denSq / m - den * den) / m);
  for (std::size_t k = 0; k < ds.size(); ++k) {
    out[k].numerator = numSum[k] / m;
    out[k].numeratorStderr =
        std::sqrt(std::max(0.0, numSq[k] / m - out[k].numerator * out[k].numerator) / m);
    out[k].denominator = den;
    out[k].denominatorStderr = denStderr;
    out[k].ratio = den > 0 ? out[k].numerator / den : 0.0;
  }
  return out;
}

inline IsoEstimate estimate_isoperimetry(const GaussianGraphSpec& spec, const RealFunction& f,
                                         std::size_t samples, std::uint64_t seed) {
  return estimate_isoperimetry_sweep(spec, f, {spec.d}, samples, seed).front();
}

inline IsoEstimate estimate_isoperimetry(const GaussianGraphSpec& spec, const IndicatorSet& s,
                                         std::size_t samples, std::uint64_t seed) {
  return estimate_isoperimetry(spec, s.as_function(), samples, seed);
}

// d_TV of two unit-variance-eps Gaussians delta apart: 2 Phi(delta/(2 sqrt(eps))) - 1.
inline double tv_distance_shifted(double delta, double epsVar) {
  if (delta < 0) throw Error("delta must be nonnegative");
  if (!(epsVar > 0)) throw Error("epsVar must be positive");
  return 2.0 * normal_cdf(delta / (2.0 * std::sqrt(epsVar))) - 1.0;
}

struct MaxStats {
  double meanMax = 0.0;
  double meanMaxSq = 0.0;
  double meanMaxStderr = 0.0;
  double meanMaxSqStderr = 0.0;
};

inline MaxStats max_gaussian_stats(std::size_t d, double sigma, std::size_t samples,
                                   std::uint64_t seed) {
  if (d < 1) throw Error("d must be at least 1");
  Rng rng = make_rng(seed, "gauss-maxstat");
  std::normal_distribution<double> nd(0.0, sigma);
  double s1 = 0.0, s2 = 0.0, q1 = 0.0, q2 = 0.0;
  for (std::size_t t = 0; t < samples; ++t) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d; ++j) mx = std::max(mx, nd(rng));
    s1 += mx;
    q1 += mx * mx;
    s2 += mx * mx;
    q2 += mx * mx * mx * mx;
  }
  const double m = static_cast<double>(samples);
  MaxStats out;
  out.meanMax = s1 / m;
  out.meanMaxSq = s2 / m;
  out.meanMaxStderr = std::sqrt(std::max(0.0, q1 / m - out.meanMax * out.meanMax) / m);
  out.meanMaxSqStderr = std::sqrt(std::max(0.0, q2 / m - out.meanMaxSq * out.meanMaxSq) / m);
  return out;
}

struct PzResult {
  double probability = 0.0;
  double wilsonLow = 0.0;
  double wilsonHigh = 0.0;
};

// z = L g with g standard normal; requires E[sum z_i^2] = ||L||_F^2 = 1.
// Reports the empirical Pr[sum z_i^2 >= 1/2] with a 95% Wilson interval.
inline PzResult paley_zygmund_check(const std::vector<std::vector<double>>& factor,
                                    std::size_t samples, std::uint64_t seed) {
  if (factor.empty() || factor.front().empty()) throw Error("empty factor");
  const std::size_t m = factor.size(), k = factor.front().size();
  double frob = 0.0;
  for (const auto& row : factor) {
    if (row.size() != k) throw Error("ragged factor");
    for (double v : row) frob += v * v;
  }
  if (std::fabs(frob - 1.0) > 1e-6) throw BadNormalization("E[sum z^2] must be 1");

  Rng rng = make_rng(seed, "gauss-pz");
  std::normal_distribution<double> nd(0.0, 1.0);
  std::size_t hits = 0;
  std::vector<double> g(k);
  for (std::size_t t = 0; t < samples; ++t) {
    for (double& v : g) v = nd(rng);
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double z = 0.0;
      for (std::size_t j = 0; j < k; ++j) z += factor[i][j] * g[j];
      sq += z * z;
    }
    if (sq >= 0.5) ++hits;
  }
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  const double zc = 1.959963984540054;  // 95%
  const double denom = 1.0 + zc * zc / n;
  const double center = (p + zc * zc / (2.0 * n)) / denom;
  const double half = zc * std::sqrt(p * (1.0 - p) / n + zc * zc / (4.0 * n * n)) / denom;
  return {p, center - half, center + half};
}

}  // namespace vexp
