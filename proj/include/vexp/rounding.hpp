#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "vexp/errors.hpp"
#include "vexp/graph.hpp"
#include "vexp/rng.hpp"
#include "vexp/sdp.hpp"
#include "vexp/transforms.hpp"

namespace vexp {

// x_i = <v_i, g> for one standard-normal g; deterministic per seed.
inline std::vector<double> gaussian_project(const std::vector<std::vector<double>>& embedding,
                                            std::uint64_t seed) {
  if (embedding.empty()) throw ZeroVector("empty embedding");
  const std::size_t dim = embedding.front().size();
  Rng rng = make_rng(seed, "gaussian-project");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> g(dim);
  for (double& v : g) v = normal(rng);
  std::vector<double> x(embedding.size(), 0.0);
  for (std::size_t i = 0; i < embedding.size(); ++i)
    for (std::size_t k = 0; k < dim; ++k) x[i] += embedding[i][k] * g[k];
  return x;
}

struct SweepResult {
  Cut cut;
  double ratio = 0.0;  // |N(S)|/|S| for the chosen prefix
  double alpha = 0.0;  // the level-set certificate Sum max|y_j - y_i| / Sum y_i
};

// Level-set sweep: sort y descending (ties by vertex id), scan prefixes
// inside supp(y), return the prefix minimizing |N(S)|/|S|.  Guaranteed to
// reach alpha = Sum_i max_{j~i}|y_j - y_i| / Sum_i y_i.
inline SweepResult sweep_levelset(const WeightedGraph& g, const std::vector<double>& y) {
  const std::size_t n = g.size();
  if (y.size() != n) throw ZeroVector("vector size mismatch");
  double total = 0.0;
  for (double v : y) {
    if (v < 0) throw ZeroVector("y must be nonnegative");
    total += v;
  }
  if (!(total > 0)) throw ZeroVector("zero vector");

  double num = 0.0;
  for (VertexId i = 0; i < n; ++i) {
    double m = 0.0;
    for (VertexId j : g.neighbors(i)) m = std::max(m, std::fabs(y[j] - y[i]));
    num += m;
  }
  const double alpha = num / total;

  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return y[a] > y[b]; });

  std::vector<char> inS(n, 0);
  std::vector<char> isBoundary(n, 0);
  std::size_t boundary = 0;
  double bestRatio = std::numeric_limits<double>::infinity();
  std::size_t bestLen = 0;
  std::vector<VertexId> prefix;
  for (std::size_t k = 0; k < n && y[order[k]] > 0; ++k) {
    const VertexId v = order[k];
    prefix.push_back(v);
    inS[v] = 1;
    if (isBoundary[v]) {
      isBoundary[v] = 0;
      --boundary;
    }
    for (VertexId u : g.neighbors(v))
      if (!inS[u] && !isBoundary[u]) {
        isBoundary[u] = 1;
        ++boundary;
      }
    const double ratio = static_cast<double>(boundary) / static_cast<double>(k + 1);
    if (ratio < bestRatio) {
      bestRatio = ratio;
      bestLen = k + 1;
    }
  }
  return {Cut(std::vector<VertexId>(prefix.begin(), prefix.begin() + bestLen), n), bestRatio,
          alpha};
}

struct SquareTransfer {
  std::vector<double> y;   // (z_i^+)^2 after the orientation rule
  bool flipped = false;    // whether z was negated
};

// y_i = max(z_i, 0)^2 after the orientation rule: flip the sign of z when the
// positive support is strictly larger than the negative one; on an exact tie
// keep the original sign.  Falls back to the other orientation if the chosen
// one has no positive part.
inline SquareTransfer square_transfer(const std::vector<double>& z) {
  std::size_t pos = 0, neg = 0;
  for (double v : z) {
    if (v > 0) ++pos;
    if (v < 0) ++neg;
  }
  if (pos == 0 && neg == 0) throw ZeroVector("zero vector");
  bool flip = pos > neg;
  if ((flip ? neg : pos) == 0) flip = !flip;
  SquareTransfer out;
  out.flipped = flip;
  out.y.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double v = flip ? -z[i] : z[i];
    out.y[i] = v > 0 ? v * v : 0.0;
  }
  return out;
}

struct RoundReport {
  double sdpval = 0.0;        // on the subdivided graph G'
  double bound = 0.0;         // 576 sqrt(SDPval * ln max(d', 2))
  double achieved = 0.0;      // phi^V of the returned cut on G
  std::vector<double> perRep;  // best phi^V found in each repetition
  int sdpIterations = 0;
  bool sdpConverged = false;
};

namespace detail {

// Weighted symmetric-expansion sweep on G' over prefixes 1 <= j <= n/2;
// every prefix is mapped back to G through the subdivision cut maps and
// scored by phi^V on G.
inline void sweep_and_map(const WeightedGraph& g, const Subdivision& sub,
                          const std::vector<double>& y, std::optional<Cut>& bestCut,
                          double& bestVal) {
  const std::size_t np = sub.graph.size();
  std::vector<VertexId> order(np);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return y[a] > y[b]; });

  auto consider = [&](const Cut& sPrime) {
    auto mapped = subdivision_project(sub, sPrime);
    if (!mapped) {
      // fall back to the raw restriction when stripping empties the set
      std::vector<VertexId> raw;
      for (VertexId v : sPrime.members())
        if (sub.is_original(v)) raw.push_back(v);
      if (raw.empty() || raw.size() == g.size()) return;
      mapped = Cut(std::move(raw), g.size());
    }
    for (const Cut& cand : {*mapped, mapped->complement()}) {
      const double val = vertex_expansion(g, cand);
      if (!bestCut || val < bestVal) {
        bestCut = cand;
        bestVal = val;
      }
    }
  };

  std::vector<VertexId> prefix;
  for (std::size_t k = 0; k < (np + 1) / 2; ++k) {
    prefix.push_back(order[k]);
    Cut sPrime(prefix, np);
    consider(sPrime);
  }
}

}  // namespace detail

struct RoundResult {
  Cut cut;
  RoundReport report;
};

// Randomized rounding of the relaxation on the subdivided graph: Gaussian
// projection, positive-part squaring, prefix sweep, map back to G; best cut
// over `reps` repetitions.  Disconnected inputs short-circuit to a
// zero-expansion component cut.
inline RoundResult round_sdp(const WeightedGraph& g, int reps = 20, std::uint64_t seed = 0,
                             double tol = 1e-6, int maxIter = 5000) {
  if (reps < 1) throw Error("reps must be >= 1");
  if (g.size() < 2) throw DegenerateCut("no proper cut exists");

  if (!g.is_connected()) {
    auto comps = g.components();
    Cut cut(comps.front(), g.size());
    RoundResult res{cut, {}};
    res.report.achieved = vertex_expansion(g, cut);
    res.report.perRep.assign(static_cast<std::size_t>(reps), res.report.achieved);
    return res;
  }

  Subdivision sub = edge_subdivision_weighted(g);
  SdpProblem prob = build_sdp(sub.graph);
  SdpSolution sol = solve(prob, tol, maxIter, seed);
  auto embedding = factorize(sol, 1e-7);

  const double dlog = std::log(std::max<double>(2.0, static_cast<double>(sub.graph.max_degree())));
  RoundReport report;
  report.sdpval = sol.value;
  report.bound = 576.0 * std::sqrt(sol.value * dlog);
  report.sdpIterations = sol.iterations;
  report.sdpConverged = sol.converged;

  std::optional<Cut> bestCut;
  double bestVal = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    std::optional<Cut> repCut;
    double repVal = 0.0;
    auto x = gaussian_project(embedding, derive_seed(seed, "round-rep", static_cast<std::uint64_t>(rep)));
    SquareTransfer st;
    try {
      st = square_transfer(x);
    } catch (const ZeroVector&) {
      report.perRep.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    detail::sweep_and_map(g, sub, st.y, repCut, repVal);
    if (repCut) {
      report.perRep.push_back(repVal);
      if (!bestCut || repVal < bestVal) {
        bestCut = repCut;
        bestVal = repVal;
      }
    } else {
      report.perRep.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  if (!bestCut) throw Error("rounding produced no usable cut");
  report.achieved = bestVal;
  return {*bestCut, report};
}

}  // namespace vexp
