#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "vexp/bave.hpp"
#include "vexp/errors.hpp"
#include "vexp/gadget.hpp"
#include "vexp/graph.hpp"
#include "vexp/rng.hpp"

namespace vexp {

// Pi(A, x) = {(a_i, x_i) | x_i in {s, t}}, stored as a sorted multiset.
struct FoldedVertex {
  std::vector<std::pair<VertexId, int>> pairs;

  void canonicalize() { std::sort(pairs.begin(), pairs.end()); }

  bool operator==(const FoldedVertex& o) const { return pairs == o.pairs; }
  bool operator<(const FoldedVertex& o) const { return pairs < o.pairs; }
};

// Parameters of the reduction box: R = 1/delta, the chain parameter epsilon,
// arity d, smoothing eta (default eps/(100 d)), and the sampling budget.
struct ReductionParams {
  std::size_t r = 1;
  double epsilon = 0.1;
  std::size_t d = 1;
  double eta = -1.0;  // < 0 means the default eps/(100 d)
  std::size_t sampleCount = 1000;
  std::uint64_t seed = 0;

  double effective_eta() const {
    return eta < 0 ? epsilon / (100.0 * static_cast<double>(d)) : eta;
  }

  void validate() const {
    if (r < 1) throw Error("R must be at least 1");
    if (!(epsilon > 0.0) || !(epsilon < 0.25)) throw BadEpsilon("epsilon must lie in (0, 1/4)");
    if (d < 1) throw Error("d must be at least 1");
    const double h = effective_eta();
    if (!(h >= 0.0) || !(h <= 1.0)) throw Error("eta must lie in [0, 1]");
  }
};

// One unfolded constraint: slot 0 is (B, x), slot j is (C_j, y_j).
struct UnfoldedTuple {
  std::vector<VertexId> a;
  std::vector<VertexId> b;
  std::vector<std::vector<VertexId>> cs;
  std::vector<int> x;
  std::vector<std::vector<int>> ys;
};

namespace detail {

// One G_eta = (1 - eta) G + eta K_V step from u.
inline VertexId smooth_step(const WeightedGraph& g, VertexId u, double eta, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < eta) {
    std::uniform_int_distribution<std::size_t> uv(0, g.size() - 1);
    return static_cast<VertexId>(uv(rng));
  }
  const auto& nb = g.neighbors(u);
  std::uniform_int_distribution<std::size_t> un(0, nb.size() - 1);
  return nb[un(rng)];
}

}  // namespace detail

inline UnfoldedTuple sample_unfolded(const WeightedGraph& g, const GadgetChain& chain,
                                     const ReductionParams& params, Rng& rng) {
  params.validate();
  if (!g.is_regular() || g.neighbors(0).empty()) throw NotRegular("graph must be regular");
  const std::size_t r = params.r;
  const double eta = params.effective_eta();
  UnfoldedTuple out;
  out.a.resize(r);
  std::uniform_int_distribution<std::size_t> uv(0, g.size() - 1);
  for (std::size_t i = 0; i < r; ++i) out.a[i] = static_cast<VertexId>(uv(rng));
  out.b.resize(r);
  for (std::size_t i = 0; i < r; ++i) out.b[i] = detail::smooth_step(g, out.a[i], eta, rng);
  out.cs.assign(params.d, std::vector<VertexId>(r));
  for (std::size_t j = 0; j < params.d; ++j)
    for (std::size_t i = 0; i < r; ++i)
      out.cs[j][i] = detail::smooth_step(g, out.a[i], eta, rng);
  out.x.resize(r);
  for (std::size_t i = 0; i < r; ++i) out.x[i] = sample_state(chain.stationary, rng);
  out.ys.assign(params.d, std::vector<int>(r));
  for (std::size_t j = 0; j < params.d; ++j)
    for (std::size_t i = 0; i < r; ++i)
      out.ys[j][i] = sample_state(chain.transition[out.x[i]], rng);
  return out;
}

inline UnfoldedTuple sample_unfolded(const WeightedGraph& g, const ReductionParams& params,
                                     std::uint64_t seed) {
  auto chain = build_chain(params.epsilon);
  Rng rng = make_rng(seed, "sse-sample");
  return sample_unfolded(g, chain, params, rng);
}

inline FoldedVertex fold(const std::vector<VertexId>& a, const std::vector<int>& x) {
  if (a.size() != x.size()) throw Error("fold length mismatch");
  FoldedVertex out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (x[i] == kS || x[i] == kT) out.pairs.emplace_back(a[i], x[i]);
  out.canonicalize();
  return out;
}

// Empirical folded instance: sampled tuples with weight 1/sampleCount; the
// vertex list maps BaveInstance ids back to folded vertices.
struct FoldedInstance {
  BaveInstance instance;
  std::vector<FoldedVertex> vertexOf;
};

inline FoldedInstance build_folded_instance(const WeightedGraph& g,
                                            const ReductionParams& params) {
  params.validate();
  if (params.sampleCount < 1000) throw Error("sampleCount must be at least 1000");
  auto chain = build_chain(params.epsilon);
  Rng rng = make_rng(params.seed, "sse-build");

  std::map<FoldedVertex, std::size_t> ids;
  std::vector<FoldedVertex> vertexOf;
  auto intern = [&](FoldedVertex v) {
    auto it = ids.find(v);
    if (it != ids.end()) return it->second;
    const std::size_t id = vertexOf.size();
    ids.emplace(v, id);
    vertexOf.push_back(std::move(v));
    return id;
  };

  std::vector<BaveTuple> tuples;
  tuples.reserve(params.sampleCount);
  const double p = 1.0 / static_cast<double>(params.sampleCount);
  for (std::size_t s = 0; s < params.sampleCount; ++s) {
    auto u = sample_unfolded(g, chain, params, rng);
    BaveTuple tp;
    tp.p = p;
    tp.t.push_back(intern(fold(u.b, u.x)));
    for (std::size_t j = 0; j < params.d; ++j) tp.t.push_back(intern(fold(u.cs[j], u.ys[j])));
    tuples.push_back(std::move(tp));
  }
  BaveInstance inst(vertexOf.size(), params.d, std::move(tuples), -1.0);
  return {std::move(inst), std::move(vertexOf)};
}

// F'(folded) = 1 iff exactly one pair of the multiset has its graph part in S.
inline Assignment completeness_assignment(const std::set<VertexId>& s,
                                          const std::vector<FoldedVertex>& vertexOf) {
  Assignment f;
  f.values.reserve(vertexOf.size());
  for (const auto& v : vertexOf) {
    std::size_t count = 0;
    for (const auto& [gv, st] : v.pairs) count += s.count(gv);
    f.values.push_back(count == 1 ? 1.0 : 0.0);
  }
  return f;
}

}  // namespace vexp
