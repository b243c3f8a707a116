#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "vexp/errors.hpp"
#include "vexp/graph.hpp"

namespace vexp {

// H = G union G^2 (two-hop closure), same vertex set and weights.
inline WeightedGraph square_union(const WeightedGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v : g.neighbors(u)) {
      adj[u][v] = 1;
      for (VertexId w : g.neighbors(v))
        if (w != u) adj[u][w] = 1;
    }
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (adj[u][v]) e.emplace_back(u, v);
  return WeightedGraph(n, e, g.weights());
}

// S' = S minus its internal boundary N_G(S-bar).  Empty result signals the
// Phi^V(S) >= 1 regime.
inline Cut strip_inner_boundary(const WeightedGraph& g, const Cut& s) {
  detail::check_proper(g, s);
  auto inner = neighborhood(g, s.complement());
  std::vector<char> drop(g.size(), 0);
  for (VertexId v : inner) drop[v] = 1;
  std::vector<VertexId> kept;
  for (VertexId v : s.members())
    if (!drop[v]) kept.push_back(v);
  if (kept.empty()) throw EmptyResult("stripping the inner boundary emptied the cut");
  return Cut(kept, g.size());
}

struct Subdivision {
  WeightedGraph graph;                       // G': original vertices then edge-vertices
  std::vector<VertexId> originalIds;         // G' id -> G id for the first n vertices
  std::vector<std::pair<VertexId, VertexId>> edgeVertexOf;  // G' id n+k -> G edge (u,v)

  bool is_original(VertexId v) const { return v < originalIds.size(); }
};

// Edge subdivision: one new vertex per edge {u,v}, weighted
// min(w(u)/deg(u), w(v)/deg(v)); original degrees are preserved and every
// edge-vertex has degree 2.
inline Subdivision edge_subdivision_weighted(const WeightedGraph& g) {
  const std::size_t n = g.size();
  auto es = g.edges();
  std::vector<std::pair<VertexId, VertexId>> newEdges;
  std::vector<double> w(g.weights());
  w.resize(n + es.size());
  Subdivision out;
  out.originalIds.resize(n);
  for (VertexId v = 0; v < n; ++v) out.originalIds[v] = v;
  for (std::size_t k = 0; k < es.size(); ++k) {
    auto [u, v] = es[k];
    const VertexId ev = static_cast<VertexId>(n + k);
    newEdges.emplace_back(u, ev);
    newEdges.emplace_back(v, ev);
    w[ev] = std::min(g.weight(u) / static_cast<double>(g.neighbors(u).size()),
                     g.weight(v) / static_cast<double>(g.neighbors(v).size()));
    out.edgeVertexOf.emplace_back(u, v);
  }
  out.graph = WeightedGraph(n + es.size(), newEdges, std::move(w));
  return out;
}

// Cut map S -> S' used in the subdivision analysis: S plus every edge-vertex
// with at least one endpoint in S.
inline Cut subdivision_lift(const Subdivision& sub, const Cut& s) {
  std::vector<VertexId> members(s.members().begin(), s.members().end());
  const std::size_t n = sub.originalIds.size();
  for (std::size_t k = 0; k < sub.edgeVertexOf.size(); ++k) {
    auto [u, v] = sub.edgeVertexOf[k];
    if (s.contains(u) || s.contains(v)) members.push_back(static_cast<VertexId>(n + k));
  }
  return Cut(std::move(members), sub.graph.size());
}

// Cut map S' -> S: strip the internal boundary of S' in G', keep original
// vertices only.  Empty when S' was all boundary.
inline std::optional<Cut> subdivision_project(const Subdivision& sub, const Cut& sPrime) {
  auto inner = neighborhood(sub.graph, sPrime.complement());
  std::vector<char> drop(sub.graph.size(), 0);
  for (VertexId v : inner) drop[v] = 1;
  std::vector<VertexId> members;
  for (VertexId v : sPrime.members())
    if (sub.is_original(v) && !drop[v]) members.push_back(v);
  if (members.empty() || members.size() == sub.originalIds.size()) return std::nullopt;
  return Cut(std::move(members), sub.originalIds.size());
}

// Oracle contract for peeling: given the residual graph, return a proper cut
// or nothing (Fail).
using CutOracle = std::function<std::optional<Cut>(const WeightedGraph&)>;

// Repeatedly find a low-expansion set and delete it; stop once the deleted
// mass first exceeds a b/2 fraction or the oracle fails.  Returns the union
// when its balance w(T)w(V\T)/w(V)^2 reaches b/2.
inline std::optional<Cut> peel_to_balanced(const WeightedGraph& g, double b,
                                           const CutOracle& oracle) {
  if (!(b > 0.0) || b > 0.25) throw Infeasible("balance parameter must lie in (0, 1/4]");
  const double wTot = g.total_weight();
  auto balance = [&](double wS) { return wS * (wTot - wS) / (wTot * wTot); };

  std::vector<char> deleted(g.size(), 0);
  std::vector<VertexId> unionSet;
  double wDeleted = 0.0;

  while (true) {
    std::vector<VertexId> alive;
    for (VertexId v = 0; v < g.size(); ++v)
      if (!deleted[v]) alive.push_back(v);
    if (alive.size() < 2) break;
    auto [residual, oldIds] = g.induced(alive);
    auto found = oracle(residual);
    if (!found) {
      if (balance(wDeleted) >= b / 2) return Cut(unionSet, g.size());
      return std::nullopt;  // certifies large balanced expansion
    }
    for (VertexId v : found->members()) {
      VertexId orig = oldIds[v];
      deleted[orig] = 1;
      unionSet.push_back(orig);
      wDeleted += g.weight(orig);
    }
    if (balance(wDeleted) >= b) return Cut(unionSet, g.size());
    if (wDeleted / wTot > b / 2) {
      if (balance(wDeleted) >= b / 2) return Cut(unionSet, g.size());
      return std::nullopt;
    }
  }
  if (balance(wDeleted) >= b / 2 && !unionSet.empty()) return Cut(unionSet, g.size());
  return std::nullopt;
}

}  // namespace vexp
