#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vexp/errors.hpp"

namespace vexp {

using VertexId = std::uint32_t;

// Undirected simple graph with nonnegative vertex weights (default 1.0).
// Adjacency lists are kept sorted; parallel edges and self-loops are rejected.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges,
                std::vector<double> weights = {}) {
    if (weights.empty()) weights.assign(n, 1.0);
    if (weights.size() != n) throw ParseError("weight vector size mismatch");
    for (double w : weights)
      if (!(w >= 0.0)) throw ParseError("negative vertex weight");
    adj_.assign(n, {});
    weights_ = std::move(weights);
    for (auto [u, v] : edges) add_edge_checked(u, v);
    finalize();
  }

  std::size_t size() const { return adj_.size(); }
  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_.at(v); }
  double weight(VertexId v) const { return weights_.at(v); }
  const std::vector<double>& weights() const { return weights_; }
  double total_weight() const { return totalWeight_; }
  std::size_t max_degree() const { return maxDegree_; }
  std::size_t edge_count() const { return edgeCount_; }

  bool has_edge(VertexId u, VertexId v) const {
    const auto& a = adj_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
  }

  bool is_regular() const {
    for (const auto& a : adj_)
      if (a.size() != maxDegree_) return false;
    return true;
  }

  bool is_connected() const {
    if (size() == 0) return false;
    std::vector<char> seen(size(), 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::size_t cnt = 1;
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (VertexId v : adj_[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++cnt;
          stack.push_back(v);
        }
    }
    return cnt == size();
  }

  // Connected components as sorted vertex lists.
  std::vector<std::vector<VertexId>> components() const {
    std::vector<char> seen(size(), 0);
    std::vector<std::vector<VertexId>> comps;
    for (VertexId s = 0; s < size(); ++s) {
      if (seen[s]) continue;
      std::vector<VertexId> comp{s};
      seen[s] = 1;
      std::vector<VertexId> stack{s};
      while (!stack.empty()) {
        VertexId u = stack.back();
        stack.pop_back();
        for (VertexId v : adj_[u])
          if (!seen[v]) {
            seen[v] = 1;
            comp.push_back(v);
            stack.push_back(v);
          }
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
    return comps;
  }

  // Induced subgraph on `keep` (sorted ids); returns the subgraph and the
  // old-id list indexed by new id.
  std::pair<WeightedGraph, std::vector<VertexId>> induced(
      const std::vector<VertexId>& keep) const {
    std::vector<VertexId> old(keep);
    std::sort(old.begin(), old.end());
    std::vector<std::int64_t> newId(size(), -1);
    for (std::size_t i = 0; i < old.size(); ++i) newId[old[i]] = static_cast<std::int64_t>(i);
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::vector<double> w(old.size());
    for (std::size_t i = 0; i < old.size(); ++i) {
      w[i] = weights_[old[i]];
      for (VertexId v : adj_[old[i]])
        if (newId[v] >= 0 && v > old[i])
          edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(newId[v]));
    }
    return {WeightedGraph(old.size(), edges, std::move(w)), old};
  }

  std::vector<std::pair<VertexId, VertexId>> edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (VertexId u = 0; u < size(); ++u)
      for (VertexId v : adj_[u])
        if (v > u) out.emplace_back(u, v);
    return out;
  }

 private:
  void add_edge_checked(VertexId u, VertexId v) {
    if (u >= adj_.size() || v >= adj_.size()) throw ParseError("edge endpoint out of range");
    if (u == v) throw ParseError("self-loop rejected");
    auto& au = adj_[u];
    if (std::find(au.begin(), au.end(), v) != au.end())
      throw ParseError("duplicate edge rejected");
    au.push_back(v);
    adj_[v].push_back(u);
    ++edgeCount_;
  }

  void finalize() {
    maxDegree_ = 0;
    for (auto& a : adj_) {
      std::sort(a.begin(), a.end());
      maxDegree_ = std::max(maxDegree_, a.size());
    }
    totalWeight_ = 0.0;
    for (double w : weights_) totalWeight_ += w;
    if (adj_.size() > 0 && !(totalWeight_ > 0.0)) throw ParseError("total weight must be positive");
  }

  std::vector<std::vector<VertexId>> adj_;
  std::vector<double> weights_;
  double totalWeight_ = 0.0;
  std::size_t maxDegree_ = 0;
  std::size_t edgeCount_ = 0;
};

// A vertex subset with O(1) membership.
class Cut {
 public:
  Cut() = default;
  Cut(std::vector<VertexId> members, std::size_t n)
      : members_(std::move(members)), n_(n), mask_(n, 0) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (VertexId v : members_) {
      if (v >= n) throw ParseError("cut member out of range");
      mask_[v] = 1;
    }
  }

  const std::vector<VertexId>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t complement_size() const { return n_ - members_.size(); }
  std::size_t universe() const { return n_; }
  bool contains(VertexId v) const { return v < n_ && mask_[v] != 0; }

  Cut complement() const {
    std::vector<VertexId> out;
    out.reserve(complement_size());
    for (VertexId v = 0; v < n_; ++v)
      if (!mask_[v]) out.push_back(v);
    return Cut(std::move(out), n_);
  }

 private:
  std::vector<VertexId> members_;
  std::size_t n_ = 0;
  std::vector<char> mask_;
};

// Outer boundary N(S): vertices outside S with a neighbor in S.
inline std::vector<VertexId> neighborhood(const WeightedGraph& g, const Cut& s) {
  std::vector<char> hit(g.size(), 0);
  for (VertexId u : s.members())
    for (VertexId v : g.neighbors(u))
      if (!s.contains(v)) hit[v] = 1;
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.size(); ++v)
    if (hit[v]) out.push_back(v);
  return out;
}

namespace detail {

inline void check_proper(const WeightedGraph& g, const Cut& s) {
  if (s.size() == 0 || s.size() == g.size())
    throw DegenerateCut("cut must be a proper nonempty subset");
}

inline double side_weights(const WeightedGraph& g, const Cut& s, double& wS, double& wCo) {
  wS = 0.0;
  for (VertexId v : s.members()) wS += g.weight(v);
  wCo = g.total_weight() - wS;
  if (!(wS > 0.0) || !(wCo > 0.0))
    throw DegenerateCut("cut side has zero weight");
  return wS * wCo;
}

}  // namespace detail

// phi^V(S) = w(V) * w(N(S)) / (w(S) w(V\S)); unit weights recover the
// cardinality formula n*|N(S)|/(|S||V\S|).
inline double vertex_expansion(const WeightedGraph& g, const Cut& s) {
  detail::check_proper(g, s);
  double wS, wCo;
  detail::side_weights(g, s, wS, wCo);
  double wB = 0.0;
  for (VertexId v : neighborhood(g, s)) wB += g.weight(v);
  return g.total_weight() * wB / (wS * wCo);
}

// Phi^V(S): boundary on both sides, N(S) union N(V\S).
inline double symmetric_vertex_expansion(const WeightedGraph& g, const Cut& s) {
  detail::check_proper(g, s);
  double wS, wCo;
  detail::side_weights(g, s, wS, wCo);
  auto outer = neighborhood(g, s);
  auto inner = neighborhood(g, s.complement());
  std::vector<char> hit(g.size(), 0);
  for (VertexId v : outer) hit[v] = 1;
  for (VertexId v : inner) hit[v] = 1;
  double wB = 0.0;
  for (VertexId v = 0; v < g.size(); ++v)
    if (hit[v]) wB += g.weight(v);
  return g.total_weight() * wB / (wS * wCo);
}

// Edge expansion with the regular-graph normalization: cut edges over d*|S|.
inline double edge_expansion(const WeightedGraph& g, const Cut& s) {
  detail::check_proper(g, s);
  std::size_t cutEdges = 0;
  for (VertexId u : s.members())
    for (VertexId v : g.neighbors(u))
      if (!s.contains(v)) ++cutEdges;
  return static_cast<double>(cutEdges) /
         (static_cast<double>(g.max_degree()) * static_cast<double>(s.size()));
}

struct ExactResult {
  Cut cut;
  double value = 0.0;
};

// Exhaustive minimum over proper subsets, optionally of the symmetric
// functional, optionally restricted to w(S)w(V\S) >= b * w(V)^2.
// Ties break to the lexicographically smallest member set.
inline ExactResult exact_min_vertex_expansion(const WeightedGraph& g, bool symmetric = false,
                                              std::optional<double> balance = {},
                                              std::size_t cap = 20) {
  const std::size_t n = g.size();
  if (n > cap) throw TooLarge("graph exceeds the exhaustive-search cap");
  if (n < 2) throw DegenerateCut("no proper cut exists");
  if (balance && (*balance < 0.0 || *balance > 0.25))
    throw Infeasible("balance parameter must lie in [0, 1/4]");

  const double wTot = g.total_weight();
  bool found = false;
  double bestVal = 0.0;
  std::vector<VertexId> bestSet;

  std::vector<VertexId> cur;
  for (std::uint64_t mask = 1; mask + 1 < (1ULL << n); ++mask) {
    cur.clear();
    double wS = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (mask & (1ULL << v)) {
        cur.push_back(static_cast<VertexId>(v));
        wS += g.weight(static_cast<VertexId>(v));
      }
    const double wCo = wTot - wS;
    if (!(wS > 0.0) || !(wCo > 0.0)) continue;
    if (balance && wS * wCo < *balance * wTot * wTot - 1e-12) continue;
    Cut c(cur, n);
    const double val = symmetric ? symmetric_vertex_expansion(g, c) : vertex_expansion(g, c);
    if (!found || val < bestVal - 1e-12 ||
        (std::abs(val - bestVal) <= 1e-12 &&
         std::lexicographical_compare(cur.begin(), cur.end(), bestSet.begin(), bestSet.end()))) {
      found = true;
      bestVal = val;
      bestSet = cur;
    }
  }
  if (!found) throw Infeasible("no subset satisfies the balance constraint");
  return {Cut(bestSet, n), bestVal};
}

// Text format: header "n m", optional "v <id> <weight>" lines, then m lines
// "e <u> <v>" with 0-based ids.
inline WeightedGraph parse_graph(std::istream& in) {
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw ParseError("missing graph header");
  std::vector<double> weights(n, 1.0);
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::string tag;
  while (in >> tag) {
    if (tag == "v") {
      std::size_t id;
      double w;
      if (!(in >> id >> w)) throw ParseError("malformed vertex line");
      if (id >= n) throw ParseError("vertex id out of range");
      weights[id] = w;
    } else if (tag == "e") {
      std::size_t u, v;
      if (!(in >> u >> v)) throw ParseError("malformed edge line");
      if (u >= n || v >= n) throw ParseError("edge endpoint out of range");
      edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    } else {
      throw ParseError("unknown line tag: " + tag);
    }
  }
  if (edges.size() != m) throw ParseError("edge count does not match header");
  return WeightedGraph(n, edges, std::move(weights));
}

inline WeightedGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline void write_graph(std::ostream& out, const WeightedGraph& g) {
  auto es = g.edges();
  out << g.size() << ' ' << es.size() << '\n';
  for (VertexId v = 0; v < g.size(); ++v)
    if (g.weight(v) != 1.0) out << "v " << v << ' ' << g.weight(v) << '\n';
  for (auto [u, v] : es) out << "e " << u << ' ' << v << '\n';
}

}  // namespace vexp
