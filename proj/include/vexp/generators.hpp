#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "vexp/errors.hpp"
#include "vexp/graph.hpp"
#include "vexp/rng.hpp"

namespace vexp {

inline WeightedGraph make_cycle(std::size_t n) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (std::size_t i = 0; i < n; ++i)
    e.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % n));
  if (n == 2) e.pop_back();  // C2 degenerates to K2
  return WeightedGraph(n, e);
}

inline WeightedGraph make_clique(std::size_t n) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      e.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
  return WeightedGraph(n, e);
}

// Star with center 0 and `leaves` leaves.
inline WeightedGraph make_star(std::size_t leaves) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, static_cast<VertexId>(i));
  return WeightedGraph(leaves + 1, e);
}

inline WeightedGraph make_hypercube(std::size_t dim) {
  const std::size_t n = 1ULL << dim;
  std::vector<std::pair<VertexId, VertexId>> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t b = 0; b < dim; ++b) {
      std::size_t v = u ^ (1ULL << b);
      if (v > u) e.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    }
  return WeightedGraph(n, e);
}

// Two disjoint cliques of size k.
inline WeightedGraph make_two_cliques(std::size_t k) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (std::size_t off : {std::size_t{0}, k})
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        e.emplace_back(static_cast<VertexId>(off + i), static_cast<VertexId>(off + j));
  return WeightedGraph(2 * k, e);
}

// Two cliques of size k joined by a single edge 0 -- k.
inline WeightedGraph make_barbell(std::size_t k) {
  auto g = make_two_cliques(k);
  auto e = g.edges();
  e.emplace_back(0, static_cast<VertexId>(k));
  return WeightedGraph(2 * k, e);
}

// Configuration model with rejection of self-loops and multi-edges.
inline WeightedGraph make_random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                                         int maxAttempts = 2000) {
  if (n * d % 2 != 0 || d >= n)
    throw InfeasibleDegreeSequence("no d-regular graph on n vertices");
  Rng rng = make_rng(seed, "random-regular");
  for (int attempt = 0; attempt < maxAttempts; ++attempt) {
    std::vector<VertexId> stubs;
    stubs.reserve(n * d);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t k = 0; k < d; ++k) stubs.push_back(static_cast<VertexId>(v));
    for (std::size_t i = stubs.size(); i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(stubs[i - 1], stubs[pick(rng)]);
    }
    std::vector<std::pair<VertexId, VertexId>> e;
    bool ok = true;
    std::vector<std::vector<char>> seen(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      VertexId u = stubs[i], v = stubs[i + 1];
      if (u == v || seen[u][v]) {
        ok = false;
        break;
      }
      seen[u][v] = seen[v][u] = 1;
      e.emplace_back(u, v);
    }
    if (ok) return WeightedGraph(n, e);
  }
  throw InfeasibleDegreeSequence("configuration model rejection limit reached");
}

struct CorpusGraph {
  std::string name;
  WeightedGraph graph;
};

// The small-graph corpus used throughout the test suites: every generator,
// all instances with n <= 10.
inline std::vector<CorpusGraph> small_corpus(std::uint64_t seed = 1) {
  std::vector<CorpusGraph> out;
  for (std::size_t n : {4, 5, 6, 8, 10}) out.push_back({"cycle-" + std::to_string(n), make_cycle(n)});
  for (std::size_t n : {2, 3, 4, 5}) out.push_back({"clique-" + std::to_string(n), make_clique(n)});
  for (std::size_t l : {3, 4, 5}) out.push_back({"star-" + std::to_string(l), make_star(l)});
  out.push_back({"hypercube-3", make_hypercube(3)});
  out.push_back({"two-cliques-4", make_two_cliques(4)});
  out.push_back({"two-cliques-5", make_two_cliques(5)});
  out.push_back({"barbell-4", make_barbell(4)});
  out.push_back({"barbell-5", make_barbell(5)});
  out.push_back({"random-regular-8-3", make_random_regular(8, 3, derive_seed(seed, "corpus", 0))});
  out.push_back({"random-regular-10-3", make_random_regular(10, 3, derive_seed(seed, "corpus", 1))});
  return out;
}

}  // namespace vexp
