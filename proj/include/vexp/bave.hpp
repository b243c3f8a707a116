#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "vexp/errors.hpp"
#include "vexp/graph.hpp"
#include "vexp/rng.hpp"

namespace vexp {

// One (x, y_1..y_d) tuple with its probability.
struct BaveTuple {
  std::vector<std::size_t> t;  // size d+1, t[0] = x
  double p = 0.0;
};

// Analytic vertex expansion instance: a distribution over (d+1)-tuples whose
// d+1 coordinate marginals agree; the shared marginal is mu.
class BaveInstance {
 public:
  // marginalTol < 0 skips the marginal-equality check (sampled instances).
  BaveInstance(std::size_t variables, std::size_t d, std::vector<BaveTuple> tuples,
               double marginalTol = 1e-9)
      : n_(variables), d_(d), tuples_(std::move(tuples)) {
    if (n_ == 0) throw Error("instance needs at least one variable");
    if (d_ == 0) throw Error("arity must be at least 2");
    double total = 0.0;
    for (const auto& tp : tuples_) {
      if (tp.t.size() != d_ + 1) throw Error("tuple arity mismatch");
      for (std::size_t v : tp.t)
        if (v >= n_) throw Error("tuple variable out of range");
      if (tp.p < 0) throw Error("negative probability");
      total += tp.p;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw BadNormalization("probabilities must sum to 1");
    mu_.assign(n_, 0.0);
    for (const auto& tp : tuples_) mu_[tp.t[0]] += tp.p;
    if (marginalTol >= 0) {
      for (std::size_t k = 1; k <= d_; ++k) {
        std::vector<double> mk(n_, 0.0);
        for (const auto& tp : tuples_) mk[tp.t[k]] += tp.p;
        for (std::size_t v = 0; v < n_; ++v)
          if (std::fabs(mk[v] - mu_[v]) > marginalTol)
            throw BadNormalization("coordinate marginals differ");
      }
    }
  }

  std::size_t variables() const { return n_; }
  std::size_t arity_minus_one() const { return d_; }
  const std::vector<BaveTuple>& tuples() const { return tuples_; }
  const std::vector<double>& marginal() const { return mu_; }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<BaveTuple> tuples_;
  std::vector<double> mu_;
};

// F : V -> [0,1]; boolean when every value is 0 or 1.
struct Assignment {
  std::vector<double> values;

  bool is_boolean() const {
    for (double v : values)
      if (v != 0.0 && v != 1.0) return false;
    return true;
  }
};

struct BaveValue {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  bool zeroVariance = false;
};

inline BaveValue bave_value(const BaveInstance& inst, const Assignment& f) {
  if (f.values.size() != inst.variables()) throw Error("assignment size mismatch");
  BaveValue out;
  for (const auto& tp : inst.tuples()) {
    double m = 0.0;
    for (std::size_t k = 1; k < tp.t.size(); ++k)
      m = std::max(m, std::fabs(f.values[tp.t[k]] - f.values[tp.t[0]]));
    out.numerator += tp.p * m;
  }
  const auto& mu = inst.marginal();
  for (std::size_t a = 0; a < mu.size(); ++a)
    for (std::size_t b = 0; b < mu.size(); ++b)
      out.denominator += mu[a] * mu[b] * std::fabs(f.values[a] - f.values[b]);
  if (out.denominator > 0) {
    out.ratio = out.numerator / out.denominator;
  } else {
    out.zeroVariance = true;
    out.ratio = std::numeric_limits<double>::infinity();
  }
  return out;
}

struct BaveOptimum {
  Assignment assignment;
  double ratio = 0.0;
  double denominator = 0.0;
};

// Exhaustive minimum of the ratio over boolean assignments with
// E|F(X)-F(Y)| >= balanceThreshold.
inline BaveOptimum bave_optimum(const BaveInstance& inst, double balanceThreshold = 0.01) {
  const std::size_t n = inst.variables();
  if (n > 20) throw TooLarge("exhaustive search capped at 20 variables");
  BaveOptimum best;
  bool found = false;
  Assignment f;
  f.values.assign(n, 0.0);
  for (std::uint64_t mask = 1; mask + 1 < (1ULL << n); ++mask) {
    for (std::size_t v = 0; v < n; ++v) f.values[v] = (mask >> v) & 1 ? 1.0 : 0.0;
    auto val = bave_value(inst, f);
    if (val.zeroVariance || val.denominator < balanceThreshold) continue;
    if (!found || val.ratio < best.ratio) {
      best.assignment = f;
      best.ratio = val.ratio;
      best.denominator = val.denominator;
      found = true;
    }
  }
  if (!found) throw Infeasible("no boolean assignment meets the balance threshold");
  return best;
}

struct ThresholdRound {
  Assignment assignment;
  double ratio = 0.0;
  double threshold = 0.0;
};

// Level-set rounding: F_r = 1{F >= r} over all distinct values r of F; never
// increases the ratio.
inline ThresholdRound threshold_round(const BaveInstance& inst, const Assignment& f) {
  auto frac = bave_value(inst, f);
  if (frac.zeroVariance) throw ZeroVariance("constant assignment");
  std::set<double> values(f.values.begin(), f.values.end());
  ThresholdRound best;
  bool found = false;
  for (double r : values) {
    Assignment fr;
    fr.values.resize(f.values.size());
    for (std::size_t v = 0; v < f.values.size(); ++v)
      fr.values[v] = f.values[v] >= r ? 1.0 : 0.0;
    auto val = bave_value(inst, fr);
    if (val.zeroVariance) continue;
    if (!found || val.ratio < best.ratio) {
      best.assignment = fr;
      best.ratio = val.ratio;
      best.threshold = r;
      found = true;
    }
  }
  if (!found) throw ZeroVariance("all level sets are constant");
  return best;
}

// Prop-uniform construction: drop variables with mu < 1/(2n^2), split each
// remaining variable i into ceil(mu(i) T) equal-mass copies, distribute each
// tuple's probability uniformly over the copy combinations, renormalize.
struct Uniformized {
  BaveInstance instance;
  std::vector<std::size_t> cloudOf;  // new variable -> original variable
};

inline Uniformized uniformize(const BaveInstance& inst, std::size_t t = 0) {
  const std::size_t n = inst.variables();
  if (t == 0) t = 2 * n * n;
  const auto& mu = inst.marginal();
  const double cutoff = 1.0 / (2.0 * static_cast<double>(n) * static_cast<double>(n));
  std::vector<char> keep(n, 0);
  bool deleted = false;
  for (std::size_t v = 0; v < n; ++v) {
    keep[v] = mu[v] >= cutoff ? 1 : 0;
    if (!keep[v]) deleted = true;
  }

  std::vector<std::size_t> copies(n, 0), base(n, 0);
  std::size_t nNew = 0;
  std::vector<std::size_t> cloudOf;
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    copies[v] = static_cast<std::size_t>(std::ceil(mu[v] * static_cast<double>(t) - 1e-12));
    if (copies[v] == 0) copies[v] = 1;
    base[v] = nNew;
    nNew += copies[v];
    for (std::size_t c = 0; c < copies[v]; ++c) cloudOf.push_back(v);
  }
  if (nNew == 0) throw EmptyResult("all variables deleted");

  std::vector<BaveTuple> out;
  double total = 0.0;
  const std::size_t d = inst.arity_minus_one();
  for (const auto& tp : inst.tuples()) {
    bool ok = true;
    for (std::size_t v : tp.t) ok &= static_cast<bool>(keep[v]);
    if (!ok || tp.p == 0.0) continue;
    double combos = 1.0;
    for (std::size_t v : tp.t) combos *= static_cast<double>(copies[v]);
    const double q = tp.p / combos;
    // enumerate copy combinations with a mixed-radix counter
    std::vector<std::size_t> idx(d + 1, 0);
    while (true) {
      BaveTuple nt;
      nt.p = q;
      nt.t.resize(d + 1);
      for (std::size_t k = 0; k <= d; ++k) nt.t[k] = base[tp.t[k]] + idx[k];
      out.push_back(std::move(nt));
      total += q;
      std::size_t k = 0;
      while (k <= d && ++idx[k] == copies[tp.t[k]]) idx[k++] = 0;
      if (k > d) break;
    }
  }
  if (!(total > 0)) throw EmptyResult("no tuples survive deletion");
  for (auto& tp : out) tp.p /= total;
  return {BaveInstance(nNew, d, std::move(out), deleted ? -1.0 : 1e-9), std::move(cloudOf)};
}

// Prop-subsample construction: per vertex, D/d conditional tuple draws; the
// partners become neighbors; vertices with more than 4D incidences are
// deleted; parallel edges and self-pairs are dropped.
struct SampledGraph {
  WeightedGraph graph;
  std::vector<VertexId> originalIds;  // surviving new id -> instance variable
  std::vector<std::size_t> incidences;  // multigraph degree per instance variable
  double deletedFraction = 0.0;
};

inline SampledGraph instance_to_graph(const BaveInstance& inst, std::size_t bigD,
                                      std::uint64_t seed) {
  const std::size_t n = inst.variables();
  const std::size_t d = inst.arity_minus_one();
  if (bigD < d || bigD % d != 0) throw Error("D must be a positive multiple of d");
  const auto& mu = inst.marginal();
  for (double m : mu)
    if (std::fabs(m - 1.0 / static_cast<double>(n)) > 1e-9)
      throw BadNormalization("marginal must be uniform");

  std::vector<std::vector<std::pair<std::size_t, double>>> byX(n);
  for (std::size_t i = 0; i < inst.tuples().size(); ++i) {
    const auto& tp = inst.tuples()[i];
    if (tp.p > 0) byX[tp.t[0]].emplace_back(i, tp.p);
  }

  Rng rng = make_rng(seed, "instance-to-graph");
  std::vector<std::set<std::size_t>> adj(n);
  std::vector<std::size_t> incidences(n, 0);
  const std::size_t draws = bigD / d;
  for (std::size_t x = 0; x < n; ++x) {
    if (byX[x].empty()) continue;
    std::vector<double> ws;
    for (auto& [i, p] : byX[x]) ws.push_back(p);
    std::discrete_distribution<std::size_t> pick(ws.begin(), ws.end());
    for (std::size_t s = 0; s < draws; ++s) {
      const auto& tp = inst.tuples()[byX[x][pick(rng)].first];
      for (std::size_t k = 1; k <= d; ++k) {
        const std::size_t y = tp.t[k];
        if (y == x) continue;
        adj[x].insert(y);
        adj[y].insert(x);
        ++incidences[x];
        ++incidences[y];
      }
    }
  }

  std::vector<char> survive(n, 1);
  std::size_t deletedCount = 0;
  for (std::size_t v = 0; v < n; ++v)
    if (incidences[v] > 4 * bigD) {
      survive[v] = 0;
      ++deletedCount;
    }
  std::vector<VertexId> ids;
  std::vector<std::size_t> newId(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (survive[v]) {
      newId[v] = ids.size();
      ids.push_back(static_cast<VertexId>(v));
    }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    if (!survive[u]) continue;
    for (std::size_t v : adj[u])
      if (u < v && survive[v])
        edges.emplace_back(static_cast<VertexId>(newId[u]), static_cast<VertexId>(newId[v]));
  }
  SampledGraph out{WeightedGraph(ids.size(), edges), std::move(ids), std::move(incidences),
                   static_cast<double>(deletedCount) / static_cast<double>(n)};
  return out;
}

// Canonical instance of a d-regular graph: the d cyclic rotations of each
// sorted neighbor list, so every coordinate marginal is exactly uniform.
inline BaveInstance graph_to_instance(const WeightedGraph& g) {
  if (!g.is_regular()) throw NotRegular("graph must be regular");
  const std::size_t n = g.size();
  const std::size_t d = g.neighbors(0).size();
  if (d == 0) throw NotRegular("graph must have positive degree");
  std::vector<BaveTuple> tuples;
  const double p = 1.0 / (static_cast<double>(n) * static_cast<double>(d));
  for (VertexId x = 0; x < n; ++x) {
    const auto& nb = g.neighbors(x);
    for (std::size_t r = 0; r < d; ++r) {
      BaveTuple tp;
      tp.p = p;
      tp.t.push_back(x);
      for (std::size_t k = 0; k < d; ++k) tp.t.push_back(nb[(k + r) % d]);
      tuples.push_back(std::move(tp));
    }
  }
  return BaveInstance(n, d, std::move(tuples));
}

}  // namespace vexp
