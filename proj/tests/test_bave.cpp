#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vexp/bave.hpp"
#include "vexp/generators.hpp"

using namespace vexp;

namespace {

// swap pair: uniform on (a,b,..,b) and (b,a,..,a)
BaveInstance make_swap_instance(std::size_t d) {
  std::vector<BaveTuple> tuples(2);
  tuples[0].p = tuples[1].p = 0.5;
  tuples[0].t.assign(d + 1, 1);
  tuples[0].t[0] = 0;
  tuples[1].t.assign(d + 1, 0);
  tuples[1].t[0] = 1;
  return BaveInstance(2, d, std::move(tuples));
}

// two independent halves that never meet inside a tuple
BaveInstance make_cluster_instance() {
  std::vector<BaveTuple> tuples(4);
  tuples[0] = {{0, 1}, 0.25};
  tuples[1] = {{1, 0}, 0.25};
  tuples[2] = {{2, 3}, 0.25};
  tuples[3] = {{3, 2}, 0.25};
  return BaveInstance(4, 1, std::move(tuples));
}

WeightedGraph make_petersen() {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);                      // outer 5-cycle
    e.emplace_back(i, i + 5);                            // spokes
    e.emplace_back(i + 5, ((i + 2) % 5) + 5);            // inner pentagram
  }
  return WeightedGraph(10, e);
}

double boundary_fraction(const WeightedGraph& g, const std::vector<double>& f) {
  std::size_t cnt = 0;
  for (VertexId x = 0; x < g.size(); ++x)
    for (VertexId y : g.neighbors(x))
      if (f[y] != f[x]) {
        ++cnt;
        break;
      }
  return static_cast<double>(cnt) / static_cast<double>(g.size());
}

}  // namespace

TEST_CASE("instance validation") {
  std::vector<BaveTuple> bad = {{{0, 1}, 0.5}, {{1, 0}, 0.4}};
  CHECK_THROWS_AS(BaveInstance(2, 1, bad), BadNormalization);

  // skewed second coordinate: marginals differ
  std::vector<BaveTuple> skew = {{{0, 0}, 0.5}, {{1, 0}, 0.5}};
  CHECK_THROWS_AS(BaveInstance(2, 1, skew), BadNormalization);
  CHECK_NOTHROW(BaveInstance(2, 1, skew, -1.0));
}

TEST_CASE("bave_value examples") {
  auto inst = make_swap_instance(3);

  Assignment constant{{0.5, 0.5}};
  auto cv = bave_value(inst, constant);
  CHECK(cv.zeroVariance);
  CHECK(cv.denominator == 0.0);

  Assignment f{{1.0, 0.0}};
  auto v = bave_value(inst, f);
  CHECK(v.numerator == Catch::Approx(1.0));
  CHECK(v.denominator == Catch::Approx(0.5));
  CHECK(v.ratio == Catch::Approx(2.0));
}

TEST_CASE("graph instances match an independent boundary count") {
  for (const auto& [g, name] :
       {std::pair{make_cycle(4), "C4"}, {make_petersen(), "petersen"}, {make_hypercube(3), "Q3"}}) {
    INFO(name);
    auto inst = graph_to_instance(g);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
      Assignment f;
      f.values.resize(g.size());
      for (auto& v : f.values) v = (rng() & 1) ? 1.0 : 0.0;
      auto val = bave_value(inst, f);
      CHECK(val.numerator == Catch::Approx(boundary_fraction(g, f.values)).margin(1e-12));
    }
  }
}

TEST_CASE("graph_to_instance construction") {
  auto c4 = graph_to_instance(make_cycle(4));
  CHECK(c4.variables() == 4);
  CHECK(c4.arity_minus_one() == 2);
  CHECK(c4.tuples().size() == 8);  // d rotations per vertex
  for (const auto& tp : c4.tuples()) CHECK(tp.p == Catch::Approx(1.0 / 8.0));
  for (double m : c4.marginal()) CHECK(m == Catch::Approx(0.25));

  auto k2 = graph_to_instance(make_clique(2));
  CHECK(k2.tuples().size() == 2);
  CHECK(k2.arity_minus_one() == 1);

  auto pet = graph_to_instance(make_petersen());
  CHECK(pet.tuples().size() == 30);
  CHECK(pet.tuples().front().t.size() == 4);

  CHECK_THROWS_AS(graph_to_instance(make_star(3)), NotRegular);
}

TEST_CASE("bave_optimum") {
  auto cluster = make_cluster_instance();
  auto opt = bave_optimum(cluster);
  CHECK(opt.ratio == 0.0);

  // C4: cross-check against direct enumeration over cuts of the graph
  auto g = make_cycle(4);
  auto inst = graph_to_instance(g);
  auto best = bave_optimum(inst);
  double direct = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask + 1 < (1ULL << 4); ++mask) {
    Assignment f;
    f.values.resize(4);
    for (std::size_t v = 0; v < 4; ++v) f.values[v] = (mask >> v) & 1 ? 1.0 : 0.0;
    auto val = bave_value(inst, f);
    if (!val.zeroVariance && val.denominator >= 0.01) direct = std::min(direct, val.ratio);
  }
  CHECK(best.ratio == Catch::Approx(direct));

  std::vector<BaveTuple> solo = {{{0, 0}, 1.0}};
  CHECK_THROWS_AS(bave_optimum(BaveInstance(1, 1, solo)), Infeasible);
}

TEST_CASE("threshold rounding") {
  auto inst = graph_to_instance(make_cycle(4));

  Assignment boolean{{1.0, 1.0, 0.0, 0.0}};
  auto rb = threshold_round(inst, boolean);
  CHECK(rb.assignment.values == boolean.values);
  CHECK(rb.ratio == Catch::Approx(bave_value(inst, boolean).ratio));

  Assignment twoVal{{0.2, 0.2, 0.8, 0.8}};
  auto r2 = threshold_round(inst, twoVal);
  CHECK(r2.assignment.is_boolean());
  CHECK(r2.ratio <= bave_value(inst, twoVal).ratio + 1e-12);

  // two-valued F: the ratio is scale/shift invariant, so the matching level
  // set preserves it exactly
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = ud(rng), b = a + ud(rng) + 1e-3;
    Assignment f;
    f.values.resize(4);
    bool mixed = false;
    for (auto& v : f.values) {
      v = (rng() & 1) ? b : a;
      mixed |= (v == a);
    }
    if (!mixed || f.values == std::vector<double>(4, a)) continue;
    auto frac = bave_value(inst, f);
    if (frac.zeroVariance) continue;
    auto r = threshold_round(inst, f);
    CHECK(r.ratio <= frac.ratio + 1e-9);
  }

  // multi-level F can beat every level set: the minimum over thresholds is
  // still what gets returned
  Assignment wave{{0.0, 0.5, 1.0, 0.5}};
  auto fracWave = bave_value(inst, wave);
  CHECK(fracWave.ratio == Catch::Approx(4.0 / 3.0));
  auto rw = threshold_round(inst, wave);
  CHECK(rw.ratio == Catch::Approx(2.0));
  double oracleBest = std::numeric_limits<double>::infinity();
  for (double r : {0.0, 0.5, 1.0}) {
    Assignment fr;
    fr.values.resize(4);
    for (std::size_t v = 0; v < 4; ++v) fr.values[v] = wave.values[v] >= r ? 1.0 : 0.0;
    auto val = bave_value(inst, fr);
    if (!val.zeroVariance) oracleBest = std::min(oracleBest, val.ratio);
  }
  CHECK(rw.ratio == Catch::Approx(oracleBest));
}

TEST_CASE("uniformize construction") {
  // mu = (3/4, 1/4) swap-style instance, T = 8 -> clouds of sizes 6 and 2
  std::vector<BaveTuple> tuples = {{{0, 0}, 0.5}, {{0, 1}, 0.25}, {{1, 0}, 0.25}};
  BaveInstance skewed(2, 1, tuples);
  auto u = uniformize(skewed, 8);
  CHECK(u.instance.variables() == 8);
  CHECK(std::count(u.cloudOf.begin(), u.cloudOf.end(), 0u) == 6);
  CHECK(std::count(u.cloudOf.begin(), u.cloudOf.end(), 1u) == 2);
  for (double m : u.instance.marginal()) {
    CHECK(m >= 1.0 / 8.0 - 1e-9);
    CHECK(m <= 1.0 / 6.0 + 1e-9);
  }

  // uniform instance with divisible masses: optimum ratio unchanged
  auto c4 = graph_to_instance(make_cycle(4));
  auto uc = uniformize(c4, 8);
  CHECK(uc.instance.variables() == 8);
  // lifting any F through the clouds preserves its value, so the optimum
  // cannot increase; splitting clouds may lower it (here 2.0 -> 1.5)
  const double optC4 = bave_optimum(c4).ratio;
  const double optUc = bave_optimum(uc.instance).ratio;
  CHECK(optUc <= optC4 + 1e-9);
  CHECK(optUc >= optC4 / 4.0 - 1e-9);

  // low-mass vertex disappears
  std::vector<BaveTuple> lop = {{{0, 1}, 0.49}, {{1, 0}, 0.49}, {{0, 2}, 0.01}, {{2, 0}, 0.01}};
  BaveInstance lopsided(3, 1, lop);
  auto ul = uniformize(lopsided, 4);
  for (std::size_t v : ul.cloudOf) CHECK(v != 2);
}

TEST_CASE("uniformize envelope on small corpus instances") {
  for (const auto& [g, name, t] : {std::tuple{make_clique(2), "K2", std::size_t{8}},
                                   {make_cycle(4), "C4", std::size_t{8}},
                                   {make_clique(4), "K4", std::size_t{8}}}) {
    INFO(name);
    auto inst = graph_to_instance(g);
    auto u = uniformize(inst, t);
    const double opt = bave_optimum(inst).ratio;
    const double optU = bave_optimum(u.instance).ratio;
    CHECK(optU <= 2.0 * opt + 1e-9);
    CHECK(optU >= opt / 4.0 - 1e-9);
  }
}

TEST_CASE("instance_to_graph") {
  // deterministic tuples: two swap pairs
  std::vector<BaveTuple> det = {{{0, 1}, 0.25}, {{1, 0}, 0.25}, {{2, 3}, 0.25}, {{3, 2}, 0.25}};
  BaveInstance detInst(4, 1, det);
  auto sg = instance_to_graph(detInst, 4, 1);
  CHECK(sg.graph.size() == 4);
  CHECK(sg.graph.edge_count() == 2);
  CHECK(sg.deletedFraction == 0.0);
  for (std::size_t inc : sg.incidences) CHECK(inc <= 2 * 4);

  // D = d on C4: sampled edges are a subset of C4's
  auto c4 = make_cycle(4);
  auto inst = graph_to_instance(c4);
  auto s = instance_to_graph(inst, 2, 5);
  for (auto [u, v] : s.graph.edges())
    CHECK(c4.has_edge(s.originalIds[u], s.originalIds[v]));

  CHECK_THROWS_AS(instance_to_graph(inst, 3, 1), Error);
}

TEST_CASE("instance_to_graph degree concentration") {
  auto inst = graph_to_instance(make_cycle(8));
  const std::size_t bigD = 200;  // 100 * d
  int good = 0;
  for (int run = 0; run < 100; ++run) {
    auto s = instance_to_graph(inst, bigD, static_cast<std::uint64_t>(run));
    bool ok = s.deletedFraction == 0.0;
    for (std::size_t v = 0; v < inst.variables() && ok; ++v)
      ok = s.incidences[v] >= bigD / 2 && s.incidences[v] <= 4 * bigD;
    if (ok) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("marginal equality after constructors") {
  for (const auto& g : {make_cycle(6), make_hypercube(3), make_clique(5)}) {
    auto inst = graph_to_instance(g);
    const std::size_t d = inst.arity_minus_one();
    for (std::size_t k = 1; k <= d; ++k) {
      std::vector<double> mk(inst.variables(), 0.0);
      for (const auto& tp : inst.tuples()) mk[tp.t[k]] += tp.p;
      for (std::size_t v = 0; v < inst.variables(); ++v)
        CHECK(mk[v] == Catch::Approx(inst.marginal()[v]).margin(1e-12));
    }
  }
}
