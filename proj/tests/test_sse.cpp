#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "vexp/bave.hpp"
#include "vexp/generators.hpp"
#include "vexp/sse.hpp"

using namespace vexp;

TEST_CASE("fold rule") {
  CHECK(fold({0, 1, 2}, {kSP, kSP, kSP}).pairs.empty());

  auto one = fold({0, 1}, {kS, kTP});
  REQUIRE(one.pairs.size() == 1);
  CHECK(one.pairs[0] == std::make_pair(VertexId{0}, static_cast<int>(kS)));

  auto ab = fold({0, 1}, {kS, kT});
  auto ba = fold({1, 0}, {kT, kS});
  CHECK(ab == ba);

  auto dup = fold({3, 3}, {kT, kT});
  REQUIRE(dup.pairs.size() == 2);
  CHECK(dup.pairs[0] == dup.pairs[1]);

  CHECK_THROWS_AS(fold({0, 1}, {kS}), Error);
}

TEST_CASE("reduction params") {
  ReductionParams p{2, 0.1, 5, -1.0, 1000, 0};
  p.validate();
  CHECK(p.effective_eta() == Catch::Approx(0.1 / 500.0));

  ReductionParams explicitEta{2, 0.1, 5, 0.25, 1000, 0};
  explicitEta.validate();
  CHECK(explicitEta.effective_eta() == 0.25);

  CHECK_THROWS_AS((ReductionParams{0, 0.1, 5, -1.0, 1000, 0}).validate(), Error);
  CHECK_THROWS_AS((ReductionParams{2, 0.3, 5, -1.0, 1000, 0}).validate(), BadEpsilon);
  CHECK_THROWS_AS((ReductionParams{2, 0.1, 5, 1.5, 1000, 0}).validate(), Error);
}

TEST_CASE("sampling with pure complete-graph smoothing") {
  auto g = make_two_cliques(3);
  ReductionParams p{1, 0.1, 2, 1.0, 1000, 0};
  auto chain = build_chain(p.epsilon);
  Rng rng = make_rng(5, "test");
  std::size_t crossings = 0, total = 0;
  for (int t = 0; t < 4000; ++t) {
    auto u = sample_unfolded(g, chain, p, rng);
    // clique of a and clique of b agree only half the time under eta = 1
    crossings += (u.a[0] / 3) != (u.b[0] / 3);
    ++total;
  }
  const double frac = static_cast<double>(crossings) / static_cast<double>(total);
  CHECK(frac == Catch::Approx(0.5).margin(3.0 * 0.5 / std::sqrt(4000.0)));
}

TEST_CASE("sampling with no smoothing on an edge") {
  auto g = make_clique(2);
  ReductionParams p{1, 0.1, 3, 0.0, 1000, 0};
  auto chain = build_chain(p.epsilon);
  Rng rng = make_rng(6, "test");
  for (int t = 0; t < 200; ++t) {
    auto u = sample_unfolded(g, chain, p, rng);
    CHECK(u.b[0] == 1 - u.a[0]);
    for (const auto& c : u.cs) CHECK(c[0] == 1 - u.a[0]);
  }
}

TEST_CASE("unfolded slot graph-parts are uniform") {
  auto g = make_cycle(4);
  ReductionParams p{2, 0.1, 2, -1.0, 1000, 0};
  auto chain = build_chain(p.epsilon);
  Rng rng = make_rng(7, "test");
  const std::size_t samples = 100000;
  // counts[slot][coord][vertex], slot 0 = B, slots 1..d = C_j
  std::vector<std::vector<std::vector<std::size_t>>> counts(
      p.d + 1, std::vector<std::vector<std::size_t>>(p.r, std::vector<std::size_t>(4, 0)));
  for (std::size_t s = 0; s < samples; ++s) {
    auto u = sample_unfolded(g, chain, p, rng);
    for (std::size_t i = 0; i < p.r; ++i) {
      ++counts[0][i][u.b[i]];
      for (std::size_t j = 0; j < p.d; ++j) ++counts[j + 1][i][u.cs[j][i]];
    }
  }
  const double m = static_cast<double>(samples);
  const double expect = m / 4.0;
  const double sigma = std::sqrt(m * 0.25 * 0.75);
  for (const auto& slot : counts)
    for (const auto& coord : slot)
      for (std::size_t v = 0; v < 4; ++v)
        CHECK(std::fabs(static_cast<double>(coord[v]) - expect) <= 3.5 * sigma);
}

TEST_CASE("folded instance on an edge has singleton support") {
  auto g = make_clique(2);
  ReductionParams p{1, 0.1, 1, -1.0, 10000, 11};
  auto fi = build_folded_instance(g, p);
  CHECK(fi.instance.arity_minus_one() == 1);
  for (const auto& v : fi.vertexOf) {
    REQUIRE(v.pairs.size() <= 1);
    if (!v.pairs.empty()) {
      CHECK(v.pairs[0].first <= 1);
      CHECK((v.pairs[0].second == kS || v.pairs[0].second == kT));
    }
  }
}

TEST_CASE("folded slot marginals agree") {
  auto g = make_cycle(4);
  ReductionParams p{1, 0.1, 2, -1.0, 40000, 12};
  auto fi = build_folded_instance(g, p);
  const std::size_t n = fi.instance.variables();
  const std::size_t d = fi.instance.arity_minus_one();
  std::vector<std::vector<double>> marg(d + 1, std::vector<double>(n, 0.0));
  for (const auto& tp : fi.instance.tuples())
    for (std::size_t k = 0; k <= d; ++k) marg[k][tp.t[k]] += tp.p;
  const double m = static_cast<double>(p.sampleCount);
  for (std::size_t k = 1; k <= d; ++k)
    for (std::size_t v = 0; v < n; ++v) {
      const double q0 = marg[0][v], qk = marg[k][v];
      const double sigma = std::sqrt((q0 * (1 - q0) + qk * (1 - qk)) / m);
      CHECK(std::fabs(q0 - qk) <= 3.5 * sigma + 1e-4);
    }
}

TEST_CASE("folded instance is seed-deterministic") {
  auto g = make_cycle(4);
  ReductionParams p{2, 0.1, 2, -1.0, 2000, 13};
  auto a = build_folded_instance(g, p);
  auto b = build_folded_instance(g, p);
  REQUIRE(a.vertexOf.size() == b.vertexOf.size());
  CHECK(a.vertexOf == b.vertexOf);
  REQUIRE(a.instance.tuples().size() == b.instance.tuples().size());
  for (std::size_t i = 0; i < a.instance.tuples().size(); ++i) {
    CHECK(a.instance.tuples()[i].t == b.instance.tuples()[i].t);
    CHECK(a.instance.tuples()[i].p == b.instance.tuples()[i].p);
  }
}

TEST_CASE("completeness assignment rule") {
  std::vector<FoldedVertex> verts;
  verts.push_back(fold({0, 5}, {kS, kT}));   // one in S, one out
  verts.push_back(fold({0, 1}, {kS, kT}));   // both in S
  verts.push_back(fold({5, 6}, {kS, kT}));   // none in S
  verts.push_back(fold({0}, {kSP}));         // empty multiset
  verts.push_back(fold({1}, {kT}));          // single pair in S

  std::set<VertexId> s = {0, 1, 2};
  auto f = completeness_assignment(s, verts);
  REQUIRE(f.values.size() == 5);
  CHECK(f.values[0] == 1.0);
  CHECK(f.values[1] == 0.0);
  CHECK(f.values[2] == 0.0);
  CHECK(f.values[3] == 0.0);
  CHECK(f.values[4] == 1.0);

  auto zero = completeness_assignment({}, verts);
  for (double v : zero.values) CHECK(v == 0.0);
}

TEST_CASE("relabeling equivariance") {
  auto g = make_cycle(4);
  ReductionParams p{2, 0.1, 2, -1.0, 5000, 17};
  auto fi = build_folded_instance(g, p);
  std::set<VertexId> s = {0, 1};

  // relabel V by pi(v) = (v + 1) mod 4 inside the folded vertices
  std::vector<FoldedVertex> relabeled = fi.vertexOf;
  for (auto& v : relabeled) {
    for (auto& pr : v.pairs) pr.first = (pr.first + 1) % 4;
    v.canonicalize();
  }
  std::set<VertexId> sPi = {1, 2};

  auto base = bave_value(fi.instance, completeness_assignment(s, fi.vertexOf));
  auto perm = bave_value(fi.instance, completeness_assignment(sPi, relabeled));
  CHECK(base.numerator == Catch::Approx(perm.numerator).margin(1e-12));
  CHECK(base.denominator == Catch::Approx(perm.denominator).margin(1e-12));
}

TEST_CASE("completeness on two cliques") {
  auto g = make_two_cliques(5);
  ReductionParams p{2, 0.1, 5, -1.0, 100000, 23};
  auto fi = build_folded_instance(g, p);
  std::set<VertexId> s;
  for (VertexId v = 0; v < 5; ++v) s.insert(v);
  auto f = completeness_assignment(s, fi.vertexOf);
  auto val = bave_value(fi.instance, f);

  // per-sample stderrs from the empirical tuple distribution
  double numSq = 0.0;
  for (const auto& tp : fi.instance.tuples()) {
    double mx = 0.0;
    for (std::size_t k = 1; k < tp.t.size(); ++k)
      mx = std::max(mx, std::fabs(f.values[tp.t[k]] - f.values[tp.t[0]]));
    numSq += tp.p * mx * mx;
  }
  const double m = static_cast<double>(p.sampleCount);
  const double numSigma = std::sqrt(std::max(0.0, numSq - val.numerator * val.numerator) / m);
  double q = 0.0;
  for (std::size_t v = 0; v < fi.instance.variables(); ++v)
    q += fi.instance.marginal()[v] * f.values[v];
  const double denSigma = 2.0 * std::sqrt(q * (1 - q) / m);

  CHECK(val.numerator <= 0.4 + 3.0 * numSigma);
  CHECK(val.denominator >= 0.1 - 3.0 * denSigma);
}
