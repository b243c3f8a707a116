#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vexp/generators.hpp"
#include "vexp/graph.hpp"
#include "vexp/sdp.hpp"

using namespace vexp;

TEST_CASE("problem construction") {
  auto c4 = make_cycle(4);
  auto p = build_sdp(c4);
  CHECK(p.n == 4);
  CHECK(p.constraints.size() == 8);  // one per ordered adjacent pair

  CHECK_THROWS_AS(build_sdp(make_two_cliques(3)), Disconnected);
  CHECK_THROWS_AS(build_sdp(WeightedGraph(1, {})), Disconnected);
}

TEST_CASE("quotient evaluations") {
  auto k2 = make_clique(2);
  CHECK(lambda_inf_quotient(k2, {1.0, -1.0}) == Catch::Approx(4.0));

  auto c4 = make_cycle(4);
  CHECK(lambda_inf_quotient(c4, {1.0, 0.0, -1.0, 0.0}) == Catch::Approx(2.0));

  CHECK_THROWS_AS(lambda_inf_quotient(c4, {2.0, 2.0, 2.0, 2.0}), DegenerateVector);
  CHECK_THROWS_AS(lambda_inf_quotient(c4, {1.0, 0.0}), DegenerateVector);
}

TEST_CASE("quotient is invariant under shift and scale") {
  auto g = make_random_regular(8, 3, 5);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(8), y(8);
    for (std::size_t i = 0; i < 8; ++i) x[i] = nd(rng);
    const double a = 0.5 + std::abs(nd(rng)), b = nd(rng);
    for (std::size_t i = 0; i < 8; ++i) y[i] = a * x[i] + b;
    CHECK(lambda_inf_quotient(g, y) == Catch::Approx(lambda_inf_quotient(g, x)));
  }
}

TEST_CASE("K2 relaxation value is 4") {
  auto sol = solve(build_sdp(make_clique(2)));
  CHECK(sol.converged);
  CHECK(sol.value == Catch::Approx(4.0).margin(1e-4));
  CHECK(sol.residuals.dualityGap <= 1e-4 * 4.0 + 1e-9);
}

TEST_CASE("C4 relaxation is bounded by the spectral embedding") {
  auto sol = solve(build_sdp(make_cycle(4)), 1e-6, 20000);
  // x = (1, 0, -1, 0) gives quotient 2, so the relaxation is at most 2
  CHECK(sol.value <= 2.0 + 1e-3);
  CHECK(sol.residuals.minEigenvalue >= -1e-9);
  CHECK(sol.residuals.normalizationDeviation <= 1e-9);
}

TEST_CASE("relaxation lower-bounds every quotient evaluation") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> nd;
  for (const auto& [name, g] : small_corpus()) {
    if (!g.is_connected() || g.size() > 10) continue;
    INFO(name);
    auto sol = solve(build_sdp(g), 1e-5, 20000);
    double bestQuot = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> x(g.size());
      for (auto& xi : x) xi = nd(rng);
      bestQuot = std::min(bestQuot, lambda_inf_quotient(g, x));
    }
    CHECK(sol.value <= bestQuot + 1e-4 + sol.residuals.dualityGap);
  }
}

TEST_CASE("certified gap really brackets the optimum") {
  // on K_n with the simplex embedding the objective is 2n/(n-1)
  for (std::size_t n : {3, 4, 5}) {
    auto sol = solve(build_sdp(make_clique(n)), 1e-5, 20000);
    const double simplexVal =
        2.0 * static_cast<double>(n) / static_cast<double>(n - 1);
    INFO("K" << n);
    CHECK(sol.value >= simplexVal - sol.residuals.dualityGap - 1e-6);
    CHECK(sol.value <= simplexVal + 1e-3);
  }
}

TEST_CASE("non-convergence is reported at tiny iteration budgets") {
  auto sol = solve(build_sdp(make_random_regular(8, 3, 5)), 1e-10, 1);
  CHECK(!sol.converged);
  CHECK(sol.iterations == 1);
}

TEST_CASE("factorize reproduces the gram matrix") {
  auto sol = solve(build_sdp(make_cycle(5)), 1e-6, 20000);
  auto v = factorize(sol);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < v[i].size(); ++k) dot += v[i][k] * v[j][k];
      CHECK(dot == Catch::Approx(sol.gram(i, j)).margin(1e-7));
    }

  SdpSolution bad;
  bad.gram = SymMatrix(2);
  bad.gram(0, 0) = -1.0;
  bad.gram(1, 1) = 1.0;
  CHECK_THROWS_AS(factorize(bad), NotPSD);
}

TEST_CASE("relaxation respects the bht sandwich on the corpus") {
  for (const auto& [name, g] : small_corpus()) {
    if (!g.is_connected() || g.size() > 12) continue;
    INFO(name);
    auto sol = solve(build_sdp(g), 1e-4, 30000);
    const double phi = exact_min_vertex_expansion(g).value;
    const double lam = sol.value;
    CHECK(lam / 2.0 <= phi + sol.residuals.dualityGap + 1e-6);
  }
}
