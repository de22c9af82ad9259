#include <doctest.h>

#include "contagion/clearing.hpp"
#include "contagion/scenarios.hpp"
#include "fixtures.hpp"

using namespace contagion;

namespace {

void check_state(const ClearingState& s, const Vector& p, double q, const Vector& m, double tol) {
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(s.payments[i] - p[i]) <= tol);
  CHECK(std::abs(s.prices[0] - q) <= tol);
  const auto liq = s.liquidity();
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(std::abs(liq[i] - m[i]) <= tol);
}

}  // namespace

TEST_CASE("two-bank counterexample has distinct greatest and least solutions") {
  const auto problem = make_counterexample();
  const auto hi = solve_greatest(problem);
  const auto lo = solve_least(problem);
  REQUIRE(hi.converged);
  REQUIRE(lo.converged);
  check_state(hi.state, {2.0, 1.0}, 0.854, {0.0, 0.001}, 1e-3);
  check_state(lo.state, {1.98, 1.0}, 0.843, {0.0, 0.0}, 1e-2);
  CHECK(hi.market_makers.members == std::vector<std::size_t>{1});
  CHECK(lo.market_makers.empty());
  CHECK(hi.monotone);
  CHECK(lo.monotone);
  CHECK(dominates(hi.state, lo.state));
  CHECK(hi.state.prices[0] > lo.state.prices[0] + 1e-3);
  CHECK(hi.defaults.empty());
  CHECK(lo.defaults == std::vector<std::size_t>{0});
}

TEST_CASE("reported equilibria are fixed points of the clearing map") {
  const auto problem = make_counterexample();
  const auto hi = problem.state_at(Vector{2.0, 1.0}, Vector{0.854});
  CHECK(sup_distance(apply_phi(problem, hi), hi) < 1e-3);
  const auto lo = problem.state_at(Vector{1.98, 1.0}, Vector{0.843});
  CHECK(sup_distance(apply_phi(problem, lo), lo) < 1e-2);

  ClearingState outside = hi;
  outside.payments[0] = 3.0;
  CHECK_THROWS_AS(apply_phi(problem, outside), Error);
}

TEST_CASE("fully solvent system") {
  const auto problem = fixtures::solvent();
  CHECK(sup_distance(apply_phi(problem, problem.top()), problem.top()) == 0.0);
  const auto hi = solve_greatest(problem);
  CHECK(hi.converged);
  CHECK(hi.iterations <= 2);
  CHECK(sup_distance(hi.state, problem.top()) == 0.0);
  const auto lo = solve_least(problem);
  CHECK(sup_distance(lo.state, hi.state) < 1e-10);
  CHECK(enumerate_solutions(problem).size() == 1);
  const auto cmp = compare_fixed_vs_endogenous(problem);
  CHECK(cmp.price_gap[0] == 0.0);
  CHECK(cmp.default_gap == 0);
}

TEST_CASE("diversified holdings clear at the same price for every correlation") {
  for (double rho : {0.0, 0.1, 0.3, 0.5}) {
    const auto r = solve_greatest(make_diversification(1.0, rho));
    CHECK(r.converged);
    CHECK(std::abs(r.state.prices[0] - 0.95) <= 5e-3);
    CHECK(std::abs(r.state.prices[1] - 0.95) <= 5e-3);
  }
}

TEST_CASE("enumeration table of the counterexample") {
  const auto table = enumerate_configurations(make_counterexample());
  REQUIRE(table.size() == 3);
  CHECK(table[0].solutions.size() == 1);
  CHECK(table[1].solutions.size() == 1);
  CHECK(table[2].solutions.empty());
  const auto all = enumerate_solutions(make_counterexample());
  REQUIRE(all.size() == 2);
  CHECK(all.front().state.prices[0] > all.back().state.prices[0]);
}

TEST_CASE("small random systems agree with the scalar oracle") {
  Rng rng(20240611);
  int compared = 0;
  for (int t = 0; t < 60; ++t) {
    const auto problem = fixtures::random_problem(rng, 3, 1);
    const auto sys = fixtures::to_oracle(problem);
    const auto hi = solve_greatest(problem);
    const auto lo = solve_least(problem);
    REQUIRE(hi.converged);
    REQUIRE(lo.converged);
    CHECK(dominates(hi.state, lo.state, 1e-9));
    const auto ref_hi = oracle::extreme_solution(sys, true);
    const auto ref_lo = oracle::extreme_solution(sys, false);
    if (!ref_hi || !ref_lo) continue;
    ++compared;
    CHECK(hi.state.prices[0] == doctest::Approx(ref_hi->q).epsilon(1e-7));
    CHECK(lo.state.prices[0] == doctest::Approx(ref_lo->q).epsilon(1e-7));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(hi.state.payments[i] == doctest::Approx(ref_hi->p[i]).epsilon(1e-7));
      CHECK(lo.state.payments[i] == doctest::Approx(ref_lo->p[i]).epsilon(1e-7));
    }
  }
  CHECK(compared > 40);
}

TEST_CASE("enumerated solutions are fixed points") {
  Rng rng(99);
  SolverConfig cfg;
  for (int t = 0; t < 50; ++t) {
    const auto problem = fixtures::random_problem(rng, 2, 1, t % 2 == 0);
    for (const auto& s : enumerate_solutions(problem, cfg)) {
      CHECK(phi_residual(problem, s.state) <= 10 * cfg.tolerance);
    }
  }
}

TEST_CASE("converged reports carry a small residual") {
  Rng rng(5);
  SolverConfig cfg;
  for (int t = 0; t < 40; ++t) {
    const auto problem = fixtures::random_problem(rng, 5, 2);
    const auto r = solve_greatest(problem, cfg);
    REQUIRE(r.converged);
    CHECK(r.residual <= 10 * cfg.tolerance);
  }
}

TEST_CASE("enumeration respects the cap for heterogeneous risk aversions") {
  Rng rng(3);
  const auto problem = fixtures::random_problem(rng, 4, 1, false);
  SolverConfig cfg;
  cfg.enumeration_cap = 3;
  CHECK_THROWS_AS(enumerate_configurations(problem, cfg), Error);
  cfg.enumeration_cap = 4;
  CHECK(enumerate_configurations(problem, cfg).size() == 16);
  CHECK_THROWS_AS(enumerate_solutions(problem.with_idf(InverseDemandModel::exponential())), Error);
}

TEST_CASE("endogenous liquidity never beats the fixed benchmark") {
  RandomNetworkModel model;
  const auto single = compare_fixed_vs_endogenous(make_random_network(model, 2.5, 1));
  CHECK(single.default_gap >= 0);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto cmp = compare_fixed_vs_endogenous(make_random_network(model, 3.0, seed));
    CHECK(cmp.price_gap[0] >= 0.0);
    CHECK(cmp.default_gap >= 0);
  }
}

TEST_CASE("solver configuration validation") {
  SolverConfig cfg;
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(validate(cfg), Error);
}
