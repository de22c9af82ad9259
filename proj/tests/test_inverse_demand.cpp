#include <doctest.h>

#include <cmath>

#include "contagion/inverse_demand.hpp"
#include "contagion/scenarios.hpp"

using namespace contagion;

TEST_CASE("market maker sets") {
  CHECK(market_makers(Vector{0.0, 0.001}).members == std::vector<std::size_t>{1});
  CHECK(market_makers(Vector{0.0, 0.0}).empty());
  CHECK(market_makers(Vector{1e-13, 5.0}).members == std::vector<std::size_t>{1});

  CHECK(market_makers_from_excess(Vector{-0.5, 0.0}, MarketMakerRule::NonLiquidating).members ==
        std::vector<std::size_t>{1});
  CHECK(market_makers_from_excess(Vector{-0.5, 0.0}, MarketMakerRule::PositiveLiquidity).empty());
  CHECK(market_makers_from_excess(Vector{-1e-13, 2.0}, MarketMakerRule::NonLiquidating).size() == 2);
}

TEST_CASE("linear inverse demand") {
  const auto problem = make_counterexample();
  const auto& idf = problem.idf();
  // 1 - θ/(15 + 1) with one market maker.
  CHECK(idf.price(Vector{2.342}, Vector{0.0, 0.001})[0] == doctest::Approx(1.0 - 2.342 / 16.0));
  CHECK(idf.price(Vector{0.0}, Vector{0.0, 0.0})[0] == 1.0);
  CHECK(idf.price(Vector{100.0}, Vector{0.0, 0.0})[0] == 0.0);

  // Two assets, σ = 1, ρ = 0, all α = 0.1: divisor 10 + 2·10 = 30.
  const auto d = make_diversification(1.0, 0.0).idf();
  const auto q = d.price(Vector{1.0, 1.0}, Vector{1.0, 1.0});
  CHECK(q[0] == doctest::Approx(1.0 - 1.0 / 30.0));
  CHECK(q[1] == doctest::Approx(1.0 - 1.0 / 30.0));
  CHECK(d.price(Vector{0.0, 0.0}, Vector{0.0, 0.0}) == Vector{1.0, 1.0});

  CHECK_THROWS_AS(idf.price(Vector{1.0}, Vector{-1.0, 0.0}), Error);
  CHECK_THROWS_AS(idf.price(Vector{1.0, 1.0}, Vector{0.0, 0.0}), Error);
}

TEST_CASE("linear model invariants") {
  LinearImpactParams p;
  p.mu = {1.0, 1.0};
  p.cov = Matrix{{1.0, -0.2}, {-0.2, 1.0}};
  p.alpha0 = 0.1;
  p.bank_alpha = {0.1};
  CHECK_THROWS_AS(InverseDemandModel::linear(p), Error);
  CHECK_NOTHROW(InverseDemandModel::linear_permissive(p));

  p.cov = Matrix{{1.0, 0.2}, {0.3, 1.0}};
  CHECK_THROWS_AS(InverseDemandModel::linear(p), Error);
  p.cov = Matrix{{1.0, 0.2}, {0.2, 1.0}};
  p.alpha0 = 0.0;
  CHECK_THROWS_AS(InverseDemandModel::linear(p), Error);
}

TEST_CASE("exponential inverse demand") {
  const auto e = InverseDemandModel::exponential();
  CHECK(e.price(Vector{0.0}, Vector{0.0, 0.0})[0] == 1.0);
  CHECK(e.price(Vector{1.0}, Vector{0.0, 0.0})[0] == 0.0);
  CHECK(e.price(Vector{1.0, 0.0}, Vector{1.0, 1.0})[0] == doctest::Approx(std::exp(-0.5)));
  CHECK(e.price(Vector{1.0, 0.0}, Vector{1.0, 1.0})[1] == 1.0);
}

TEST_CASE("fixed liquidity ignores the state") {
  const auto problem = make_counterexample();
  const auto fixed = InverseDemandModel::fixed(problem.idf(), Vector{1.0, 1.0});
  CHECK(fixed.kind() == InverseDemandModel::Kind::FixedLiquidity);
  CHECK(fixed.price(Vector{1.0}, Vector{0.0, 0.0})[0] == doctest::Approx(1.0 - 1.0 / 17.0));
  CHECK(fixed.price_from_excess(Vector{1.0}, Vector{-5.0, -5.0})[0] ==
        doctest::Approx(1.0 - 1.0 / 17.0));
}

TEST_CASE("monotonicity check separates C >= 0 from negative correlation") {
  CHECK(check_idf_monotonicity(make_diversification(0.5, 0.3).idf(), 2000, 7));
  CHECK(check_idf_monotonicity(InverseDemandModel::exponential(), 2000, 7, {2, 3}));

  LinearImpactParams p;
  p.mu = {1.0, 1.0};
  p.cov = Matrix{{1.0, -0.5}, {-0.5, 1.0}};
  p.alpha0 = 0.1;
  p.bank_alpha = {0.1, 0.1};
  CHECK_FALSE(check_idf_monotonicity(InverseDemandModel::linear_permissive(p), 2000, 7));
}
