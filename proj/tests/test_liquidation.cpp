#include <doctest.h>

#include "contagion/liquidation.hpp"
#include "contagion/scenarios.hpp"

using namespace contagion;

TEST_CASE("shortfall") {
  const auto p = make_counterexample();
  const Vector pbar{2.0, 1.0};
  const auto sf = shortfall(p.system(), p.relative(), pbar);
  CHECK(sf[0] == doctest::Approx(2.0));
  CHECK(sf[1] == 0.0);  // 1 - 0.001 - 0.5·2 < 0

  const auto d = make_diversification(1.0, 0.0);
  CHECK(shortfall(d.system(), d.relative(), d.relative().total)[0] == doctest::Approx(1.85));

  CHECK_THROWS_AS(shortfall(p.system(), p.relative(), Vector{2.5, 1.0}), Error);
  CHECK_THROWS_AS(shortfall(p.system(), p.relative(), Vector{-0.1, 1.0}), Error);
}

TEST_CASE("proportional liquidation") {
  const auto p = make_counterexample();
  const auto g = liquidate_proportional(p.system(), p.relative(), Vector{2.0, 1.0}, Vector{0.854});
  CHECK(g(0, 0) == doctest::Approx(2.0 / 0.854));
  CHECK(g(1, 0) == 0.0);

  // m = 2, s = (1, 3), q = (1, 1), shortfall 2: sell in proportion, raise 2.
  FinancialSystem sys;
  sys.liabilities = Matrix{{2.0, 0.0}};
  sys.liquid = {0.0};
  sys.holdings = Matrix{{1.0, 3.0}};
  const auto rel = derive_relative_liabilities(sys);
  const auto two = liquidate_proportional(sys, rel, Vector{0.0}, Vector{1.0, 1.0});
  CHECK(two(0, 0) == doctest::Approx(0.5));
  CHECK(two(0, 1) == doctest::Approx(1.5));

  // No shortfall, nothing sold.
  sys.liquid = {5.0};
  const auto none = liquidate_proportional(sys, rel, Vector{2.0}, Vector{1.0, 1.0});
  CHECK(none(0, 0) == 0.0);
  CHECK(none(0, 1) == 0.0);

  // Worthless portfolio with a shortfall: everything goes.
  sys.liquid = {0.0};
  const auto dump = liquidate_proportional(sys, rel, Vector{0.0}, Vector{0.0, 0.0});
  CHECK(dump(0, 0) == 1.0);
  CHECK(dump(0, 1) == 3.0);

  CHECK_THROWS_AS(liquidate_proportional(sys, rel, Vector{0.0}, Vector{-1.0, 1.0}), Error);
  CHECK(aggregate_liquidation(Matrix{{1.0, 2.0}, {0.5, 0.0}}) == Vector{1.5, 2.0});
}

TEST_CASE("minimal liquidation identity") {
  const auto p = make_counterexample();
  CHECK(check_minimal_liquidation(LiquidationRule::Proportional, p.system(), p.relative(),
                                  Vector{2.0, 1.0}, Vector{0.8535533906}));
  CHECK(check_minimal_liquidation(LiquidationRule::Proportional, p.system(), p.relative(),
                                  Vector{1.98017639585, 1.0}, Vector{0.84262825356}));

  const LiquidationFunction greedy = [](const FinancialSystem& sys, const RelativeLiabilities& rel,
                                        std::span<const double> pay, std::span<const double> q) {
    Matrix g = liquidate_proportional(sys, rel, pay, q);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (auto& v : g.row(i)) v *= 2.0;
    }
    return g;
  };
  FinancialSystem sys;
  sys.liabilities = Matrix{{1.0, 0.0}};
  sys.liquid = {0.0};
  sys.holdings = Matrix{{5.0}};
  CHECK_FALSE(check_minimal_liquidation(greedy, sys, derive_relative_liabilities(sys), Vector{1.0},
                                        Vector{1.0}));
}

TEST_CASE("liquidation rule names") {
  CHECK(to_string(LiquidationRule::Proportional) == "proportional");
  CHECK(parse_liquidation_rule("proportional") == LiquidationRule::Proportional);
  CHECK_THROWS_AS(parse_liquidation_rule("pro-rata"), Error);
}
