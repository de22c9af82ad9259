#include <doctest.h>

#include "contagion/fda.hpp"
#include "contagion/scenarios.hpp"
#include "fixtures.hpp"

using namespace contagion;

TEST_CASE("insolvency sets") {
  const auto problem = make_counterexample();
  // 0 + 2.35·1 + 0 >= 2 at the top.
  CHECK(insolvency_set(problem, problem.top(), 1e-8).empty());

  const auto solvent = fixtures::solvent();
  CHECK(insolvency_set(solvent, solvent.top(), 1e-8).empty());
  CHECK(insolvency_set(solvent, solve_greatest(solvent).state, 1e-8).empty());

  FinancialSystem broke;
  broke.liabilities = Matrix{{1.0, 0.0, 0.5}, {1.0, 0.5, 0.0}};
  broke.liquid = {0.0, 0.0};
  broke.holdings = Matrix{{0.0}, {0.0}};
  const ClearingProblem none(broke, make_counterexample().idf());
  CHECK(insolvency_set(none, none.top(), 1e-8) == IndexSet{0, 1});
}

TEST_CASE("inner fixed point") {
  const auto solvent = fixtures::solvent();
  const auto top = inner_fixed_point(solvent, {});
  CHECK(top.converged);
  CHECK(sup_distance(top.state, solvent.top()) == 0.0);

  // D = {bank 1}: bank 1 pays 2.35 q̂ and dumps all 2.35 units, bank 2 pays p̄.
  const auto problem = make_counterexample();
  const auto d1 = inner_fixed_point(problem, {0});
  REQUIRE(d1.converged);
  const double q = d1.state.prices[0];
  CHECK(d1.state.payments[0] == doctest::Approx(std::min(2.0, 2.35 * q)));
  CHECK(d1.state.payments[1] == doctest::Approx(1.0));
  const double makers = d1.state.excess[1] >= -1e-12 ? 1.0 : 0.0;
  CHECK(q == doctest::Approx(std::max(0.0, 1.0 - 2.35 / (15.0 + makers))));

  // D = everyone: payments equal the capped asset value, as in Φ.
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto p = fixtures::random_problem(rng, 4, 1);
    const auto all = inner_fixed_point(p, {0, 1, 2, 3});
    REQUIRE(all.converged);
    const auto image = apply_phi(p, all.state);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(image.payments[i] == doctest::Approx(all.state.payments[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("fictitious default algorithm") {
  const auto problem = make_counterexample();
  const auto r = solve_fda(problem);
  CHECK(r.report.converged);
  CHECK(r.report.direction == SolveDirection::Fda);
  CHECK(std::abs(r.report.state.prices[0] - 0.854) <= 1e-3);
  CHECK(r.report.state.payments[0] == doctest::Approx(2.0));
  CHECK(r.report.state.liquidity()[1] == doctest::Approx(0.001));

  const auto solvent = solve_fda(fixtures::solvent());
  CHECK(solvent.trace.outer_iterations == 2);
  CHECK(solvent.trace.rounds.back().insolvent.empty());
}

TEST_CASE("fictitious default algorithm matches the greatest solution") {
  Rng rng(424242);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(uniform(rng, 0.0, 9.0));
    const auto problem = fixtures::random_problem(rng, n, 1);
    const auto fda = solve_fda(problem);
    const auto hi = solve_greatest(problem);
    REQUIRE(fda.report.converged);
    CHECK(sup_distance(fda.report.state, hi.state) <= 1e-8);
    CHECK(fda.trace.outer_iterations <= n + 1);
    for (std::size_t k = 1; k < fda.trace.rounds.size(); ++k) {
      const auto& a = fda.trace.rounds[k - 1].insolvent;
      const auto& b = fda.trace.rounds[k].insolvent;
      CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
      CHECK(dominates(fda.trace.rounds[k - 1].state, fda.trace.rounds[k].state, 1e-9));
    }
  }
}
