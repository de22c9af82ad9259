#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "contagion/json_io.hpp"
#include "contagion/results_io.hpp"
#include "contagion/scenarios.hpp"
#include "fixtures.hpp"

using namespace contagion;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

std::string csv_of(const ScenarioResult& r, std::size_t assets) {
  std::ostringstream out;
  write_results_csv(out, r, assets);
  return out.str();
}

}  // namespace

TEST_CASE("grids") {
  const auto g = make_grid(5.0, 2.0, -0.05);
  CHECK(g.size() == 61);
  CHECK(g.front() == 5.0);
  CHECK(g.back() == 2.0);
  CHECK(g[48] == 2.6);
  CHECK(make_grid(0.0, 1.0, 0.01).size() == 101);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, -0.1), Error);
}

TEST_CASE("shock sweep") {
  ShockSweepSpec spec;
  spec.model.banks = 20;
  spec.shocks = make_grid(5.0, 2.0, -0.25);
  const auto r = run_shock_sweep(spec, {{}, 1});
  REQUIRE(r.rows.size() == spec.shocks.size());
  CHECK(r.all_converged());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    CHECK(row.q[0] <= row.q_fixed[0] + 1e-12);
    CHECK(row.defaults_endo >= row.defaults_fixed);
    if (i > 0) {
      CHECK(row.mktcap <= r.rows[i - 1].mktcap + 1e-9);
      CHECK(row.defaults_endo >= r.rows[i - 1].defaults_endo);
    }
  }

  // No interbank exposures and cash equal to obligations: price stays at μ.
  spec.model.interbank = {0.0, 0.0};
  spec.shocks = {3.0, 3.5, 4.0};
  for (const auto& row : run_shock_sweep(spec).rows) {
    CHECK(row.q[0] == 1.0);
    CHECK(row.defaults_endo == 0);
  }
}

TEST_CASE("monte carlo is deterministic and independent of worker count") {
  MonteCarloSpec spec;
  spec.model.banks = 10;
  spec.trials = 40;
  spec.seed = 17;
  const auto one = run_monte_carlo(spec, {{}, 1});
  const auto four = run_monte_carlo(spec, {{}, 4});
  CHECK(csv_of(one, 1) == csv_of(four, 1));
  const auto s = summarize_monte_carlo(spec, one);
  CHECK(s.trials == 40);
  CHECK(s.ordering_violations == 0);
  CHECK(s.mean_endogenous <= s.mean_fixed);
  std::size_t binned = 0;
  for (auto c : s.endogenous.counts) binned += c;
  CHECK(binned == 40);

  spec.trials = 1;
  spec.model.interbank = {0.0, 0.0};
  const auto calm = run_monte_carlo(spec);
  CHECK(calm.rows[0].q[0] == 1.0);
  CHECK(calm.rows[0].q_fixed[0] == 1.0);
}

TEST_CASE("diversification") {
  DiversificationSpec spec;
  spec.lambdas = {0.0, 0.5, 1.0, 1.5, 2.0};
  const auto r = run_diversification(spec, {{}, 2});
  REQUIRE(r.rows.size() == 20);
  CHECK(r.all_converged());
  // λ = 0: bank 1 defaults and dumps its 2 units of asset 2 with no market
  // maker present, the lowest price asset 2 can reach: 1 - 2/10.
  CHECK(r.rows[0].q[1] == doctest::Approx(0.8));
  CHECK(r.rows[0].defaults_endo == 1);
  CHECK(r.rows[0].mm_count == 0);
  for (std::size_t base = 0; base < 20; base += 5) {
    // λ and 2 - λ mirror each other.
    CHECK(r.rows[base].q[0] == doctest::Approx(r.rows[base + 4].q[1]));
    CHECK(r.rows[base + 1].q[1] == doctest::Approx(r.rows[base + 3].q[0]));
    CHECK(r.rows[base + 2].q[0] == doctest::Approx(r.rows[2].q[0]));
  }
}

TEST_CASE("jump localisation") {
  const auto metric = diversification_metric(0.0);
  const auto jump = locate_jump(metric, 0.2, 0.4, 1e-6);
  CHECK(jump.hi - jump.lo <= 1e-6);
  CHECK(jump.left.mm_count != jump.right.mm_count);
  CHECK(jump.right.values[0] > jump.left.values[0]);
  CHECK_THROWS_AS(locate_jump(metric, 0.6, 1.0), Error);
  CHECK(find_jumps(metric, make_grid(0.0, 1.0, 0.05)).size() == 1);
}

TEST_CASE("interbank allocation from bank totals") {
  std::vector<EbaBank> banks{{"a", 10, 2, 2, 5}, {"b", 10, 2, 2, 5}, {"c", 10, 2, 2, 5}};
  std::vector<std::string> warnings;
  const auto l = allocate_interbank(banks, &warnings);
  CHECK(warnings.empty());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(l(i, i) == 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) CHECK(l(i, j) == doctest::Approx(1.0));
    }
  }

  // Unequal sizes: row totals kept, diagonal empty.
  banks = {{"a", 50, 10, 4, 20}, {"b", 30, 5, 6, 10}, {"c", 20, 1, 10, 5}};
  const auto u = allocate_interbank(banks, &warnings);
  CHECK(warnings.size() == 1);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(u(i, i) == 0.0);
    CHECK(u(i, 0) + u(i, 1) + u(i, 2) == doctest::Approx(banks[i].interbank_liabilities));
  }
}

TEST_CASE("bank-level CSV ingestion") {
  const auto path = temp_file("eba_three.csv",
                              "bank_id,total_assets,interbank_assets,interbank_liabilities,"
                              "external_liabilities\nA,10,2,2,7\nB,10,2,2,7\nC,10,2,2,7\n");
  const auto full = ingest_eba(path, 1.0);
  CHECK(full.system().holdings(0, 0) == 0.0);
  CHECK(full.system().liquid[0] == doctest::Approx(8.0));
  CHECK(solve_greatest(full).state.prices[0] == 1.0);

  const auto part = ingest_eba(path, 0.9);
  CHECK(part.system().liquid[0] == doctest::Approx(7.2));
  CHECK(part.system().holdings(0, 0) == doctest::Approx(0.8));
  CHECK(part.system().external(0) == 7.0);

  CHECK_THROWS_AS(read_eba_csv(temp_file("eba_bad.csv", "id,a,b\n1,2,3\n")), Error);
  CHECK_THROWS_AS(read_eba_csv(temp_file("eba_bad2.csv",
                                         "bank_id,total_assets,interbank_assets,interbank_"
                                         "liabilities,external_liabilities\nA,x,1,1,1\nB,1,1,1,1\n")),
                  Error);
  CHECK_THROWS_AS(ingest_eba(path, 1.5), Error);
}

TEST_CASE("json round trips") {
  const auto problem = make_counterexample();
  const auto sys = system_from_json(to_json(problem.system()));
  CHECK(sys.liabilities == problem.system().liabilities);
  CHECK(sys.holdings == problem.system().holdings);
  const auto idf = idf_from_json(to_json(problem.idf()));
  CHECK(idf.linear_params()->alpha0 == problem.idf().linear_params()->alpha0);
  const auto fixed = idf_from_json(to_json(fixed_liquidity_benchmark(problem.idf(), 2)));
  CHECK(fixed.kind() == InverseDemandModel::Kind::FixedLiquidity);
  CHECK(idf_from_json(Json{{"type", "exponential"}}).kind() ==
        InverseDemandModel::Kind::ExponentialAggregate);
  CHECK_THROWS_AS(idf_from_json(Json{{"type", "cubic"}}), Error);
  CHECK_THROWS_AS(system_from_json(Json{{"liquid", {1.0}}}), Error);

  const auto report = to_json(solve_greatest(problem));
  CHECK(report["market_makers"] == Json::array({1}));
  CHECK(report["converged"] == true);
  const auto trace = to_json(solve_fda(problem).trace);
  CHECK(trace["outer_iterations"].get<int>() >= 2);
}

TEST_CASE("results csv layout") {
  ScenarioResult r;
  r.rows.push_back({"sweep", 2.5, 0.0, 3, {0.5, 0.25}, {0.75, 0.5}, 4, 2, 1.5, 1, true, ""});
  const auto text = csv_of(r, 2);
  CHECK(text ==
        "scenario,grid_value,rho,seed,q_1,q_2,defaults_endo,defaults_fixed,mktcap,mm_count,"
        "converged,qfixed_1,qfixed_2\nsweep,2.5,0,3,0.5,0.25,4,2,1.5,1,true,0.75,0.5\n");
}
