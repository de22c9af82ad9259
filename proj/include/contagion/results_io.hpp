#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "contagion/json_io.hpp"
#include "contagion/scenarios.hpp"

namespace contagion {

/// Columns: scenario,grid_value,rho,seed,q_1..q_m,defaults_endo,defaults_fixed,
/// mktcap,mm_count,converged,qfixed_1..qfixed_m. Rows keep their index order,
/// so output does not depend on the worker count.
void write_results_csv(std::ostream& out, const ScenarioResult& result, std::size_t assets);

Json to_json(const MonteCarloSummary& summary);
Json to_json(const CounterexampleResult& result);
Json to_json(const JumpLocation& jump);

/// Writes <dir>/<stem>.csv and <dir>/<stem>.json; `sidecar` should carry the
/// full run configuration including seeds.
void write_results(const std::filesystem::path& dir, const std::string& stem,
                   const ScenarioResult& result, std::size_t assets, const Json& sidecar);

}  // namespace contagion
