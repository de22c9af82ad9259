#pragma once

#include <filesystem>

#include <json.hpp>

#include "contagion/clearing.hpp"
#include "contagion/fda.hpp"

namespace contagion {

using Json = nlohmann::json;

/// {"liabilities": [[...]], "liquid": [...], "holdings": [[...]]}; optional
/// "n" and "m" are checked against the arrays when present.
FinancialSystem system_from_json(const Json& j);
Json to_json(const FinancialSystem& system);

/// {"type": "linear", "mu", "cov", "alpha0", "alpha", "market_makers"},
/// {"type": "exponential"} or {"type": "fixed", "inner": {...}, "m_fixed": [...]}.
InverseDemandModel idf_from_json(const Json& j);
Json to_json(const InverseDemandModel& idf);

SolverConfig solver_config_from_json(const Json& j, SolverConfig base = {});

Json to_json(const ClearingState& state);
Json to_json(const SolveReport& report);
Json to_json(const FdaTrace& trace);

/// Parses a file, turning I/O and syntax failures into InvalidConfig errors.
Json read_json_file(const std::filesystem::path& path);

}  // namespace contagion
