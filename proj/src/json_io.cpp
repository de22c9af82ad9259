#include "contagion/json_io.hpp"

#include <fstream>
#include <string>

namespace contagion {

namespace {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::InvalidConfig, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("field '") + key + "': " + e.what());
  }
}

Matrix matrix_field(const Json& j, const char* key, std::size_t cols_if_empty) {
  auto rows = field<std::vector<std::vector<double>>>(j, key);
  if (rows.empty()) return Matrix(0, cols_if_empty);
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) {
      throw Error(ErrorCode::DimensionMismatch, std::string("ragged matrix '") + key + "'");
    }
  }
  return Matrix::from_rows(rows);
}

std::string_view rule_name(MarketMakerRule rule) {
  return rule == MarketMakerRule::NonLiquidating ? "non_liquidating" : "positive_liquidity";
}

}  // namespace

FinancialSystem system_from_json(const Json& j) {
  FinancialSystem sys;
  sys.liquid = field<Vector>(j, "liquid");
  const std::size_t n = sys.liquid.size();
  sys.liabilities = matrix_field(j, "liabilities", n + 1);
  sys.holdings = matrix_field(j, "holdings", j.value("m", std::size_t{0}));
  if (j.contains("n") && field<std::size_t>(j, "n") != n) {
    throw Error(ErrorCode::DimensionMismatch, "'n' does not match 'liquid'");
  }
  if (j.contains("m") && field<std::size_t>(j, "m") != sys.holdings.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "'m' does not match 'holdings'");
  }
  return sys;
}

Json to_json(const FinancialSystem& system) {
  return {{"n", system.banks()},
          {"m", system.assets()},
          {"liabilities", system.liabilities.to_rows()},
          {"liquid", system.liquid},
          {"holdings", system.holdings.to_rows()}};
}

InverseDemandModel idf_from_json(const Json& j) {
  const auto type = field<std::string>(j, "type");
  if (type == "exponential") return InverseDemandModel::exponential();
  if (type == "fixed") {
    return InverseDemandModel::fixed(idf_from_json(field<Json>(j, "inner")),
                                     field<Vector>(j, "m_fixed"));
  }
  if (type == "linear") {
    LinearImpactParams p;
    p.mu = field<Vector>(j, "mu");
    p.cov = matrix_field(j, "cov", p.mu.size());
    p.alpha0 = field<double>(j, "alpha0");
    p.bank_alpha = field<Vector>(j, "alpha");
    const auto rule = j.value("market_makers", std::string("non_liquidating"));
    if (rule == "non_liquidating") {
      p.rule = MarketMakerRule::NonLiquidating;
    } else if (rule == "positive_liquidity") {
      p.rule = MarketMakerRule::PositiveLiquidity;
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown market_makers rule '" + rule + "'");
    }
    return j.value("allow_negative_cov", false) ? InverseDemandModel::linear_permissive(std::move(p))
                                                : InverseDemandModel::linear(std::move(p));
  }
  throw Error(ErrorCode::UnsupportedModel, "unknown inverse demand type '" + type + "'");
}

Json to_json(const InverseDemandModel& idf) {
  switch (idf.kind()) {
    case InverseDemandModel::Kind::ExponentialAggregate:
      return {{"type", "exponential"}};
    case InverseDemandModel::Kind::FixedLiquidity:
      return {{"type", "fixed"}, {"inner", to_json(*idf.inner())}, {"m_fixed", *idf.frozen_liquidity()}};
    case InverseDemandModel::Kind::LiquidityAdjustedLinear: {
      const auto& p = *idf.linear_params();
      return {{"type", "linear"},          {"mu", p.mu},
              {"cov", p.cov.to_rows()},    {"alpha0", p.alpha0},
              {"alpha", p.bank_alpha},     {"market_makers", rule_name(p.rule)}};
    }
  }
  return {};
}

SolverConfig solver_config_from_json(const Json& j, SolverConfig base) {
  base.tolerance = j.value("tolerance", base.tolerance);
  base.max_iterations = j.value("max_iter", base.max_iterations);
  base.default_threshold = j.value("default_threshold", base.default_threshold);
  base.enumeration_cap = j.value("enumeration_cap", base.enumeration_cap);
  validate(base);
  return base;
}

Json to_json(const ClearingState& state) {
  return {{"p", state.payments}, {"q", state.prices}, {"M", state.liquidity()}};
}

Json to_json(const SolveReport& report) {
  Json j = to_json(report.state);
  j["iterations"] = report.iterations;
  j["residual"] = report.residual;
  j["converged"] = report.converged;
  j["defaults"] = report.defaults;
  j["market_makers"] = report.market_makers.members;
  j["direction"] = to_string(report.direction);
  j["monotone"] = report.monotone;
  if (report.enumeration_fallback) j["enumeration_fallback"] = true;
  return j;
}

Json to_json(const FdaTrace& trace) {
  Json rounds = Json::array();
  for (const auto& r : trace.rounds) {
    Json entry = to_json(r.state);
    entry["insolvent"] = r.insolvent;
    entry["inner_iterations"] = r.inner_iterations;
    entry["inner_converged"] = r.inner_converged;
    rounds.push_back(std::move(entry));
  }
  return {{"outer_iterations", trace.outer_iterations}, {"rounds", std::move(rounds)}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

}  // namespace contagion
