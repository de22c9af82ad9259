#include "contagion/results_io.hpp"

#include <charconv>
#include <fstream>

namespace contagion {

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void write_prices(std::ostream& out, const Vector& q, std::size_t assets) {
  for (std::size_t k = 0; k < assets; ++k) out << ',' << (k < q.size() ? fmt(q[k]) : "");
}

}  // namespace

void write_results_csv(std::ostream& out, const ScenarioResult& result, std::size_t assets) {
  out << "scenario,grid_value,rho,seed";
  for (std::size_t k = 1; k <= assets; ++k) out << ",q_" << k;
  out << ",defaults_endo,defaults_fixed,mktcap,mm_count,converged";
  for (std::size_t k = 1; k <= assets; ++k) out << ",qfixed_" << k;
  out << '\n';
  for (const auto& r : result.rows) {
    out << r.scenario << ',' << fmt(r.grid_value) << ',' << fmt(r.rho) << ',' << r.seed;
    write_prices(out, r.q, assets);
    out << ',' << r.defaults_endo << ',' << r.defaults_fixed << ',' << fmt(r.mktcap) << ','
        << r.mm_count << ',' << (r.converged ? "true" : "false");
    write_prices(out, r.q_fixed, assets);
    out << '\n';
  }
}

Json to_json(const MonteCarloSummary& s) {
  return {{"trials", s.trials},
          {"mean_endogenous", s.mean_endogenous},
          {"mean_fixed", s.mean_fixed},
          {"mean_defaults_endogenous", s.mean_defaults_endogenous},
          {"mean_defaults_fixed", s.mean_defaults_fixed},
          {"fraction_below", s.fraction_below},
          {"ordering_violations", s.ordering_violations},
          {"histogram",
           {{"low", s.endogenous.low},
            {"high", s.endogenous.high},
            {"endogenous", s.endogenous.counts},
            {"fixed", s.fixed.counts}}}};
}

Json to_json(const CounterexampleResult& result) {
  Json table = Json::array();
  for (const auto& c : result.configurations) {
    Json row{{"assumed_count", c.assumed_count}};
    if (c.assumed_set) row["assumed_set"] = c.assumed_set->members;
    Json sols = Json::array();
    for (const auto& s : c.solutions) sols.push_back(to_json(s));
    row["solutions"] = std::move(sols);
    if (c.solutions.empty()) row["note"] = "no self-consistent solution";
    table.push_back(std::move(row));
  }
  return {{"greatest", to_json(result.greatest)},
          {"least", to_json(result.least)},
          {"enumeration", std::move(table)}};
}

Json to_json(const JumpLocation& jump) {
  return {{"location", jump.location},
          {"bracket", {jump.lo, jump.hi}},
          {"left", {{"mm_count", jump.left.mm_count}, {"values", jump.left.values}}},
          {"right", {{"mm_count", jump.right.mm_count}, {"values", jump.right.values}}}};
}

void write_results(const std::filesystem::path& dir, const std::string& stem,
                   const ScenarioResult& result, std::size_t assets, const Json& sidecar) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / (stem + ".csv"));
  std::ofstream meta(dir / (stem + ".json"));
  if (!csv || !meta) throw Error(ErrorCode::InvalidConfig, "cannot write to " + dir.string());
  write_results_csv(csv, result, assets);
  meta << sidecar.dump(2) << '\n';
}

}  // namespace contagion
