#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "contagion/fda.hpp"
#include "contagion/json_io.hpp"
#include "contagion/results_io.hpp"
#include "contagion/scenarios.hpp"

using namespace contagion;

namespace {

constexpr int kOk = 0;
constexpr int kNotConverged = 1;
constexpr int kInputError = 2;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> tolerance;
  std::optional<std::size_t> max_iter;
  bool trace = false;
  std::size_t workers = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--out", c.out, "output directory (stdout when omitted)");
  cmd->add_option("--tolerance", c.tolerance, "fixed-point tolerance");
  cmd->add_option("--max-iter", c.max_iter, "iteration cap per solve");
  cmd->add_flag("--trace", c.trace, "include the FDA trace in solve output");
  cmd->add_option("--workers", c.workers, "worker threads (0 = all cores)");
}

Json load_config(const Common& c) { return c.config.empty() ? Json::object() : read_json_file(c.config); }

SolverConfig solver_config(const Common& c, const Json& cfg) {
  SolverConfig s = solver_config_from_json(cfg.value("solver", Json::object()));
  if (c.tolerance) s.tolerance = *c.tolerance;
  if (c.max_iter) s.max_iterations = *c.max_iter;
  validate(s);
  return s;
}

RunOptions run_options(const Common& c, const Json& cfg) { return {solver_config(c, cfg), c.workers}; }

RandomNetworkModel network_model(const Json& j) {
  RandomNetworkModel m;
  m.banks = j.value("banks", m.banks);
  m.illiquid_units = j.value("illiquid_units", m.illiquid_units);
  m.external = j.value("external", m.external);
  if (j.contains("interbank")) {
    m.interbank = {j["interbank"].at(0).get<double>(), j["interbank"].at(1).get<double>()};
  }
  m.mu = j.value("mu", m.mu);
  m.variance = j.value("variance", m.variance);
  m.alpha0 = j.value("alpha0", m.alpha0);
  m.alpha = j.value("alpha", m.alpha);
  return m;
}

Vector grid(const Json& j, const char* key, Vector fallback) {
  if (!j.contains(key)) return fallback;
  const auto& g = j[key];
  if (g.is_array()) return g.get<Vector>();
  return make_grid(g.at("start").get<double>(), g.at("stop").get<double>(), g.at("step").get<double>());
}

void emit(const Common& c, const std::string& stem, const Json& j) {
  if (c.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::filesystem::create_directories(c.out);
  std::ofstream f(std::filesystem::path(c.out) / (stem + ".json"));
  f << j.dump(2) << '\n';
}

int emit_table(const Common& c, const std::string& stem, const ScenarioResult& r, std::size_t assets,
               const Json& sidecar) {
  if (c.out.empty()) {
    write_results_csv(std::cout, r, assets);
  } else {
    write_results(c.out, stem, r, assets, sidecar);
  }
  for (const auto& row : r.rows) {
    if (!row.error.empty()) std::cerr << row.scenario << " " << row.grid_value << ": " << row.error << '\n';
  }
  return r.all_converged() ? kOk : kNotConverged;
}

int cmd_solve(const Common& c, const std::string& method) {
  const Json cfg = load_config(c);
  if (!cfg.contains("system") || !cfg.contains("idf")) {
    throw Error(ErrorCode::InvalidConfig, "solve needs a config with 'system' and 'idf'");
  }
  const ClearingProblem problem(system_from_json(cfg["system"]), idf_from_json(cfg["idf"]));
  const SolverConfig s = solver_config(c, cfg);
  Json out;
  bool converged = true;
  if (method == "greatest") {
    auto r = solve_greatest(problem, s);
    converged = r.converged;
    out = to_json(r);
  } else if (method == "least") {
    auto r = solve_least(problem, s);
    converged = r.converged;
    out = to_json(r);
  } else if (method == "fda") {
    auto r = solve_fda(problem, s);
    converged = r.report.converged;
    out = to_json(r.report);
    if (c.trace) out["trace"] = to_json(r.trace);
  } else {
    out = Json::array();
    for (const auto& r : enumerate_solutions(problem, s)) out.push_back(to_json(r));
  }
  emit(c, "solve", out);
  return converged ? kOk : kNotConverged;
}

int cmd_counterexample(const Common& c) {
  const auto r = run_counterexample(solver_config(c, load_config(c)));
  emit(c, "counterexample", to_json(r));
  return r.greatest.converged && r.least.converged ? kOk : kNotConverged;
}

int cmd_sweep(const Common& c) {
  const Json cfg = load_config(c);
  ShockSweepSpec spec;
  spec.model = network_model(cfg.value("model", Json::object()));
  spec.seed = c.seed.value_or(cfg.value("seed", spec.seed));
  spec.shocks = grid(cfg, "shocks", spec.shocks);
  const auto result = run_shock_sweep(spec, run_options(c, cfg));
  Json side = cfg;
  side["seed"] = spec.seed;
  side["shocks"] = spec.shocks;
  return emit_table(c, "sweep", result, 1, side);
}

int cmd_montecarlo(const Common& c) {
  const Json cfg = load_config(c);
  MonteCarloSpec spec;
  spec.model = network_model(cfg.value("model", Json::object()));
  spec.trials = cfg.value("trials", spec.trials);
  spec.seed = c.seed.value_or(cfg.value("seed", spec.seed));
  spec.shock = cfg.value("shock", spec.shock);
  spec.histogram_bins = cfg.value("bins", spec.histogram_bins);
  spec.threshold = cfg.value("threshold", spec.threshold);
  const auto result = run_monte_carlo(spec, run_options(c, cfg));
  const auto summary = summarize_monte_carlo(spec, result);
  Json side = cfg;
  side["seed"] = spec.seed;
  side["trials"] = spec.trials;
  side["summary"] = to_json(summary);
  if (c.out.empty()) std::cerr << to_json(summary).dump(2) << '\n';
  return emit_table(c, "montecarlo", result, 1, side);
}

int cmd_diversify(const Common& c) {
  const Json cfg = load_config(c);
  DiversificationSpec spec;
  spec.lambdas = grid(cfg, "lambdas", spec.lambdas);
  spec.rhos = cfg.value("rhos", spec.rhos);
  spec.model.alpha0 = cfg.value("alpha0", spec.model.alpha0);
  spec.model.alpha = cfg.value("alpha", spec.model.alpha);
  const RunOptions opt = run_options(c, cfg);
  const auto result = run_diversification(spec, opt);
  Json jumps = Json::object();
  for (double rho : spec.rhos) {
    Json list = Json::array();
    for (const auto& j : find_jumps(diversification_metric(rho, spec.model, opt.solver), spec.lambdas)) {
      list.push_back(to_json(j));
    }
    jumps[std::to_string(rho)] = std::move(list);
  }
  Json side = cfg;
  side["lambdas"] = spec.lambdas;
  side["rhos"] = spec.rhos;
  side["jumps"] = jumps;
  if (c.out.empty()) std::cerr << jumps.dump(2) << '\n';
  return emit_table(c, "diversify", result, 2, side);
}

int cmd_eba(const Common& c, const std::string& data) {
  const Json cfg = load_config(c);
  EbaSweepSpec spec;
  spec.data = data.empty() ? cfg.value("data", std::string()) : data;
  if (spec.data.empty()) throw Error(ErrorCode::InvalidConfig, "eba needs --data or a 'data' entry");
  spec.fractions = grid(cfg, "fractions", spec.fractions);
  spec.model.alpha0 = cfg.value("alpha0", spec.model.alpha0);
  spec.model.alpha = cfg.value("alpha", spec.model.alpha);
  for (const auto& w : read_eba_csv(spec.data).warnings) std::cerr << "warning: " << w << '\n';
  const auto result = run_eba_sweep(spec, run_options(c, cfg));
  Json side = cfg;
  side["data"] = spec.data.string();
  side["fractions"] = spec.fractions;
  return emit_table(c, "eba", result, 1, side);
}

bool is_input_error(ErrorCode code) {
  return code != ErrorCode::NestednessViolated && code != ErrorCode::NoJumpFound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clearing equilibria with fire sales and endogenous market liquidity"};
  app.require_subcommand(1);
  Common common;
  std::string method = "greatest";
  std::string eba_data;

  auto* solve = app.add_subcommand("solve", "solve a system given as JSON");
  add_common(solve, common);
  solve->add_option("--method", method, "greatest, least, fda or enumerate")
      ->check(CLI::IsMember({"greatest", "least", "fda", "enumerate"}));
  auto* counter = app.add_subcommand("counterexample", "two-bank example with two equilibria");
  add_common(counter, common);
  auto* sweep = app.add_subcommand("sweep", "liquid-asset shock sweep on one random network");
  add_common(sweep, common);
  auto* mc = app.add_subcommand("montecarlo", "ensemble of random networks at a fixed shock");
  add_common(mc, common);
  auto* div = app.add_subcommand("diversify", "two-bank diversification and correlation study");
  add_common(div, common);
  auto* eba = app.add_subcommand("eba", "liquid-fraction sweep on a bank-level CSV");
  add_common(eba, common);
  eba->add_option("--data", eba_data, "CSV file")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*solve) return cmd_solve(common, method);
    if (*counter) return cmd_counterexample(common);
    if (*sweep) return cmd_sweep(common);
    if (*mc) return cmd_montecarlo(common);
    if (*div) return cmd_diversify(common);
    if (*eba) return cmd_eba(common, eba_data);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_input_error(e.code()) ? kInputError : kNotConverged;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
