#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "contagion/clearing.hpp"

namespace contagion {

/// Grid from `start` to `stop` (inclusive, up to rounding) in steps of `step`,
/// which may be negative.
Vector make_grid(double start, double stop, double step);

/// Random-network stress setup: n banks with identical external obligations,
/// liquid assets and illiquid holdings of one asset, i.i.d. interbank
/// liabilities, and the linear inverse demand function with homogeneous
/// bank risk aversion.
struct RandomNetworkModel {
  std::size_t banks = 50;
  double illiquid_units = 4.0;
  double external = 3.0;
  UniformDistribution interbank{0.0, 1.0};
  double mu = 1.0;
  double variance = 1.0;
  double alpha0 = 0.1;
  double alpha = 0.1;
  MarketMakerRule rule = MarketMakerRule::NonLiquidating;
};

ClearingProblem make_random_network(const RandomNetworkModel& model, double liquid,
                                    std::uint64_t seed);

/// One output row; see write_results_csv for the column layout.
struct ScenarioRow {
  std::string scenario;
  double grid_value = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  Vector q;
  Vector q_fixed;
  std::size_t defaults_endo = 0;
  std::size_t defaults_fixed = 0;
  double mktcap = 0.0;
  std::size_t mm_count = 0;
  bool converged = false;
  /// Set when the row's solve threw; the other outputs are then meaningless.
  std::string error;
};

struct ScenarioResult {
  std::vector<ScenarioRow> rows;
  bool all_converged() const;
};

struct RunOptions {
  SolverConfig solver;
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t workers = 0;
};

/// Runs body(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

struct ShockSweepSpec {
  RandomNetworkModel model;
  std::uint64_t seed = 1;
  /// Liquid holdings x_i, applied to every bank; default 5.0 down to 2.0.
  Vector shocks = make_grid(5.0, 2.0, -0.05);
};

/// Solves the endogenous and fixed-liquidity systems at each shock level on
/// one liability realization.
ScenarioResult run_shock_sweep(const ShockSweepSpec& spec, const RunOptions& opt = {});

struct MonteCarloSpec {
  RandomNetworkModel model;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double shock = 3.0;
  std::size_t histogram_bins = 40;
  double threshold = 0.8;
};

struct Histogram {
  double low = 0.0;
  double high = 1.0;
  std::vector<std::size_t> counts;
};

struct MonteCarloSummary {
  std::size_t trials = 0;
  double mean_endogenous = 0.0;
  double mean_fixed = 0.0;
  double mean_defaults_endogenous = 0.0;
  double mean_defaults_fixed = 0.0;
  /// Share of trials with endogenous price below `threshold`.
  double fraction_below = 0.0;
  Histogram endogenous;
  Histogram fixed;
  /// Trials where q_endo > q_fixed or defaults_endo < defaults_fixed.
  std::size_t ordering_violations = 0;
};

ScenarioResult run_monte_carlo(const MonteCarloSpec& spec, const RunOptions& opt = {});
MonteCarloSummary summarize_monte_carlo(const MonteCarloSpec& spec, const ScenarioResult& result);

/// Two banks, two assets. Bank 1 owes 1.85 externally and 1 to bank 2, bank 2
/// owes 1 externally and 1 to bank 1; x = (0, 1). Holdings
/// s11 = s22 = λ, s12 = s21 = 2 - λ. Covariance σ²[[1, ρ], [ρ, 1]] with
/// σ² = 1 / (1 + ρ), μ = 1 and every risk aversion 0.1.
struct DiversificationModel {
  double mu = 1.0;
  double alpha0 = 0.1;
  double alpha = 0.1;
  MarketMakerRule rule = MarketMakerRule::NonLiquidating;
};

ClearingProblem make_diversification(double lambda, double rho,
                                     const DiversificationModel& model = {});

struct DiversificationSpec {
  DiversificationModel model;
  Vector lambdas = make_grid(0.0, 1.0, 0.01);
  Vector rhos{0.0, 0.1, 0.3, 0.5};
};

ScenarioResult run_diversification(const DiversificationSpec& spec, const RunOptions& opt = {});

struct JumpProbe {
  std::size_t mm_count = 0;
  Vector values;
};

struct JumpLocation {
  double location = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  JumpProbe left;
  JumpProbe right;
};

/// Bisects on the market-maker count reported by `metric` until the bracket
/// is at most `tol` wide. Throws NoJumpFound if the count agrees at both ends.
JumpLocation locate_jump(const std::function<JumpProbe(double)>& metric, double lo, double hi,
                         double tol = 1e-4);

/// Scans `grid` for changes in the market-maker count and refines each.
std::vector<JumpLocation> find_jumps(const std::function<JumpProbe(double)>& metric,
                                     const Vector& grid, double tol = 1e-4);

/// Greatest-solution prices of the diversification system as a function of λ.
std::function<JumpProbe(double)> diversification_metric(double rho,
                                                        const DiversificationModel& model = {},
                                                        const SolverConfig& cfg = {});

struct EbaBank {
  std::string id;
  double total_assets = 0.0;
  double interbank_assets = 0.0;
  double interbank_liabilities = 0.0;
  double external_liabilities = 0.0;
};

struct EbaData {
  std::vector<EbaBank> banks;
  std::vector<std::string> warnings;
};

EbaData read_eba_csv(const std::filesystem::path& path);

/// L_ij = IBliab_i · IBasset_j / Σ_k IBasset_k with the diagonal moved onto
/// the rest of row i. Interbank assets are rescaled (with a warning) when the
/// two totals differ by more than 1%.
Matrix allocate_interbank(const std::vector<EbaBank>& banks, std::vector<std::string>* warnings);

struct EbaModel {
  double alpha0 = 5e-7;
  double alpha = 5e-7;
  MarketMakerRule rule = MarketMakerRule::NonLiquidating;
};

/// External assets total - interbank are split into liquid_fraction cash and
/// the rest as units of one asset priced at 1. Liabilities do not scale.
ClearingProblem ingest_eba(const EbaData& data, double liquid_fraction, const EbaModel& model = {});
ClearingProblem ingest_eba(const std::filesystem::path& path, double liquid_fraction,
                           const EbaModel& model = {});

struct EbaSweepSpec {
  std::filesystem::path data;
  Vector fractions = make_grid(0.9, 1.0, 0.005);
  EbaModel model;
};

ScenarioResult run_eba_sweep(const EbaSweepSpec& spec, const RunOptions& opt = {});

/// Two banks, one asset. x = (0, 0.001), s = (2.35, 2), bank 1 owes 1
/// externally and 1 to bank 2, bank 2 owes 1 externally;
/// F(θ, M) = 1 - θ / (15 + |𝓜|).
ClearingProblem make_counterexample();

struct CounterexampleResult {
  SolveReport greatest;
  SolveReport least;
  std::vector<ConfigurationOutcome> configurations;
};

CounterexampleResult run_counterexample(const SolverConfig& cfg = {});

}  // namespace contagion
