#include "contagion/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "contagion/random.hpp"

namespace contagion {

Vector make_grid(double start, double stop, double step) {
  if (step == 0.0 || !std::isfinite(step) || (stop - start) * step < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "grid step does not reach the stop value");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  Vector out(count);
  // Snap to 1e-12 so 5 - 0.05 * 48 prints as 2.6 rather than 2.5999999999999996.
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
  }
  return out;
}

bool ScenarioResult::all_converged() const {
  return std::all_of(rows.begin(), rows.end(), [](const ScenarioRow& r) { return r.converged; });
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

namespace {

double market_cap(const FinancialSystem& sys, const Vector& prices) {
  double cap = 0.0;
  for (std::size_t i = 0; i < sys.banks(); ++i) {
    for (std::size_t k = 0; k < sys.assets(); ++k) cap += sys.holdings(i, k) * prices[k];
  }
  return cap;
}

// Fills the solver outputs of `row` from the endogenous and fixed-liquidity
// solves of `problem`. Errors are recorded on the row instead of thrown.
void solve_row(ScenarioRow& row, const std::function<ClearingProblem()>& build,
               const SolverConfig& cfg) {
  try {
    const ClearingProblem problem = build();
    const auto cmp = compare_fixed_vs_endogenous(problem, cfg);
    row.q = cmp.endogenous.state.prices;
    row.q_fixed = cmp.benchmark.state.prices;
    row.defaults_endo = cmp.endogenous.defaults.size();
    row.defaults_fixed = cmp.benchmark.defaults.size();
    row.mktcap = market_cap(problem.system(), row.q);
    row.mm_count = cmp.endogenous.market_makers.size();
    row.converged = cmp.endogenous.converged && cmp.benchmark.converged;
  } catch (const std::exception& e) {
    row.error = e.what();
    row.converged = false;
  }
}

LinearImpactParams scalar_params(double mu, double variance, double alpha0, double alpha,
                                 std::size_t banks, MarketMakerRule rule) {
  LinearImpactParams p;
  p.mu = {mu};
  p.cov = Matrix(1, 1, variance);
  p.alpha0 = alpha0;
  p.bank_alpha = Vector(banks, alpha);
  p.rule = rule;
  return p;
}

Histogram histogram(const std::vector<ScenarioRow>& rows, bool fixed, std::size_t bins, double high) {
  Histogram h{0.0, high, std::vector<std::size_t>(bins, 0)};
  for (const auto& r : rows) {
    const Vector& q = fixed ? r.q_fixed : r.q;
    if (!r.error.empty() || q.empty()) continue;
    auto b = static_cast<std::size_t>(std::floor(q[0] / high * static_cast<double>(bins)));
    ++h.counts[std::min(b, bins - 1)];
  }
  return h;
}

}  // namespace

ClearingProblem make_random_network(const RandomNetworkModel& model, double liquid,
                                    std::uint64_t seed) {
  RandomSystemParams params;
  params.banks = model.banks;
  params.assets = 1;
  params.liquid = Vector(model.banks, liquid);
  params.illiquid_units = Vector(model.banks, model.illiquid_units);
  params.external = Vector(model.banks, model.external);
  params.interbank = model.interbank;
  return ClearingProblem(generate_random_system(params, seed),
                         InverseDemandModel::linear(scalar_params(
                             model.mu, model.variance, model.alpha0, model.alpha, model.banks,
                             model.rule)));
}

ScenarioResult run_shock_sweep(const ShockSweepSpec& spec, const RunOptions& opt) {
  if (spec.shocks.empty()) throw Error(ErrorCode::InvalidConfig, "empty shock grid");
  // One realization of the liabilities; only x changes along the sweep.
  const ClearingProblem base = make_random_network(spec.model, spec.shocks.front(), spec.seed);
  ScenarioResult out;
  out.rows.resize(spec.shocks.size());
  parallel_for(spec.shocks.size(), opt.workers, [&](std::size_t i) {
    auto& row = out.rows[i];
    row.scenario = "sweep";
    row.grid_value = spec.shocks[i];
    row.seed = spec.seed;
    solve_row(row, [&] {
      FinancialSystem sys = base.system();
      std::fill(sys.liquid.begin(), sys.liquid.end(), spec.shocks[i]);
      return ClearingProblem(std::move(sys), base.idf(), base.rule());
    }, opt.solver);
  });
  return out;
}

ScenarioResult run_monte_carlo(const MonteCarloSpec& spec, const RunOptions& opt) {
  if (spec.trials == 0) throw Error(ErrorCode::InvalidConfig, "trial count must be >= 1");
  ScenarioResult out;
  out.rows.resize(spec.trials);
  parallel_for(spec.trials, opt.workers, [&](std::size_t t) {
    auto& row = out.rows[t];
    row.scenario = "montecarlo";
    row.grid_value = spec.shock;
    row.seed = derive_seed(spec.seed, t);
    solve_row(row, [&] { return make_random_network(spec.model, spec.shock, row.seed); },
              opt.solver);
  });
  return out;
}

MonteCarloSummary summarize_monte_carlo(const MonteCarloSpec& spec, const ScenarioResult& result) {
  MonteCarloSummary s;
  std::size_t below = 0;
  for (const auto& r : result.rows) {
    if (!r.error.empty()) continue;
    ++s.trials;
    s.mean_endogenous += r.q[0];
    s.mean_fixed += r.q_fixed[0];
    s.mean_defaults_endogenous += static_cast<double>(r.defaults_endo);
    s.mean_defaults_fixed += static_cast<double>(r.defaults_fixed);
    if (r.q[0] < spec.threshold) ++below;
    if (r.q[0] > r.q_fixed[0] || r.defaults_endo < r.defaults_fixed) ++s.ordering_violations;
  }
  if (s.trials > 0) {
    const auto n = static_cast<double>(s.trials);
    s.mean_endogenous /= n;
    s.mean_fixed /= n;
    s.mean_defaults_endogenous /= n;
    s.mean_defaults_fixed /= n;
    s.fraction_below = static_cast<double>(below) / n;
  }
  const std::size_t bins = std::max<std::size_t>(1, spec.histogram_bins);
  s.endogenous = histogram(result.rows, false, bins, spec.model.mu);
  s.fixed = histogram(result.rows, true, bins, spec.model.mu);
  return s;
}

ClearingProblem make_diversification(double lambda, double rho, const DiversificationModel& model) {
  FinancialSystem sys;
  sys.liabilities = Matrix{{1.85, 0.0, 1.0}, {1.0, 1.0, 0.0}};
  sys.liquid = {0.0, 1.0};
  sys.holdings = Matrix{{lambda, 2.0 - lambda}, {2.0 - lambda, lambda}};

  const double var = 1.0 / (1.0 + rho);
  LinearImpactParams p;
  p.mu = {model.mu, model.mu};
  p.cov = Matrix{{var, var * rho}, {var * rho, var}};
  p.alpha0 = model.alpha0;
  p.bank_alpha = {model.alpha, model.alpha};
  p.rule = model.rule;
  return ClearingProblem(std::move(sys), InverseDemandModel::linear(std::move(p)));
}

ScenarioResult run_diversification(const DiversificationSpec& spec, const RunOptions& opt) {
  if (spec.lambdas.empty() || spec.rhos.empty()) {
    throw Error(ErrorCode::InvalidConfig, "empty diversification grid");
  }
  const std::size_t per_rho = spec.lambdas.size();
  ScenarioResult out;
  out.rows.resize(per_rho * spec.rhos.size());
  parallel_for(out.rows.size(), opt.workers, [&](std::size_t i) {
    auto& row = out.rows[i];
    row.scenario = "diversify";
    row.grid_value = spec.lambdas[i % per_rho];
    row.rho = spec.rhos[i / per_rho];
    solve_row(row, [&] { return make_diversification(row.grid_value, row.rho, spec.model); },
              opt.solver);
  });
  return out;
}

JumpLocation locate_jump(const std::function<JumpProbe(double)>& metric, double lo, double hi,
                         double tol) {
  if (!(hi > lo) || !(tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "bad jump bracket");
  JumpLocation out{0.0, lo, hi, metric(lo), metric(hi)};
  if (out.left.mm_count == out.right.mm_count) {
    throw Error(ErrorCode::NoJumpFound, "market-maker count constant on the bracket");
  }
  while (out.hi - out.lo > tol) {
    const double mid = 0.5 * (out.lo + out.hi);
    JumpProbe probe = metric(mid);
    if (probe.mm_count == out.left.mm_count) {
      out.lo = mid;
      out.left = std::move(probe);
    } else {
      out.hi = mid;
      out.right = std::move(probe);
    }
  }
  out.location = 0.5 * (out.lo + out.hi);
  return out;
}

std::vector<JumpLocation> find_jumps(const std::function<JumpProbe(double)>& metric,
                                     const Vector& grid, double tol) {
  std::vector<JumpLocation> out;
  if (grid.size() < 2) return out;
  std::size_t prev = metric(grid.front()).mm_count;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const std::size_t cur = metric(grid[i]).mm_count;
    if (cur != prev) out.push_back(locate_jump(metric, grid[i - 1], grid[i], tol));
    prev = cur;
  }
  return out;
}

std::function<JumpProbe(double)> diversification_metric(double rho,
                                                        const DiversificationModel& model,
                                                        const SolverConfig& cfg) {
  return [rho, model, cfg](double lambda) {
    const auto report = solve_greatest(make_diversification(lambda, rho, model), cfg);
    return JumpProbe{report.market_makers.size(), report.state.prices};
  };
}

ScenarioResult run_eba_sweep(const EbaSweepSpec& spec, const RunOptions& opt) {
  if (spec.fractions.empty()) throw Error(ErrorCode::InvalidConfig, "empty liquid-fraction grid");
  const EbaData data = read_eba_csv(spec.data);
  ScenarioResult out;
  out.rows.resize(spec.fractions.size());
  parallel_for(spec.fractions.size(), opt.workers, [&](std::size_t i) {
    auto& row = out.rows[i];
    row.scenario = "eba";
    row.grid_value = spec.fractions[i];
    solve_row(row, [&] { return ingest_eba(data, spec.fractions[i], spec.model); }, opt.solver);
  });
  return out;
}

ClearingProblem make_counterexample() {
  FinancialSystem sys;
  sys.liabilities = Matrix{{1.0, 0.0, 1.0}, {1.0, 0.0, 0.0}};
  sys.liquid = {0.0, 0.001};
  sys.holdings = Matrix{{2.35}, {2.0}};
  LinearImpactParams p;
  p.mu = {1.0};
  p.cov = Matrix(1, 1, 1.0);
  p.alpha0 = 1.0 / 15.0;
  p.bank_alpha = {1.0, 1.0};
  return ClearingProblem(std::move(sys), InverseDemandModel::linear(std::move(p)));
}

CounterexampleResult run_counterexample(const SolverConfig& cfg) {
  const ClearingProblem problem = make_counterexample();
  return {solve_greatest(problem, cfg), solve_least(problem, cfg),
          enumerate_configurations(problem, cfg)};
}

}  // namespace contagion
