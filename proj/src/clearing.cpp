#include "contagion/clearing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace contagion {

namespace {

using PriceFunction = std::function<Vector(std::span<const double>, std::span<const double>)>;

constexpr double kMonotoneSlack = 1e-12;

double lattice_slack(double scale, double slack) { return slack * std::max(1.0, std::abs(scale)); }

ClearingState step(const ClearingProblem& problem, const ClearingState& s,
                   const PriceFunction& price) {
  const auto& sys = problem.system();
  const auto& rel = problem.relative();
  const auto& b = problem.bounds();
  const std::size_t n = problem.banks();

  const Vector receipts = interbank_receipts(rel, s.payments);
  const Vector asset_value = multiply(sys.holdings, s.prices);

  ClearingState next;
  next.payments.resize(n);
  next.excess.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double value = sys.liquid[i] + asset_value[i] + receipts[i];
    next.payments[i] = std::clamp(std::min(rel.total[i], value), 0.0, rel.total[i]);
    next.excess[i] = std::clamp(sys.liquid[i] + receipts[i] - rel.total[i], b.excess_bottom[i],
                                b.excess_top[i]);
  }

  const Matrix gamma = liquidate(problem.rule(), sys, rel, s.payments, s.prices);
  next.prices = price(aggregate_liquidation(gamma), s.excess);
  for (std::size_t k = 0; k < next.prices.size(); ++k) {
    next.prices[k] = std::clamp(next.prices[k], 0.0, b.q_top[k]);
  }
  return next;
}

PriceFunction model_price(const ClearingProblem& problem) {
  return [&idf = problem.idf()](std::span<const double> theta, std::span<const double> excess) {
    return idf.price_from_excess(theta, excess);
  };
}

struct IterationResult {
  ClearingState state;
  std::size_t iterations = 0;
  bool converged = false;
  bool monotone = true;
};

// Picard iteration with the two-part stopping rule: the last step moved at
// most `tolerance` and the current state's own Φ-residual is within
// 10 * tolerance.
IterationResult iterate(const ClearingProblem& problem, ClearingState start,
                        const SolverConfig& cfg, const PriceFunction& price, bool descending) {
  IterationResult out{std::move(start)};
  double last_step = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    ClearingState next = step(problem, out.state, price);
    const double d = sup_distance(next, out.state);
    if (last_step <= cfg.tolerance && d <= 10.0 * cfg.tolerance) {
      out.iterations = it;
      out.converged = true;
      return out;
    }
    const bool ordered = descending ? dominates(out.state, next, kMonotoneSlack)
                                    : dominates(next, out.state, kMonotoneSlack);
    if (!ordered) out.monotone = false;
    last_step = d;
    out.state = std::move(next);
  }
  out.iterations = cfg.max_iterations;
  return out;
}

bool homogeneous(const Vector& alpha) {
  return std::adjacent_find(alpha.begin(), alpha.end(), std::not_equal_to<>()) == alpha.end();
}

double state_mass(const ClearingState& s) {
  return sum(s.payments) + sum(s.prices) + sum(s.excess);
}

}  // namespace

double sup_distance(const ClearingState& a, const ClearingState& b) {
  return std::max({sup_distance(a.payments, b.payments), sup_distance(a.prices, b.prices),
                   sup_distance(a.excess, b.excess)});
}

bool dominates(const ClearingState& a, const ClearingState& b, double slack) {
  auto ge = [slack](const Vector& x, const Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < y[i] - slack * std::max(1.0, std::abs(y[i]))) return false;
    }
    return true;
  };
  return ge(a.payments, b.payments) && ge(a.prices, b.prices) && ge(a.excess, b.excess);
}

ClearingProblem::ClearingProblem(FinancialSystem system, InverseDemandModel idf,
                                 LiquidationRule rule)
    : system_(std::move(system)), idf_(std::move(idf)), rule_(rule) {
  require_valid(system_);
  if (auto m = idf_.asset_count(); m && *m != system_.assets()) {
    throw Error(ErrorCode::DimensionMismatch, "inverse demand function has " + std::to_string(*m) +
                                                  " assets, system has " +
                                                  std::to_string(system_.assets()));
  }
  if (auto n = idf_.bank_count(); n && *n != system_.banks()) {
    throw Error(ErrorCode::DimensionMismatch, "inverse demand function has " + std::to_string(*n) +
                                                  " banks, system has " +
                                                  std::to_string(system_.banks()));
  }
  rel_ = derive_relative_liabilities(system_);
  bounds_ = lattice_bounds(system_, rel_, idf_);
}

ClearingProblem ClearingProblem::with_idf(InverseDemandModel idf) const {
  return ClearingProblem(system_, std::move(idf), rule_);
}

ClearingState ClearingProblem::top() const {
  return {bounds_.p_top, bounds_.q_top, bounds_.excess_top};
}

ClearingState ClearingProblem::bottom() const {
  return {bounds_.p_bottom, bounds_.q_bottom, bounds_.excess_bottom};
}

ClearingState ClearingProblem::state_at(std::span<const double> payments,
                                        std::span<const double> prices) const {
  return {Vector(payments.begin(), payments.end()), Vector(prices.begin(), prices.end()),
          excess_liquidity(system_, rel_, payments)};
}

bool ClearingProblem::in_lattice(const ClearingState& s, double slack) const {
  const auto& b = bounds_;
  if (s.payments.size() != banks() || s.excess.size() != banks() || s.prices.size() != assets()) {
    return false;
  }
  for (std::size_t i = 0; i < banks(); ++i) {
    if (!(s.payments[i] >= -lattice_slack(b.p_top[i], slack)) ||
        s.payments[i] > b.p_top[i] + lattice_slack(b.p_top[i], slack)) {
      return false;
    }
    if (!(s.excess[i] >= b.excess_bottom[i] - lattice_slack(b.excess_bottom[i], slack)) ||
        s.excess[i] > b.excess_top[i] + lattice_slack(b.excess_top[i], slack)) {
      return false;
    }
  }
  for (std::size_t k = 0; k < assets(); ++k) {
    if (!(s.prices[k] >= -lattice_slack(b.q_top[k], slack)) ||
        s.prices[k] > b.q_top[k] + lattice_slack(b.q_top[k], slack)) {
      return false;
    }
  }
  return true;
}

void validate(const SolverConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw Error(ErrorCode::InvalidConfig, "tolerance must be > 0");
  if (cfg.max_iterations < 1) throw Error(ErrorCode::InvalidConfig, "max_iterations must be >= 1");
  if (!(cfg.default_threshold >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "default threshold must be >= 0");
  }
}

std::string_view to_string(SolveDirection direction) {
  switch (direction) {
    case SolveDirection::FromTop: return "from_top";
    case SolveDirection::FromBottom: return "from_bottom";
    case SolveDirection::Enumeration: return "enumeration";
    case SolveDirection::Fda: return "fda";
  }
  return "unknown";
}

ClearingState apply_phi(const ClearingProblem& problem, const ClearingState& state) {
  if (!problem.in_lattice(state)) {
    throw Error(ErrorCode::StateOutOfLattice, "state lies outside the clearing lattice");
  }
  return step(problem, state, model_price(problem));
}

double phi_residual(const ClearingProblem& problem, const ClearingState& state) {
  return sup_distance(step(problem, state, model_price(problem)), state);
}

std::vector<std::size_t> default_set(const ClearingProblem& problem,
                                     std::span<const double> payments, double threshold) {
  std::vector<std::size_t> out;
  const auto& total = problem.relative().total;
  for (std::size_t i = 0; i < payments.size(); ++i) {
    if (payments[i] < total[i] - threshold) out.push_back(i);
  }
  return out;
}

SolveReport make_report(const ClearingProblem& problem, ClearingState state,
                        SolveDirection direction, std::size_t iterations, bool converged,
                        const SolverConfig& cfg) {
  SolveReport r;
  r.residual = phi_residual(problem, state);
  r.defaults = default_set(problem, state.payments, cfg.default_threshold);
  const auto* lin = problem.idf().linear_params();
  if (!lin && problem.idf().inner()) lin = problem.idf().inner()->linear_params();
  r.market_makers = lin ? market_makers_from_excess(state.excess, lin->rule)
                        : market_makers(state.liquidity());
  r.state = std::move(state);
  r.iterations = iterations;
  r.converged = converged;
  r.direction = direction;
  return r;
}

SolveReport solve_greatest(const ClearingProblem& problem, const SolverConfig& cfg) {
  validate(cfg);
  auto run = iterate(problem, problem.top(), cfg, model_price(problem), true);
  auto report = make_report(problem, std::move(run.state), SolveDirection::FromTop,
                            run.iterations, run.converged, cfg);
  report.monotone = run.monotone;
  return report;
}

SolveReport solve_least(const ClearingProblem& problem, const SolverConfig& cfg) {
  validate(cfg);
  auto run = iterate(problem, problem.bottom(), cfg, model_price(problem), false);
  auto report = make_report(problem, std::move(run.state), SolveDirection::FromBottom,
                            run.iterations, run.converged, cfg);
  report.monotone = run.monotone;
  if (report.converged && report.residual <= 10.0 * cfg.tolerance) return report;

  const bool enumerable = problem.idf().kind() != InverseDemandModel::Kind::ExponentialAggregate;
  const auto* lin = problem.idf().linear_params();
  const bool within_cap = !lin || homogeneous(lin->bank_alpha) ||
                          problem.banks() <= cfg.enumeration_cap;
  if (!enumerable || !within_cap) {
    report.converged = false;
    return report;
  }
  auto solutions = enumerate_solutions(problem, cfg);
  if (solutions.empty()) {
    report.converged = false;
    return report;
  }
  SolveReport least = std::move(solutions.back());
  least.iterations += report.iterations;
  least.enumeration_fallback = true;
  least.monotone = report.monotone;
  return least;
}

std::vector<ConfigurationOutcome> enumerate_configurations(const ClearingProblem& problem,
                                                           const SolverConfig& cfg) {
  validate(cfg);
  const std::size_t n = problem.banks();
  const auto& idf = problem.idf();
  const double q_slack = 10.0 * cfg.tolerance;

  struct Config {
    ConfigurationOutcome outcome;
    PriceFunction price;
    std::function<bool(const MarketMakerSet&)> consistent;
  };
  std::vector<Config> configs;

  if (idf.kind() == InverseDemandModel::Kind::FixedLiquidity) {
    Config c;
    c.outcome.assumed_set = market_makers(*idf.frozen_liquidity());
    c.outcome.assumed_count = c.outcome.assumed_set->size();
    c.price = model_price(problem);
    c.consistent = [](const MarketMakerSet&) { return true; };
    configs.push_back(std::move(c));
  } else if (const auto* lin = idf.linear_params()) {
    if (homogeneous(lin->bank_alpha)) {
      const double inv_alpha = n == 0 ? 0.0 : 1.0 / lin->bank_alpha.front();
      for (std::size_t k = 0; k <= n; ++k) {
        Config c;
        c.outcome.assumed_count = k;
        const double weight = static_cast<double>(k) * inv_alpha;
        c.price = [lin, weight](std::span<const double> theta, std::span<const double>) {
          return linear_price(*lin, theta, weight);
        };
        c.consistent = [k](const MarketMakerSet& realized) { return realized.size() == k; };
        configs.push_back(std::move(c));
      }
    } else {
      if (n > cfg.enumeration_cap) {
        throw Error(ErrorCode::EnumerationCapExceeded,
                    std::to_string(n) + " banks exceeds the enumeration cap of " +
                        std::to_string(cfg.enumeration_cap));
      }
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        MarketMakerSet set;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask & (std::uint64_t{1} << i)) set.members.push_back(i);
        }
        Config c;
        c.outcome.assumed_count = set.size();
        c.outcome.assumed_set = set;
        const double weight = market_maker_weight(*lin, set);
        c.price = [lin, weight](std::span<const double> theta, std::span<const double>) {
          return linear_price(*lin, theta, weight);
        };
        c.consistent = [set](const MarketMakerSet& realized) { return realized == set; };
        configs.push_back(std::move(c));
      }
    }
  } else {
    throw Error(ErrorCode::UnsupportedModel,
                "enumeration needs a linear or fixed-liquidity inverse demand function");
  }

  std::vector<ConfigurationOutcome> out;
  out.reserve(configs.size());
  for (auto& c : configs) {
    for (bool from_top : {true, false}) {
      auto run = iterate(problem, from_top ? problem.top() : problem.bottom(), cfg, c.price,
                         from_top);
      if (!run.converged) continue;
      auto report = make_report(problem, std::move(run.state), SolveDirection::Enumeration,
                                run.iterations, true, cfg);
      report.monotone = run.monotone;
      c.outcome.realized.push_back(report.market_makers);
      if (!c.consistent(report.market_makers) || report.residual > q_slack) continue;
      const bool duplicate = std::any_of(
          c.outcome.solutions.begin(), c.outcome.solutions.end(), [&](const SolveReport& s) {
            return sup_distance(s.state, report.state) <= 1e3 * cfg.tolerance;
          });
      if (!duplicate) c.outcome.solutions.push_back(std::move(report));
    }
    out.push_back(std::move(c.outcome));
  }
  return out;
}

std::vector<SolveReport> enumerate_solutions(const ClearingProblem& problem,
                                             const SolverConfig& cfg) {
  std::vector<SolveReport> all;
  for (auto& outcome : enumerate_configurations(problem, cfg)) {
    for (auto& s : outcome.solutions) {
      const bool duplicate = std::any_of(all.begin(), all.end(), [&](const SolveReport& t) {
        return sup_distance(s.state, t.state) <= 1e3 * cfg.tolerance;
      });
      if (!duplicate) all.push_back(std::move(s));
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const SolveReport& a, const SolveReport& b) {
    return state_mass(a.state) > state_mass(b.state);
  });
  return all;
}

InverseDemandModel fixed_liquidity_benchmark(const InverseDemandModel& idf, std::size_t banks) {
  return InverseDemandModel::fixed(idf, Vector(banks, 1.0));
}

FixedVsEndogenous compare_fixed_vs_endogenous(const ClearingProblem& problem,
                                              const SolverConfig& cfg) {
  FixedVsEndogenous out;
  out.endogenous = solve_greatest(problem, cfg);
  const auto benchmark = problem.with_idf(fixed_liquidity_benchmark(problem.idf(), problem.banks()));
  out.benchmark = solve_greatest(benchmark, cfg);
  out.price_gap.resize(problem.assets());
  for (std::size_t k = 0; k < problem.assets(); ++k) {
    out.price_gap[k] = out.benchmark.state.prices[k] - out.endogenous.state.prices[k];
  }
  out.default_gap = static_cast<long>(out.endogenous.defaults.size()) -
                    static_cast<long>(out.benchmark.defaults.size());
  return out;
}

}  // namespace contagion
