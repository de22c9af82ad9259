#include "contagion/fda.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace contagion {

namespace {

ClearingState restricted_step(const ClearingProblem& problem, const std::vector<bool>& in_d,
                              const ClearingState& s) {
  const auto& sys = problem.system();
  const auto& rel = problem.relative();
  const auto& b = problem.bounds();
  const std::size_t n = problem.banks();
  const std::size_t m = problem.assets();

  const Vector receipts = interbank_receipts(rel, s.payments);
  const Vector asset_value = multiply(sys.holdings, s.prices);

  ClearingState next;
  next.payments.resize(n);
  next.excess.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    next.payments[i] =
        in_d[i] ? std::clamp(sys.liquid[i] + asset_value[i] + receipts[i], 0.0, rel.total[i])
                : rel.total[i];
    next.excess[i] = std::clamp(sys.liquid[i] + receipts[i] - rel.total[i], b.excess_bottom[i],
                                b.excess_top[i]);
  }

  // Solvent banks liquidate as if paying in full; insolvent ones dump s_i.
  Vector solvent_payments = s.payments;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_d[i]) solvent_payments[i] = rel.total[i];
  }
  const Matrix gamma = liquidate(problem.rule(), sys, rel, solvent_payments, s.prices);
  Vector theta(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      theta[k] += in_d[i] ? sys.holdings(i, k) : std::min(sys.holdings(i, k), gamma(i, k));
    }
  }
  next.prices = problem.idf().price_from_excess(theta, s.excess);
  for (std::size_t k = 0; k < m; ++k) next.prices[k] = std::clamp(next.prices[k], 0.0, b.q_top[k]);
  return next;
}

bool subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

IndexSet insolvency_set(const ClearingProblem& problem, const ClearingState& state,
                        double threshold) {
  const auto& sys = problem.system();
  const auto& rel = problem.relative();
  const Vector receipts = interbank_receipts(rel, state.payments);
  const Vector asset_value = multiply(sys.holdings, state.prices);
  IndexSet out;
  for (std::size_t i = 0; i < problem.banks(); ++i) {
    if (sys.liquid[i] + asset_value[i] + receipts[i] - rel.total[i] < -threshold) out.push_back(i);
  }
  return out;
}

InnerSolution inner_fixed_point(const ClearingProblem& problem, const IndexSet& insolvent,
                                const SolverConfig& cfg) {
  validate(cfg);
  std::vector<bool> in_d(problem.banks(), false);
  for (auto i : insolvent) {
    if (i >= problem.banks()) {
      throw Error(ErrorCode::DimensionMismatch, "insolvent bank index " + std::to_string(i) +
                                                    " out of range");
    }
    in_d[i] = true;
  }

  InnerSolution out{problem.top()};
  double last_step = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    ClearingState next = restricted_step(problem, in_d, out.state);
    const double d = sup_distance(next, out.state);
    if (last_step <= cfg.tolerance && d <= 10.0 * cfg.tolerance) {
      out.iterations = it;
      out.converged = true;
      return out;
    }
    last_step = d;
    out.state = std::move(next);
  }
  out.iterations = cfg.max_iterations;
  return out;
}

FdaResult solve_fda(const ClearingProblem& problem, const SolverConfig& cfg) {
  validate(cfg);
  FdaResult result;
  ClearingState current = problem.top();
  IndexSet previous;
  std::size_t total_iterations = 0;
  bool converged = true;
  bool monotone = true;

  for (std::size_t k = 1; k <= problem.banks() + 1; ++k) {
    IndexSet d = insolvency_set(problem, current, cfg.default_threshold);
    result.trace.outer_iterations = k;
    if (k >= 2) {
      if (!subset(previous, d)) {
        throw Error(ErrorCode::NestednessViolated,
                    "insolvency set shrank in round " + std::to_string(k));
      }
      if (d == previous) break;
    }
    auto inner = inner_fixed_point(problem, d, cfg);
    total_iterations += inner.iterations;
    converged = converged && inner.converged;
    if (!dominates(current, inner.state, 1e-9)) monotone = false;
    result.trace.rounds.push_back({d, inner.state, inner.iterations, inner.converged});
    current = std::move(inner.state);
    previous = std::move(d);
  }

  result.report = make_report(problem, std::move(current), SolveDirection::Fda, total_iterations,
                              converged, cfg);
  result.report.monotone = monotone;
  return result;
}

}  // namespace contagion
