#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "contagion/inverse_demand.hpp"
#include "contagion/liquidation.hpp"
#include "contagion/network.hpp"

namespace contagion {

/// A point (p, q, M) of the clearing lattice.
///
/// Liquidity is stored signed: `excess` is x + Aᵀp - p̄ before the positive
/// part, and M = excess⁺ is available through liquidity(). Keeping the sign
/// lets the inverse demand function tell a bank with exactly zero surplus
/// apart from one that must liquidate.
struct ClearingState {
  Vector payments;
  Vector prices;
  Vector excess;

  Vector liquidity() const { return positive_part(excess); }
};

double sup_distance(const ClearingState& a, const ClearingState& b);
/// a >= b componentwise up to `slack`.
bool dominates(const ClearingState& a, const ClearingState& b, double slack = 0.0);

/// System, relative liabilities, liquidation rule and inverse demand bundled
/// together with their lattice bounds. Immutable after construction.
class ClearingProblem {
 public:
  ClearingProblem(FinancialSystem system, InverseDemandModel idf,
                  LiquidationRule rule = LiquidationRule::Proportional);

  const FinancialSystem& system() const noexcept { return system_; }
  const RelativeLiabilities& relative() const noexcept { return rel_; }
  const InverseDemandModel& idf() const noexcept { return idf_; }
  LiquidationRule rule() const noexcept { return rule_; }
  const LatticeBounds& bounds() const noexcept { return bounds_; }
  std::size_t banks() const noexcept { return system_.banks(); }
  std::size_t assets() const noexcept { return system_.assets(); }

  ClearingProblem with_idf(InverseDemandModel idf) const;

  ClearingState top() const;
  ClearingState bottom() const;
  /// State with the given payments and prices and the liquidity they imply.
  ClearingState state_at(std::span<const double> payments, std::span<const double> prices) const;

  bool in_lattice(const ClearingState& state, double slack = 1e-9) const;

 private:
  FinancialSystem system_;
  RelativeLiabilities rel_;
  InverseDemandModel idf_;
  LiquidationRule rule_;
  LatticeBounds bounds_;
};

struct SolverConfig {
  double tolerance = 1e-10;
  std::size_t max_iterations = 10000;
  /// Bank i is in default when p_i < p̄_i - default_threshold.
  double default_threshold = 1e-8;
  /// Largest n for which 2ⁿ market-maker sets may be enumerated.
  std::size_t enumeration_cap = 20;
};

void validate(const SolverConfig& cfg);

enum class SolveDirection { FromTop, FromBottom, Enumeration, Fda };
std::string_view to_string(SolveDirection direction);

struct SolveReport {
  ClearingState state;
  std::size_t iterations = 0;
  /// ‖Φ(state) - state‖∞ under the problem's own inverse demand function.
  double residual = 0.0;
  bool converged = false;
  std::vector<std::size_t> defaults;
  MarketMakerSet market_makers;
  SolveDirection direction = SolveDirection::FromTop;
  /// Iterates moved monotonically (non-increasing from the top,
  /// non-decreasing from the bottom) at every step.
  bool monotone = true;
  /// solve_least fell back to enumeration after the bottom iteration failed.
  bool enumeration_fallback = false;
};

/// One Jacobi step of the clearing map:
///   p' = p̄ ∧ (x + Sq + Aᵀp),  q' = F(Σ_i γ_i(p, q), M),  e' = x + Aᵀp - p̄,
/// all evaluated from the input state and clamped to the lattice.
ClearingState apply_phi(const ClearingProblem& problem, const ClearingState& state);

double phi_residual(const ClearingProblem& problem, const ClearingState& state);

std::vector<std::size_t> default_set(const ClearingProblem& problem,
                                     std::span<const double> payments, double threshold);

/// Builds a report for `state` (residual, defaults, market makers).
SolveReport make_report(const ClearingProblem& problem, ClearingState state, SolveDirection direction,
                        std::size_t iterations, bool converged, const SolverConfig& cfg);

/// Picard iteration from the lattice top. Assumes the inverse demand function
/// is monotone; the caller is responsible for that.
SolveReport solve_greatest(const ClearingProblem& problem, const SolverConfig& cfg = {});

/// Picard iteration from the lattice bottom, falling back to enumeration when
/// the iteration does not reach a fixed point and the model allows it.
SolveReport solve_least(const ClearingProblem& problem, const SolverConfig& cfg = {});

/// Outcome of freezing the market-maker configuration and solving.
struct ConfigurationOutcome {
  /// Assumed market makers. For homogeneous bank risk aversions only the
  /// count matters and `assumed_set` is empty.
  std::size_t assumed_count = 0;
  std::optional<MarketMakerSet> assumed_set;
  /// Self-consistent fixed points found for this configuration (0, 1 or 2).
  std::vector<SolveReport> solutions;
  /// Market makers realized by the frozen-system solutions, consistent or not.
  std::vector<MarketMakerSet> realized;
};

/// Enumerates market-maker configurations of a linear model (or the single
/// configuration of a fixed-liquidity model), solving each frozen system
/// from its top and bottom.
std::vector<ConfigurationOutcome> enumerate_configurations(const ClearingProblem& problem,
                                                           const SolverConfig& cfg = {});

/// All self-consistent clearing solutions found by enumeration, deduplicated
/// and sorted from the lattice top down (the first is the greatest, the last
/// the least).
std::vector<SolveReport> enumerate_solutions(const ClearingProblem& problem,
                                             const SolverConfig& cfg = {});

struct FixedVsEndogenous {
  SolveReport endogenous;
  SolveReport benchmark;
  /// benchmark price minus endogenous price, per asset.
  Vector price_gap;
  /// endogenous defaults minus benchmark defaults.
  long default_gap = 0;
};

/// Benchmark: the same inverse demand function frozen at M = 1 for every bank.
FixedVsEndogenous compare_fixed_vs_endogenous(const ClearingProblem& problem,
                                              const SolverConfig& cfg = {});

InverseDemandModel fixed_liquidity_benchmark(const InverseDemandModel& idf, std::size_t banks);

}  // namespace contagion
