#pragma once

#include <cstddef>
#include <vector>

#include "contagion/clearing.hpp"

namespace contagion {

using IndexSet = std::vector<std::size_t>;

/// Banks whose assets at `state` fall short of their obligations by more than
/// `threshold`: x_i + (Sq)_i + (Aᵀp)_i - p̄_i < -threshold.
IndexSet insolvency_set(const ClearingProblem& problem, const ClearingState& state,
                        double threshold);

struct InnerSolution {
  ClearingState state;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Maximal fixed point of the system restricted to insolvency set D: banks in
/// D pay their asset value and dump their whole portfolio, the rest pay p̄ and
/// liquidate by the problem's rule. Picard iteration from the lattice top.
InnerSolution inner_fixed_point(const ClearingProblem& problem, const IndexSet& insolvent,
                                const SolverConfig& cfg = {});

struct FdaRound {
  IndexSet insolvent;
  ClearingState state;
  std::size_t inner_iterations = 0;
  bool inner_converged = false;
};

struct FdaTrace {
  std::vector<FdaRound> rounds;
  /// Insolvency sets computed, counting the final repeat that stops the loop.
  std::size_t outer_iterations = 0;
};

struct FdaResult {
  SolveReport report;
  FdaTrace trace;
};

/// Greatest clearing solution via the fictitious default algorithm. Throws
/// NestednessViolated if an insolvency set ever shrinks.
FdaResult solve_fda(const ClearingProblem& problem, const SolverConfig& cfg = {});

}  // namespace contagion
