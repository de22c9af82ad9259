#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "contagion/error.hpp"
#include "contagion/inverse_demand.hpp"
#include "contagion/matrix.hpp"

namespace contagion {

/// Static balance-sheet data for n banks and m illiquid assets.
///
/// `liabilities` is n x (n+1): column 0 holds each bank's external
/// obligation L_{i0}, column j >= 1 holds what bank i owes bank j-1
/// (0-based bank indices throughout the library). The external node
/// only receives payments.
struct FinancialSystem {
  Matrix liabilities;
  Vector liquid;
  Matrix holdings;

  std::size_t banks() const noexcept { return liquid.size(); }
  std::size_t assets() const noexcept { return holdings.cols(); }

  double interbank(std::size_t from, std::size_t to) const { return liabilities(from, to + 1); }
  double external(std::size_t bank) const { return liabilities(bank, 0); }
};

struct ValidationIssue {
  ErrorCode code;
  std::string detail;
};

/// Every invariant violation, not just the first. Empty means valid.
std::vector<ValidationIssue> validate(const FinancialSystem& system);

/// Throws Error (code of the first issue, message listing all) if invalid.
void require_valid(const FinancialSystem& system);

/// Pro-rata repayment weights. Row i of `interbank` plus `external[i]` sums
/// to 1 when total[i] > 0 and to 0 otherwise.
struct RelativeLiabilities {
  Matrix interbank;  // a_{ij}, n x n
  Vector external;   // a_{i0}
  Vector total;      // p̄ = L·1
};

RelativeLiabilities derive_relative_liabilities(const FinancialSystem& system);

/// (Aᵀp)_i: what bank i receives from the network when banks pay p.
Vector interbank_receipts(const RelativeLiabilities& rel, std::span<const double> payments);

/// x + Aᵀp - p̄, before taking the positive part.
Vector excess_liquidity(const FinancialSystem& system, const RelativeLiabilities& rel,
                        std::span<const double> payments);

struct LatticeBounds {
  Vector p_top, q_top, m_top;
  Vector p_bottom, q_bottom, m_bottom;
  /// Signed counterparts of m_top / m_bottom, the range of x + Aᵀp - p̄.
  Vector excess_top, excess_bottom;
};

LatticeBounds lattice_bounds(const FinancialSystem& system, const InverseDemandModel& idf);
LatticeBounds lattice_bounds(const FinancialSystem& system, const RelativeLiabilities& rel,
                             const InverseDemandModel& idf);

struct UniformDistribution {
  double low = 0.0;
  double high = 1.0;
};

struct RandomSystemParams {
  std::size_t banks = 0;
  std::size_t assets = 1;
  Vector liquid;          // x, length n
  Vector illiquid_units;  // units of every asset held by bank i, length n
  Vector external;        // L_{i0}, length n
  UniformDistribution interbank;
};

/// Off-diagonal L_{ij} drawn i.i.d. from `interbank` in row-major order
/// with MT19937-64 seeded by `seed`. Pure function of (params, seed).
FinancialSystem generate_random_system(const RandomSystemParams& params, std::uint64_t seed);

}  // namespace contagion
