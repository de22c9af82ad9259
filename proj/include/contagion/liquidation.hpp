#pragma once

#include <functional>
#include <span>
#include <string_view>

#include "contagion/matrix.hpp"
#include "contagion/network.hpp"

namespace contagion {

enum class LiquidationRule { Proportional };

std::string_view to_string(LiquidationRule rule);
LiquidationRule parse_liquidation_rule(std::string_view name);

/// Tolerance for the minimal-liquidation identity qᵀγ_i = (qᵀs_i) ∧ shortfall_i.
inline constexpr double kMinimalLiquidationTolerance = 1e-10;

/// (p̄_i - x_i - Σ_j a_{ji} p_j)⁺ in cash units. Throws PaymentOutOfLattice
/// unless 0 <= p <= p̄.
Vector shortfall(const FinancialSystem& system, const RelativeLiabilities& rel,
                 std::span<const double> payments);

/// Sells units of the whole portfolio: γ_i = s_i · min(qᵀs_i, shortfall_i) / qᵀs_i.
/// A bank with a shortfall but a worthless portfolio (qᵀs_i = 0) dumps all of
/// s_i, which is the limit of the rule as q ↓ 0.
Matrix liquidate_proportional(const FinancialSystem& system, const RelativeLiabilities& rel,
                              std::span<const double> payments, std::span<const double> prices);

Matrix liquidate(LiquidationRule rule, const FinancialSystem& system,
                 const RelativeLiabilities& rel, std::span<const double> payments,
                 std::span<const double> prices);

/// Σ_i γ_i, the aggregate liquidation θ handed to the inverse demand function.
Vector aggregate_liquidation(const Matrix& liquidations);

using LiquidationFunction = std::function<Matrix(const FinancialSystem&, const RelativeLiabilities&,
                                                 std::span<const double>, std::span<const double>)>;

bool check_minimal_liquidation(const LiquidationFunction& rule, const FinancialSystem& system,
                               const RelativeLiabilities& rel, std::span<const double> payments,
                               std::span<const double> prices);
bool check_minimal_liquidation(LiquidationRule rule, const FinancialSystem& system,
                               const RelativeLiabilities& rel, std::span<const double> payments,
                               std::span<const double> prices);

}  // namespace contagion
