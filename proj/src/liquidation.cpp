#include "contagion/liquidation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace contagion {

namespace {

// Payments are produced by clamping, so anything beyond rounding noise is a caller bug.
constexpr double kLatticeSlack = 1e-9;

void check_payments(const RelativeLiabilities& rel, std::span<const double> payments) {
  if (payments.size() != rel.total.size()) {
    throw Error(ErrorCode::DimensionMismatch, "payment vector has wrong length");
  }
  for (std::size_t i = 0; i < payments.size(); ++i) {
    const double slack = kLatticeSlack * std::max(1.0, rel.total[i]);
    if (!(payments[i] >= -slack) || payments[i] > rel.total[i] + slack) {
      throw Error(ErrorCode::PaymentOutOfLattice,
                  "p_" + std::to_string(i) + " = " + std::to_string(payments[i]) +
                      " outside [0, " + std::to_string(rel.total[i]) + "]");
    }
  }
}

}  // namespace

std::string_view to_string(LiquidationRule rule) {
  switch (rule) {
    case LiquidationRule::Proportional: return "proportional";
  }
  return "unknown";
}

LiquidationRule parse_liquidation_rule(std::string_view name) {
  if (name == "proportional") return LiquidationRule::Proportional;
  throw Error(ErrorCode::InvalidConfig, "unknown liquidation rule '" + std::string(name) + "'");
}

Vector shortfall(const FinancialSystem& system, const RelativeLiabilities& rel,
                 std::span<const double> payments) {
  check_payments(rel, payments);
  Vector e = excess_liquidity(system, rel, payments);
  for (auto& v : e) v = std::max(0.0, -v);
  return e;
}

Matrix liquidate_proportional(const FinancialSystem& system, const RelativeLiabilities& rel,
                              std::span<const double> payments, std::span<const double> prices) {
  const std::size_t n = system.banks();
  const std::size_t m = system.assets();
  if (prices.size() != m) throw Error(ErrorCode::DimensionMismatch, "price vector has wrong length");
  for (double q : prices) {
    if (!(q >= 0.0)) throw Error(ErrorCode::PriceNegative, "prices must be >= 0");
  }
  const Vector need = shortfall(system, rel, payments);

  Matrix gamma(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    if (need[i] <= 0.0) continue;
    auto s = system.holdings.row(i);
    const double value = dot(prices, s);
    auto out = gamma.row(i);
    if (value <= 0.0) {
      std::copy(s.begin(), s.end(), out.begin());
      continue;
    }
    const double fraction = std::min(value, need[i]) / value;
    for (std::size_t k = 0; k < m; ++k) out[k] = std::min(s[k], s[k] * fraction);
  }
  return gamma;
}

Matrix liquidate(LiquidationRule rule, const FinancialSystem& system,
                 const RelativeLiabilities& rel, std::span<const double> payments,
                 std::span<const double> prices) {
  switch (rule) {
    case LiquidationRule::Proportional:
      return liquidate_proportional(system, rel, payments, prices);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown liquidation rule");
}

Vector aggregate_liquidation(const Matrix& liquidations) {
  Vector theta(liquidations.cols(), 0.0);
  for (std::size_t i = 0; i < liquidations.rows(); ++i) {
    auto row = liquidations.row(i);
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] += row[k];
  }
  return theta;
}

bool check_minimal_liquidation(const LiquidationFunction& rule, const FinancialSystem& system,
                               const RelativeLiabilities& rel, std::span<const double> payments,
                               std::span<const double> prices) {
  const Matrix gamma = rule(system, rel, payments, prices);
  const Vector need = shortfall(system, rel, payments);
  for (std::size_t i = 0; i < system.banks(); ++i) {
    const double raised = dot(prices, gamma.row(i));
    const double target = std::min(dot(prices, system.holdings.row(i)), need[i]);
    if (std::abs(raised - target) > kMinimalLiquidationTolerance) return false;
  }
  return true;
}

bool check_minimal_liquidation(LiquidationRule rule, const FinancialSystem& system,
                               const RelativeLiabilities& rel, std::span<const double> payments,
                               std::span<const double> prices) {
  return check_minimal_liquidation(
      [rule](const FinancialSystem& s, const RelativeLiabilities& r, std::span<const double> p,
             std::span<const double> q) { return liquidate(rule, s, r, p, q); },
      system, rel, payments, prices);
}

}  // namespace contagion
