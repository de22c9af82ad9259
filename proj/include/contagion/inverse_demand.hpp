#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "contagion/matrix.hpp"

namespace contagion {

/// Liquidity at or below this is treated as zero when deciding membership.
inline constexpr double kMarketMakerEpsilon = 1e-12;

/// How a bank's signed excess liquidity e_i = x_i + (Aᵀp)_i - p̄_i decides
/// whether it acts as a market maker.
///
/// NonLiquidating counts every bank that does not need to sell assets
/// (e_i >= 0, up to kMarketMakerEpsilon), so a bank whose incoming payments
/// exactly cover its obligations still absorbs fire sales. PositiveLiquidity
/// requires a strict surplus (e_i > kMarketMakerEpsilon). The two differ only
/// on the boundary e_i = 0.
enum class MarketMakerRule { NonLiquidating, PositiveLiquidity };

struct MarketMakerSet {
  std::vector<std::size_t> members;  // sorted bank indices

  std::size_t size() const noexcept { return members.size(); }
  bool empty() const noexcept { return members.empty(); }
  bool contains(std::size_t bank) const;
  friend bool operator==(const MarketMakerSet&, const MarketMakerSet&) = default;
};

/// Banks with M_i > kMarketMakerEpsilon, for a nonnegative liquidity vector.
MarketMakerSet market_makers(std::span<const double> liquidity);

MarketMakerSet market_makers_from_excess(std::span<const double> excess, MarketMakerRule rule);

/// F(θ, M) = max(0, μ - (1/α0 + Σ_{i∈𝓜} 1/α_i)^{-1} C θ)
struct LinearImpactParams {
  Vector mu;
  Matrix cov;
  double alpha0 = 1.0;
  Vector bank_alpha;
  MarketMakerRule rule = MarketMakerRule::NonLiquidating;
};

class InverseDemandModel {
 public:
  enum class Kind { LiquidityAdjustedLinear, ExponentialAggregate, FixedLiquidity };

  /// Enforces the full invariant set, including C >= 0 elementwise.
  static InverseDemandModel linear(LinearImpactParams params);
  /// Same as linear() but admits negatively correlated assets. Such models
  /// break monotonicity in θ and are only useful for studying that failure.
  static InverseDemandModel linear_permissive(LinearImpactParams params);
  /// F_k(θ, M) = exp(-θ_k / Σ_i M_i); at Σ M = 0 the pointwise limit is used.
  static InverseDemandModel exponential();
  /// Evaluates `inner` at a frozen liquidity vector regardless of the state.
  static InverseDemandModel fixed(InverseDemandModel inner, Vector frozen_liquidity);

  Kind kind() const noexcept;
  const LinearImpactParams* linear_params() const noexcept;
  const InverseDemandModel* inner() const noexcept;
  const Vector* frozen_liquidity() const noexcept;

  /// Number of assets / banks the model is tied to, if any.
  std::optional<std::size_t> asset_count() const;
  std::optional<std::size_t> bank_count() const;

  /// Price for nonnegative liquidity M; membership uses M_i > kMarketMakerEpsilon.
  Vector price(std::span<const double> theta, std::span<const double> liquidity) const;

  /// Price for signed excess liquidity; membership follows the model's rule.
  /// This is the evaluation used by the clearing map.
  Vector price_from_excess(std::span<const double> theta, std::span<const double> excess) const;

 private:
  struct Exponential {};
  struct Frozen {
    std::shared_ptr<const InverseDemandModel> inner;
    Vector liquidity;
  };

  explicit InverseDemandModel(std::variant<LinearImpactParams, Exponential, Frozen> impl)
      : impl_(std::move(impl)) {}

  std::variant<LinearImpactParams, Exponential, Frozen> impl_;
};

/// Linear price with an explicit market-maker weight Σ_{i∈𝓜} 1/α_i.
Vector linear_price(const LinearImpactParams& params, std::span<const double> theta,
                    double market_maker_weight);

double market_maker_weight(const LinearImpactParams& params, const MarketMakerSet& makers);

struct ModelDims {
  std::size_t assets = 1;
  std::size_t banks = 2;
};

/// Randomized check of non-increase in θ and non-decrease in liquidity.
/// Dimensions come from the model when it has them, otherwise from `dims`.
bool check_idf_monotonicity(const InverseDemandModel& model, std::size_t samples,
                            std::uint64_t seed, ModelDims dims = {});

}  // namespace contagion
