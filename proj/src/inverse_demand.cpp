#include "contagion/inverse_demand.hpp"

#include <algorithm>
#include <cmath>

#include "contagion/error.hpp"
#include "contagion/random.hpp"

namespace contagion {

namespace {

void check_linear(const LinearImpactParams& p, bool require_nonnegative_cov) {
  const std::size_t m = p.mu.size();
  if (m == 0) throw Error(ErrorCode::InvalidConfig, "linear model needs at least one asset");
  if (p.cov.rows() != m || p.cov.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "covariance must be m x m");
  }
  for (double v : p.mu) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteEntry, "mu");
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      const double c = p.cov(k, l);
      if (!std::isfinite(c)) throw Error(ErrorCode::NonFiniteEntry, "covariance");
      if (c != p.cov(l, k)) throw Error(ErrorCode::InvalidConfig, "covariance must be symmetric");
      if (require_nonnegative_cov && c < 0.0) {
        throw Error(ErrorCode::NegativeEntry,
                    "covariance entries must be nonnegative for a monotone inverse demand");
      }
    }
  }
  if (!(p.alpha0 > 0.0) || !std::isfinite(p.alpha0)) {
    throw Error(ErrorCode::InvalidConfig, "alpha0 must be positive");
  }
  for (double a : p.bank_alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw Error(ErrorCode::InvalidConfig, "bank risk aversions must be positive");
    }
  }
}

void check_theta(std::span<const double> theta) {
  for (double t : theta) {
    if (t < 0.0 || std::isnan(t)) throw Error(ErrorCode::NegativeLiquidation, "theta must be >= 0");
  }
}

Vector exponential_price(std::span<const double> theta, double total_liquidity) {
  Vector q(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (total_liquidity > 0.0) {
      q[k] = std::exp(-theta[k] / total_liquidity);
    } else {
      q[k] = theta[k] > 0.0 ? 0.0 : 1.0;
    }
  }
  return q;
}

}  // namespace

bool MarketMakerSet::contains(std::size_t bank) const {
  return std::binary_search(members.begin(), members.end(), bank);
}

MarketMakerSet market_makers(std::span<const double> liquidity) {
  MarketMakerSet out;
  for (std::size_t i = 0; i < liquidity.size(); ++i) {
    if (liquidity[i] > kMarketMakerEpsilon) out.members.push_back(i);
  }
  return out;
}

MarketMakerSet market_makers_from_excess(std::span<const double> excess, MarketMakerRule rule) {
  MarketMakerSet out;
  for (std::size_t i = 0; i < excess.size(); ++i) {
    const bool member = rule == MarketMakerRule::NonLiquidating ? excess[i] >= -kMarketMakerEpsilon
                                                                : excess[i] > kMarketMakerEpsilon;
    if (member) out.members.push_back(i);
  }
  return out;
}

InverseDemandModel InverseDemandModel::linear(LinearImpactParams params) {
  check_linear(params, true);
  return InverseDemandModel(std::move(params));
}

InverseDemandModel InverseDemandModel::linear_permissive(LinearImpactParams params) {
  check_linear(params, false);
  return InverseDemandModel(std::move(params));
}

InverseDemandModel InverseDemandModel::exponential() { return InverseDemandModel(Exponential{}); }

InverseDemandModel InverseDemandModel::fixed(InverseDemandModel inner, Vector frozen_liquidity) {
  for (double v : frozen_liquidity) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteEntry, "frozen liquidity");
    if (v < 0.0) throw Error(ErrorCode::NegativeEntry, "frozen liquidity must be >= 0");
  }
  if (auto n = inner.bank_count(); n && *n != frozen_liquidity.size()) {
    throw Error(ErrorCode::DimensionMismatch, "frozen liquidity length must match bank count");
  }
  return InverseDemandModel(
      Frozen{std::make_shared<const InverseDemandModel>(std::move(inner)), std::move(frozen_liquidity)});
}

InverseDemandModel::Kind InverseDemandModel::kind() const noexcept {
  switch (impl_.index()) {
    case 0: return Kind::LiquidityAdjustedLinear;
    case 1: return Kind::ExponentialAggregate;
    default: return Kind::FixedLiquidity;
  }
}

const LinearImpactParams* InverseDemandModel::linear_params() const noexcept {
  return std::get_if<LinearImpactParams>(&impl_);
}

const InverseDemandModel* InverseDemandModel::inner() const noexcept {
  const auto* f = std::get_if<Frozen>(&impl_);
  return f ? f->inner.get() : nullptr;
}

const Vector* InverseDemandModel::frozen_liquidity() const noexcept {
  const auto* f = std::get_if<Frozen>(&impl_);
  return f ? &f->liquidity : nullptr;
}

std::optional<std::size_t> InverseDemandModel::asset_count() const {
  if (const auto* lin = linear_params()) return lin->mu.size();
  if (const auto* f = std::get_if<Frozen>(&impl_)) return f->inner->asset_count();
  return std::nullopt;
}

std::optional<std::size_t> InverseDemandModel::bank_count() const {
  if (const auto* lin = linear_params()) return lin->bank_alpha.size();
  if (const auto* f = std::get_if<Frozen>(&impl_)) return f->liquidity.size();
  return std::nullopt;
}

Vector linear_price(const LinearImpactParams& params, std::span<const double> theta,
                    double weight) {
  const double scale = 1.0 / (1.0 / params.alpha0 + weight);
  Vector impact = multiply(params.cov, theta);
  Vector q(params.mu.size());
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = std::max(0.0, params.mu[k] - scale * impact[k]);
  return q;
}

double market_maker_weight(const LinearImpactParams& params, const MarketMakerSet& makers) {
  double w = 0.0;
  for (std::size_t i : makers.members) w += 1.0 / params.bank_alpha.at(i);
  return w;
}

Vector InverseDemandModel::price(std::span<const double> theta,
                                 std::span<const double> liquidity) const {
  check_theta(theta);
  for (double v : liquidity) {
    if (v < 0.0) throw Error(ErrorCode::NegativeEntry, "liquidity must be >= 0");
  }
  if (const auto* lin = linear_params()) {
    if (theta.size() != lin->mu.size() || liquidity.size() != lin->bank_alpha.size()) {
      throw Error(ErrorCode::DimensionMismatch, "price arguments do not match model");
    }
    return linear_price(*lin, theta, market_maker_weight(*lin, market_makers(liquidity)));
  }
  if (const auto* f = std::get_if<Frozen>(&impl_)) return f->inner->price(theta, f->liquidity);
  return exponential_price(theta, sum(liquidity));
}

Vector InverseDemandModel::price_from_excess(std::span<const double> theta,
                                             std::span<const double> excess) const {
  check_theta(theta);
  if (const auto* lin = linear_params()) {
    if (theta.size() != lin->mu.size() || excess.size() != lin->bank_alpha.size()) {
      throw Error(ErrorCode::DimensionMismatch, "price arguments do not match model");
    }
    return linear_price(*lin, theta,
                        market_maker_weight(*lin, market_makers_from_excess(excess, lin->rule)));
  }
  if (const auto* f = std::get_if<Frozen>(&impl_)) return f->inner->price(theta, f->liquidity);
  return exponential_price(theta, sum(positive_part(excess)));
}

bool check_idf_monotonicity(const InverseDemandModel& model, std::size_t samples,
                            std::uint64_t seed, ModelDims dims) {
  const std::size_t m = model.asset_count().value_or(dims.assets);
  const std::size_t n = model.bank_count().value_or(dims.banks);
  constexpr double kSlack = 1e-12;

  // Liquidation scale large enough to move prices but mostly above the floor.
  double theta_scale = 1.0;
  const LinearImpactParams* lin = model.linear_params();
  if (!lin && model.inner()) lin = model.inner()->linear_params();
  if (lin) {
    double row_max = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      double r = 0.0;
      for (std::size_t l = 0; l < m; ++l) r += std::abs(lin->cov(k, l));
      row_max = std::max(row_max, r);
    }
    const double mu_max = *std::max_element(lin->mu.begin(), lin->mu.end());
    if (row_max > 0.0 && mu_max > 0.0) theta_scale = mu_max / (lin->alpha0 * row_max);
  }

  Rng rng(seed);
  auto draw_liquidity = [&](Vector& v) {
    for (auto& x : v) x = uniform01(rng) < 0.3 ? 0.0 : uniform(rng, 0.0, 2.0);
  };

  Vector theta_lo(m), theta_hi(m), liq_lo(n), liq_hi(n);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < m; ++k) {
      theta_lo[k] = uniform(rng, 0.0, theta_scale);
      // Bump only some coordinates so cross-impacts are exercised one at a time.
      theta_hi[k] = theta_lo[k] + (uniform01(rng) < 0.5 ? uniform(rng, 0.0, theta_scale) : 0.0);
    }
    draw_liquidity(liq_hi);
    for (std::size_t i = 0; i < n; ++i) liq_lo[i] = uniform01(rng) < 0.5 ? liq_hi[i] * uniform01(rng) : liq_hi[i];

    const Vector q_hi_theta = model.price(theta_hi, liq_hi);
    const Vector q_lo_theta = model.price(theta_lo, liq_hi);
    for (std::size_t k = 0; k < m; ++k) {
      if (q_hi_theta[k] > q_lo_theta[k] + kSlack) return false;
    }
    const Vector q_lo_liq = model.price(theta_lo, liq_lo);
    for (std::size_t k = 0; k < m; ++k) {
      if (q_lo_liq[k] > q_lo_theta[k] + kSlack) return false;
    }

    // The same ordering must hold for signed excess liquidity.
    Vector ex_hi(n), ex_lo(n);
    for (std::size_t i = 0; i < n; ++i) {
      ex_hi[i] = uniform(rng, -1.0, 1.0);
      ex_lo[i] = ex_hi[i] - (uniform01(rng) < 0.5 ? uniform(rng, 0.0, 1.0) : 0.0);
    }
    const Vector qe_hi = model.price_from_excess(theta_lo, ex_hi);
    const Vector qe_lo = model.price_from_excess(theta_lo, ex_lo);
    for (std::size_t k = 0; k < m; ++k) {
      if (qe_lo[k] > qe_hi[k] + kSlack) return false;
    }
  }
  return true;
}

}  // namespace contagion
