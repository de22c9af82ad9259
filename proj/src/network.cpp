#include "contagion/network.hpp"

#include <cmath>
#include <sstream>

#include "contagion/random.hpp"

namespace contagion {

namespace {

void check_entries(std::span<const double> values, const std::string& what,
                   std::vector<ValidationIssue>& issues) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (!std::isfinite(v)) {
      issues.push_back({ErrorCode::NonFiniteEntry, what + " entry " + std::to_string(k)});
    } else if (v < 0.0) {
      issues.push_back({ErrorCode::NegativeEntry, what + " entry " + std::to_string(k) + " = " +
                                                      std::to_string(v)});
    }
  }
}

}  // namespace

std::vector<ValidationIssue> validate(const FinancialSystem& system) {
  std::vector<ValidationIssue> issues;
  const std::size_t n = system.liquid.size();

  if (system.liabilities.rows() != n || system.liabilities.cols() != n + 1) {
    issues.push_back({ErrorCode::DimensionMismatch,
                      "liabilities is " + std::to_string(system.liabilities.rows()) + "x" +
                          std::to_string(system.liabilities.cols()) + ", expected " +
                          std::to_string(n) + "x" + std::to_string(n + 1)});
  }
  if (system.holdings.rows() != n) {
    issues.push_back({ErrorCode::DimensionMismatch,
                      "holdings has " + std::to_string(system.holdings.rows()) +
                          " rows, expected " + std::to_string(n)});
  }

  check_entries(system.liabilities.data(), "liabilities", issues);
  check_entries(system.liquid, "liquid", issues);
  check_entries(system.holdings.data(), "holdings", issues);

  if (system.liabilities.rows() == n && system.liabilities.cols() == n + 1) {
    for (std::size_t i = 0; i < n; ++i) {
      if (system.interbank(i, i) != 0.0) {
        issues.push_back({ErrorCode::NonzeroDiagonal, "bank " + std::to_string(i) +
                                                          " owes itself " +
                                                          std::to_string(system.interbank(i, i))});
      }
    }
  }
  return issues;
}

void require_valid(const FinancialSystem& system) {
  const auto issues = validate(system);
  if (issues.empty()) return;
  std::ostringstream msg;
  msg << issues.size() << " invalid entries:";
  for (const auto& issue : issues) msg << " [" << to_string(issue.code) << ": " << issue.detail << "]";
  throw Error(issues.front().code, msg.str());
}

RelativeLiabilities derive_relative_liabilities(const FinancialSystem& system) {
  const std::size_t n = system.banks();
  RelativeLiabilities rel{Matrix(n, n), Vector(n, 0.0), Vector(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const double total = sum(system.liabilities.row(i));
    rel.total[i] = total;
    if (total <= 0.0) continue;
    rel.external[i] = system.external(i) / total;
    for (std::size_t j = 0; j < n; ++j) rel.interbank(i, j) = system.interbank(i, j) / total;
  }
  return rel;
}

Vector interbank_receipts(const RelativeLiabilities& rel, std::span<const double> payments) {
  return multiply_transposed(rel.interbank, payments);
}

Vector excess_liquidity(const FinancialSystem& system, const RelativeLiabilities& rel,
                        std::span<const double> payments) {
  Vector e = interbank_receipts(rel, payments);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += system.liquid[i] - rel.total[i];
  return e;
}

LatticeBounds lattice_bounds(const FinancialSystem& system, const InverseDemandModel& idf) {
  return lattice_bounds(system, derive_relative_liabilities(system), idf);
}

LatticeBounds lattice_bounds(const FinancialSystem& system, const RelativeLiabilities& rel,
                             const InverseDemandModel& idf) {
  const std::size_t n = system.banks();
  const std::size_t m = system.assets();
  LatticeBounds b;
  b.p_top = rel.total;
  b.excess_top = excess_liquidity(system, rel, rel.total);
  b.m_top = positive_part(b.excess_top);
  b.q_top = idf.price_from_excess(Vector(m, 0.0), b.excess_top);
  b.p_bottom.assign(n, 0.0);
  b.q_bottom.assign(m, 0.0);
  b.excess_bottom = excess_liquidity(system, rel, b.p_bottom);
  b.m_bottom.assign(n, 0.0);
  return b;
}

FinancialSystem generate_random_system(const RandomSystemParams& params, std::uint64_t seed) {
  const std::size_t n = params.banks;
  const std::size_t m = params.assets;
  const auto& dist = params.interbank;
  if (!std::isfinite(dist.low) || !std::isfinite(dist.high) || dist.low < 0.0 ||
      dist.high < dist.low) {
    throw Error(ErrorCode::InvalidDistribution, "interbank distribution needs 0 <= low <= high");
  }
  if (n == 0 || m == 0) throw Error(ErrorCode::DimensionMismatch, "need n >= 1 and m >= 1");
  if (params.liquid.size() != n || params.illiquid_units.size() != n ||
      params.external.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "per-bank vectors must have length n");
  }

  FinancialSystem sys{Matrix(n, n + 1), params.liquid, Matrix(n, m)};
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    sys.liabilities(i, 0) = params.external[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      sys.liabilities(i, j + 1) = uniform(rng, dist.low, dist.high);
    }
    for (std::size_t k = 0; k < m; ++k) sys.holdings(i, k) = params.illiquid_units[i];
  }
  require_valid(sys);
  return sys;
}

}  // namespace contagion
