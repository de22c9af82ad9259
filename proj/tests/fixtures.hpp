#pragma once

#include <cstdint>

#include "contagion/clearing.hpp"
#include "contagion/random.hpp"
#include "oracle.hpp"

namespace fixtures {

using namespace contagion;

inline LinearImpactParams linear_params(std::size_t banks, std::size_t assets, double alpha0,
                                        double alpha) {
  LinearImpactParams p;
  p.mu = Vector(assets, 1.0);
  p.cov = Matrix::identity(assets);
  p.alpha0 = alpha0;
  p.bank_alpha = Vector(banks, alpha);
  return p;
}

/// Banks hold cash above their obligations and owe nothing to each other.
inline ClearingProblem solvent(std::size_t banks = 3) {
  FinancialSystem sys;
  sys.liabilities = Matrix(banks, banks + 1, 0.0);
  sys.liquid = Vector(banks, 2.0);
  sys.holdings = Matrix(banks, 1, 1.0);
  for (std::size_t i = 0; i < banks; ++i) sys.liabilities(i, 0) = 1.0;
  return ClearingProblem(std::move(sys), InverseDemandModel::linear(linear_params(banks, 1, 0.1, 0.1)));
}

/// Small stressed network with random liabilities, cash and holdings; m
/// assets with a random nonnegative covariance when m > 1.
inline ClearingProblem random_problem(Rng& rng, std::size_t banks, std::size_t assets,
                                      bool homogeneous_alpha = true) {
  FinancialSystem sys;
  sys.liabilities = Matrix(banks, banks + 1, 0.0);
  sys.liquid.resize(banks);
  sys.holdings = Matrix(banks, assets, 0.0);
  for (std::size_t i = 0; i < banks; ++i) {
    sys.liabilities(i, 0) = uniform(rng, 0.5, 2.0);
    for (std::size_t j = 0; j < banks; ++j) {
      if (j != i) sys.liabilities(i, j + 1) = uniform(rng, 0.0, 1.5);
    }
    sys.liquid[i] = uniform(rng, 0.0, 2.0);
    for (std::size_t k = 0; k < assets; ++k) sys.holdings(i, k) = uniform(rng, 0.0, 3.0);
  }
  LinearImpactParams p = linear_params(banks, assets, uniform(rng, 0.05, 1.0), 0.5);
  for (std::size_t k = 0; k < assets; ++k) {
    p.cov(k, k) = uniform(rng, 0.5, 1.5);
    for (std::size_t l = 0; l < k; ++l) p.cov(k, l) = p.cov(l, k) = uniform(rng, 0.0, 0.5);
  }
  if (!homogeneous_alpha) {
    for (auto& a : p.bank_alpha) a = uniform(rng, 0.2, 2.0);
  }
  return ClearingProblem(std::move(sys), InverseDemandModel::linear(std::move(p)));
}

/// Same system seen by the reference oracle (one asset, homogeneous α).
inline oracle::ScalarSystem to_oracle(const ClearingProblem& problem) {
  const auto& sys = problem.system();
  const auto& p = *problem.idf().linear_params();
  oracle::ScalarSystem s;
  s.liabilities = sys.liabilities.to_rows();
  s.liquid = sys.liquid;
  for (std::size_t i = 0; i < sys.banks(); ++i) s.units.push_back(sys.holdings(i, 0));
  s.mu = p.mu[0];
  s.c = p.cov(0, 0);
  s.alpha0 = p.alpha0;
  s.alpha = p.bank_alpha[0];
  return s;
}

}  // namespace fixtures
