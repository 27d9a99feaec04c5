#pragma once

#include <string>
#include <vector>

namespace growthcast {

// Convergence summaries for the retained draws of one scalar parameter.
struct ScalarDiagnostic {
  std::string name;
  double split_rhat = 0.0;
  double bulk_ess = 0.0;
};

struct Diagnostics {
  std::vector<ScalarDiagnostic> scalars;
};

// Potential scale reduction factor with each chain split in half, so a
// single drifting chain is caught too. Chains shorter than 4 draws give
// NaN; identical constant draws give 1.
double split_rhat(const std::vector<std::vector<double>>& chains);

// Effective sample size from split chains via paired autocorrelation sums
// (initial monotone positive sequence estimator).
double ess_autocorrelation(const std::vector<std::vector<double>>& chains);

// Bulk effective sample size: draws are rank-normalized across all chains
// before the autocorrelation ESS.
double bulk_ess(const std::vector<std::vector<double>>& chains);

// Pooled rank-normalization (fractional ranks mapped through the standard
// normal quantile function).
std::vector<std::vector<double>> rank_normalize(
    const std::vector<std::vector<double>>& chains);

}  // namespace growthcast
