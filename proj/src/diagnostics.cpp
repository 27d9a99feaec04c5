#include "growthcast/diagnostics.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace growthcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Splits every chain in half, truncating all chains to the shortest length
// first so the halves are balanced.
std::vector<std::vector<double>> split_halves(
    const std::vector<std::vector<double>>& chains) {
  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chains) shortest = std::min(shortest, c.size());
  if (chains.empty() || shortest < 4) return {};
  const std::size_t half = shortest / 2;
  std::vector<std::vector<double>> out;
  out.reserve(2 * chains.size());
  for (const auto& c : chains) {
    out.emplace_back(c.begin(), c.begin() + half);
    out.emplace_back(c.begin() + (shortest - half), c.begin() + shortest);
  }
  return out;
}

struct PooledVariance {
  double within = 0.0;   // W
  double var_plus = 0.0; // (n-1)/n W + B/n
  std::size_t sequences = 0;
  std::size_t length = 0;
  std::vector<double> means;
};

PooledVariance pooled_variance(const std::vector<std::vector<double>>& seqs) {
  PooledVariance pv;
  pv.sequences = seqs.size();
  pv.length = seqs.front().size();
  const double n = static_cast<double>(pv.length);
  const double m = static_cast<double>(pv.sequences);
  double grand = 0.0;
  for (const auto& s : seqs) {
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
    pv.means.push_back(mean);
    grand += mean;
  }
  grand /= m;
  double between = 0.0;
  for (double mean : pv.means) {
    between += (mean - grand) * (mean - grand);
  }
  between *= n / (m - 1.0);
  double within = 0.0;
  for (std::size_t j = 0; j < seqs.size(); ++j) {
    double ss = 0.0;
    for (double x : seqs[j]) {
      ss += (x - pv.means[j]) * (x - pv.means[j]);
    }
    within += ss / (n - 1.0);
  }
  within /= m;
  pv.within = within;
  pv.var_plus = (n - 1.0) / n * within + between / n;
  return pv;
}

double autocovariance(const std::vector<double>& seq, double mean,
                      std::size_t lag) {
  const std::size_t n = seq.size();
  double acc = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) {
    acc += (seq[i] - mean) * (seq[i + lag] - mean);
  }
  return acc / static_cast<double>(n);
}

// A fully constant input has to short-circuit before any arithmetic: means
// computed from non-representable constants carry rounding dust, which
// would otherwise feed a dust-over-dust variance ratio.
bool all_equal(const std::vector<std::vector<double>>& seqs) {
  const double first = seqs.front().front();
  for (const auto& s : seqs) {
    for (double x : s) {
      if (x != first) return false;
    }
  }
  return true;
}

}  // namespace

double split_rhat(const std::vector<std::vector<double>>& chains) {
  const auto seqs = split_halves(chains);
  if (seqs.size() < 2) return kNaN;
  if (all_equal(seqs)) return 1.0;
  const auto pv = pooled_variance(seqs);
  if (pv.within == 0.0) {
    return pv.var_plus == 0.0 ? 1.0
                              : std::numeric_limits<double>::infinity();
  }
  return std::sqrt(pv.var_plus / pv.within);
}

double ess_autocorrelation(const std::vector<std::vector<double>>& chains) {
  const auto seqs = split_halves(chains);
  if (seqs.empty()) return kNaN;
  const auto pv = pooled_variance(seqs);
  const double total = static_cast<double>(pv.sequences * pv.length);
  if (pv.var_plus == 0.0 || all_equal(seqs)) return total;

  // Geyer's initial monotone positive sequence over paired lags, computed
  // lag by lag so well-mixed chains stop after a handful of terms.
  const std::size_t max_lag = std::min<std::size_t>(pv.length - 1, 2000);
  const auto rho = [&](std::size_t lag) {
    double c = 0.0;
    for (std::size_t j = 0; j < seqs.size(); ++j) {
      c += autocovariance(seqs[j], pv.means[j], lag);
    }
    c /= static_cast<double>(seqs.size());
    return 1.0 - (pv.within - c) / pv.var_plus;
  };
  double tau = 0.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t lag = 0; lag + 1 <= max_lag; lag += 2) {
    double pair = rho(lag) + rho(lag + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  tau -= 1.0;  // lag-0 correlation counted once, not twice
  if (tau < 1e-12) tau = 1e-12;
  return std::min(total, total / tau);
}

std::vector<std::vector<double>> rank_normalize(
    const std::vector<std::vector<double>>& chains) {
  std::size_t total = 0;
  for (const auto& c : chains) total += c.size();
  if (total == 0) return {};
  // Pool, rank with ties averaged, map through the normal quantile.
  std::vector<std::pair<double, std::size_t>> pooled;
  pooled.reserve(total);
  std::size_t offset = 0;
  for (const auto& c : chains) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      pooled.emplace_back(c[i], offset + i);
    }
    offset += c.size();
  }
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> rank(total);
  std::size_t i = 0;
  while (i < total) {
    std::size_t j = i;
    while (j + 1 < total && pooled[j + 1].first == pooled[i].first) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[pooled[k].second] = avg;
    i = j + 1;
  }
  const boost::math::normal_distribution<double> unit_normal;
  const double denom = static_cast<double>(total) + 0.25;
  std::vector<std::vector<double>> out;
  out.reserve(chains.size());
  offset = 0;
  for (const auto& c : chains) {
    std::vector<double> z(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double p = (rank[offset + k] - 0.375) / denom;
      z[k] = boost::math::quantile(unit_normal, p);
    }
    out.push_back(std::move(z));
    offset += c.size();
  }
  return out;
}

double bulk_ess(const std::vector<std::vector<double>>& chains) {
  return ess_autocorrelation(rank_normalize(chains));
}

}  // namespace growthcast
