#include "growthcast/diagnostics.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "growthcast/rng.hpp"
#include "support/stats.hpp"

using namespace growthcast;

namespace {

std::vector<double> iid_normal(int n, double mean, double sd,
                               std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = rng.normal(mean, sd);
  return out;
}

// AR(1) with autocorrelation phi and unit marginal variance.
std::vector<double> ar1(int n, double phi, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> out(n);
  const double innovation_sd = std::sqrt(1.0 - phi * phi);
  out[0] = rng.normal();
  for (int i = 1; i < n; ++i) {
    out[i] = phi * out[i - 1] + innovation_sd * rng.normal();
  }
  return out;
}

}  // namespace

TEST_CASE("split_rhat is near one for well-mixed chains") {
  std::vector<std::vector<double>> chains;
  for (int c = 0; c < 4; ++c) {
    chains.push_back(iid_normal(500, 0.0, 1.0, 300 + c));
  }
  const double r = split_rhat(chains);
  CHECK(r > 0.99);
  CHECK(r < 1.02);
}

TEST_CASE("split_rhat flags separated chains") {
  std::vector<std::vector<double>> chains;
  for (int c = 0; c < 4; ++c) {
    chains.push_back(iid_normal(500, 3.0 * c, 1.0, 310 + c));
  }
  CHECK(split_rhat(chains) > 1.5);
}

TEST_CASE("split_rhat flags a drifting single chain through the split") {
  // A strong within-chain trend shows up because each chain is split in
  // half and the halves are compared like separate chains.
  std::vector<std::vector<double>> chains(2);
  for (int c = 0; c < 2; ++c) {
    RandomStream rng(320 + c);
    for (int i = 0; i < 400; ++i) {
      chains[c].push_back(0.02 * i + rng.normal(0.0, 0.5));
    }
  }
  CHECK(split_rhat(chains) > 1.5);
}

TEST_CASE("split_rhat handles degenerate inputs") {
  // Identical constant draws: no variance anywhere, converged by fiat.
  std::vector<std::vector<double>> constant(3, std::vector<double>(20, 4.2));
  CHECK(split_rhat(constant) == 1.0);

  // Constant but different per chain: all variance is between chains.
  std::vector<std::vector<double>> apart{std::vector<double>(20, 0.0),
                                         std::vector<double>(20, 1.0)};
  CHECK(std::isinf(split_rhat(apart)));

  // Too short to split.
  std::vector<std::vector<double>> tiny(2, std::vector<double>{1.0, 2.0, 3.0});
  CHECK(std::isnan(split_rhat(tiny)));
  CHECK(std::isnan(split_rhat({})));
}

TEST_CASE("autocorrelation ESS is near n for independent draws") {
  std::vector<std::vector<double>> chains;
  int total = 0;
  for (int c = 0; c < 4; ++c) {
    chains.push_back(iid_normal(1000, 0.0, 1.0, 330 + c));
    total += 1000;
  }
  const double ess = ess_autocorrelation(chains);
  CHECK(ess > 0.75 * total);
  CHECK(ess <= total);
}

TEST_CASE("autocorrelation ESS shrinks for sticky chains") {
  const double phi = 0.95;
  std::vector<std::vector<double>> chains;
  for (int c = 0; c < 4; ++c) {
    chains.push_back(ar1(2000, phi, 340 + c));
  }
  const double ess = ess_autocorrelation(chains);
  // AR(1) integrated autocorrelation time is (1+phi)/(1-phi) = 39.
  CHECK(ess < 8000.0 / 15.0);
  CHECK(ess > 8000.0 / 120.0);
}

TEST_CASE("ESS of a constant series is the draw count") {
  std::vector<std::vector<double>> constant(2, std::vector<double>(50, 1.5));
  CHECK(ess_autocorrelation(constant) == 100.0);
}

TEST_CASE("rank_normalize maps any scale to standard normal scores") {
  // A wildly skewed transformation changes nothing after ranks.
  std::vector<std::vector<double>> chains;
  for (int c = 0; c < 2; ++c) {
    auto draws = iid_normal(400, 0.0, 1.0, 350 + c);
    for (auto& x : draws) x = std::exp(3.0 * x);
    chains.push_back(draws);
  }
  const auto z = rank_normalize(chains);
  REQUIRE(z.size() == 2);
  std::vector<double> pooled;
  for (const auto& c : z) pooled.insert(pooled.end(), c.begin(), c.end());
  CHECK(testsupport::mean_of(pooled) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(testsupport::variance_of(pooled) == doctest::Approx(1.0).epsilon(0.05));
  const double d =
      testsupport::ks_statistic(pooled, [](double x) {
        return testsupport::normal_cdf(x);
      });
  CHECK(d < testsupport::ks_critical(static_cast<int>(pooled.size()), 1e-3));
}

TEST_CASE("rank_normalize averages tied ranks") {
  // Four copies of the same value must all map to the same score, and the
  // scores must stay symmetric around zero.
  std::vector<std::vector<double>> chains{{1.0, 2.0, 2.0, 3.0},
                                          {2.0, 2.0, 0.0, 4.0}};
  const auto z = rank_normalize(chains);
  const double tied = z[0][1];
  CHECK(z[0][2] == tied);
  CHECK(z[1][0] == tied);
  CHECK(z[1][1] == tied);
  // The tied block occupies ranks 3..6 of 8, average 4.5 of a symmetric
  // layout, so its score sits exactly at the middle.
  CHECK(tied == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z[1][2] < z[0][0]);
  CHECK(z[1][3] > z[0][3]);
}

TEST_CASE("bulk ESS matches plain ESS for already-normal draws") {
  std::vector<std::vector<double>> chains;
  for (int c = 0; c < 4; ++c) {
    chains.push_back(ar1(1500, 0.8, 360 + c));
  }
  const double plain = ess_autocorrelation(chains);
  const double bulk = bulk_ess(chains);
  CHECK(bulk == doctest::Approx(plain).epsilon(0.15));
}

TEST_CASE("bulk ESS is robust to heavy tails") {
  // Cube the draws: plain ESS sees huge outliers, rank ESS does not care.
  std::vector<std::vector<double>> chains;
  for (int c = 0; c < 4; ++c) {
    auto draws = ar1(1500, 0.8, 370 + c);
    for (auto& x : draws) x = x * x * x;
    chains.push_back(draws);
  }
  const double bulk = bulk_ess(chains);
  CHECK(bulk > 100.0);
  CHECK(std::isfinite(bulk));
}
