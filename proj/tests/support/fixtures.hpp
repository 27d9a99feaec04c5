#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "growthcast/curve.hpp"
#include "growthcast/data.hpp"
#include "growthcast/model.hpp"
#include "growthcast/rng.hpp"

namespace testsupport {

// Trajectory whose counts sit exactly on a Richards curve, one per day.
inline growthcast::Trajectory exact_trajectory(const std::string& id,
                                               const growthcast::RichardsParams& p,
                                               int days) {
  growthcast::Trajectory y;
  y.unit_id = id;
  y.start_date = growthcast::parse_date_iso("2020-01-22");
  y.counts.resize(days);
  for (int t = 1; t <= days; ++t) {
    y.counts(t - 1) = growthcast::richards(t, p);
  }
  return y;
}

// A consistent panel + chain-state pair with everything strictly inside the
// parameter support, for joint-density and conditional-density tests.
struct Fixture {
  growthcast::PanelDataset data;
  growthcast::ChainState state;
};

inline Fixture random_fixture(int n, int t_days, int p, std::uint64_t seed) {
  growthcast::RandomStream rng(seed);
  std::vector<growthcast::Trajectory> trajectories;
  for (int i = 0; i < n; ++i) {
    growthcast::RichardsParams truth{
        rng.uniform(500.0, 2000.0), rng.uniform(0.1, 0.4),
        rng.uniform(10.0, 30.0), rng.uniform(0.5, 2.0)};
    growthcast::Trajectory y =
        exact_trajectory("u" + std::to_string(i), truth, t_days);
    for (int k = 0; k < t_days; ++k) {
      y.counts(k) = std::max(0.0, y.counts(k) + rng.normal(0.0, 5.0));
    }
    trajectories.push_back(std::move(y));
  }
  std::optional<growthcast::CovariateTable> table;
  if (p > 0) {
    growthcast::CovariateTable raw;
    for (int i = 0; i < n; ++i) raw.unit_ids.push_back(trajectories[i].unit_id);
    for (int j = 0; j < p; ++j) raw.names.push_back("x" + std::to_string(j));
    raw.values.resize(n, p);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) raw.values(i, j) = rng.normal();
    }
    table = growthcast::standardize(raw);
  }
  Fixture fx;
  fx.data = growthcast::make_panel(std::move(trajectories), std::move(table));
  fx.state.theta.resize(n, 3);
  fx.state.xi.resize(n);
  for (int i = 0; i < n; ++i) {
    fx.state.theta(i, 0) = rng.uniform(400.0, 2500.0);
    fx.state.theta(i, 1) = rng.uniform(0.05, 0.5);
    fx.state.theta(i, 2) = rng.uniform(5.0, 35.0);
    fx.state.xi(i) = rng.uniform(0.3, 3.0);
  }
  fx.state.sigma2_obs = rng.uniform(10.0, 100.0);
  for (int l = 0; l < 3; ++l) {
    auto& b = fx.state.blocks[l];
    b.alpha = fx.state.theta.col(l).mean();
    b.sigma2 = rng.uniform(0.5, 50.0);
    b.tau = 1.0;
    if (p > 0) {
      b.beta.resize(p);
      b.lambda.resize(p);
      for (int j = 0; j < p; ++j) {
        b.beta(j) = rng.normal(0.0, 0.3);
        b.lambda(j) = rng.uniform(0.2, 3.0);
      }
      b.tau = rng.uniform(0.2, 2.0);
    }
  }
  return fx;
}

}  // namespace testsupport
