#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "growthcast/gibbs.hpp"
#include "growthcast/model.hpp"

namespace testsupport {

// Every Gibbs step draws from a conditional density that must agree with the
// joint density as a function of the coordinate it updates. This walks each
// coordinate over a small grid and compares conditional log-density
// differences against joint log-density differences; normalizing constants
// drop out of the differences, so agreement should be at rounding level.
// Returns one labeled worst-case discrepancy per update family.
inline std::vector<std::pair<std::string, double>> conditional_grid_errors(
    const growthcast::PanelDataset& data, const growthcast::ChainState& base,
    const growthcast::ModelSpec& spec) {
  using growthcast::ChainState;
  const auto joint = [&](const ChainState& s) {
    return growthcast::log_joint(s, data, spec);
  };
  const int n = base.units();
  const int p = base.covariate_count();

  std::vector<std::pair<std::string, double>> out;
  const auto run = [&](const std::string& label, const auto& mutate,
                       const auto& conditional,
                       const std::vector<double>& grid) {
    double worst = 0.0;
    const double cond_base = conditional(grid[0]);
    ChainState s = base;
    mutate(s, grid[0]);
    const double joint_anchor = joint(s);
    for (std::size_t k = 1; k < grid.size(); ++k) {
      ChainState t = base;
      mutate(t, grid[k]);
      const double d_cond = conditional(grid[k]) - cond_base;
      const double d_joint = joint(t) - joint_anchor;
      worst = std::max(worst, std::abs(d_cond - d_joint));
    }
    out.emplace_back(label, worst);
  };

  // theta1: scalar Gaussian around the analytic conditional mean.
  {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto g = growthcast::theta1_full_conditional(base, data, i);
      const double sd = std::sqrt(g.variance);
      std::vector<double> grid{base.theta(i, 0), g.mean - 1.5 * sd,
                               g.mean - 0.4 * sd, g.mean + 0.6 * sd,
                               g.mean + 1.7 * sd};
      const double c0 = -0.5 * (grid[0] - g.mean) * (grid[0] - g.mean) / g.variance;
      ChainState a = base;
      a.theta(i, 0) = grid[0];
      const double j0 = joint(a);
      for (std::size_t k = 1; k < grid.size(); ++k) {
        ChainState t = base;
        t.theta(i, 0) = grid[k];
        const double ck =
            -0.5 * (grid[k] - g.mean) * (grid[k] - g.mean) / g.variance;
        worst = std::max(worst, std::abs((ck - c0) - (joint(t) - j0)));
      }
    }
    out.emplace_back("theta1", worst);
  }

  for (int i = 0; i < n; ++i) {
    const double t2 = base.theta(i, 1);
    run("theta2[" + std::to_string(i) + "]",
        [i](ChainState& s, double v) { s.theta(i, 1) = v; },
        [&, i](double v) {
          return growthcast::theta2_conditional_log_density(base, data, i, v);
        },
        {t2, 0.8 * t2, 0.95 * t2, 1.1 * t2, 1.3 * t2});
    const double t3 = base.theta(i, 2);
    run("theta3[" + std::to_string(i) + "]",
        [i](ChainState& s, double v) { s.theta(i, 2) = v; },
        [&, i](double v) {
          return growthcast::theta3_conditional_log_density(base, data, i, v);
        },
        {t3, t3 - 2.0, t3 - 0.5, t3 + 0.5, t3 + 2.0});
    const double xi = base.xi(i);
    run("xi[" + std::to_string(i) + "]",
        [i](ChainState& s, double v) { s.xi(i) = v; },
        [&, i](double v) {
          return growthcast::xi_conditional_log_density(base, data, i, v);
        },
        {xi, 0.7 * xi, 0.9 * xi, 1.2 * xi, 1.5 * xi});
  }

  {
    const auto ig = growthcast::sigma2_obs_full_conditional(base, data);
    const double v0 = base.sigma2_obs;
    run("sigma2_obs",
        [](ChainState& s, double v) { s.sigma2_obs = v; },
        [&](double v) { return -(ig.shape + 1.0) * std::log(v) - ig.rate / v; },
        {v0, 0.5 * v0, 0.8 * v0, 1.3 * v0, 2.0 * v0});
  }

  for (int l = 0; l < 3; ++l) {
    const auto g = growthcast::alpha_full_conditional(base, data, l);
    const double sd = std::sqrt(g.variance);
    run("alpha[" + std::to_string(l) + "]",
        [l](ChainState& s, double v) { s.blocks[l].alpha = v; },
        [&](double v) { return -0.5 * (v - g.mean) * (v - g.mean) / g.variance; },
        {base.blocks[l].alpha, g.mean - 1.2 * sd, g.mean - 0.3 * sd,
         g.mean + 0.5 * sd, g.mean + 1.4 * sd});

    const auto ig = growthcast::sigma2_regression_full_conditional(base, data, l);
    const double s0 = base.blocks[l].sigma2;
    run("sigma2[" + std::to_string(l) + "]",
        [l](ChainState& s, double v) { s.blocks[l].sigma2 = v; },
        [&](double v) { return -(ig.shape + 1.0) * std::log(v) - ig.rate / v; },
        {s0, 0.6 * s0, 0.9 * s0, 1.4 * s0, 2.2 * s0});
  }

  if (p > 0) {
    for (int l = 0; l < 3; ++l) {
      // beta: multivariate Gaussian, walked one coordinate at a time.
      const auto c = growthcast::beta_full_conditional(base, data, l);
      double worst = 0.0;
      for (int j = 0; j < p; ++j) {
        const auto quad = [&](const Eigen::VectorXd& v) {
          const Eigen::VectorXd r = v - c.mean;
          return -0.5 * r.dot(c.precision * r) / c.sigma2;
        };
        Eigen::VectorXd v0 = base.blocks[l].beta;
        ChainState a = base;
        a.blocks[l].beta = v0;
        const double j0 = joint(a);
        const double c0 = quad(v0);
        for (double step : {-0.6, -0.2, 0.3, 0.7}) {
          Eigen::VectorXd v = v0;
          v(j) += step;
          ChainState t = base;
          t.blocks[l].beta = v;
          worst = std::max(worst,
                           std::abs((quad(v) - c0) - (joint(t) - j0)));
        }
      }
      out.emplace_back("beta[" + std::to_string(l) + "]", worst);

      for (int j = 0; j < p; ++j) {
        const double lam = base.blocks[l].lambda(j);
        run("lambda[" + std::to_string(l) + "," + std::to_string(j) + "]",
            [l, j](ChainState& s, double v) { s.blocks[l].lambda(j) = v; },
            [&, l, j](double v) {
              return growthcast::lambda_conditional_log_density(base, l, j, v);
            },
            {lam, 0.6 * lam, 0.9 * lam, 1.4 * lam, 2.2 * lam});
      }
      const double tau = base.blocks[l].tau;
      run("tau[" + std::to_string(l) + "]",
          [l](ChainState& s, double v) { s.blocks[l].tau = v; },
          [&, l](double v) {
            return growthcast::tau_conditional_log_density(base, l, v);
          },
          {tau, 0.6 * tau, 0.9 * tau, 1.4 * tau, 2.2 * tau});
    }
  }
  return out;
}

inline double max_conditional_grid_error(const growthcast::PanelDataset& data,
                                         const growthcast::ChainState& base,
                                         const growthcast::ModelSpec& spec) {
  double worst = 0.0;
  for (const auto& [label, err] : conditional_grid_errors(data, base, spec)) {
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace testsupport
