#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "growthcast/curve.hpp"
#include "growthcast/data.hpp"

namespace growthcast {

// Model variants. M1 fits one unit on its own (no pooling across units and
// no covariates), M2 pools units through the shared intercepts only, M3 is
// the full hierarchy with covariate effects under horseshoe shrinkage.
enum class Variant { kM1, kM2, kM3 };

struct ModelSpec {
  Variant variant = Variant::kM3;
  // M1 only: which unit to fit.
  std::optional<std::string> unit;
};

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

// Regression block tied to one curve parameter: theta_l = alpha + X beta
// + noise. `beta` and `lambda` are empty when the model has no covariate
// effects; `lambda` holds the per-coefficient local scales and `tau` the
// block-level global scale of the shrinkage prior.
struct BlockState {
  double alpha = 0.0;
  Eigen::VectorXd beta;
  Eigen::VectorXd lambda;
  double tau = 1.0;
  double sigma2 = 1.0;
};

// Full parameter state of one MCMC chain.
struct ChainState {
  Eigen::MatrixXd theta;  // units x 3, columns are theta1, theta2, theta3
  Eigen::VectorXd xi;     // one shape parameter per unit
  double sigma2_obs = 1.0;
  std::array<BlockState, 3> blocks;

  int units() const { return static_cast<int>(theta.rows()); }
  int covariate_count() const {
    return static_cast<int>(blocks[0].beta.size());
  }
};

RichardsParams unit_params(const ChainState& state, int unit);

// Throws std::invalid_argument on shape mismatches or out-of-support values
// (xi, variances, lambda, tau must all be positive and finite).
void validate_state(const ChainState& state);

// Gaussian observation log likelihood of one unit's trajectory around its
// Richards mean curve.
double log_likelihood_unit(const Trajectory& y, const RichardsParams& params,
                           double sigma2_obs);

// Individual factors of the joint log density. Exposed so conditional
// samplers and their consistency tests can share one source of truth.
double log_likelihood_term(const ChainState& state, const PanelDataset& data);
double log_theta_regression_term(const ChainState& state,
                                 const PanelDataset& data, int block);
double log_shrinkage_prior_term(const ChainState& state, int block);
double log_xi_prior_term(const ChainState& state);
// Scale-invariant 1/sigma^2 factors for the observation and block variances.
double log_scale_prior_term(const ChainState& state);

// Joint log density of parameters and data up to a constant, the sum of the
// factors above. The spec argument is used for shape validation only.
double log_joint(const ChainState& state, const PanelDataset& data,
                 const ModelSpec& spec);

// Stable flattening of a ChainState into a named vector of scalars. Order:
// theta1, theta2, theta3, xi per unit, sigma2_obs, then per block alpha,
// beta, lambda, tau, sigma2. Used for draw storage, diagnostics, and
// summaries, so the naming here is the naming everywhere.
class ParameterLayout {
 public:
  ParameterLayout() = default;
  ParameterLayout(std::vector<std::string> unit_ids,
                  std::vector<std::string> covariate_names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  int units() const { return static_cast<int>(unit_ids_.size()); }
  const std::vector<std::string>& unit_ids() const { return unit_ids_; }
  const std::vector<std::string>& covariate_names() const {
    return covariate_names_;
  }

  Eigen::VectorXd flatten(const ChainState& state) const;
  ChainState unflatten(const Eigen::Ref<const Eigen::VectorXd>& values) const;

  // Index of a named scalar; throws if absent.
  std::size_t index_of(const std::string& name) const;

 private:
  std::vector<std::string> unit_ids_;
  std::vector<std::string> covariate_names_;
  std::vector<std::string> names_;
};

}  // namespace growthcast
