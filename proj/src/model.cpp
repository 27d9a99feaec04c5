#include "growthcast/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace growthcast {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double log_normal_pdf(double x, double mean, double variance) {
  const double r = x - mean;
  return -0.5 * (kLog2Pi + std::log(variance)) - r * r / (2.0 * variance);
}

void check_block(int which, const BlockState& b, int covariate_count) {
  if (b.beta.size() != covariate_count || b.lambda.size() != covariate_count) {
    throw std::invalid_argument("block " + std::to_string(which + 1) +
                                ": beta/lambda size mismatch");
  }
  if (!(b.sigma2 > 0.0) || !std::isfinite(b.sigma2)) {
    throw std::invalid_argument("block " + std::to_string(which + 1) +
                                ": sigma2 must be positive");
  }
  if (!(b.tau > 0.0) || !std::isfinite(b.tau)) {
    throw std::invalid_argument("block " + std::to_string(which + 1) +
                                ": tau must be positive");
  }
  if (!std::isfinite(b.alpha) || !b.beta.allFinite()) {
    throw std::invalid_argument("block " + std::to_string(which + 1) +
                                ": non-finite alpha or beta");
  }
  for (Eigen::Index j = 0; j < b.lambda.size(); ++j) {
    if (!(b.lambda(j) > 0.0) || !std::isfinite(b.lambda(j))) {
      throw std::invalid_argument("block " + std::to_string(which + 1) +
                                  ": lambda must be positive");
    }
  }
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kM1: return "m1";
    case Variant::kM2: return "m2";
    case Variant::kM3: return "m3";
  }
  throw std::invalid_argument("unknown variant");
}

Variant variant_from_name(const std::string& name) {
  if (name == "m1") return Variant::kM1;
  if (name == "m2") return Variant::kM2;
  if (name == "m3") return Variant::kM3;
  throw std::invalid_argument("unknown model variant '" + name + "'");
}

RichardsParams unit_params(const ChainState& state, int unit) {
  if (unit < 0 || unit >= state.units()) {
    throw std::invalid_argument("unit_params: unit out of range");
  }
  return RichardsParams{state.theta(unit, 0), state.theta(unit, 1),
                        state.theta(unit, 2), state.xi(unit)};
}

void validate_state(const ChainState& state) {
  const int n = state.units();
  if (n == 0 || state.theta.cols() != 3) {
    throw std::invalid_argument("state: theta must be units x 3");
  }
  if (state.xi.size() != n) {
    throw std::invalid_argument("state: xi size mismatch");
  }
  if (!state.theta.allFinite()) {
    throw std::invalid_argument("state: non-finite theta");
  }
  for (int i = 0; i < n; ++i) {
    if (!(state.xi(i) > 0.0) || !std::isfinite(state.xi(i))) {
      throw std::invalid_argument("state: xi must be positive");
    }
  }
  if (!(state.sigma2_obs > 0.0) || !std::isfinite(state.sigma2_obs)) {
    throw std::invalid_argument("state: sigma2_obs must be positive");
  }
  const int p = state.covariate_count();
  for (int l = 0; l < 3; ++l) {
    check_block(l, state.blocks[l], p);
  }
}

double log_likelihood_unit(const Trajectory& y, const RichardsParams& params,
                           double sigma2_obs) {
  if (!(sigma2_obs > 0.0) || !std::isfinite(sigma2_obs)) {
    throw std::domain_error("log_likelihood_unit: sigma2_obs must be positive");
  }
  const int t_count = y.days();
  double sse = 0.0;
  for (int k = 0; k < t_count; ++k) {
    const double r = y.counts(k) - richards(k + 1.0, params);
    sse += r * r;
  }
  return -0.5 * t_count * (kLog2Pi + std::log(sigma2_obs)) -
         sse / (2.0 * sigma2_obs);
}

double log_likelihood_term(const ChainState& state, const PanelDataset& data) {
  double total = 0.0;
  for (int i = 0; i < data.units(); ++i) {
    total += log_likelihood_unit(data.trajectories[i], unit_params(state, i),
                                 state.sigma2_obs);
  }
  return total;
}

double log_theta_regression_term(const ChainState& state,
                                 const PanelDataset& data, int block) {
  const BlockState& b = state.blocks.at(block);
  double total = 0.0;
  for (int i = 0; i < state.units(); ++i) {
    double mean = b.alpha;
    if (b.beta.size() > 0) {
      mean += data.covariates->values.row(i).dot(b.beta);
    }
    total += log_normal_pdf(state.theta(i, block), mean, b.sigma2);
  }
  return total;
}

double log_shrinkage_prior_term(const ChainState& state, int block) {
  const BlockState& b = state.blocks.at(block);
  if (b.beta.size() == 0) return 0.0;
  double total = -std::log1p(b.tau * b.tau);
  for (Eigen::Index j = 0; j < b.beta.size(); ++j) {
    const double scale2 = b.sigma2 * b.tau * b.tau * b.lambda(j) * b.lambda(j);
    total += log_normal_pdf(b.beta(j), 0.0, scale2);
    total -= std::log1p(b.lambda(j) * b.lambda(j));
  }
  return total;
}

double log_xi_prior_term(const ChainState& state) {
  double total = 0.0;
  for (int i = 0; i < state.units(); ++i) {
    const double log_xi = std::log(state.xi(i));
    total += -log_xi - 0.5 * kLog2Pi - 0.5 * log_xi * log_xi;
  }
  return total;
}

double log_scale_prior_term(const ChainState& state) {
  double total = -std::log(state.sigma2_obs);
  for (const auto& b : state.blocks) {
    total -= std::log(b.sigma2);
  }
  return total;
}

double log_joint(const ChainState& state, const PanelDataset& data,
                 const ModelSpec& spec) {
  validate_state(state);
  if (state.units() != data.units()) {
    throw std::invalid_argument("log_joint: state/data unit count mismatch");
  }
  const int p = state.covariate_count();
  switch (spec.variant) {
    case Variant::kM1:
      if (state.units() != 1 || p != 0) {
        throw std::invalid_argument("log_joint: m1 expects one unit, no covariates");
      }
      break;
    case Variant::kM2:
      if (p != 0) {
        throw std::invalid_argument("log_joint: m2 carries no covariate effects");
      }
      break;
    case Variant::kM3:
      if (p == 0 || !data.covariates || data.covariate_count() != p) {
        throw std::invalid_argument("log_joint: m3 requires matching covariates");
      }
      break;
  }
  if (p > 0 && (!data.covariates || data.covariate_count() != p)) {
    throw std::invalid_argument("log_joint: covariate shape mismatch");
  }
  double total = log_likelihood_term(state, data) + log_xi_prior_term(state) +
                 log_scale_prior_term(state);
  for (int l = 0; l < 3; ++l) {
    total += log_theta_regression_term(state, data, l);
    total += log_shrinkage_prior_term(state, l);
  }
  return total;
}

ParameterLayout::ParameterLayout(std::vector<std::string> unit_ids,
                                 std::vector<std::string> covariate_names)
    : unit_ids_(std::move(unit_ids)),
      covariate_names_(std::move(covariate_names)) {
  static const char* kThetaNames[] = {"theta1", "theta2", "theta3"};
  for (const char* param : kThetaNames) {
    for (const auto& id : unit_ids_) {
      names_.push_back(std::string(param) + "[" + id + "]");
    }
  }
  for (const auto& id : unit_ids_) {
    names_.push_back("xi[" + id + "]");
  }
  names_.push_back("sigma2_obs");
  for (int l = 1; l <= 3; ++l) {
    const std::string suffix = "_" + std::to_string(l);
    names_.push_back("alpha" + suffix);
    for (const auto& cov : covariate_names_) {
      names_.push_back("beta" + suffix + "[" + cov + "]");
    }
    for (const auto& cov : covariate_names_) {
      names_.push_back("lambda" + suffix + "[" + cov + "]");
    }
    if (!covariate_names_.empty()) {
      names_.push_back("tau" + suffix);
    }
    names_.push_back("sigma2" + suffix);
  }
}

Eigen::VectorXd ParameterLayout::flatten(const ChainState& state) const {
  const int n = units();
  const int p = static_cast<int>(covariate_names_.size());
  if (state.units() != n || state.covariate_count() != p) {
    throw std::invalid_argument("flatten: state shape mismatch");
  }
  Eigen::VectorXd out(size());
  Eigen::Index k = 0;
  for (int col = 0; col < 3; ++col) {
    for (int i = 0; i < n; ++i) out(k++) = state.theta(i, col);
  }
  for (int i = 0; i < n; ++i) out(k++) = state.xi(i);
  out(k++) = state.sigma2_obs;
  for (int l = 0; l < 3; ++l) {
    const BlockState& b = state.blocks[l];
    out(k++) = b.alpha;
    for (int j = 0; j < p; ++j) out(k++) = b.beta(j);
    for (int j = 0; j < p; ++j) out(k++) = b.lambda(j);
    if (p > 0) out(k++) = b.tau;
    out(k++) = b.sigma2;
  }
  return out;
}

ChainState ParameterLayout::unflatten(
    const Eigen::Ref<const Eigen::VectorXd>& values) const {
  if (values.size() != static_cast<Eigen::Index>(size())) {
    throw std::invalid_argument("unflatten: value count mismatch");
  }
  const int n = units();
  const int p = static_cast<int>(covariate_names_.size());
  ChainState state;
  state.theta.resize(n, 3);
  state.xi.resize(n);
  Eigen::Index k = 0;
  for (int col = 0; col < 3; ++col) {
    for (int i = 0; i < n; ++i) state.theta(i, col) = values(k++);
  }
  for (int i = 0; i < n; ++i) state.xi(i) = values(k++);
  state.sigma2_obs = values(k++);
  for (int l = 0; l < 3; ++l) {
    BlockState& b = state.blocks[l];
    b.beta.resize(p);
    b.lambda.resize(p);
    b.alpha = values(k++);
    for (int j = 0; j < p; ++j) b.beta(j) = values(k++);
    for (int j = 0; j < p; ++j) b.lambda(j) = values(k++);
    b.tau = p > 0 ? values(k++) : 1.0;
    b.sigma2 = values(k++);
  }
  return state;
}

std::size_t ParameterLayout::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw std::invalid_argument("unknown parameter '" + name + "'");
}

}  // namespace growthcast
