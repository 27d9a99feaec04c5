#include "growthcast/gibbs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "growthcast/parallel.hpp"

namespace growthcast {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kRateFloor = 1e-12;
constexpr double kConditionLimit = 1e12;
constexpr double kJitter = 1e-10;

void warn(const std::string& message) {
  std::fprintf(stderr, "growthcast: warning: %s\n", message.c_str());
}

Eigen::VectorXd basis_series(int t_count, double theta2, double theta3,
                             double xi) {
  Eigen::VectorXd h(t_count);
  for (int k = 0; k < t_count; ++k) {
    h(k) = basis(k + 1.0, theta2, theta3, xi);
  }
  return h;
}

double unit_sse(const Trajectory& y, const RichardsParams& params) {
  double sse = 0.0;
  for (int k = 0; k < y.days(); ++k) {
    const double r = y.counts(k) - richards(k + 1.0, params);
    sse += r * r;
  }
  return sse;
}

// Prior mean of theta_{l,i} under its regression block.
double block_mean(const ChainState& state, const PanelDataset& data, int block,
                  int unit) {
  const BlockState& b = state.blocks[block];
  double mean = b.alpha;
  if (b.beta.size() > 0) {
    mean += data.covariates->values.row(unit).dot(b.beta);
  }
  return mean;
}

double log_normal_pdf(double x, double mean, double variance) {
  const double r = x - mean;
  return -0.5 * (kLog2Pi + std::log(variance)) - r * r / (2.0 * variance);
}

void check_dims(const ChainState& state, const PanelDataset& data) {
  if (state.units() != data.units()) {
    throw std::invalid_argument("state/data unit count mismatch");
  }
  if (state.covariate_count() > 0 &&
      state.covariate_count() != data.covariate_count()) {
    throw std::invalid_argument("state/data covariate count mismatch");
  }
}

double floored_rate(double rate, const char* what) {
  if (!(rate > kRateFloor)) {
    // Once a variance collapses this tends to recur every sweep; warn the
    // first time only.
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) {
      warn(std::string(what) + ": inverse-gamma rate floored to 1e-12");
    }
    return kRateFloor;
  }
  return rate;
}

}  // namespace

SamplerConfig SamplerConfig::desk_scale() {
  SamplerConfig config;
  config.sweeps = 2000;
  config.burn_in = 1000;
  config.thin = 1;
  config.chains = 2;
  return config;
}

void validate_config(const SamplerConfig& config) {
  if (config.sweeps < 1) {
    throw std::invalid_argument("config: sweeps must be >= 1");
  }
  if (config.burn_in < 0 || config.burn_in >= config.sweeps) {
    throw std::invalid_argument("config: burn_in must lie in [0, sweeps)");
  }
  if (config.thin < 1) {
    throw std::invalid_argument("config: thin must be >= 1");
  }
  if ((config.sweeps - config.burn_in) / config.thin < 1) {
    throw std::invalid_argument("config: no draws retained; lower thin");
  }
  if (config.chains < 1) {
    throw std::invalid_argument("config: chains must be >= 1");
  }
  if (!(config.theta2_control.proposal_sd > 0.0) ||
      !(config.theta3_control.proposal_sd > 0.0)) {
    throw std::invalid_argument("config: proposal sds must be > 0");
  }
}

GaussianMoments theta1_full_conditional(const ChainState& state,
                                        const PanelDataset& data, int unit) {
  check_dims(state, data);
  const Trajectory& y = data.trajectories[unit];
  const Eigen::VectorXd h = basis_series(y.days(), state.theta(unit, 1),
                                         state.theta(unit, 2), state.xi(unit));
  const double h2 = h.squaredNorm();
  const double r = y.counts.dot(h);
  const double prior_var = state.blocks[0].sigma2;
  const double precision = h2 / state.sigma2_obs + 1.0 / prior_var;
  GaussianMoments g;
  g.variance = 1.0 / precision;
  g.mean = g.variance *
           (r / state.sigma2_obs + block_mean(state, data, 0, unit) / prior_var);
  return g;
}

namespace {

// Shared form of the theta2/theta3 conditionals: unit likelihood plus the
// Gaussian regression prior of the coordinate.
double theta23_log_density(const ChainState& state, const PanelDataset& data,
                           int unit, int block, double value) {
  RichardsParams params = unit_params(state, unit);
  if (block == 1) {
    params.theta2 = value;
  } else {
    params.theta3 = value;
  }
  const double ll =
      log_likelihood_unit(data.trajectories[unit], params, state.sigma2_obs);
  return ll + log_normal_pdf(value, block_mean(state, data, block, unit),
                             state.blocks[block].sigma2);
}

}  // namespace

double theta2_conditional_log_density(const ChainState& state,
                                      const PanelDataset& data, int unit,
                                      double value) {
  check_dims(state, data);
  return theta23_log_density(state, data, unit, 1, value);
}

double theta3_conditional_log_density(const ChainState& state,
                                      const PanelDataset& data, int unit,
                                      double value) {
  check_dims(state, data);
  return theta23_log_density(state, data, unit, 2, value);
}

double xi_ess_log_likelihood(const ChainState& state, const PanelDataset& data,
                             int unit, double eta) {
  check_dims(state, data);
  RichardsParams params = unit_params(state, unit);
  params.xi = std::exp(eta);
  return -unit_sse(data.trajectories[unit], params) / (2.0 * state.sigma2_obs);
}

double xi_conditional_log_density(const ChainState& state,
                                  const PanelDataset& data, int unit,
                                  double value) {
  check_dims(state, data);
  if (!(value > 0.0)) {
    throw std::domain_error("xi_conditional_log_density: xi must be > 0");
  }
  RichardsParams params = unit_params(state, unit);
  params.xi = value;
  const double ll =
      log_likelihood_unit(data.trajectories[unit], params, state.sigma2_obs);
  const double log_xi = std::log(value);
  return ll - log_xi - 0.5 * log_xi * log_xi;
}

InverseGammaParams sigma2_obs_full_conditional(const ChainState& state,
                                               const PanelDataset& data,
                                               const PriorSpec& priors) {
  check_dims(state, data);
  double sse = 0.0;
  for (int i = 0; i < data.units(); ++i) {
    sse += unit_sse(data.trajectories[i], unit_params(state, i));
  }
  const double total = static_cast<double>(data.units()) * data.days();
  InverseGammaParams ig;
  ig.shape = priors.observation_variance.shape + 0.5 * total;
  ig.rate = priors.observation_variance.rate + 0.5 * sse;
  return ig;
}

GaussianMoments alpha_full_conditional(const ChainState& state,
                                       const PanelDataset& data, int block,
                                       double alpha_precision) {
  check_dims(state, data);
  const BlockState& b = state.blocks.at(block);
  const int n = state.units();
  double resid_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = state.theta(i, block);
    if (b.beta.size() > 0) {
      r -= data.covariates->values.row(i).dot(b.beta);
    }
    resid_sum += r;
  }
  const double precision = n / b.sigma2 + alpha_precision;
  GaussianMoments g;
  g.variance = 1.0 / precision;
  g.mean = (resid_sum / b.sigma2) * g.variance;
  return g;
}

BetaConditional beta_full_conditional(const ChainState& state,
                                      const PanelDataset& data, int block) {
  check_dims(state, data);
  const BlockState& b = state.blocks.at(block);
  const int p = static_cast<int>(b.beta.size());
  if (p == 0) {
    throw std::invalid_argument("beta_full_conditional: no covariates");
  }
  const Eigen::MatrixXd& x = data.covariates->values;
  Eigen::MatrixXd a = x.transpose() * x;
  const double tau2 = b.tau * b.tau;
  for (int j = 0; j < p; ++j) {
    a(j, j) += 1.0 / (tau2 * b.lambda(j) * b.lambda(j));
  }
  BetaConditional out;
  out.sigma2 = b.sigma2;
  // Cheap condition estimate from the Cholesky diagonal; squared because
  // the factor carries half the dynamic range of the matrix.
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  bool jitter = llt.info() != Eigen::Success;
  if (!jitter) {
    const Eigen::VectorXd d = llt.matrixLLT().diagonal();
    const double ratio = d.maxCoeff() / d.minCoeff();
    jitter = !(ratio * ratio < kConditionLimit);
  }
  if (jitter) {
    // Fires every sweep once the shrinkage scales blow past the data's
    // rank, so say it once per block and stay quiet after that.
    static std::atomic<bool> warned[3] = {};
    if (!warned[block].exchange(true)) {
      warn("beta block " + std::to_string(block + 1) +
           ": ill-conditioned precision, adding jitter");
    }
    a.diagonal().array() += kJitter;
    llt.compute(a);
    if (llt.info() != Eigen::Success) {
      throw KernelError("beta update: precision not positive definite");
    }
    out.jittered = true;
  }
  Eigen::VectorXd resid = state.theta.col(block).array() - b.alpha;
  out.mean = llt.solve(x.transpose() * resid);
  out.precision = std::move(a);
  return out;
}

double lambda_conditional_log_density(const ChainState& state, int block,
                                      int covariate, double value) {
  const BlockState& b = state.blocks.at(block);
  if (covariate < 0 || covariate >= b.beta.size()) {
    throw std::invalid_argument("lambda_conditional_log_density: bad index");
  }
  if (!(value > 0.0)) {
    throw std::domain_error("lambda_conditional_log_density: lambda must be > 0");
  }
  const double scale2 = b.sigma2 * b.tau * b.tau * value * value;
  return log_normal_pdf(b.beta(covariate), 0.0, scale2) -
         std::log1p(value * value);
}

double tau_conditional_log_density(const ChainState& state, int block,
                                   double value) {
  const BlockState& b = state.blocks.at(block);
  const int p = static_cast<int>(b.beta.size());
  if (p == 0) {
    throw std::invalid_argument("tau_conditional_log_density: no covariates");
  }
  if (!(value > 0.0)) {
    throw std::domain_error("tau_conditional_log_density: tau must be > 0");
  }
  double total = -std::log1p(value * value);
  for (int j = 0; j < p; ++j) {
    const double scale2 = b.sigma2 * value * value * b.lambda(j) * b.lambda(j);
    total += log_normal_pdf(b.beta(j), 0.0, scale2);
  }
  return total;
}

InverseGammaParams sigma2_regression_full_conditional(const ChainState& state,
                                                      const PanelDataset& data,
                                                      int block,
                                                      const PriorSpec& priors) {
  check_dims(state, data);
  const BlockState& b = state.blocks.at(block);
  const int n = state.units();
  const int p = static_cast<int>(b.beta.size());
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = state.theta(i, block) - b.alpha;
    if (p > 0) {
      r -= data.covariates->values.row(i).dot(b.beta);
    }
    ss += r * r;
  }
  double quad = 0.0;
  for (int j = 0; j < p; ++j) {
    quad += b.beta(j) * b.beta(j) / (b.tau * b.tau * b.lambda(j) * b.lambda(j));
  }
  InverseGammaParams ig;
  ig.shape = priors.regression_variance.shape + 0.5 * (n + p);
  ig.rate = priors.regression_variance.rate + 0.5 * (ss + quad);
  return ig;
}

void sample_theta1(ChainState& state, const PanelDataset& data,
                   RandomStream& rng) {
  // The precision matrix of the joint conditional is diagonal, so the
  // units decouple into scalar Gaussian draws.
  for (int i = 0; i < state.units(); ++i) {
    const GaussianMoments g = theta1_full_conditional(state, data, i);
    state.theta(i, 0) = g.mean + std::sqrt(g.variance) * rng.normal();
  }
}

void sample_theta23(ChainState& state, const PanelDataset& data,
                    const MetropolisControl& theta2_control,
                    const MetropolisControl& theta3_control, RandomStream& rng,
                    SweepAcceptance* acceptance) {
  if (acceptance) {
    acceptance->theta2.assign(state.units(), 0);
    acceptance->theta3.assign(state.units(), 0);
  }
  for (int i = 0; i < state.units(); ++i) {
    const auto [v2, ok2] = metropolis_step(
        state.theta(i, 1),
        [&](double v) { return theta23_log_density(state, data, i, 1, v); },
        theta2_control, rng);
    state.theta(i, 1) = v2;
    const auto [v3, ok3] = metropolis_step(
        state.theta(i, 2),
        [&](double v) { return theta23_log_density(state, data, i, 2, v); },
        theta3_control, rng);
    state.theta(i, 2) = v3;
    if (acceptance) {
      acceptance->theta2[i] = ok2 ? 1 : 0;
      acceptance->theta3[i] = ok3 ? 1 : 0;
    }
  }
}

void sample_xi(ChainState& state, const PanelDataset& data, RandomStream& rng) {
  for (int i = 0; i < state.units(); ++i) {
    const double eta = ess_step(
        std::log(state.xi(i)),
        [&](double e) { return xi_ess_log_likelihood(state, data, i, e); },
        rng);
    state.xi(i) = std::exp(eta);
  }
}

void sample_sigma2_obs(ChainState& state, const PanelDataset& data,
                       RandomStream& rng, const PriorSpec& priors) {
  const InverseGammaParams ig = sigma2_obs_full_conditional(state, data, priors);
  state.sigma2_obs = draw_inverse_gamma(
      ig.shape, floored_rate(ig.rate, "sigma2_obs"), rng);
}

void sample_alpha(ChainState& state, const PanelDataset& data,
                  RandomStream& rng, const PriorSpec& priors) {
  for (int l = 0; l < 3; ++l) {
    const GaussianMoments g =
        alpha_full_conditional(state, data, l, priors.alpha_precision);
    state.blocks[l].alpha = g.mean + std::sqrt(g.variance) * rng.normal();
  }
}

void sample_beta(ChainState& state, const PanelDataset& data,
                 RandomStream& rng) {
  if (state.covariate_count() == 0) return;
  for (int l = 0; l < 3; ++l) {
    const BetaConditional c = beta_full_conditional(state, data, l);
    const int p = static_cast<int>(c.mean.size());
    Eigen::LLT<Eigen::MatrixXd> llt(c.precision);
    if (llt.info() != Eigen::Success) {
      throw KernelError("beta update: factorization failed");
    }
    Eigen::VectorXd z(p);
    for (int j = 0; j < p; ++j) z(j) = rng.normal();
    // x = mean + sigma * U^{-1} z has covariance sigma2 * precision^{-1}.
    state.blocks[l].beta =
        c.mean + std::sqrt(c.sigma2) * llt.matrixU().solve(z);
  }
}

void sample_lambda(ChainState& state, RandomStream& rng) {
  for (int l = 0; l < 3; ++l) {
    BlockState& b = state.blocks[l];
    const double c2 = b.sigma2 * b.tau * b.tau;
    for (Eigen::Index j = 0; j < b.lambda.size(); ++j) {
      const double beta2 = b.beta(j) * b.beta(j);
      // Kernel on u = log(lambda); the Jacobian cancels the 1/lambda of
      // the Gaussian normalization.
      const auto log_density = [&](double u) {
        return -0.5 * beta2 / c2 * std::exp(-2.0 * u) -
               std::log1p(std::exp(2.0 * u));
      };
      const double u =
          slice_step(std::log(b.lambda(j)), log_density, 1.0, {}, rng);
      b.lambda(j) = std::exp(u);
    }
  }
}

void sample_tau(ChainState& state, RandomStream& rng) {
  if (state.covariate_count() == 0) return;
  for (int l = 0; l < 3; ++l) {
    BlockState& b = state.blocks[l];
    const int p = static_cast<int>(b.beta.size());
    double s = 0.0;
    for (int j = 0; j < p; ++j) {
      s += b.beta(j) * b.beta(j) / (b.sigma2 * b.lambda(j) * b.lambda(j));
    }
    const auto log_density = [&](double v) {
      return (1.0 - p) * v - 0.5 * s * std::exp(-2.0 * v) -
             std::log1p(std::exp(2.0 * v));
    };
    const double v = slice_step(std::log(b.tau), log_density, 1.0, {}, rng);
    b.tau = std::exp(v);
  }
}

void sample_sigma2_regression(ChainState& state, const PanelDataset& data,
                              RandomStream& rng, const PriorSpec& priors) {
  for (int l = 0; l < 3; ++l) {
    const InverseGammaParams ig =
        sigma2_regression_full_conditional(state, data, l, priors);
    state.blocks[l].sigma2 = draw_inverse_gamma(
        ig.shape, floored_rate(ig.rate, "sigma2 block"), rng);
  }
}

ChainState initialize_state(const PanelDataset& data, const ModelSpec& spec,
                            RandomStream& rng) {
  const int n = data.units();
  const int p = spec.variant == Variant::kM3 ? data.covariate_count() : 0;
  if (spec.variant == Variant::kM3 && p == 0) {
    throw std::invalid_argument("initialize_state: m3 requires covariates");
  }
  if (spec.variant == Variant::kM1 && n != 1) {
    throw std::invalid_argument("initialize_state: m1 expects a single unit");
  }
  ChainState state;
  state.theta.resize(n, 3);
  state.xi.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& y = data.trajectories[i].counts;
    const double top = std::max(1.0, 1.2 * y.maxCoeff());
    state.theta(i, 0) = top * rng.uniform(0.9, 1.1);
    // Quartile-crossing span of a logistic: t75 − t25 = 2·log(3)/θ2. The
    // random-walk rate update travels a distance quadratically in steps, so
    // starting within a few posterior sds matters more here than anywhere
    // else; the jitter keeps chains dispersed at about that same scale.
    double rate = 0.1;
    if (y.maxCoeff() > 0.0) {
      int t25 = -1;
      int t75 = -1;
      for (int k = 0; k < y.size(); ++k) {
        if (t25 < 0 && y(k) >= 0.25 * y.maxCoeff()) t25 = k;
        if (t75 < 0 && y(k) >= 0.75 * y.maxCoeff()) t75 = k;
      }
      rate = 2.1972245773362196 / std::max(1, t75 - t25);
    }
    state.theta(i, 1) =
        std::clamp(rate, 0.01, 1.0) * std::exp(rng.uniform(-0.15, 0.15));
    // Day of the largest daily increment, counting from a zero baseline.
    int best = 0;
    double best_inc = y(0);
    for (int k = 1; k < y.size(); ++k) {
      const double inc = y(k) - y(k - 1);
      if (inc > best_inc) {
        best_inc = inc;
        best = k;
      }
    }
    state.theta(i, 2) = (best + 1.0) + rng.uniform(-3.0, 3.0);
    state.xi(i) = std::exp(rng.uniform(-0.3, 0.3));
  }
  double sse = 0.0;
  int points = 0;
  for (int i = 0; i < n; ++i) {
    sse += unit_sse(data.trajectories[i],
                    {state.theta(i, 0), state.theta(i, 1), state.theta(i, 2),
                     state.xi(i)});
    points += data.trajectories[i].days();
  }
  state.sigma2_obs = std::max(1.0, sse / std::max(1, points));
  for (int l = 0; l < 3; ++l) {
    BlockState& b = state.blocks[l];
    b.alpha = state.theta.col(l).mean();
    b.beta = Eigen::VectorXd::Zero(p);
    b.lambda = Eigen::VectorXd::Ones(p);
    b.tau = 1.0;
    // Block scale from the cross-unit spread of the initial estimates. A
    // scale far below that spread would make the first theta draws ignore
    // the data and shrink every unit onto the intercept.
    double spread = 0.0;
    if (n > 1) {
      spread = (state.theta.col(l).array() - b.alpha).square().sum() / (n - 1);
    }
    b.sigma2 = std::max({spread, 1e-4 * b.alpha * b.alpha, 1e-6});
  }
  return state;
}

ChainState gibbs_sweep(ChainState state, const PanelDataset& data,
                       const ModelSpec& spec, const SamplerConfig& config,
                       RandomStream& rng, const PriorSpec& priors,
                       SweepAcceptance* acceptance) {
  check_dims(state, data);
  if (spec.variant == Variant::kM3 && state.covariate_count() == 0) {
    throw std::invalid_argument("gibbs_sweep: m3 state has no covariates");
  }
  const char* step = "";
  try {
    step = "theta1";
    sample_theta1(state, data, rng);
    step = "theta2/theta3";
    sample_theta23(state, data, config.theta2_control, config.theta3_control,
                   rng, acceptance);
    step = "xi";
    sample_xi(state, data, rng);
    step = "sigma2_obs";
    sample_sigma2_obs(state, data, rng, priors);
    step = "alpha";
    sample_alpha(state, data, rng, priors);
    step = "beta";
    sample_beta(state, data, rng);
    step = "lambda";
    sample_lambda(state, rng);
    step = "tau";
    sample_tau(state, rng);
    step = "sigma2 blocks";
    sample_sigma2_regression(state, data, rng, priors);
  } catch (const std::exception& e) {
    throw std::runtime_error("gibbs step '" + std::string(step) +
                             "': " + e.what());
  }
  return state;
}

std::size_t PosteriorDraws::draw_count() const {
  std::size_t total = 0;
  for (const auto& c : chains) total += c.size();
  return total;
}

const ChainState& PosteriorDraws::draw(std::size_t index) const {
  for (const auto& c : chains) {
    if (index < c.size()) return c[index];
    index -= c.size();
  }
  throw std::out_of_range("PosteriorDraws::draw: index out of range");
}

ParameterLayout PosteriorDraws::layout() const {
  return ParameterLayout(unit_ids, covariate_names);
}

PosteriorDraws run_chains(const PanelDataset& data, const ModelSpec& spec,
                          const SamplerConfig& config, const PriorSpec& priors,
                          int max_workers) {
  validate_config(config);
  if (data.units() == 0) {
    throw std::invalid_argument("run_chains: empty panel");
  }
  if (spec.variant == Variant::kM1 && data.units() != 1) {
    throw std::invalid_argument(
        "run_chains: m1 runs on a single-unit panel; restrict the data first");
  }
  if (spec.variant == Variant::kM3 && data.covariate_count() == 0) {
    throw std::invalid_argument("run_chains: m3 requires covariates");
  }

  PosteriorDraws out;
  out.spec = spec;
  out.config = config;
  for (const auto& traj : data.trajectories) {
    out.unit_ids.push_back(traj.unit_id);
  }
  if (spec.variant == Variant::kM3) {
    out.covariate_names = data.covariates->names;
  }
  out.start_date = data.trajectories.front().start_date;
  out.observed_days = data.days();
  out.chains.resize(config.chains);

  const int n = data.units();
  const int post_burn = config.sweeps - config.burn_in;
  std::vector<std::vector<int>> accepted2(config.chains,
                                          std::vector<int>(n, 0));
  std::vector<std::vector<int>> accepted3(config.chains,
                                          std::vector<int>(n, 0));

  const auto run_one = [&](std::size_t c) {
    RandomStream rng = RandomStream(config.seed).derive(c);
    ChainState state = initialize_state(data, spec, rng);
    RobbinsMonroAdapter adapt2(config.theta2_control);
    RobbinsMonroAdapter adapt3(config.theta3_control);
    auto& retained = out.chains[c];
    retained.reserve(post_burn / config.thin);
    for (int sweep = 0; sweep < config.sweeps; ++sweep) {
      SamplerConfig current = config;
      current.theta2_control = adapt2.control();
      current.theta3_control = adapt3.control();
      SweepAcceptance acc;
      try {
        state = gibbs_sweep(std::move(state), data, spec, current, rng, priors,
                            &acc);
      } catch (const std::exception& e) {
        throw std::runtime_error("chain " + std::to_string(c) + ", sweep " +
                                 std::to_string(sweep) + ", " + e.what());
      }
      const bool in_burn_in = sweep < config.burn_in;
      const auto rate = [n](const std::vector<std::uint8_t>& flags) {
        double s = 0.0;
        for (auto f : flags) s += f;
        return s / static_cast<double>(n);
      };
      adapt2.update(rate(acc.theta2), sweep, in_burn_in);
      adapt3.update(rate(acc.theta3), sweep, in_burn_in);
      if (!in_burn_in) {
        for (int i = 0; i < n; ++i) {
          accepted2[c][i] += acc.theta2[i];
          accepted3[c][i] += acc.theta3[i];
        }
        if ((sweep - config.burn_in + 1) % config.thin == 0) {
          retained.push_back(state);
        }
      }
    }
  };
  parallel_for_index(config.chains,
                     max_workers > 0 ? max_workers : worker_cap(), run_one);

  // Acceptance rates pooled over chains, per unit and per family.
  const double denom = static_cast<double>(post_burn) * config.chains;
  double total2 = 0.0;
  double total3 = 0.0;
  for (int i = 0; i < n; ++i) {
    double a2 = 0.0;
    double a3 = 0.0;
    for (int c = 0; c < config.chains; ++c) {
      a2 += accepted2[c][i];
      a3 += accepted3[c][i];
    }
    out.acceptance_rates["theta2[" + out.unit_ids[i] + "]"] = a2 / denom;
    out.acceptance_rates["theta3[" + out.unit_ids[i] + "]"] = a3 / denom;
    total2 += a2;
    total3 += a3;
  }
  out.acceptance_rates["theta2"] = total2 / (denom * n);
  out.acceptance_rates["theta3"] = total3 / (denom * n);

  // Split-Rhat and bulk ESS per scalar.
  const ParameterLayout layout = out.layout();
  const std::size_t n_params = layout.size();
  std::vector<std::vector<std::vector<double>>> series(
      n_params, std::vector<std::vector<double>>(config.chains));
  for (int c = 0; c < config.chains; ++c) {
    for (const auto& state : out.chains[c]) {
      const Eigen::VectorXd flat = layout.flatten(state);
      for (std::size_t k = 0; k < n_params; ++k) {
        series[k][c].push_back(flat(static_cast<Eigen::Index>(k)));
      }
    }
  }
  out.diagnostics.scalars.resize(n_params);
  for (std::size_t k = 0; k < n_params; ++k) {
    out.diagnostics.scalars[k] = ScalarDiagnostic{
        layout.names()[k], split_rhat(series[k]), bulk_ess(series[k])};
  }
  return out;
}

}  // namespace growthcast
