#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "growthcast/data.hpp"
#include "growthcast/diagnostics.hpp"
#include "growthcast/model.hpp"
#include "growthcast/samplers.hpp"

namespace growthcast {

// Inverse-gamma prior for a variance. shape = rate = 0 encodes the
// scale-invariant 1/sigma^2 prior used in production runs; proper values
// are substituted by simulation-consistency tests.
struct VariancePrior {
  double shape = 0.0;
  double rate = 0.0;
};

struct PriorSpec {
  VariancePrior observation_variance;
  VariancePrior regression_variance;
  // Prior precision of the block intercepts; 0 means flat.
  double alpha_precision = 0.0;
};

struct SamplerConfig {
  int sweeps = 20000;
  int burn_in = 10000;
  int thin = 10;
  int chains = 4;
  std::uint64_t seed = 0;
  MetropolisControl theta2_control{0.02, true, 0.3};
  MetropolisControl theta3_control{1.0, true, 0.3};

  // Small settings for laptops and tests: 2000 sweeps, 1000 burn-in,
  // no thinning, 2 chains.
  static SamplerConfig desk_scale();
};

void validate_config(const SamplerConfig& config);

struct GaussianMoments {
  double mean = 0.0;
  double variance = 0.0;
};

struct InverseGammaParams {
  double shape = 0.0;
  double rate = 0.0;
};

// Full conditional of beta for one block, in precision form. `precision`
// is X'X + (tau^2 Lambda)^{-1} after any stabilizing jitter; the covariance
// of the draw is sigma2 * precision^{-1}.
struct BetaConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision;
  double sigma2 = 0.0;
  bool jittered = false;
};

// Closed-form full conditionals. The sampling steps below draw from these;
// tests check them against the joint density on grids.
GaussianMoments theta1_full_conditional(const ChainState& state,
                                        const PanelDataset& data, int unit);
double theta2_conditional_log_density(const ChainState& state,
                                      const PanelDataset& data, int unit,
                                      double value);
double theta3_conditional_log_density(const ChainState& state,
                                      const PanelDataset& data, int unit,
                                      double value);
// Data term of the xi update on the eta = log(xi) scale; the N(0,1) prior
// on eta is the ellipse measure and is not part of this value.
double xi_ess_log_likelihood(const ChainState& state, const PanelDataset& data,
                             int unit, double eta);
// Full conditional of xi itself (likelihood times lognormal prior).
double xi_conditional_log_density(const ChainState& state,
                                  const PanelDataset& data, int unit,
                                  double value);
InverseGammaParams sigma2_obs_full_conditional(const ChainState& state,
                                               const PanelDataset& data,
                                               const PriorSpec& priors = {});
GaussianMoments alpha_full_conditional(const ChainState& state,
                                       const PanelDataset& data, int block,
                                       double alpha_precision = 0.0);
BetaConditional beta_full_conditional(const ChainState& state,
                                      const PanelDataset& data, int block);
double lambda_conditional_log_density(const ChainState& state, int block,
                                      int covariate, double value);
double tau_conditional_log_density(const ChainState& state, int block,
                                   double value);
InverseGammaParams sigma2_regression_full_conditional(
    const ChainState& state, const PanelDataset& data, int block,
    const PriorSpec& priors = {});

// Per-unit acceptance flags of the Metropolis updates in one sweep.
struct SweepAcceptance {
  std::vector<std::uint8_t> theta2;
  std::vector<std::uint8_t> theta3;
};

// Individual sampling steps, each drawing from its full conditional given
// the rest of the state. Exposed for simulation-consistency tests; normal
// use goes through gibbs_sweep/run_chains.
void sample_theta1(ChainState& state, const PanelDataset& data,
                   RandomStream& rng);
void sample_theta23(ChainState& state, const PanelDataset& data,
                    const MetropolisControl& theta2_control,
                    const MetropolisControl& theta3_control, RandomStream& rng,
                    SweepAcceptance* acceptance = nullptr);
void sample_xi(ChainState& state, const PanelDataset& data, RandomStream& rng);
void sample_sigma2_obs(ChainState& state, const PanelDataset& data,
                       RandomStream& rng, const PriorSpec& priors = {});
void sample_alpha(ChainState& state, const PanelDataset& data,
                  RandomStream& rng, const PriorSpec& priors = {});
void sample_beta(ChainState& state, const PanelDataset& data,
                 RandomStream& rng);
void sample_lambda(ChainState& state, RandomStream& rng);
void sample_tau(ChainState& state, RandomStream& rng);
void sample_sigma2_regression(ChainState& state, const PanelDataset& data,
                              RandomStream& rng, const PriorSpec& priors = {});

// Overdispersed starting point: curve parameters from the data (asymptote
// a bit above the observed maximum, lag at the steepest daily increase)
// with per-chain jitter on theta1 and theta3.
ChainState initialize_state(const PanelDataset& data, const ModelSpec& spec,
                            RandomStream& rng);

// One full scan over steps theta1, (theta2, theta3), xi, sigma2_obs, alpha,
// beta, lambda, tau, sigma2 per block. Covariate steps are skipped when the
// state carries no covariate effects.
ChainState gibbs_sweep(ChainState state, const PanelDataset& data,
                       const ModelSpec& spec, const SamplerConfig& config,
                       RandomStream& rng, const PriorSpec& priors = {},
                       SweepAcceptance* acceptance = nullptr);

struct PosteriorDraws {
  ModelSpec spec;
  SamplerConfig config;
  std::vector<std::string> unit_ids;
  std::vector<std::string> covariate_names;
  Date start_date{};
  int observed_days = 0;
  // chains[c][k] is the k-th retained state of chain c.
  std::vector<std::vector<ChainState>> chains;
  // Post-burn-in Metropolis acceptance rates, keyed theta2[unit] and
  // theta3[unit], plus family means under keys theta2, theta3.
  std::map<std::string, double> acceptance_rates;
  Diagnostics diagnostics;

  std::size_t draw_count() const;
  // Chain-major access across all retained draws.
  const ChainState& draw(std::size_t index) const;
  ParameterLayout layout() const;
};

// Runs `config.chains` independent chains (in parallel up to max_workers;
// 0 means the GROWTHCAST_THREADS cap) and collects retained draws plus
// convergence diagnostics. Chain c draws from substream c of config.seed,
// so results are reproducible and independent of worker scheduling.
PosteriorDraws run_chains(const PanelDataset& data, const ModelSpec& spec,
                          const SamplerConfig& config,
                          const PriorSpec& priors = {}, int max_workers = 0);

}  // namespace growthcast
