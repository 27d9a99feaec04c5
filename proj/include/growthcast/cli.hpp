#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "growthcast/errors.hpp"
#include "growthcast/evaluation.hpp"
#include "growthcast/gibbs.hpp"

namespace growthcast {

// Settings of the holdout comparison command.
struct EvaluationSettings {
  std::vector<int> test_days = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28};
  int replicates = 5;
  std::vector<std::string> models = {"m1", "m2", "m3"};
  // Defaults to the run seed when not set explicitly.
  std::uint64_t base_seed = 0;
  bool base_seed_set = false;
  SamplerConfig sampler = SamplerConfig::desk_scale();
};

struct RankSettings {
  // 1, 2, or 3 selects one coefficient block; 0 ranks all three.
  int block = 0;
  int top_k = 10;
  // Adds the centering/scaling constants of each covariate so effects can
  // be mapped back to the raw scale.
  bool report_scale = false;
};

// Everything a run needs, assembled from defaults, a JSON config file, and
// command-line overrides, in that order.
struct RunConfig {
  std::string trajectories;
  std::string trajectory_format = "long";
  std::string covariates;
  std::string model = "m3";
  std::string unit;
  SamplerConfig sampler;
  std::vector<double> gamma = {0.9, 0.99, 0.999, 0.9999};
  int horizon = 120;
  double level = 0.95;
  bool include_observation_noise = false;
  bool running_max = false;
  std::string out = ".";
  std::string draws;
  EvaluationSettings evaluation;
  RankSettings rank;
};

RunConfig load_run_config(const std::filesystem::path& path);

// Centering and scaling constants covariates were standardized with, kept
// alongside draws so coefficient reports can be mapped to the raw scale.
struct CovariateScaling {
  Eigen::VectorXd centers;
  Eigen::VectorXd scales;
};

// Draw storage: a columnar CSV (chain, draw, one column per scalar in
// layout order) plus a JSON sidecar <stem>.meta.json carrying the model,
// sampler settings, unit ids, covariate names, calendar anchoring,
// acceptance rates, and covariate scaling when given. Values are written
// with enough digits to roundtrip.
void write_draws_csv(const PosteriorDraws& draws,
                     const std::filesystem::path& csv_path,
                     const CovariateScaling* scaling = nullptr);
PosteriorDraws read_draws_csv(const std::filesystem::path& csv_path,
                              CovariateScaling* scaling = nullptr);

void write_summary_csv(const PosteriorDraws& draws, double level,
                       const std::filesystem::path& path);
void write_diagnostics_csv(const PosteriorDraws& draws,
                           const std::filesystem::path& path);

// Subcommand entry points. Each validates the pieces of the config it
// uses, throwing ConfigError for bad settings, and returns 0 on success.
int cmd_fit(const RunConfig& config);
int cmd_predict(const RunConfig& config);
int cmd_evaluate(const RunConfig& config);
int cmd_rank(const RunConfig& config);

}  // namespace growthcast
