// Command-line front end: fit, predict, evaluate, rank.
//
// Settings come from defaults, then an optional JSON config file, then
// command-line flags named after the config fields (dotted for nesting),
// each layer overriding the previous one.

#include <CLI11.hpp>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "growthcast/cli.hpp"

namespace {

using growthcast::RunConfig;

// Parsed flag values land in `values`; after parsing, the appliers of the
// flags that were actually given copy them onto the effective config, so a
// config file never clobbers an explicit flag.
struct SubcommandState {
  std::string config_path;
  RunConfig values;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&, const RunConfig&)>>>
      appliers;

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = growthcast::load_run_config(config_path);
    }
    for (const auto& [option, apply] : appliers) {
      if (option->count() > 0) {
        apply(cfg, values);
      }
    }
    return cfg;
  }
};

// Registers the sampler flag family under `prefix` ("sampler." or
// "evaluation.sampler."); `pick` selects which nested SamplerConfig a flag
// reads from and writes to.
void add_sampler_flags(
    CLI::App* sub, SubcommandState& st, const std::string& prefix,
    std::function<growthcast::SamplerConfig&(RunConfig&)> pick) {
  auto bind = [&st](CLI::Option* opt,
                    std::function<void(RunConfig&, const RunConfig&)> apply) {
    st.appliers.emplace_back(opt, std::move(apply));
  };
  auto from = [pick](const RunConfig& cfg) -> const growthcast::SamplerConfig& {
    return pick(const_cast<RunConfig&>(cfg));
  };
  growthcast::SamplerConfig& slot = pick(st.values);
  bind(sub->add_option("--" + prefix + "sweeps", slot.sweeps,
                       "Gibbs sweeps per chain"),
       [pick, from](RunConfig& c, const RunConfig& v) {
         pick(c).sweeps = from(v).sweeps;
       });
  bind(sub->add_option("--" + prefix + "burn_in", slot.burn_in,
                       "Sweeps discarded from the front of each chain"),
       [pick, from](RunConfig& c, const RunConfig& v) {
         pick(c).burn_in = from(v).burn_in;
       });
  bind(sub->add_option("--" + prefix + "thin", slot.thin,
                       "Keep every thin-th post-burn-in sweep"),
       [pick, from](RunConfig& c, const RunConfig& v) {
         pick(c).thin = from(v).thin;
       });
  bind(sub->add_option("--" + prefix + "chains", slot.chains,
                       "Number of independent chains"),
       [pick, from](RunConfig& c, const RunConfig& v) {
         pick(c).chains = from(v).chains;
       });
  bind(sub->add_option("--" + prefix + "seed", slot.seed, "Random seed"),
       [pick, from](RunConfig& c, const RunConfig& v) {
         pick(c).seed = from(v).seed;
       });
  bind(sub->add_option("--" + prefix + "theta2_proposal_sd",
                       slot.theta2_control.proposal_sd,
                       "Initial growth-rate proposal scale"),
       [pick, from](RunConfig& c, const RunConfig& v) {
         pick(c).theta2_control.proposal_sd =
             from(v).theta2_control.proposal_sd;
       });
  bind(sub->add_option("--" + prefix + "theta3_proposal_sd",
                       slot.theta3_control.proposal_sd,
                       "Initial inflection-point proposal scale"),
       [pick, from](RunConfig& c, const RunConfig& v) {
         pick(c).theta3_control.proposal_sd =
             from(v).theta3_control.proposal_sd;
       });
  bind(sub->add_flag("--" + prefix + "adapt,!--no-" + prefix + "adapt",
                     slot.theta2_control.adapt,
                     "Tune proposal scales during burn-in"),
       [pick, from](RunConfig& c, const RunConfig& v) {
         const bool adapt = from(v).theta2_control.adapt;
         pick(c).theta2_control.adapt = adapt;
         pick(c).theta3_control.adapt = adapt;
       });
  bind(sub->add_option("--" + prefix + "target_acceptance",
                       slot.theta2_control.target_acceptance,
                       "Acceptance rate the tuner aims for"),
       [pick, from](RunConfig& c, const RunConfig& v) {
         const double t = from(v).theta2_control.target_acceptance;
         pick(c).theta2_control.target_acceptance = t;
         pick(c).theta3_control.target_acceptance = t;
       });
}

void add_common_flags(CLI::App* sub, SubcommandState& st) {
  auto bind = [&st](CLI::Option* opt,
                    std::function<void(RunConfig&, const RunConfig&)> apply) {
    st.appliers.emplace_back(opt, std::move(apply));
  };
  sub->add_option("--config", st.config_path, "JSON config file")
      ->check(CLI::ExistingFile);

  bind(sub->add_option("--trajectories", st.values.trajectories,
                       "Cumulative-count CSV"),
       [](RunConfig& c, const RunConfig& v) { c.trajectories = v.trajectories; });
  bind(sub->add_option("--trajectory_format", st.values.trajectory_format,
                       "Input layout: long or jhu_wide"),
       [](RunConfig& c, const RunConfig& v) {
         c.trajectory_format = v.trajectory_format;
       });
  bind(sub->add_option("--covariates", st.values.covariates,
                       "Unit-level covariate CSV"),
       [](RunConfig& c, const RunConfig& v) { c.covariates = v.covariates; });
  bind(sub->add_option("--model", st.values.model,
                       "Model variant: m1, m2, or m3"),
       [](RunConfig& c, const RunConfig& v) { c.model = v.model; });
  bind(sub->add_option("--unit", st.values.unit,
                       "Unit id (m1 fits a single unit)"),
       [](RunConfig& c, const RunConfig& v) { c.unit = v.unit; });
  bind(sub->add_option("--gamma", st.values.gamma,
                       "Flat-time progression fractions in (0,1)")
           ->delimiter(','),
       [](RunConfig& c, const RunConfig& v) { c.gamma = v.gamma; });
  bind(sub->add_option("--horizon", st.values.horizon,
                       "Days to extrapolate past the observed range"),
       [](RunConfig& c, const RunConfig& v) { c.horizon = v.horizon; });
  bind(sub->add_option("--level", st.values.level,
                       "Credible-interval level in (0,1)"),
       [](RunConfig& c, const RunConfig& v) { c.level = v.level; });
  bind(sub->add_flag("--include_observation_noise,!--no-include_observation_noise",
                     st.values.include_observation_noise,
                     "Widen forecast bands to the posterior predictive"),
       [](RunConfig& c, const RunConfig& v) {
         c.include_observation_noise = v.include_observation_noise;
       });
  bind(sub->add_flag("--running_max,!--no-running_max", st.values.running_max,
                     "Replace each trajectory by its running maximum"),
       [](RunConfig& c, const RunConfig& v) { c.running_max = v.running_max; });
  bind(sub->add_option("--out", st.values.out, "Output directory"),
       [](RunConfig& c, const RunConfig& v) { c.out = v.out; });
  bind(sub->add_option("--draws", st.values.draws,
                       "Draws CSV from a previous fit"),
       [](RunConfig& c, const RunConfig& v) { c.draws = v.draws; });

  add_sampler_flags(sub, st, "sampler.",
                    [](RunConfig& c) -> growthcast::SamplerConfig& {
                      return c.sampler;
                    });
  bind(sub->add_option("--seed", st.values.sampler.seed,
                       "Shorthand for --sampler.seed"),
       [](RunConfig& c, const RunConfig& v) { c.sampler.seed = v.sampler.seed; });

  bind(sub->add_option("--evaluation.test_days", st.values.evaluation.test_days,
                       "Holdout lengths in days")
           ->delimiter(','),
       [](RunConfig& c, const RunConfig& v) {
         c.evaluation.test_days = v.evaluation.test_days;
       });
  bind(sub->add_option("--evaluation.replicates",
                       st.values.evaluation.replicates,
                       "Refits per model and holdout length"),
       [](RunConfig& c, const RunConfig& v) {
         c.evaluation.replicates = v.evaluation.replicates;
       });
  bind(sub->add_option("--evaluation.models", st.values.evaluation.models,
                       "Model variants to compare")
           ->delimiter(','),
       [](RunConfig& c, const RunConfig& v) {
         c.evaluation.models = v.evaluation.models;
       });
  bind(sub->add_option("--evaluation.base_seed",
                       st.values.evaluation.base_seed,
                       "Seed for replicate 0 (replicate r adds r)"),
       [](RunConfig& c, const RunConfig& v) {
         c.evaluation.base_seed = v.evaluation.base_seed;
         c.evaluation.base_seed_set = true;
       });

  add_sampler_flags(sub, st, "evaluation.sampler.",
                    [](RunConfig& c) -> growthcast::SamplerConfig& {
                      return c.evaluation.sampler;
                    });

  bind(sub->add_option("--rank.block", st.values.rank.block,
                       "Coefficient block to rank (1-3; 0 = all)"),
       [](RunConfig& c, const RunConfig& v) { c.rank.block = v.rank.block; });
  bind(sub->add_option("--rank.top_k", st.values.rank.top_k,
                       "How many covariates to report"),
       [](RunConfig& c, const RunConfig& v) { c.rank.top_k = v.rank.top_k; });
  bind(sub->add_flag("--rank.report_scale,!--no-rank.report_scale",
                     st.values.rank.report_scale,
                     "Add centering/scaling constants to rank output"),
       [](RunConfig& c, const RunConfig& v) {
         c.rank.report_scale = v.rank.report_scale;
       });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical growth-curve fitting, forecasting, and model comparison"};
  app.require_subcommand(1);

  SubcommandState fit_state, predict_state, evaluate_state, rank_state;
  int exit_code = 0;

  auto* fit = app.add_subcommand("fit", "Run the sampler and persist draws");
  add_common_flags(fit, fit_state);
  fit->callback([&] { exit_code = growthcast::cmd_fit(fit_state.resolve()); });

  auto* predict = app.add_subcommand(
      "predict", "Forecasts, flat times, and classifications from saved draws");
  add_common_flags(predict, predict_state);
  predict->callback(
      [&] { exit_code = growthcast::cmd_predict(predict_state.resolve()); });

  auto* evaluate = app.add_subcommand(
      "evaluate", "Holdout forecast-error comparison across model variants");
  add_common_flags(evaluate, evaluate_state);
  evaluate->callback(
      [&] { exit_code = growthcast::cmd_evaluate(evaluate_state.resolve()); });

  auto* rank = app.add_subcommand(
      "rank", "Rank covariates by absolute posterior mean effect");
  add_common_flags(rank, rank_state);
  rank->callback(
      [&] { exit_code = growthcast::cmd_rank(rank_state.resolve()); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const growthcast::ConfigError& e) {
    std::fprintf(stderr, "growthcast: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "growthcast: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "growthcast: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "growthcast: %s\n", e.what());
    return 3;
  }
  return exit_code;
}
