#include "growthcast/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "growthcast/inference.hpp"

#ifndef GROWTHCAST_GIT_DESCRIBE
#define GROWTHCAST_GIT_DESCRIBE "unknown"
#endif

namespace growthcast {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void reject_unknown_keys(const json& object, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, unused] : object.items()) {
    if (!known.contains(key)) {
      throw ConfigError("config: unknown key '" + where + key + "'");
    }
  }
}

void apply_sampler(const json& j, SamplerConfig& sampler,
                   const std::string& where) {
  reject_unknown_keys(j,
                      {"sweeps", "burn_in", "thin", "chains", "seed",
                       "theta2_proposal_sd", "theta3_proposal_sd", "adapt",
                       "target_acceptance"},
                      where);
  sampler.sweeps = j.value("sweeps", sampler.sweeps);
  sampler.burn_in = j.value("burn_in", sampler.burn_in);
  sampler.thin = j.value("thin", sampler.thin);
  sampler.chains = j.value("chains", sampler.chains);
  sampler.seed = j.value("seed", sampler.seed);
  sampler.theta2_control.proposal_sd =
      j.value("theta2_proposal_sd", sampler.theta2_control.proposal_sd);
  sampler.theta3_control.proposal_sd =
      j.value("theta3_proposal_sd", sampler.theta3_control.proposal_sd);
  const bool adapt = j.value("adapt", sampler.theta2_control.adapt);
  const double target =
      j.value("target_acceptance", sampler.theta2_control.target_acceptance);
  sampler.theta2_control.adapt = adapt;
  sampler.theta3_control.adapt = adapt;
  sampler.theta2_control.target_acceptance = target;
  sampler.theta3_control.target_acceptance = target;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  if (!j.is_object()) {
    throw ConfigError("config: top level must be a JSON object");
  }
  reject_unknown_keys(
      j,
      {"trajectories", "trajectory_format", "covariates", "model", "unit",
       "sampler", "gamma", "horizon", "level", "include_observation_noise",
       "running_max", "out", "draws", "evaluation", "rank"},
      "");
  RunConfig cfg;
  try {
    cfg.trajectories = j.value("trajectories", cfg.trajectories);
    cfg.trajectory_format = j.value("trajectory_format", cfg.trajectory_format);
    cfg.covariates = j.value("covariates", cfg.covariates);
    cfg.model = j.value("model", cfg.model);
    cfg.unit = j.value("unit", cfg.unit);
    if (j.contains("sampler")) {
      apply_sampler(j.at("sampler"), cfg.sampler, "sampler.");
    }
    if (j.contains("gamma")) {
      cfg.gamma = j.at("gamma").get<std::vector<double>>();
    }
    cfg.horizon = j.value("horizon", cfg.horizon);
    cfg.level = j.value("level", cfg.level);
    cfg.include_observation_noise =
        j.value("include_observation_noise", cfg.include_observation_noise);
    cfg.running_max = j.value("running_max", cfg.running_max);
    cfg.out = j.value("out", cfg.out);
    cfg.draws = j.value("draws", cfg.draws);
    if (j.contains("evaluation")) {
      const json& e = j.at("evaluation");
      reject_unknown_keys(
          e, {"test_days", "replicates", "models", "base_seed", "sampler"},
          "evaluation.");
      if (e.contains("test_days")) {
        cfg.evaluation.test_days = e.at("test_days").get<std::vector<int>>();
      }
      cfg.evaluation.replicates =
          e.value("replicates", cfg.evaluation.replicates);
      if (e.contains("models")) {
        cfg.evaluation.models =
            e.at("models").get<std::vector<std::string>>();
      }
      if (e.contains("base_seed")) {
        cfg.evaluation.base_seed = e.at("base_seed").get<std::uint64_t>();
        cfg.evaluation.base_seed_set = true;
      }
      if (e.contains("sampler")) {
        apply_sampler(e.at("sampler"), cfg.evaluation.sampler,
                      "evaluation.sampler.");
      }
    }
    if (j.contains("rank")) {
      const json& r = j.at("rank");
      reject_unknown_keys(r, {"block", "top_k", "report_scale"}, "rank.");
      cfg.rank.block = r.value("block", cfg.rank.block);
      cfg.rank.top_k = r.value("top_k", cfg.rank.top_k);
      cfg.rank.report_scale = r.value("report_scale", cfg.rank.report_scale);
    }
  } catch (const json::exception& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  return cfg;
}

void write_draws_csv(const PosteriorDraws& draws,
                     const std::filesystem::path& csv_path,
                     const CovariateScaling* scaling) {
  const ParameterLayout layout = draws.layout();
  std::ofstream out(csv_path);
  if (!out) {
    throw std::runtime_error("cannot open " + csv_path.string() +
                             " for writing");
  }
  out << "chain,draw";
  for (const auto& name : layout.names()) {
    out << ',' << csv_escape(name);
  }
  out << '\n';
  for (std::size_t c = 0; c < draws.chains.size(); ++c) {
    for (std::size_t k = 0; k < draws.chains[c].size(); ++k) {
      out << c << ',' << k;
      const Eigen::VectorXd flat = layout.flatten(draws.chains[c][k]);
      for (Eigen::Index v = 0; v < flat.size(); ++v) {
        out << ',' << fmt17(flat(v));
      }
      out << '\n';
    }
  }
  if (!out.good()) {
    throw std::runtime_error("write failed for " + csv_path.string());
  }

  json meta;
  meta["model"] = variant_name(draws.spec.variant);
  if (draws.spec.unit) {
    meta["unit"] = *draws.spec.unit;
  }
  meta["seed"] = draws.config.seed;
  meta["sweeps"] = draws.config.sweeps;
  meta["burn_in"] = draws.config.burn_in;
  meta["thin"] = draws.config.thin;
  meta["chains"] = draws.config.chains;
  meta["theta2_proposal_sd"] = draws.config.theta2_control.proposal_sd;
  meta["theta3_proposal_sd"] = draws.config.theta3_control.proposal_sd;
  meta["unit_ids"] = draws.unit_ids;
  meta["covariate_names"] = draws.covariate_names;
  meta["start_date"] = format_date(draws.start_date);
  meta["observed_days"] = draws.observed_days;
  meta["acceptance_rates"] = draws.acceptance_rates;
  if (scaling != nullptr && scaling->centers.size() > 0) {
    meta["covariate_centers"] = std::vector<double>(
        scaling->centers.begin(), scaling->centers.end());
    meta["covariate_scales"] = std::vector<double>(
        scaling->scales.begin(), scaling->scales.end());
  }
  meta["version"] = GROWTHCAST_GIT_DESCRIBE;
  std::filesystem::path meta_path = csv_path;
  meta_path.replace_extension(".meta.json");
  std::ofstream meta_out(meta_path);
  if (!meta_out) {
    throw std::runtime_error("cannot open " + meta_path.string() +
                             " for writing");
  }
  meta_out << meta.dump(2) << '\n';
}

PosteriorDraws read_draws_csv(const std::filesystem::path& csv_path,
                              CovariateScaling* scaling) {
  std::filesystem::path meta_path = csv_path;
  meta_path.replace_extension(".meta.json");
  std::ifstream meta_in(meta_path);
  if (!meta_in) {
    throw ConfigError("cannot open draw metadata " + meta_path.string());
  }
  PosteriorDraws draws;
  try {
    const json meta = json::parse(meta_in);
    draws.spec.variant = variant_from_name(meta.at("model").get<std::string>());
    if (meta.contains("unit")) {
      draws.spec.unit = meta.at("unit").get<std::string>();
    }
    draws.config.seed = meta.at("seed").get<std::uint64_t>();
    draws.config.sweeps = meta.at("sweeps").get<int>();
    draws.config.burn_in = meta.at("burn_in").get<int>();
    draws.config.thin = meta.at("thin").get<int>();
    draws.config.chains = meta.at("chains").get<int>();
    draws.unit_ids = meta.at("unit_ids").get<std::vector<std::string>>();
    draws.covariate_names =
        meta.at("covariate_names").get<std::vector<std::string>>();
    draws.start_date = parse_date_iso(meta.at("start_date").get<std::string>());
    draws.observed_days = meta.at("observed_days").get<int>();
    for (const auto& [key, value] : meta.at("acceptance_rates").items()) {
      draws.acceptance_rates[key] = value.get<double>();
    }
    if (scaling != nullptr) {
      scaling->centers.resize(0);
      scaling->scales.resize(0);
      if (meta.contains("covariate_centers")) {
        const auto centers =
            meta.at("covariate_centers").get<std::vector<double>>();
        const auto scales =
            meta.at("covariate_scales").get<std::vector<double>>();
        scaling->centers = Eigen::Map<const Eigen::VectorXd>(
            centers.data(), static_cast<Eigen::Index>(centers.size()));
        scaling->scales = Eigen::Map<const Eigen::VectorXd>(
            scales.data(), static_cast<Eigen::Index>(scales.size()));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("draw metadata: " + std::string(e.what()));
  }

  std::ifstream in(csv_path);
  if (!in) {
    throw ConfigError("cannot open draws file " + csv_path.string());
  }
  const ParameterLayout layout(draws.unit_ids, draws.covariate_names);
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("draws file is empty");
  }
  const auto header = split_csv_record(line);
  if (header.size() != layout.size() + 2 || header[0] != "chain" ||
      header[1] != "draw") {
    throw ConfigError("draws header does not match metadata");
  }
  for (std::size_t k = 0; k < layout.size(); ++k) {
    if (header[k + 2] != layout.names()[k]) {
      throw ConfigError("draws column '" + header[k + 2] +
                        "' does not match expected '" + layout.names()[k] + "'");
    }
  }
  draws.chains.resize(draws.config.chains);
  Eigen::VectorXd flat(layout.size());
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_csv_record(line);
    if (fields.size() != layout.size() + 2) {
      throw ConfigError("draws row " + std::to_string(row) +
                        ": wrong field count");
    }
    const int chain = std::stoi(fields[0]);
    if (chain < 0 || chain >= draws.config.chains) {
      throw ConfigError("draws row " + std::to_string(row) +
                        ": chain out of range");
    }
    for (std::size_t k = 0; k < layout.size(); ++k) {
      flat(static_cast<Eigen::Index>(k)) = std::stod(fields[k + 2]);
    }
    draws.chains[chain].push_back(layout.unflatten(flat));
  }
  if (draws.draw_count() == 0) {
    throw ConfigError("draws file has no draws");
  }
  return draws;
}

void write_summary_csv(const PosteriorDraws& draws, double level,
                       const std::filesystem::path& path) {
  const ParameterLayout layout = draws.layout();
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  const std::size_t n = draws.draw_count();
  std::vector<std::vector<double>> series(layout.size(),
                                          std::vector<double>(n));
  std::size_t s = 0;
  for (const auto& chain : draws.chains) {
    for (const auto& state : chain) {
      const Eigen::VectorXd flat = layout.flatten(state);
      for (std::size_t k = 0; k < layout.size(); ++k) {
        series[k][s] = flat(static_cast<Eigen::Index>(k));
      }
      ++s;
    }
  }
  out << "parameter,mean,lower,upper,level\n";
  for (std::size_t k = 0; k < layout.size(); ++k) {
    const CredibleSummary cs = summarize(series[k], level);
    out << csv_escape(layout.names()[k]) << ',' << fmt17(cs.mean) << ','
        << fmt17(cs.lower) << ',' << fmt17(cs.upper) << ',' << fmt17(level)
        << '\n';
  }
}

void write_diagnostics_csv(const PosteriorDraws& draws,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "parameter,split_rhat,bulk_ess,acceptance_rate\n";
  for (const auto& scalar : draws.diagnostics.scalars) {
    out << csv_escape(scalar.name) << ',' << fmt17(scalar.split_rhat) << ','
        << fmt17(scalar.bulk_ess) << ',';
    const auto it = draws.acceptance_rates.find(scalar.name);
    if (it != draws.acceptance_rates.end()) {
      out << fmt17(it->second);
    }
    out << '\n';
  }
}

namespace {

TrajectoryFormat parse_format(const std::string& name) {
  if (name == "long") return TrajectoryFormat::kLong;
  if (name == "jhu_wide") return TrajectoryFormat::kJhuWide;
  throw ConfigError("unknown trajectory_format '" + name +
                    "' (expected long or jhu_wide)");
}

// Loads trajectories and, when wanted, standardized covariates. Loader
// failures are configuration problems from the caller's point of view.
PanelDataset load_panel(const RunConfig& cfg, bool with_covariates,
                        CovariateScaling* scaling = nullptr) {
  if (cfg.trajectories.empty()) {
    throw ConfigError("no trajectories file given");
  }
  try {
    auto trajectories =
        load_trajectories(cfg.trajectories, parse_format(cfg.trajectory_format));
    if (cfg.running_max) {
      for (auto& y : trajectories) {
        y = running_maximum(y);
      }
    }
    std::optional<CovariateTable> covariates;
    if (with_covariates) {
      if (cfg.covariates.empty()) {
        throw ConfigError("model needs covariates but none were given");
      }
      StandardizeReport report;
      covariates = standardize(load_covariates(cfg.covariates), &report);
      for (int j = 0; j < covariates->covariates(); ++j) {
        if (report.imputed_counts[j] > 0) {
          std::fprintf(stderr,
                       "growthcast: imputed %d missing value(s) in '%s' with "
                       "median %g\n",
                       report.imputed_counts[j], covariates->names[j].c_str(),
                       report.imputed_values(j));
        }
      }
      if (scaling != nullptr) {
        scaling->centers = report.centers;
        scaling->scales = report.scales;
      }
    }
    return make_panel(std::move(trajectories), std::move(covariates));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::string sanitize_filename(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("level must lie in (0, 1)");
  }
}

void check_gamma(const std::vector<double>& gamma) {
  if (gamma.empty()) {
    throw ConfigError("gamma list is empty");
  }
  for (double g : gamma) {
    if (!(g > 0.0 && g < 1.0)) {
      throw ConfigError("gamma values must lie in (0, 1)");
    }
  }
}

std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir = cfg.out.empty() ? "." : cfg.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
  return dir;
}

void write_band_csv(const ForecastBand& band,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "t,date,mean,lower,upper\n";
  for (std::size_t k = 0; k < band.days.size(); ++k) {
    out << band.days[k] << ',' << format_date(band.dates[k]) << ','
        << fmt17(band.mean(static_cast<Eigen::Index>(k))) << ','
        << fmt17(band.lower(static_cast<Eigen::Index>(k))) << ','
        << fmt17(band.upper(static_cast<Eigen::Index>(k))) << '\n';
  }
}

}  // namespace

int cmd_fit(const RunConfig& cfg) {
  const Variant variant = [&] {
    try {
      return variant_from_name(cfg.model);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }();
  try {
    validate_config(cfg.sampler);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  check_level(cfg.level);

  CovariateScaling scaling;
  PanelDataset panel = load_panel(cfg, variant == Variant::kM3, &scaling);
  ModelSpec spec{variant, std::nullopt};
  if (variant == Variant::kM1) {
    if (cfg.unit.empty()) {
      throw ConfigError("m1 needs --unit");
    }
    const auto it = std::find_if(
        panel.trajectories.begin(), panel.trajectories.end(),
        [&](const Trajectory& y) { return y.unit_id == cfg.unit; });
    if (it == panel.trajectories.end()) {
      throw ConfigError("unit '" + cfg.unit + "' not found in trajectories");
    }
    panel = make_panel({*it}, std::nullopt);
    spec.unit = cfg.unit;
  }

  const PosteriorDraws draws = run_chains(panel, spec, cfg.sampler);

  const auto dir = ensure_out_dir(cfg);
  write_draws_csv(draws, dir / "draws.csv",
                  scaling.centers.size() > 0 ? &scaling : nullptr);
  write_summary_csv(draws, cfg.level, dir / "summary.csv");
  write_diagnostics_csv(draws, dir / "diagnostics.csv");

  const int below = count_theta1_at_or_below_observed_max(draws, panel);
  if (below > 0) {
    const double share =
        static_cast<double>(below) /
        (static_cast<double>(draws.draw_count()) * panel.units());
    std::fprintf(stderr,
                 "growthcast: warning: %.1f%% of final-size draws do not "
                 "exceed the observed maximum; trajectories may be far from "
                 "their plateau\n",
                 100.0 * share);
  }
  std::printf("wrote %s\n", (dir / "draws.csv").string().c_str());
  std::printf("wrote %s\n", (dir / "summary.csv").string().c_str());
  std::printf("wrote %s\n", (dir / "diagnostics.csv").string().c_str());
  return 0;
}

int cmd_predict(const RunConfig& cfg) {
  if (cfg.draws.empty()) {
    throw ConfigError("predict needs --draws pointing at a draws csv");
  }
  if (cfg.horizon < 0) {
    throw ConfigError("horizon must be >= 0");
  }
  check_level(cfg.level);
  check_gamma(cfg.gamma);
  const PosteriorDraws draws = read_draws_csv(cfg.draws);
  const auto dir = ensure_out_dir(cfg);

  const int n = static_cast<int>(draws.unit_ids.size());
  for (int i = 0; i < n; ++i) {
    const ForecastBand band =
        extrapolate(draws, i, cfg.horizon, cfg.level,
                    cfg.include_observation_noise, draws.config.seed);
    write_band_csv(band,
                   dir / ("forecast_" + sanitize_filename(draws.unit_ids[i]) +
                          ".csv"));
  }

  {
    std::ofstream out(dir / "flat_times.csv");
    if (!out) {
      throw std::runtime_error("cannot open flat_times.csv for writing");
    }
    out << "unit,gamma,mean_day,mean_date,lower,upper\n";
    char gamma_text[32];
    for (int i = 0; i < n; ++i) {
      for (double gamma : cfg.gamma) {
        const CredibleSummary s = flat_time_summary(draws, i, gamma, cfg.level);
        std::snprintf(gamma_text, sizeof(gamma_text), "%g", gamma);
        out << csv_escape(draws.unit_ids[i]) << ',' << gamma_text << ','
            << fmt17(s.mean) << ','
            << format_date(date_for_day(draws.start_date, s.mean)) << ','
            << fmt17(s.lower) << ',' << fmt17(s.upper) << '\n';
      }
    }
  }

  write_band_csv(grand_average_curve(draws, cfg.horizon, cfg.level),
                 dir / "grand_average.csv");

  {
    std::ofstream out(dir / "classification.csv");
    if (!out) {
      throw std::runtime_error("cannot open classification.csv for writing");
    }
    out << "unit,theta1_mean,classification\n";
    for (int i = 0; i < n; ++i) {
      std::vector<double> theta1;
      theta1.reserve(draws.draw_count());
      for (std::size_t s = 0; s < draws.draw_count(); ++s) {
        theta1.push_back(draws.draw(s).theta(i, 0));
      }
      const CredibleSummary cs = summarize(theta1, cfg.level);
      out << csv_escape(draws.unit_ids[i]) << ',' << fmt17(cs.mean) << ','
          << static_cast<int>(classify(cs.mean)) << '\n';
    }
  }
  std::printf("wrote forecasts for %d unit(s) to %s\n", n,
              dir.string().c_str());
  return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
  std::vector<Variant> models;
  for (const auto& name : cfg.evaluation.models) {
    try {
      models.push_back(variant_from_name(name));
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  if (models.empty()) {
    throw ConfigError("evaluation.models is empty");
  }
  try {
    validate_config(cfg.evaluation.sampler);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const bool wants_m3 =
      std::find(models.begin(), models.end(), Variant::kM3) != models.end();
  PanelDataset panel = load_panel(cfg, wants_m3);
  const std::uint64_t base_seed = cfg.evaluation.base_seed_set
                                      ? cfg.evaluation.base_seed
                                      : cfg.sampler.seed;
  MseReport report;
  try {
    report = compare_models(panel, models, cfg.evaluation.test_days,
                            cfg.evaluation.replicates, base_seed,
                            cfg.evaluation.sampler);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto dir = ensure_out_dir(cfg);
  write_mse_csv(report, dir / "mse.csv");
  write_box_csv(report, dir / "mse_box.csv");
  int failed = 0;
  for (const auto& cell : report.cells) {
    if (!cell.mse) ++failed;
  }
  if (failed > 0) {
    std::fprintf(stderr, "growthcast: warning: %d cell(s) failed; see mse.csv\n",
                 failed);
  }
  std::printf("wrote %s\n", (dir / "mse.csv").string().c_str());
  std::printf("wrote %s\n", (dir / "mse_box.csv").string().c_str());
  return 0;
}

int cmd_rank(const RunConfig& cfg) {
  if (cfg.draws.empty()) {
    throw ConfigError("rank needs --draws pointing at a draws csv");
  }
  if (cfg.rank.block < 0 || cfg.rank.block > 3) {
    throw ConfigError("rank.block must be 0 (all), 1, 2, or 3");
  }
  if (cfg.rank.top_k < 1) {
    throw ConfigError("rank.top_k must be >= 1");
  }
  CovariateScaling scaling;
  const PosteriorDraws draws = read_draws_csv(cfg.draws, &scaling);
  if (draws.covariate_names.empty()) {
    throw ConfigError("draws carry no covariate effects to rank");
  }
  if (cfg.rank.report_scale && scaling.centers.size() == 0) {
    throw ConfigError(
        "draws metadata carries no covariate scaling; refit to report it");
  }
  const auto dir = ensure_out_dir(cfg);
  std::vector<int> blocks;
  if (cfg.rank.block == 0) {
    blocks = {1, 2, 3};
  } else {
    blocks = {cfg.rank.block};
  }
  std::map<std::string, int> column_of;
  for (std::size_t j = 0; j < draws.covariate_names.size(); ++j) {
    column_of[draws.covariate_names[j]] = static_cast<int>(j);
  }
  for (int b : blocks) {
    const auto ranking = rank_covariates(draws, b - 1, cfg.rank.top_k);
    const auto path = dir / ("rank_theta" + std::to_string(b) + ".csv");
    std::ofstream out(path);
    if (!out) {
      throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << "rank,covariate,posterior_mean";
    if (cfg.rank.report_scale) {
      out << ",center,scale";
    }
    out << '\n';
    for (const auto& r : ranking) {
      out << r.rank << ',' << csv_escape(r.name) << ','
          << fmt17(r.posterior_mean);
      if (cfg.rank.report_scale) {
        const int j = column_of.at(r.name);
        out << ',' << fmt17(scaling.centers(j)) << ','
            << fmt17(scaling.scales(j));
      }
      out << '\n';
    }
    std::printf("wrote %s\n", path.string().c_str());
  }
  return 0;
}

}  // namespace growthcast
