#include "growthcast/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "growthcast/inference.hpp"
#include "growthcast/parallel.hpp"

namespace growthcast {

double mse_horizon(const Eigen::MatrixXd& actual,
                   const Eigen::MatrixXd& forecast) {
  if (actual.rows() != forecast.rows() || actual.cols() != forecast.cols()) {
    throw std::invalid_argument("mse_horizon: shape mismatch");
  }
  if (actual.size() == 0) {
    throw std::invalid_argument("mse_horizon: empty matrices");
  }
  return (actual - forecast).squaredNorm() /
         static_cast<double>(actual.size());
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) {
    throw std::domain_error("box_stats: no values");
  }
  std::sort(values.begin(), values.end());
  BoxStats box;
  box.q1 = percentile(values, 0.25);
  box.median = percentile(values, 0.5);
  box.q3 = percentile(values, 0.75);
  const double iqr = box.q3 - box.q1;
  const double low_fence = box.q1 - 1.5 * iqr;
  const double high_fence = box.q3 + 1.5 * iqr;
  box.whisker_low = box.q3;
  box.whisker_high = box.q1;
  bool any_inside = false;
  for (double v : values) {
    if (v >= low_fence && v <= high_fence) {
      if (!any_inside) {
        box.whisker_low = v;
        any_inside = true;
      }
      box.whisker_high = v;
    } else {
      box.outliers.push_back(v);
    }
  }
  // Quartiles are interpolated, so they always sit within the fences and
  // at least one observation is inside.
  return box;
}

namespace {

// Posterior mean forecast for days train_days+1 .. train_days+d, one row
// per unit of `draws`.
Eigen::MatrixXd mean_forecast(const PosteriorDraws& draws, int test_days) {
  const int n = static_cast<int>(draws.unit_ids.size());
  Eigen::MatrixXd forecast = Eigen::MatrixXd::Zero(n, test_days);
  const std::size_t n_draws = draws.draw_count();
  for (std::size_t s = 0; s < n_draws; ++s) {
    const ChainState& state = draws.draw(s);
    for (int i = 0; i < n; ++i) {
      const RichardsParams params = unit_params(state, i);
      for (int r = 0; r < test_days; ++r) {
        forecast(i, r) += richards(draws.observed_days + r + 1.0, params);
      }
    }
  }
  return forecast / static_cast<double>(n_draws);
}

PanelDataset truncate_panel(const PanelDataset& data, int test_days) {
  std::vector<Trajectory> train;
  train.reserve(data.trajectories.size());
  for (const auto& y : data.trajectories) {
    train.push_back(train_test_split(y, test_days).first);
  }
  return make_panel(std::move(train), data.covariates);
}

Eigen::MatrixXd holdout_matrix(const PanelDataset& data, int test_days) {
  Eigen::MatrixXd actual(data.units(), test_days);
  for (int i = 0; i < data.units(); ++i) {
    actual.row(i) = data.trajectories[i].counts.tail(test_days);
  }
  return actual;
}

}  // namespace

MseReport compare_models(const PanelDataset& data,
                         const std::vector<Variant>& models,
                         const std::vector<int>& test_days, int replicates,
                         std::uint64_t base_seed, const SamplerConfig& config,
                         int max_workers) {
  validate_config(config);
  if (models.empty() || test_days.empty() || replicates < 1) {
    throw std::invalid_argument("compare_models: empty grid");
  }
  for (int d : test_days) {
    if (d < 1 || d >= data.days()) {
      throw std::invalid_argument("compare_models: test_days must lie in [1, T)");
    }
  }
  const bool wants_m3 =
      std::find(models.begin(), models.end(), Variant::kM3) != models.end();
  if (wants_m3 && data.covariate_count() == 0) {
    throw std::invalid_argument("compare_models: m3 requested without covariates");
  }

  MseReport report;
  report.models = models;
  report.test_days = test_days;
  report.replicates = replicates;

  // Shared train/holdout splits; only the MCMC seed varies across
  // replicates.
  std::vector<PanelDataset> train_panels;
  std::vector<Eigen::MatrixXd> actuals;
  for (int d : test_days) {
    train_panels.push_back(truncate_panel(data, d));
    actuals.push_back(holdout_matrix(data, d));
  }

  const std::size_t n_cells =
      models.size() * test_days.size() * static_cast<std::size_t>(replicates);
  report.cells.resize(n_cells);
  const auto run_cell = [&](std::size_t index) {
    const std::size_t per_model =
        test_days.size() * static_cast<std::size_t>(replicates);
    const std::size_t m = index / per_model;
    const std::size_t rest = index % per_model;
    const std::size_t di = rest / replicates;
    const int replicate = static_cast<int>(rest % replicates);
    const int d = test_days[di];
    const PanelDataset& train = train_panels[di];
    MseCell& cell = report.cells[index];
    cell.model = models[m];
    cell.test_days = d;
    cell.replicate = replicate;
    SamplerConfig cell_config = config;
    cell_config.seed = base_seed + static_cast<std::uint64_t>(replicate);
    try {
      Eigen::MatrixXd forecast(train.units(), d);
      if (models[m] == Variant::kM1) {
        // Independent per-unit fits; substream per unit keeps the cell
        // seed reproducible.
        for (int i = 0; i < train.units(); ++i) {
          PanelDataset single =
              make_panel({train.trajectories[i]}, std::nullopt);
          SamplerConfig unit_config = cell_config;
          unit_config.seed =
              RandomStream(cell_config.seed).derive(static_cast<std::uint64_t>(i))
                  .seed();
          const PosteriorDraws draws =
              run_chains(single, ModelSpec{Variant::kM1, train.trajectories[i].unit_id},
                         unit_config, {}, 1);
          forecast.row(i) = mean_forecast(draws, d).row(0);
        }
      } else {
        const ModelSpec spec{models[m], std::nullopt};
        PanelDataset panel = train;
        if (models[m] == Variant::kM2) {
          panel.covariates.reset();
        }
        const PosteriorDraws draws = run_chains(panel, spec, cell_config, {}, 1);
        forecast = mean_forecast(draws, d);
      }
      cell.mse = mse_horizon(actuals[di], forecast);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };
  parallel_for_index(n_cells, max_workers > 0 ? max_workers : worker_cap(),
                     run_cell);
  return report;
}

std::vector<double> cell_values(const MseReport& report, Variant model,
                                int test_days) {
  std::vector<double> values;
  for (const auto& cell : report.cells) {
    if (cell.model == model && cell.test_days == test_days && cell.mse) {
      values.push_back(*cell.mse);
    }
  }
  return values;
}

void write_mse_csv(const MseReport& report,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "model,test_days,replicate,mse,error\n";
  char buf[64];
  for (const auto& cell : report.cells) {
    out << variant_name(cell.model) << ',' << cell.test_days << ','
        << cell.replicate << ',';
    if (cell.mse) {
      std::snprintf(buf, sizeof(buf), "%.17g", *cell.mse);
      out << buf;
    }
    out << ',';
    // Error text can contain commas; quote it.
    if (!cell.error.empty()) {
      std::string quoted = "\"";
      for (char c : cell.error) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      quoted += '"';
      out << quoted;
    }
    out << '\n';
  }
}

void write_box_csv(const MseReport& report,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "model,test_days,q1,median,q3,whisker_low,whisker_high,outliers\n";
  char buf[64];
  const auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (Variant model : report.models) {
    for (int d : report.test_days) {
      const auto values = cell_values(report, model, d);
      if (values.empty()) continue;
      const BoxStats box = box_stats(values);
      out << variant_name(model) << ',' << d << ',' << fmt(box.q1) << ','
          << fmt(box.median) << ',' << fmt(box.q3) << ','
          << fmt(box.whisker_low) << ',' << fmt(box.whisker_high) << ',';
      for (std::size_t i = 0; i < box.outliers.size(); ++i) {
        if (i > 0) out << ';';
        out << fmt(box.outliers[i]);
      }
      out << '\n';
    }
  }
}

}  // namespace growthcast
