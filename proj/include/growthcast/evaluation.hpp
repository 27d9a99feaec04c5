#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "growthcast/data.hpp"
#include "growthcast/gibbs.hpp"
#include "growthcast/model.hpp"

namespace growthcast {

// Mean squared forecast error over a K-units-by-d-days block:
// sum of squared differences divided by K * d.
double mse_horizon(const Eigen::MatrixXd& actual,
                   const Eigen::MatrixXd& forecast);

// Five-number box summary. Quartiles use the same interpolation rule as
// inference percentiles; whiskers reach the most extreme values within
// 1.5 IQR of the quartiles, everything beyond is an outlier.
struct BoxStats {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

BoxStats box_stats(std::vector<double> values);

// One model fit at one holdout length for one replicate seed.
struct MseCell {
  Variant model = Variant::kM1;
  int test_days = 0;
  int replicate = 0;
  std::optional<double> mse;
  std::string error;  // set and mse empty when the fit failed
};

struct MseReport {
  std::vector<Variant> models;
  std::vector<int> test_days;
  int replicates = 0;
  std::vector<MseCell> cells;
};

// Holdout comparison: for each requested holdout length d the last d days
// of every trajectory are held out, each model is refit from scratch on
// the truncated panel per replicate (seed = base_seed + replicate), and
// forecasts are posterior mean curves. M1 refits each unit separately.
// Failed cells are recorded, not fatal. Cells run in parallel up to
// max_workers (0 = GROWTHCAST_THREADS cap); chains inside a cell run
// serially, so results do not depend on scheduling.
MseReport compare_models(const PanelDataset& data,
                         const std::vector<Variant>& models,
                         const std::vector<int>& test_days, int replicates,
                         std::uint64_t base_seed, const SamplerConfig& config,
                         int max_workers = 0);

// Successful MSE values of one (model, d) group, in replicate order.
std::vector<double> cell_values(const MseReport& report, Variant model,
                                int test_days);

// Long-format CSV: model,test_days,replicate,mse,error.
void write_mse_csv(const MseReport& report, const std::filesystem::path& path);
// Box summaries per (model, d): outliers are semicolon-joined.
void write_box_csv(const MseReport& report, const std::filesystem::path& path);

}  // namespace growthcast
