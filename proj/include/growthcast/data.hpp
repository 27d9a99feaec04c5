#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace growthcast {

using Date = std::chrono::year_month_day;

// "2020-01-22" (ISO 8601).
Date parse_date_iso(std::string_view text);
// "1/22/20" (month/day/two-digit year, as in wide-format case files).
Date parse_date_mdy(std::string_view text);
std::string format_date(const Date& date);
Date advance(const Date& date, int days);
// Whole days from `from` to `to`; negative if `to` precedes `from`.
int days_between(const Date& from, const Date& to);

// Cumulative case counts for one unit, one value per day. counts(k) is the
// count at day t = k + 1, so t = 1 corresponds to start_date.
struct Trajectory {
  std::string unit_id;
  Date start_date;
  Eigen::VectorXd counts;

  int days() const { return static_cast<int>(counts.size()); }
};

// Unit-level covariates, one row per unit. NaN marks a missing cell until
// standardize() imputes it.
struct CovariateTable {
  std::vector<std::string> unit_ids;
  std::vector<std::string> names;
  Eigen::MatrixXd values;

  int units() const { return static_cast<int>(values.rows()); }
  int covariates() const { return static_cast<int>(values.cols()); }
};

enum class TrajectoryFormat {
  kLong,     // unit_id,date,cumulative_count
  kJhuWide,  // Province/State,Country/Region,Lat,Long,<date columns>
};

// Reads trajectories from a CSV file. Wide-format province rows are summed
// into one trajectory per country. Throws std::runtime_error naming the
// offending row or column on malformed input (ragged rows, unparseable
// dates or numbers, negative counts, gaps in the date sequence).
std::vector<Trajectory> load_trajectories(const std::filesystem::path& path,
                                          TrajectoryFormat format);

// Writes trajectories in the long format; load_trajectories(kLong) reads
// the result back bit-identically.
void write_trajectories_long(const std::filesystem::path& path,
                             const std::vector<Trajectory>& trajectories);

// Reads a covariate CSV (header: unit_id,<name>,...). Empty cells become
// NaN; non-numeric cells and duplicate unit ids are errors.
CovariateTable load_covariates(const std::filesystem::path& path);

// Per-column record of what standardize() did.
struct StandardizeReport {
  std::vector<int> imputed_counts;
  Eigen::VectorXd imputed_values;
  Eigen::VectorXd centers;
  Eigen::VectorXd scales;
};

// Imputes missing cells with the column median of observed values, then
// centers each column to mean zero and scales it to unit Euclidean norm.
// A column that is constant after imputation has no scale; that is an
// error naming the column. Already-standardized input passes through
// unchanged up to rounding.
CovariateTable standardize(const CovariateTable& raw,
                           StandardizeReport* report = nullptr);

// Trajectories plus optional covariates, aligned and validated.
struct PanelDataset {
  std::vector<Trajectory> trajectories;
  std::optional<CovariateTable> covariates;

  int units() const { return static_cast<int>(trajectories.size()); }
  int days() const {
    return trajectories.empty() ? 0 : trajectories.front().days();
  }
  int covariate_count() const {
    return covariates ? covariates->covariates() : 0;
  }
};

// Validates shape (equal lengths, common start date) and reorders covariate
// rows into trajectory order. Covariates must already be free of missing
// values; ids must match trajectories one-to-one.
PanelDataset make_panel(std::vector<Trajectory> trajectories,
                        std::optional<CovariateTable> covariates);

// Splits the last `test_days` days off a trajectory. The train part keeps
// the original start date; the test part starts the day after the train
// part ends. Concatenating the two recovers the input.
std::pair<Trajectory, Trajectory> train_test_split(const Trajectory& y,
                                                   int test_days);

// Running-maximum transform for cumulative series with reporting dips.
Trajectory running_maximum(const Trajectory& y);

// One CSV record split into fields, honoring quoted fields with embedded
// commas and doubled quotes. Throws on an unterminated quote.
std::vector<std::string> split_csv_record(const std::string& line);

// Quotes a field if it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

}  // namespace growthcast
