#include "growthcast/data.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace growthcast;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "growthcast_data_tests";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path);
  out << body;
  return path;
}

Trajectory make_traj(const std::string& id, const std::string& start,
                     std::vector<double> counts) {
  Trajectory y;
  y.unit_id = id;
  y.start_date = parse_date_iso(start);
  y.counts = Eigen::Map<Eigen::VectorXd>(counts.data(),
                                         static_cast<Eigen::Index>(counts.size()));
  return y;
}

}  // namespace

TEST_CASE("date parsing and arithmetic") {
  const Date d = parse_date_iso("2020-01-22");
  CHECK(format_date(d) == "2020-01-22");
  CHECK(parse_date_mdy("1/22/20") == d);
  CHECK(parse_date_mdy(" 3/1/21 ") == parse_date_iso("2021-03-01"));

  CHECK(format_date(advance(d, 1)) == "2020-01-23");
  // 2020 is a leap year.
  CHECK(format_date(advance(parse_date_iso("2020-02-28"), 2)) == "2020-03-01");
  CHECK(days_between(d, advance(d, 40)) == 40);
  CHECK(days_between(advance(d, 40), d) == -40);

  CHECK_THROWS_AS((void)parse_date_iso("2020-13-01"), std::runtime_error);
  CHECK_THROWS_AS((void)parse_date_iso("not a date"), std::runtime_error);
  CHECK_THROWS_AS((void)parse_date_mdy("2/30/20"), std::runtime_error);
}

TEST_CASE("csv record splitting and escaping") {
  CHECK(split_csv_record("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv_record("a,,c") == std::vector<std::string>{"a", "", "c"});
  CHECK(split_csv_record("a,b,") == std::vector<std::string>{"a", "b", ""});
  CHECK(split_csv_record("\"Korea, South\",1") ==
        std::vector<std::string>{"Korea, South", "1"});
  CHECK(split_csv_record("\"he said \"\"hi\"\"\",x") ==
        std::vector<std::string>{"he said \"hi\"", "x"});
  CHECK_THROWS_AS((void)split_csv_record("\"open,1"), std::runtime_error);

  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(split_csv_record(csv_escape("a,\"b\",c"))[0] == "a,\"b\",c");
}

TEST_CASE("long format loads units in first-appearance order") {
  // Rows arrive interleaved and out of date order; per unit they must still
  // form a consecutive daily series.
  const auto path = write_temp("long_ok.csv",
                               "unit_id,date,cumulative_count\n"
                               "b,2020-01-23,5\n"
                               "a,2020-01-22,1\n"
                               "b,2020-01-22,4\n"
                               "a,2020-01-24,3\n"
                               "a,2020-01-23,2\n");
  const auto trajectories = load_trajectories(path, TrajectoryFormat::kLong);
  REQUIRE(trajectories.size() == 2);
  CHECK(trajectories[0].unit_id == "b");
  CHECK(trajectories[1].unit_id == "a");
  CHECK(format_date(trajectories[0].start_date) == "2020-01-22");
  CHECK(trajectories[0].counts(0) == 4.0);
  CHECK(trajectories[0].counts(1) == 5.0);
  CHECK(trajectories[1].days() == 3);
  CHECK(trajectories[1].counts(2) == 3.0);
}

TEST_CASE("long format rejects malformed input") {
  const auto bad_header = write_temp("long_header.csv", "id,day,count\nx,2020-01-22,1\n");
  CHECK_THROWS_AS((void)load_trajectories(bad_header, TrajectoryFormat::kLong),
                  std::runtime_error);

  const auto gap = write_temp("long_gap.csv",
                              "unit_id,date,cumulative_count\n"
                              "a,2020-01-22,1\n"
                              "a,2020-01-24,2\n");
  CHECK_THROWS_WITH_AS((void)load_trajectories(gap, TrajectoryFormat::kLong),
                       doctest::Contains("not consecutive"), std::runtime_error);

  const auto negative = write_temp("long_negative.csv",
                                   "unit_id,date,cumulative_count\n"
                                   "a,2020-01-22,-3\n");
  CHECK_THROWS_AS((void)load_trajectories(negative, TrajectoryFormat::kLong),
                  std::runtime_error);

  const auto nonfinite = write_temp("long_nonfinite.csv",
                                    "unit_id,date,cumulative_count\n"
                                    "a,2020-01-22,inf\n");
  CHECK_THROWS_AS((void)load_trajectories(nonfinite, TrajectoryFormat::kLong),
                  std::runtime_error);

  const auto ragged = write_temp("long_ragged.csv",
                                 "unit_id,date,cumulative_count\n"
                                 "a,2020-01-22\n");
  CHECK_THROWS_WITH_AS((void)load_trajectories(ragged, TrajectoryFormat::kLong),
                       doctest::Contains("row 2"), std::runtime_error);

  const auto empty = write_temp("long_empty.csv", "");
  CHECK_THROWS_AS((void)load_trajectories(empty, TrajectoryFormat::kLong),
                  std::runtime_error);

  CHECK_THROWS_AS((void)load_trajectories("/nonexistent/file.csv",
                                          TrajectoryFormat::kLong),
                  std::runtime_error);
}

TEST_CASE("wide format sums provinces into countries") {
  const auto path = write_temp(
      "wide_ok.csv",
      "Province/State,Country/Region,Lat,Long,1/22/20,1/23/20,1/24/20\n"
      ",\"Korea, South\",36.0,128.0,1,2,4\n"
      "Hubei,China,31.0,112.2,100,200,300\n"
      "Beijing,China,40.2,116.4,10,20,30\n");
  const auto trajectories = load_trajectories(path, TrajectoryFormat::kJhuWide);
  REQUIRE(trajectories.size() == 2);
  // Countries keep the order in which they first appear.
  CHECK(trajectories[0].unit_id == "Korea, South");
  CHECK(trajectories[1].unit_id == "China");
  CHECK(format_date(trajectories[0].start_date) == "2020-01-22");
  CHECK(trajectories[0].counts(2) == 4.0);
  CHECK(trajectories[1].counts(0) == 110.0);
  CHECK(trajectories[1].counts(1) == 220.0);
  CHECK(trajectories[1].counts(2) == 330.0);
}

TEST_CASE("wide format rejects malformed input") {
  const auto bad_dates = write_temp(
      "wide_gap.csv",
      "Province/State,Country/Region,Lat,Long,1/22/20,1/24/20\n"
      ",X,0,0,1,2\n");
  CHECK_THROWS_WITH_AS(
      (void)load_trajectories(bad_dates, TrajectoryFormat::kJhuWide),
      doctest::Contains("not consecutive"), std::runtime_error);

  const auto bad_header = write_temp("wide_header.csv",
                                     "Region,Country,Lat,Long,1/22/20\nx,y,0,0,1\n");
  CHECK_THROWS_AS((void)load_trajectories(bad_header, TrajectoryFormat::kJhuWide),
                  std::runtime_error);

  const auto negative = write_temp(
      "wide_negative.csv",
      "Province/State,Country/Region,Lat,Long,1/22/20\n,X,0,0,-1\n");
  CHECK_THROWS_AS((void)load_trajectories(negative, TrajectoryFormat::kJhuWide),
                  std::runtime_error);
}

TEST_CASE("long format writing round-trips exactly") {
  std::vector<Trajectory> input;
  input.push_back(make_traj("alpha", "2020-01-22", {0.0, 1.5, 2.25, 7.125}));
  input.push_back(make_traj("with, comma", "2020-01-22",
                            {0.1234567890123456789, 3.0, 3.0, 9.9}));
  const auto path = write_temp("roundtrip.csv", "");
  write_trajectories_long(path, input);
  const auto back = load_trajectories(path, TrajectoryFormat::kLong);
  REQUIRE(back.size() == input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    CHECK(back[i].unit_id == input[i].unit_id);
    CHECK(back[i].start_date == input[i].start_date);
    REQUIRE(back[i].days() == input[i].days());
    for (int k = 0; k < input[i].days(); ++k) {
      CHECK(back[i].counts(k) == input[i].counts(k));
    }
  }
}

TEST_CASE("covariate table loading") {
  const auto path = write_temp("covs.csv",
                               "unit_id,density,gdp\n"
                               "a,1.5,\n"
                               "b,2.5,7\n");
  const CovariateTable table = load_covariates(path);
  CHECK(table.unit_ids == std::vector<std::string>{"a", "b"});
  CHECK(table.names == std::vector<std::string>{"density", "gdp"});
  CHECK(table.values(0, 0) == 1.5);
  CHECK(std::isnan(table.values(0, 1)));
  CHECK(table.values(1, 1) == 7.0);

  const auto dup = write_temp("covs_dup.csv", "unit_id,x\na,1\na,2\n");
  CHECK_THROWS_WITH_AS((void)load_covariates(dup),
                       doctest::Contains("duplicate"), std::runtime_error);

  const auto text = write_temp("covs_text.csv", "unit_id,x\na,lots\n");
  CHECK_THROWS_AS((void)load_covariates(text), std::runtime_error);

  const auto no_rows = write_temp("covs_norows.csv", "unit_id,x\n");
  CHECK_THROWS_AS((void)load_covariates(no_rows), std::runtime_error);
}

TEST_CASE("standardize centers and scales to unit norm") {
  CovariateTable raw;
  raw.unit_ids = {"a", "b", "c"};
  raw.names = {"x"};
  raw.values.resize(3, 1);
  raw.values << 1.0, 2.0, 3.0;
  StandardizeReport report;
  const CovariateTable out = standardize(raw, &report);
  const double s = std::sqrt(2.0);
  CHECK(out.values(0, 0) == doctest::Approx(-1.0 / s).epsilon(1e-15));
  CHECK(out.values(1, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(out.values(2, 0) == doctest::Approx(1.0 / s).epsilon(1e-15));
  CHECK(report.centers(0) == doctest::Approx(2.0));
  CHECK(report.scales(0) == doctest::Approx(s));
  CHECK(report.imputed_counts[0] == 0);

  // Standardizing twice changes nothing beyond rounding.
  const CovariateTable again = standardize(out);
  CHECK((again.values - out.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("standardize imputes missing cells with the column median") {
  CovariateTable raw;
  raw.unit_ids = {"a", "b", "c", "d"};
  raw.names = {"x", "y"};
  raw.values.resize(4, 2);
  raw.values << 1.0, 10.0,
      std::numeric_limits<double>::quiet_NaN(), 20.0,
      3.0, 30.0,
      7.0, std::numeric_limits<double>::quiet_NaN();
  StandardizeReport report;
  const CovariateTable out = standardize(raw, &report);
  CHECK(report.imputed_counts == std::vector<int>{1, 1});
  CHECK(report.imputed_values(0) == doctest::Approx(3.0));
  CHECK(report.imputed_values(1) == doctest::Approx(20.0));
  // Post-imputation column x is (1, 3, 3, 7).
  CHECK(report.centers(0) == doctest::Approx(3.5));
  for (int j = 0; j < 2; ++j) {
    CHECK(out.values.col(j).mean() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(out.values.col(j).norm() == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("standardize rejects degenerate columns") {
  CovariateTable constant;
  constant.unit_ids = {"a", "b"};
  constant.names = {"flat"};
  constant.values.resize(2, 1);
  constant.values << 4.0, 4.0;
  CHECK_THROWS_WITH_AS((void)standardize(constant), doctest::Contains("flat"),
                       std::runtime_error);

  CovariateTable unobserved;
  unobserved.unit_ids = {"a", "b"};
  unobserved.names = {"ghost"};
  unobserved.values.resize(2, 1);
  unobserved.values.setConstant(std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_WITH_AS((void)standardize(unobserved), doctest::Contains("ghost"),
                       std::runtime_error);

  CovariateTable empty;
  CHECK_THROWS_AS((void)standardize(empty), std::invalid_argument);
}

TEST_CASE("make_panel aligns covariates to trajectory order") {
  std::vector<Trajectory> trajectories;
  trajectories.push_back(make_traj("b", "2020-01-22", {1, 2, 3}));
  trajectories.push_back(make_traj("a", "2020-01-22", {4, 5, 6}));
  CovariateTable table;
  table.unit_ids = {"a", "b"};
  table.names = {"x"};
  table.values.resize(2, 1);
  table.values << -0.5, 0.5;
  const PanelDataset panel = make_panel(trajectories, table);
  REQUIRE(panel.covariates.has_value());
  CHECK(panel.covariates->unit_ids == std::vector<std::string>{"b", "a"});
  CHECK(panel.covariates->values(0, 0) == 0.5);
  CHECK(panel.covariates->values(1, 0) == -0.5);
  CHECK(panel.units() == 2);
  CHECK(panel.days() == 3);
  CHECK(panel.covariate_count() == 1);
}

TEST_CASE("make_panel validates shapes and ids") {
  CHECK_THROWS_AS((void)make_panel({}, std::nullopt), std::invalid_argument);

  std::vector<Trajectory> ragged;
  ragged.push_back(make_traj("a", "2020-01-22", {1, 2, 3}));
  ragged.push_back(make_traj("b", "2020-01-22", {1, 2}));
  CHECK_THROWS_AS((void)make_panel(ragged, std::nullopt), std::invalid_argument);

  std::vector<Trajectory> staggered;
  staggered.push_back(make_traj("a", "2020-01-22", {1, 2}));
  staggered.push_back(make_traj("b", "2020-01-23", {1, 2}));
  CHECK_THROWS_AS((void)make_panel(staggered, std::nullopt),
                  std::invalid_argument);

  std::vector<Trajectory> duplicated;
  duplicated.push_back(make_traj("a", "2020-01-22", {1, 2}));
  duplicated.push_back(make_traj("a", "2020-01-22", {3, 4}));
  CHECK_THROWS_AS((void)make_panel(duplicated, std::nullopt),
                  std::invalid_argument);

  std::vector<Trajectory> ok;
  ok.push_back(make_traj("a", "2020-01-22", {1, 2}));

  CovariateTable stranger;
  stranger.unit_ids = {"z"};
  stranger.names = {"x"};
  stranger.values.resize(1, 1);
  stranger.values << 1.0;
  CHECK_THROWS_AS((void)make_panel(ok, stranger), std::invalid_argument);

  CovariateTable holey;
  holey.unit_ids = {"a"};
  holey.names = {"x"};
  holey.values.resize(1, 1);
  holey.values << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS((void)make_panel(ok, holey),
                       doctest::Contains("standardize"), std::invalid_argument);
}

TEST_CASE("train_test_split partitions a trajectory") {
  const Trajectory y = make_traj("u", "2020-01-22", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const auto [train, test] = train_test_split(y, 4);
  CHECK(train.unit_id == "u");
  CHECK(train.start_date == y.start_date);
  CHECK(train.days() == 6);
  CHECK(train.counts(5) == 6.0);
  CHECK(test.start_date == advance(y.start_date, 6));
  CHECK(test.days() == 4);
  CHECK(test.counts(0) == 7.0);
  CHECK(test.counts(3) == 10.0);

  CHECK_THROWS_AS((void)train_test_split(y, 0), std::domain_error);
  CHECK_THROWS_AS((void)train_test_split(y, 10), std::domain_error);
  CHECK_THROWS_AS((void)train_test_split(y, -1), std::domain_error);
}

TEST_CASE("running_maximum flattens reporting dips") {
  const Trajectory y = make_traj("u", "2020-01-22", {0, 5, 3, 7, 2});
  const Trajectory out = running_maximum(y);
  CHECK(out.counts(0) == 0.0);
  CHECK(out.counts(1) == 5.0);
  CHECK(out.counts(2) == 5.0);
  CHECK(out.counts(3) == 7.0);
  CHECK(out.counts(4) == 7.0);
  // Applying it twice changes nothing.
  const Trajectory again = running_maximum(out);
  CHECK((again.counts - out.counts).cwiseAbs().maxCoeff() == 0.0);
}
