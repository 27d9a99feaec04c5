#include "growthcast/data.hpp"

#include "growthcast/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace growthcast {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_csv_line(const std::string& line, int row) {
  try {
    return split_csv_record(line);
  } catch (const std::exception& e) {
    throw ConfigError("csv row " + std::to_string(row) + ": " + e.what());
  }
}

double parse_number(const std::string& text, int row, const std::string& what) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || t.empty()) {
    throw ConfigError("csv row " + std::to_string(row) + ": cannot parse " +
                             what + " from '" + t + "'");
  }
  return value;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  // Drop trailing blank lines; blank lines elsewhere are malformed rows.
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) {
    throw ConfigError("unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Date parse_date_iso(std::string_view text) {
  const std::string t = trim(text);
  int y = 0, m = 0, d = 0;
  if (std::sscanf(t.c_str(), "%d-%d-%d", &y, &m, &d) != 3) {
    throw ConfigError("cannot parse ISO date '" + t + "'");
  }
  const Date date{std::chrono::year(y), std::chrono::month(unsigned(m)),
                  std::chrono::day(unsigned(d))};
  if (!date.ok()) {
    throw ConfigError("invalid date '" + t + "'");
  }
  return date;
}

Date parse_date_mdy(std::string_view text) {
  const std::string t = trim(text);
  int m = 0, d = 0, y = 0;
  if (std::sscanf(t.c_str(), "%d/%d/%d", &m, &d, &y) != 3) {
    throw ConfigError("cannot parse m/d/yy date '" + t + "'");
  }
  if (y < 100) y += 2000;
  const Date date{std::chrono::year(y), std::chrono::month(unsigned(m)),
                  std::chrono::day(unsigned(d))};
  if (!date.ok()) {
    throw ConfigError("invalid date '" + t + "'");
  }
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(date.year()),
                unsigned(date.month()), unsigned(date.day()));
  return buf;
}

Date advance(const Date& date, int days) {
  return Date(std::chrono::sys_days(date) + std::chrono::days(days));
}

int days_between(const Date& from, const Date& to) {
  return static_cast<int>(
      (std::chrono::sys_days(to) - std::chrono::sys_days(from)).count());
}

namespace {

std::vector<Trajectory> load_long(const std::vector<std::string>& lines) {
  if (lines.empty()) {
    throw ConfigError("long csv: empty file");
  }
  const auto header = split_csv_line(lines[0], 1);
  if (header.size() != 3 || trim(header[0]) != "unit_id" ||
      trim(header[1]) != "date" || trim(header[2]) != "cumulative_count") {
    throw ConfigError(
        "long csv: expected header unit_id,date,cumulative_count");
  }
  struct Row {
    Date date;
    double count;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Row>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int row_no = static_cast<int>(i + 1);
    const auto fields = split_csv_line(lines[i], row_no);
    if (fields.size() != 3) {
      throw ConfigError("csv row " + std::to_string(row_no) +
                               ": expected 3 fields, got " +
                               std::to_string(fields.size()));
    }
    const std::string id = trim(fields[0]);
    if (id.empty()) {
      throw ConfigError("csv row " + std::to_string(row_no) +
                               ": empty unit_id");
    }
    const Date date = parse_date_iso(fields[1]);
    const double count = parse_number(fields[2], row_no, "cumulative_count");
    if (count < 0.0 || !std::isfinite(count)) {
      throw ConfigError("csv row " + std::to_string(row_no) +
                               ": negative or non-finite count");
    }
    if (!rows.contains(id)) order.push_back(id);
    rows[id].push_back({date, count});
  }
  std::vector<Trajectory> out;
  for (const auto& id : order) {
    auto& entries = rows[id];
    std::sort(entries.begin(), entries.end(), [](const Row& a, const Row& b) {
      return std::chrono::sys_days(a.date) < std::chrono::sys_days(b.date);
    });
    Trajectory traj;
    traj.unit_id = id;
    traj.start_date = entries.front().date;
    traj.counts.resize(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const Date expected = advance(traj.start_date, static_cast<int>(k));
      if (entries[k].date != expected) {
        throw ConfigError("unit " + id + ": dates not consecutive near " +
                                 format_date(entries[k].date));
      }
      traj.counts(static_cast<Eigen::Index>(k)) = entries[k].count;
    }
    out.push_back(std::move(traj));
  }
  return out;
}

std::vector<Trajectory> load_jhu_wide(const std::vector<std::string>& lines) {
  if (lines.empty()) {
    throw ConfigError("wide csv: empty file");
  }
  const auto header = split_csv_line(lines[0], 1);
  if (header.size() < 5 || trim(header[0]) != "Province/State" ||
      trim(header[1]) != "Country/Region") {
    throw ConfigError(
        "wide csv: expected Province/State,Country/Region,Lat,Long,<dates>");
  }
  const int t_count = static_cast<int>(header.size()) - 4;
  const Date start = parse_date_mdy(header[4]);
  for (int k = 1; k < t_count; ++k) {
    const Date expected = advance(start, k);
    if (parse_date_mdy(header[4 + k]) != expected) {
      throw ConfigError("wide csv: date columns not consecutive at '" +
                               header[4 + k] + "'");
    }
  }
  std::vector<std::string> order;
  std::map<std::string, Eigen::VectorXd> sums;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int row_no = static_cast<int>(i + 1);
    const auto fields = split_csv_line(lines[i], row_no);
    if (fields.size() != header.size()) {
      throw ConfigError("csv row " + std::to_string(row_no) +
                               ": expected " + std::to_string(header.size()) +
                               " fields, got " + std::to_string(fields.size()));
    }
    const std::string country = trim(fields[1]);
    if (country.empty()) {
      throw ConfigError("csv row " + std::to_string(row_no) +
                               ": empty Country/Region");
    }
    if (!sums.contains(country)) {
      order.push_back(country);
      sums[country] = Eigen::VectorXd::Zero(t_count);
    }
    auto& acc = sums[country];
    for (int k = 0; k < t_count; ++k) {
      const double v = parse_number(fields[4 + k], row_no, "count");
      if (v < 0.0 || !std::isfinite(v)) {
        throw ConfigError("csv row " + std::to_string(row_no) +
                                 ": negative or non-finite count");
      }
      acc(k) += v;
    }
  }
  std::vector<Trajectory> out;
  out.reserve(order.size());
  for (const auto& country : order) {
    out.push_back(Trajectory{country, start, sums[country]});
  }
  return out;
}

}  // namespace

std::vector<Trajectory> load_trajectories(const std::filesystem::path& path,
                                          TrajectoryFormat format) {
  const auto lines = read_lines(path);
  switch (format) {
    case TrajectoryFormat::kLong:
      return load_long(lines);
    case TrajectoryFormat::kJhuWide:
      return load_jhu_wide(lines);
  }
  throw std::invalid_argument("load_trajectories: unknown format");
}

void write_trajectories_long(const std::filesystem::path& path,
                             const std::vector<Trajectory>& trajectories) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open " + path.string() + " for writing");
  }
  out << "unit_id,date,cumulative_count\n";
  char buf[64];
  for (const auto& traj : trajectories) {
    for (int k = 0; k < traj.days(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", traj.counts(k));
      out << csv_escape(traj.unit_id) << ',' << format_date(advance(traj.start_date, k))
          << ',' << buf << '\n';
    }
  }
  if (!out.good()) {
    throw ConfigError("write failed for " + path.string());
  }
}

CovariateTable load_covariates(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) {
    throw ConfigError("covariate csv: empty file");
  }
  const auto header = split_csv_line(lines[0], 1);
  if (header.size() < 2 || trim(header[0]) != "unit_id") {
    throw ConfigError("covariate csv: expected header unit_id,<names>");
  }
  CovariateTable table;
  for (std::size_t j = 1; j < header.size(); ++j) {
    const std::string name = trim(header[j]);
    if (name.empty()) {
      throw ConfigError("covariate csv: empty covariate name in header");
    }
    table.names.push_back(name);
  }
  const int p = static_cast<int>(table.names.size());
  const int n = static_cast<int>(lines.size()) - 1;
  if (n == 0) {
    throw ConfigError("covariate csv: no data rows");
  }
  table.values.resize(n, p);
  std::set<std::string> seen;
  for (int i = 0; i < n; ++i) {
    const int row_no = i + 2;
    const auto fields = split_csv_line(lines[i + 1], row_no);
    if (fields.size() != header.size()) {
      throw ConfigError("csv row " + std::to_string(row_no) +
                               ": expected " + std::to_string(header.size()) +
                               " fields, got " + std::to_string(fields.size()));
    }
    const std::string id = trim(fields[0]);
    if (id.empty()) {
      throw ConfigError("csv row " + std::to_string(row_no) +
                               ": empty unit_id");
    }
    if (!seen.insert(id).second) {
      throw ConfigError("covariate csv: duplicate unit_id '" + id + "'");
    }
    table.unit_ids.push_back(id);
    for (int j = 0; j < p; ++j) {
      const std::string cell = trim(fields[j + 1]);
      table.values(i, j) = cell.empty()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : parse_number(cell, row_no, table.names[j]);
    }
  }
  return table;
}

CovariateTable standardize(const CovariateTable& raw, StandardizeReport* report) {
  CovariateTable out = raw;
  const int n = raw.units();
  const int p = raw.covariates();
  if (n == 0 || p == 0) {
    throw std::invalid_argument("standardize: empty covariate table");
  }
  StandardizeReport rep;
  rep.imputed_counts.assign(p, 0);
  rep.imputed_values = Eigen::VectorXd::Zero(p);
  rep.centers = Eigen::VectorXd::Zero(p);
  rep.scales = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < p; ++j) {
    std::vector<double> observed;
    observed.reserve(n);
    for (int i = 0; i < n; ++i) {
      if (!std::isnan(raw.values(i, j))) observed.push_back(raw.values(i, j));
    }
    if (observed.empty()) {
      throw ConfigError("standardize: column '" + raw.names[j] +
                               "' has no observed values");
    }
    std::sort(observed.begin(), observed.end());
    const std::size_t m = observed.size();
    const double median = m % 2 == 1
                              ? observed[m / 2]
                              : 0.5 * (observed[m / 2 - 1] + observed[m / 2]);
    for (int i = 0; i < n; ++i) {
      if (std::isnan(out.values(i, j))) {
        out.values(i, j) = median;
        ++rep.imputed_counts[j];
      }
    }
    const double center = out.values.col(j).mean();
    out.values.col(j).array() -= center;
    const double scale = out.values.col(j).norm();
    if (scale == 0.0) {
      throw ConfigError("standardize: column '" + raw.names[j] +
                               "' is constant after imputation");
    }
    out.values.col(j) /= scale;
    rep.imputed_values(j) = median;
    rep.centers(j) = center;
    rep.scales(j) = scale;
  }
  if (report) *report = std::move(rep);
  return out;
}

PanelDataset make_panel(std::vector<Trajectory> trajectories,
                        std::optional<CovariateTable> covariates) {
  if (trajectories.empty()) {
    throw std::invalid_argument("make_panel: no trajectories");
  }
  const int t_count = trajectories.front().days();
  const Date start = trajectories.front().start_date;
  if (t_count == 0) {
    throw std::invalid_argument("make_panel: empty trajectory");
  }
  std::set<std::string> ids;
  for (const auto& traj : trajectories) {
    if (traj.days() != t_count) {
      throw std::invalid_argument("make_panel: unit " + traj.unit_id +
                                  " has length " + std::to_string(traj.days()) +
                                  ", expected " + std::to_string(t_count));
    }
    if (traj.start_date != start) {
      throw std::invalid_argument("make_panel: unit " + traj.unit_id +
                                  " starts " + format_date(traj.start_date) +
                                  ", expected " + format_date(start));
    }
    if (!ids.insert(traj.unit_id).second) {
      throw std::invalid_argument("make_panel: duplicate unit " + traj.unit_id);
    }
  }
  PanelDataset panel;
  panel.trajectories = std::move(trajectories);
  if (covariates) {
    const auto& table = *covariates;
    if (!table.values.allFinite()) {
      throw std::invalid_argument(
          "make_panel: covariates contain missing values; standardize first");
    }
    std::map<std::string, int> row_of;
    for (int i = 0; i < table.units(); ++i) {
      row_of[table.unit_ids[i]] = i;
    }
    for (const auto& [id, unused] : row_of) {
      if (!ids.contains(id)) {
        throw std::invalid_argument("make_panel: covariate unit '" + id +
                                    "' matches no trajectory");
      }
    }
    CovariateTable aligned;
    aligned.names = table.names;
    aligned.values.resize(panel.units(), table.covariates());
    for (int i = 0; i < panel.units(); ++i) {
      const auto& id = panel.trajectories[i].unit_id;
      const auto it = row_of.find(id);
      if (it == row_of.end()) {
        throw std::invalid_argument("make_panel: unit '" + id +
                                    "' missing from covariate table");
      }
      aligned.unit_ids.push_back(id);
      aligned.values.row(i) = table.values.row(it->second);
    }
    panel.covariates = std::move(aligned);
  }
  return panel;
}

std::pair<Trajectory, Trajectory> train_test_split(const Trajectory& y,
                                                   int test_days) {
  if (test_days < 1 || test_days >= y.days()) {
    throw std::domain_error("train_test_split: test_days must lie in [1, T)");
  }
  const int train_days = y.days() - test_days;
  Trajectory train{y.unit_id, y.start_date, y.counts.head(train_days)};
  Trajectory test{y.unit_id, advance(y.start_date, train_days),
                  y.counts.tail(test_days)};
  return {std::move(train), std::move(test)};
}

Trajectory running_maximum(const Trajectory& y) {
  Trajectory out = y;
  double peak = 0.0;
  for (int k = 0; k < out.days(); ++k) {
    peak = std::max(peak, out.counts(k));
    out.counts(k) = peak;
  }
  return out;
}

}  // namespace growthcast
