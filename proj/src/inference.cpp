#include "growthcast/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace growthcast {

namespace {

double kahan_mean(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(values.size());
}

void check_unit(const PosteriorDraws& draws, int unit) {
  if (unit < 0 || unit >= static_cast<int>(draws.unit_ids.size())) {
    throw std::invalid_argument("unit index out of range");
  }
  if (draws.draw_count() == 0) {
    throw std::invalid_argument("no retained draws");
  }
}

// Pointwise mean and percentile band over rows of a draws-by-days matrix.
ForecastBand band_from_samples(const Eigen::MatrixXd& samples,
                               const Date& start, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("level must lie in (0, 1)");
  }
  const int t_count = static_cast<int>(samples.cols());
  ForecastBand band;
  band.level = level;
  band.mean.resize(t_count);
  band.lower.resize(t_count);
  band.upper.resize(t_count);
  const double tail = (1.0 - level) / 2.0;
  std::vector<double> column(samples.rows());
  for (int t = 0; t < t_count; ++t) {
    for (Eigen::Index s = 0; s < samples.rows(); ++s) {
      column[static_cast<std::size_t>(s)] = samples(s, t);
    }
    band.mean(t) = kahan_mean(column);
    band.lower(t) = percentile(column, tail);
    band.upper(t) = percentile(column, 1.0 - tail);
    band.days.push_back(t + 1);
    band.dates.push_back(advance(start, t));
  }
  return band;
}

}  // namespace

double percentile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw std::domain_error("percentile: no values");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("percentile: q must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double position = q * (static_cast<double>(values.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(position));
  const double frac = position - static_cast<double>(lo);
  if (lo + 1 >= values.size()) {
    return values.back();
  }
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

CredibleSummary summarize(std::span<const double> draws, double level) {
  if (draws.empty()) {
    throw std::domain_error("summarize: no draws");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("summarize: level must lie in (0, 1)");
  }
  std::vector<double> values(draws.begin(), draws.end());
  const double tail = (1.0 - level) / 2.0;
  CredibleSummary s;
  s.mean = kahan_mean(draws);
  s.lower = percentile(values, tail);
  s.upper = percentile(values, 1.0 - tail);
  s.level = level;
  return s;
}

ForecastBand extrapolate(const PosteriorDraws& draws, int unit, int horizon,
                         double level, bool include_observation_noise,
                         std::uint64_t noise_seed) {
  check_unit(draws, unit);
  if (horizon < 0) {
    throw std::domain_error("extrapolate: horizon must be >= 0");
  }
  const int t_count = draws.observed_days + horizon;
  const std::size_t n_draws = draws.draw_count();
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(n_draws), t_count);
  RandomStream noise(noise_seed);
  for (std::size_t s = 0; s < n_draws; ++s) {
    const ChainState& state = draws.draw(s);
    const RichardsParams params = unit_params(state, unit);
    const double sd =
        include_observation_noise ? std::sqrt(state.sigma2_obs) : 0.0;
    for (int t = 0; t < t_count; ++t) {
      double v = richards(t + 1.0, params);
      if (include_observation_noise) {
        v += sd * noise.normal();
      }
      samples(static_cast<Eigen::Index>(s), t) = v;
    }
  }
  return band_from_samples(samples, draws.start_date, level);
}

CredibleSummary flat_time_summary(const PosteriorDraws& draws, int unit,
                                  double gamma, double level) {
  check_unit(draws, unit);
  std::vector<double> times;
  times.reserve(draws.draw_count());
  for (std::size_t s = 0; s < draws.draw_count(); ++s) {
    times.push_back(
        flat_time_point(unit_params(draws.draw(s), unit), gamma));
  }
  return summarize(times, level);
}

Date date_for_day(const Date& start, double day) {
  if (!std::isfinite(day)) {
    throw std::domain_error("date_for_day: non-finite day");
  }
  return advance(start, static_cast<int>(std::llround(day)) - 1);
}

TravelLevel classify(double theta1_posterior_mean) {
  if (!std::isfinite(theta1_posterior_mean)) {
    throw std::domain_error("classify: non-finite value");
  }
  if (theta1_posterior_mean <= 10000.0) return TravelLevel::kLevel1;
  if (theta1_posterior_mean <= 100000.0) return TravelLevel::kLevel2;
  return TravelLevel::kLevel3;
}

TravelLevel classify_unit(const PosteriorDraws& draws, int unit) {
  check_unit(draws, unit);
  std::vector<double> theta1;
  theta1.reserve(draws.draw_count());
  for (std::size_t s = 0; s < draws.draw_count(); ++s) {
    theta1.push_back(draws.draw(s).theta(unit, 0));
  }
  return classify(kahan_mean(theta1));
}

ForecastBand grand_average_curve(const PosteriorDraws& draws, int horizon,
                                 double level, std::optional<double> fixed_xi) {
  if (draws.draw_count() == 0) {
    throw std::invalid_argument("no retained draws");
  }
  if (horizon < 0) {
    throw std::domain_error("grand_average_curve: horizon must be >= 0");
  }
  if (fixed_xi && !(*fixed_xi > 0.0)) {
    throw std::domain_error("grand_average_curve: fixed xi must be > 0");
  }
  const int t_count = draws.observed_days + horizon;
  const std::size_t n_draws = draws.draw_count();
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(n_draws), t_count);
  for (std::size_t s = 0; s < n_draws; ++s) {
    const ChainState& state = draws.draw(s);
    RichardsParams params;
    params.theta1 = state.blocks[0].alpha;
    params.theta2 = state.blocks[1].alpha;
    params.theta3 = state.blocks[2].alpha;
    params.xi = fixed_xi ? *fixed_xi
                         : std::exp(state.xi.array().log().mean());
    for (int t = 0; t < t_count; ++t) {
      samples(static_cast<Eigen::Index>(s), t) = richards(t + 1.0, params);
    }
  }
  return band_from_samples(samples, draws.start_date, level);
}

std::vector<RankedCovariate> rank_covariates(const PosteriorDraws& draws,
                                             int block, int top_k) {
  if (block < 0 || block > 2) {
    throw std::invalid_argument("rank_covariates: block must be 0, 1, or 2");
  }
  if (top_k < 1) {
    throw std::invalid_argument("rank_covariates: top_k must be >= 1");
  }
  const int p = static_cast<int>(draws.covariate_names.size());
  if (p == 0) {
    throw std::invalid_argument("rank_covariates: model has no covariates");
  }
  if (draws.draw_count() == 0) {
    throw std::invalid_argument("no retained draws");
  }
  std::vector<double> means(p, 0.0);
  std::vector<double> series(draws.draw_count());
  for (int j = 0; j < p; ++j) {
    for (std::size_t s = 0; s < draws.draw_count(); ++s) {
      series[s] = draws.draw(s).blocks[block].beta(j);
    }
    means[j] = kahan_mean(series);
  }
  std::vector<int> order(p);
  for (int j = 0; j < p; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(means[a]) > std::abs(means[b]);
  });
  const int k = std::min(top_k, p);
  std::vector<RankedCovariate> out;
  out.reserve(k);
  for (int r = 0; r < k; ++r) {
    out.push_back(RankedCovariate{r + 1, draws.covariate_names[order[r]],
                                  means[order[r]]});
  }
  return out;
}

int count_theta1_at_or_below_observed_max(const PosteriorDraws& draws,
                                          const PanelDataset& data) {
  if (static_cast<int>(draws.unit_ids.size()) != data.units()) {
    throw std::invalid_argument("draws/data unit count mismatch");
  }
  int count = 0;
  for (std::size_t s = 0; s < draws.draw_count(); ++s) {
    const ChainState& state = draws.draw(s);
    for (int i = 0; i < data.units(); ++i) {
      if (state.theta(i, 0) <= data.trajectories[i].counts.maxCoeff()) {
        ++count;
      }
    }
  }
  return count;
}

}  // namespace growthcast
