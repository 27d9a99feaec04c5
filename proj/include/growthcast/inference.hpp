#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "growthcast/gibbs.hpp"

namespace growthcast {

struct CredibleSummary {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
};

// Pointwise posterior band of a mean curve over consecutive days.
struct ForecastBand {
  std::vector<int> days;  // day index t, 1-based from the fit's start date
  std::vector<Date> dates;
  Eigen::VectorXd mean;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double level = 0.0;
};

enum class TravelLevel { kLevel1 = 1, kLevel2 = 2, kLevel3 = 3 };

// Quantile at q in [0, 1]: position q * (n - 1) + 1 on the sorted 1-based
// order statistics, linearly interpolated.
double percentile(std::vector<double> values, double q);

// Mean and central credible interval of a set of draws.
CredibleSummary summarize(std::span<const double> draws, double level = 0.95);

// Posterior band of one unit's mean curve over days 1..T+horizon. With
// include_observation_noise the band widens to the posterior predictive of
// the observations; the noise stream is seeded separately so the band is
// reproducible without disturbing anything else.
ForecastBand extrapolate(const PosteriorDraws& draws, int unit, int horizon,
                         double level = 0.95,
                         bool include_observation_noise = false,
                         std::uint64_t noise_seed = 0);

// Posterior of the time at which a unit's curve reaches the fraction gamma
// of its final size.
CredibleSummary flat_time_summary(const PosteriorDraws& draws, int unit,
                                  double gamma, double level = 0.95);

// Calendar date of (possibly fractional) day index `day`, rounded to the
// nearest whole day; day 1 is start.
Date date_for_day(const Date& start, double day);

// Size-based alert level from the posterior mean of the final size:
// up to 10,000 is level 1, up to 100,000 level 2, beyond that level 3.
TravelLevel classify(double theta1_posterior_mean);
TravelLevel classify_unit(const PosteriorDraws& draws, int unit);

// Curve of a synthetic average unit built per draw from the block
// intercepts, with the shape parameter taken as the geometric mean of the
// unit shapes unless a fixed value is supplied.
ForecastBand grand_average_curve(const PosteriorDraws& draws, int horizon,
                                 double level = 0.95,
                                 std::optional<double> fixed_xi = {});

struct RankedCovariate {
  int rank = 0;
  std::string name;
  double posterior_mean = 0.0;
};

// Top covariates of one regression block by absolute posterior mean on the
// standardized scale, descending; ties break by column order. k beyond the
// covariate count returns all of them.
std::vector<RankedCovariate> rank_covariates(const PosteriorDraws& draws,
                                             int block, int top_k);

// Retained draws where a unit's final size does not exceed the maximum
// observed count. A high share suggests the trajectory is far from its
// plateau and the forecast leans on the hierarchy.
int count_theta1_at_or_below_observed_max(const PosteriorDraws& draws,
                                          const PanelDataset& data);

}  // namespace growthcast
