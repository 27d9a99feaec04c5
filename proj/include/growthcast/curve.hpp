#pragma once

#include <span>
#include <vector>

namespace growthcast {

// Parameters of a Richards growth curve.
//   theta1: final epidemic size (upper asymptote), > 0 for a growth curve
//   theta2: growth rate per unit time, > 0 for a growth curve
//   theta3: lag phase location (inflection shift), unrestricted
//   xi:     shape parameter controlling asymmetry, must be > 0
struct RichardsParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double xi = 1.0;
};

// Shape-and-timing factor h(t) = [1 + xi * exp(-theta2 (t - theta3))]^(-1/xi),
// so that the full curve is theta1 * h(t). Evaluated in the log domain to
// stay finite for large |theta2 (t - theta3)|.
double basis(double t, double theta2, double theta3, double xi);

// Richards curve value f(t) = theta1 * basis(t).
double richards(double t, const RichardsParams& params);

// Gompertz curve theta1 * exp(-exp(-theta2 (t - theta3))), the xi -> 0 limit
// of the Richards family.
double gompertz(double t, double theta1, double theta2, double theta3);

std::vector<double> richards_series(std::span<const double> times,
                                    const RichardsParams& params);

// Earliest time at which the curve reaches a fraction gamma of its final
// size: t = theta3 - log(((1/gamma)^xi - 1) / xi) / theta2. Requires
// gamma in (0, 1), theta2 != 0.
double flat_time_point(const RichardsParams& params, double gamma);

}  // namespace growthcast
