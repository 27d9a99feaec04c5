#include "growthcast/curve.hpp"

#include <cmath>
#include <stdexcept>

namespace growthcast {

namespace {

void check_finite_shape(double t, double theta2, double theta3, double xi) {
  if (!std::isfinite(t) || !std::isfinite(theta2) || !std::isfinite(theta3) ||
      !std::isfinite(xi)) {
    throw std::domain_error("curve: non-finite argument");
  }
  if (xi <= 0.0) {
    throw std::domain_error("curve: xi must be > 0");
  }
}

}  // namespace

double basis(double t, double theta2, double theta3, double xi) {
  check_finite_shape(t, theta2, theta3, xi);
  const double a = -theta2 * (t - theta3);
  // log(1 + xi e^a), rearranged for a > 0 so exp never overflows.
  const double log_bracket =
      a > 0.0 ? a + std::log(xi + std::exp(-a)) : std::log1p(xi * std::exp(a));
  return std::exp(-log_bracket / xi);
}

double richards(double t, const RichardsParams& params) {
  if (!std::isfinite(params.theta1)) {
    throw std::domain_error("curve: non-finite theta1");
  }
  return params.theta1 * basis(t, params.theta2, params.theta3, params.xi);
}

double gompertz(double t, double theta1, double theta2, double theta3) {
  if (!std::isfinite(t) || !std::isfinite(theta1) || !std::isfinite(theta2) ||
      !std::isfinite(theta3)) {
    throw std::domain_error("curve: non-finite argument");
  }
  return theta1 * std::exp(-std::exp(-theta2 * (t - theta3)));
}

std::vector<double> richards_series(std::span<const double> times,
                                    const RichardsParams& params) {
  std::vector<double> values;
  values.reserve(times.size());
  for (double t : times) {
    values.push_back(richards(t, params));
  }
  return values;
}

double flat_time_point(const RichardsParams& params, double gamma) {
  check_finite_shape(0.0, params.theta2, params.theta3, params.xi);
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::domain_error("flat_time_point: gamma must lie in (0, 1)");
  }
  if (params.theta2 == 0.0) {
    throw std::domain_error("flat_time_point: theta2 must be nonzero");
  }
  // ((1/gamma)^xi - 1) / xi, via expm1 so small xi keeps full precision.
  const double inner = std::expm1(-params.xi * std::log(gamma)) / params.xi;
  return params.theta3 - std::log(inner) / params.theta2;
}

}  // namespace growthcast
