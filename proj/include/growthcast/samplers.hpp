#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

#include "growthcast/rng.hpp"

namespace growthcast {

// Thrown when a transition kernel cannot make progress (NaN density at the
// current point, slice interval collapsing, and the like).
struct KernelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tuning state for a random-walk Metropolis update.
struct MetropolisControl {
  double proposal_sd = 1.0;
  bool adapt = false;
  double target_acceptance = 0.3;
};

// One random-walk Metropolis step with a Gaussian proposal. Returns the new
// point and whether the proposal was accepted. A NaN density at the current
// point is an error; a NaN density at the proposal rejects it.
template <typename LogDensity>
std::pair<double, bool> metropolis_step(double current,
                                        LogDensity&& log_density,
                                        const MetropolisControl& control,
                                        RandomStream& rng) {
  if (!(control.proposal_sd > 0.0)) {
    throw std::invalid_argument("metropolis_step: proposal_sd must be > 0");
  }
  const double ld_current = log_density(current);
  if (std::isnan(ld_current)) {
    throw KernelError("metropolis_step: NaN log density at current point");
  }
  const double proposal = current + control.proposal_sd * rng.normal();
  const double ld_proposal = log_density(proposal);
  const double u = rng.uniform_positive();
  if (std::isnan(ld_proposal)) {
    return {current, false};
  }
  // Accept with probability min(1, exp(ld_proposal - ld_current)). The
  // comparison is <= so a ratio of exactly 1 always accepts.
  if (std::log(u) <= ld_proposal - ld_current) {
    return {proposal, true};
  }
  return {current, false};
}

// Robbins-Monro adaptation of a Metropolis proposal scale toward a target
// acceptance rate. update() only moves the scale while `adapting` is true;
// callers pass the burn-in indicator so the kernel freezes afterwards.
class RobbinsMonroAdapter {
 public:
  explicit RobbinsMonroAdapter(MetropolisControl control)
      : control_(control), log_sd_(std::log(control.proposal_sd)) {}

  void update(double acceptance, int iteration, bool adapting) {
    if (!control_.adapt || !adapting) return;
    const double gain = 1.0 / std::pow(iteration + 1.0, 0.6);
    log_sd_ += gain * (acceptance - control_.target_acceptance);
    control_.proposal_sd = std::exp(log_sd_);
  }

  const MetropolisControl& control() const { return control_; }

 private:
  MetropolisControl control_;
  double log_sd_;
};

// Elliptical slice sampling step for a scalar with a standard normal prior.
// `log_likelihood` is the data term only; the N(0,1) prior is the ellipse
// measure. Rejection-free: the angle bracket shrinks toward 0 until a point
// clears the threshold.
template <typename LogLikelihood>
double ess_step(double current, LogLikelihood&& log_likelihood,
                RandomStream& rng) {
  constexpr int kMaxShrink = 1000;
  const double ll_current = log_likelihood(current);
  if (std::isnan(ll_current)) {
    throw KernelError("ess_step: NaN log likelihood at current point");
  }
  const double nu = rng.normal();
  const double threshold = ll_current + std::log(rng.uniform_positive());

  const double pi = std::numbers::pi;
  double phi_min = -pi;
  double phi_max = pi;
  double phi = rng.uniform(phi_min, phi_max);
  for (int i = 0; i < kMaxShrink; ++i) {
    const double candidate = current * std::cos(phi) + nu * std::sin(phi);
    const double ll = log_likelihood(candidate);
    if (std::isnan(ll)) {
      throw KernelError("ess_step: NaN log likelihood at candidate");
    }
    if (ll > threshold) {
      return candidate;
    }
    if (phi > 0.0) {
      phi_max = phi;
    } else {
      phi_min = phi;
    }
    phi = rng.uniform(phi_min, phi_max);
  }
  throw KernelError("ess_step: bracket shrank without acceptance");
}

// Univariate slice sampler, Neal (2003) stepping-out plus shrinkage, no
// doubling. `support_lower`, if given, truncates the support from below.
template <typename LogDensity>
double slice_step(double current, LogDensity&& log_density, double width,
                  std::optional<double> support_lower, RandomStream& rng) {
  constexpr int kMaxStepOut = 50;
  constexpr int kMaxShrink = 1000;
  if (!(width > 0.0)) {
    throw std::invalid_argument("slice_step: width must be > 0");
  }
  const double g0 = log_density(current);
  if (!std::isfinite(g0)) {
    throw KernelError("slice_step: log density not finite at current point");
  }
  // Slice level: g0 - Exp(1).
  const double logy = g0 + std::log(rng.uniform_positive());

  double left = current - width * rng.uniform();
  double right = left + width;
  // Random split of the step-out budget between the two directions.
  int j = static_cast<int>(std::floor(kMaxStepOut * rng.uniform()));
  int k = (kMaxStepOut - 1) - j;
  if (support_lower && left < *support_lower) {
    left = *support_lower;
  } else {
    while (j-- > 0 && log_density(left) > logy) {
      left -= width;
      if (support_lower && left < *support_lower) {
        left = *support_lower;
        break;
      }
    }
  }
  while (k-- > 0 && log_density(right) > logy) {
    right += width;
  }

  for (int i = 0; i < kMaxShrink; ++i) {
    const double candidate = left + (right - left) * rng.uniform();
    const double g = log_density(candidate);
    if (!std::isnan(g) && g >= logy) {
      return candidate;
    }
    if (candidate < current) {
      left = candidate;
    } else {
      right = candidate;
    }
    if (!(right - left > 0.0)) {
      throw KernelError("slice_step: interval collapsed");
    }
  }
  throw KernelError("slice_step: shrinkage did not terminate");
}

// Draw from N(mean, cov). The covariance must be symmetric positive
// definite; its Cholesky factor maps iid standard normals.
Eigen::VectorXd draw_gaussian(const Eigen::VectorXd& mean,
                              const Eigen::MatrixXd& cov, RandomStream& rng);

// Draw from an inverse-gamma with the given shape and rate, i.e. the
// distribution of 1/X for X ~ Gamma(shape, rate).
double draw_inverse_gamma(double shape, double rate, RandomStream& rng);

}  // namespace growthcast
