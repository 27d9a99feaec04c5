#include "growthcast/samplers.hpp"

namespace growthcast {

Eigen::VectorXd draw_gaussian(const Eigen::VectorXd& mean,
                              const Eigen::MatrixXd& cov, RandomStream& rng) {
  const Eigen::Index k = mean.size();
  if (cov.rows() != k || cov.cols() != k) {
    throw std::invalid_argument("draw_gaussian: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw KernelError("draw_gaussian: covariance not positive definite");
  }
  Eigen::VectorXd z(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    z(i) = rng.normal();
  }
  return mean + llt.matrixL() * z;
}

double draw_inverse_gamma(double shape, double rate, RandomStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::domain_error("draw_inverse_gamma: parameters must be > 0");
  }
  // 1/X with X ~ Gamma(shape, rate); std::gamma_distribution is
  // shape/scale, so the scale is 1/rate. Retry on the measure-zero
  // underflow of the gamma draw to zero.
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double g = rng.gamma(shape, 1.0 / rate);
    if (g > 0.0 && std::isfinite(g)) {
      return 1.0 / g;
    }
  }
  throw KernelError("draw_inverse_gamma: gamma draws degenerate");
}

}  // namespace growthcast
