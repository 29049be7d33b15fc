#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "paramid/random.hpp"

namespace paramid {

inline constexpr double kHalfLog2Pi = 0.9189385332046727417803297;

// Multivariate normal with the Cholesky factor and log-determinant cached at
// construction. Immutable once built, safe to share across threads.
class GaussianDensity {
 public:
  GaussianDensity(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
      : mean_(std::move(mean)), cov_(std::move(covariance)) {
    if (cov_.rows() != cov_.cols() || cov_.rows() != mean_.size()) {
      throw std::invalid_argument("GaussianDensity: dimension mismatch");
    }
    const double scale = cov_.cwiseAbs().maxCoeff();
    const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * (scale > 0 ? scale : 1.0)) {
      throw std::invalid_argument("GaussianDensity: covariance not symmetric");
    }
    llt_.compute(cov_);
    if (llt_.info() != Eigen::Success) {
      throw std::domain_error("GaussianDensity: covariance not positive definite");
    }
    log_det_ = 0.0;
    for (Eigen::Index i = 0; i < cov_.rows(); ++i) {
      const double d = llt_.matrixL()(i, i);
      if (!(d > 0.0)) {
        throw std::domain_error("GaussianDensity: covariance not positive definite");
      }
      log_det_ += 2.0 * std::log(d);
    }
  }

  Eigen::Index dim() const { return mean_.size(); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  double log_det_covariance() const { return log_det_; }

  double logpdf(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != mean_.size()) {
      throw std::invalid_argument("GaussianDensity::logpdf: dimension mismatch");
    }
    Eigen::VectorXd r = x - mean_;
    llt_.matrixL().solveInPlace(r);
    return -static_cast<double>(dim()) * kHalfLog2Pi - 0.5 * log_det_ -
           0.5 * r.squaredNorm();
  }

  Eigen::VectorXd sample(RandomStream& stream) const {
    Eigen::VectorXd z = stream.normal(dim());
    return mean_ + llt_.matrixL() * z;
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0.0;
};

inline double gaussian_logpdf(const Eigen::Ref<const Eigen::VectorXd>& x,
                              const GaussianDensity& density) {
  return density.logpdf(x);
}

// 1-D normal log density.
inline double normal_logpdf(double x, double mean, double variance) {
  if (!(variance > 0.0)) {
    throw std::domain_error("normal_logpdf: variance must be positive");
  }
  const double r = x - mean;
  return -kHalfLog2Pi - 0.5 * std::log(variance) - 0.5 * r * r / variance;
}

}  // namespace paramid
