#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "paramid/gaussian.hpp"

namespace paramid {

// y = A theta + xi with Gaussian prior and noise. Every posterior quantity
// and information measure of this model is available in closed form, which
// is what makes it the validation reference for the sampled estimators.
struct LinearGaussianSpec {
  Eigen::MatrixXd feature_matrix;  // n x m
  Eigen::VectorXd prior_mean;      // m
  Eigen::MatrixXd prior_cov;       // m x m
  Eigen::MatrixXd noise_cov;       // n x n

  Eigen::Index m() const { return feature_matrix.cols(); }
  Eigen::Index n() const { return feature_matrix.rows(); }
};

// Feature matrix with entry (i, j) = d_i^(j+1): columns d, d^2, ..., d^m.
inline Eigen::MatrixXd build_vandermonde(const Eigen::Ref<const Eigen::VectorXd>& d_points,
                                         int m) {
  if (m < 1) throw std::invalid_argument("build_vandermonde: m must be >= 1");
  Eigen::MatrixXd A(d_points.size(), m);
  for (Eigen::Index i = 0; i < d_points.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j < m; ++j) {
      p *= d_points[i];
      A(i, j) = p;
    }
  }
  return A;
}

// Differential entropy of N(mu, cov) in nats.
inline double gaussian_entropy(const Eigen::Ref<const Eigen::MatrixXd>& covariance) {
  const Eigen::Index n = covariance.rows();
  if (n == 0) return 0.0;
  if (covariance.cols() != n) {
    throw std::invalid_argument("gaussian_entropy: matrix must be square");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("gaussian_entropy: covariance not positive definite");
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = llt.matrixL()(i, i);
    if (!(d > 0.0)) {
      throw std::domain_error("gaussian_entropy: covariance not positive definite");
    }
    log_det += 2.0 * std::log(d);
  }
  return static_cast<double>(n) * kHalfLog2Pi + 0.5 * log_det +
         0.5 * static_cast<double>(n);
}

// Joint density of (theta, y): mean [mu; A mu], covariance
// [[S, S A^T], [A S, A S A^T + Gamma]].
inline GaussianDensity lg_joint(const LinearGaussianSpec& spec) {
  const Eigen::Index m = spec.m();
  const Eigen::Index n = spec.n();
  Eigen::VectorXd mean(m + n);
  mean.head(m) = spec.prior_mean;
  mean.tail(n) = spec.feature_matrix * spec.prior_mean;

  Eigen::MatrixXd cov(m + n, m + n);
  const Eigen::MatrixXd cross = spec.prior_cov * spec.feature_matrix.transpose();
  cov.topLeftCorner(m, m) = spec.prior_cov;
  cov.topRightCorner(m, n) = cross;
  cov.bottomLeftCorner(n, m) = cross.transpose();
  cov.bottomRightCorner(n, n) =
      spec.feature_matrix * cross + spec.noise_cov;
  return GaussianDensity(std::move(mean), std::move(cov));
}

// Posterior of theta given an observation y, by Gaussian conditioning on
// the joint above.
inline GaussianDensity lg_posterior(const LinearGaussianSpec& spec,
                                    const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::MatrixXd cross = spec.prior_cov * spec.feature_matrix.transpose();
  Eigen::MatrixXd sigma_y =
      spec.feature_matrix * cross + spec.noise_cov;
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_y);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("lg_posterior: evidence covariance not positive definite");
  }
  const Eigen::VectorXd mu_y = spec.feature_matrix * spec.prior_mean;
  Eigen::VectorXd mean =
      spec.prior_mean + cross * llt.solve(y - mu_y);
  Eigen::MatrixXd cov = spec.prior_cov - cross * llt.solve(cross.transpose());
  cov = 0.5 * (cov + cov.transpose());
  return GaussianDensity(std::move(mean), std::move(cov));
}

namespace detail {

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& cov,
                                 const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) {
      out(a, b) = cov(idx[a], idx[b]);
    }
  }
  return out;
}

inline double subset_entropy(const Eigen::MatrixXd& cov,
                             const std::vector<Eigen::Index>& idx) {
  if (idx.empty()) return 0.0;
  return gaussian_entropy(submatrix(cov, idx));
}

}  // namespace detail

// Exact expected information gain about parameter i, as an entropy
// combination over marginal blocks of the joint (theta, y) covariance:
// H(theta) + H(theta_~i, y) - H(theta_~i) - H(theta, y).
inline double lg_information_gain_exact(const LinearGaussianSpec& spec, int i) {
  const Eigen::Index m = spec.m();
  const Eigen::Index n = spec.n();
  if (i < 0 || i >= m) throw std::invalid_argument("lg_information_gain_exact: bad index");
  const Eigen::MatrixXd cov = lg_joint(spec).covariance();

  std::vector<Eigen::Index> theta_all, theta_rest, rest_y, all;
  for (Eigen::Index t = 0; t < m; ++t) {
    theta_all.push_back(t);
    if (t != i) theta_rest.push_back(t);
  }
  rest_y = theta_rest;
  for (Eigen::Index t = 0; t < n; ++t) rest_y.push_back(m + t);
  all = theta_all;
  for (Eigen::Index t = 0; t < n; ++t) all.push_back(m + t);

  const double v = detail::subset_entropy(cov, theta_all) +
                   detail::subset_entropy(cov, rest_y) -
                   detail::subset_entropy(cov, theta_rest) -
                   detail::subset_entropy(cov, all);
  return std::max(v, 0.0);
}

// Exact posterior dependence between parameters i and j:
// H(theta_i, theta_~ij, y) + H(theta_j, theta_~ij, y)
//   - H(theta_~ij, y) - H(theta, y).
inline double lg_pairwise_exact(const LinearGaussianSpec& spec, int i, int j) {
  const Eigen::Index m = spec.m();
  const Eigen::Index n = spec.n();
  if (i == j) throw std::invalid_argument("lg_pairwise_exact: indices must differ");
  if (i < 0 || i >= m || j < 0 || j >= m) {
    throw std::invalid_argument("lg_pairwise_exact: bad index");
  }
  const Eigen::MatrixXd cov = lg_joint(spec).covariance();

  std::vector<Eigen::Index> rest;  // parameters except i and j
  for (Eigen::Index t = 0; t < m; ++t) {
    if (t != i && t != j) rest.push_back(t);
  }
  std::vector<Eigen::Index> y_idx;
  for (Eigen::Index t = 0; t < n; ++t) y_idx.push_back(m + t);

  auto with = [&](std::vector<Eigen::Index> base,
                  const std::vector<Eigen::Index>& extra) {
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
  };

  std::vector<Eigen::Index> i_rest_y = with({static_cast<Eigen::Index>(i)}, rest);
  i_rest_y = with(i_rest_y, y_idx);
  std::vector<Eigen::Index> j_rest_y = with({static_cast<Eigen::Index>(j)}, rest);
  j_rest_y = with(j_rest_y, y_idx);
  std::vector<Eigen::Index> rest_y = with(rest, y_idx);
  std::vector<Eigen::Index> all;
  for (Eigen::Index t = 0; t < m + n; ++t) all.push_back(t);

  const double v = detail::subset_entropy(cov, i_rest_y) +
                   detail::subset_entropy(cov, j_rest_y) -
                   detail::subset_entropy(cov, rest_y) -
                   detail::subset_entropy(cov, all);
  return std::max(v, 0.0);
}

}  // namespace paramid
