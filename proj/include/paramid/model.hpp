#pragma once

#include <Eigen/Core>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "paramid/gaussian.hpp"
#include "paramid/random.hpp"

namespace paramid {

// Deterministic map from (parameters, design inputs) to the prediction
// space. Implementations must be reentrant: estimators evaluate them
// concurrently at different parameter values.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;

  virtual Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& theta,
                                   const Eigen::Ref<const Eigen::VectorXd>& design) const = 0;
  virtual int parameter_count() const = 0;
  virtual int output_count() const = 0;

  virtual std::vector<std::string> parameter_names() const {
    std::vector<std::string> names;
    names.reserve(parameter_count());
    for (int i = 0; i < parameter_count(); ++i) {
      names.push_back("theta" + std::to_string(i + 1));
    }
    return names;
  }
};

// Independent 1-D Gaussian priors, one per parameter.
class PriorSpec {
 public:
  PriorSpec(std::vector<std::string> names, Eigen::VectorXd mean,
            Eigen::VectorXd variance)
      : names_(std::move(names)), mean_(std::move(mean)), variance_(std::move(variance)) {
    if (mean_.size() != variance_.size() ||
        static_cast<Eigen::Index>(names_.size()) != mean_.size()) {
      throw std::invalid_argument("PriorSpec: size mismatch");
    }
    if (mean_.size() == 0) throw std::invalid_argument("PriorSpec: empty");
    if (!(variance_.minCoeff() > 0.0)) {
      throw std::invalid_argument("PriorSpec: all variances must be positive");
    }
  }

  static PriorSpec standard_normal(int m) {
    PriorSpec p(default_names(m), Eigen::VectorXd::Zero(m), Eigen::VectorXd::Ones(m));
    return p;
  }

  Eigen::Index dim() const { return mean_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& variance() const { return variance_; }
  double sigma(Eigen::Index i) const { return std::sqrt(variance_[i]); }

  double logpdf_component(Eigen::Index i, double x) const {
    return normal_logpdf(x, mean_[i], variance_[i]);
  }

  Eigen::VectorXd sample(RandomStream& stream) const {
    Eigen::VectorXd z = stream.normal(dim());
    return mean_.array() + variance_.array().sqrt() * z.array();
  }

 private:
  static std::vector<std::string> default_names(int m) {
    std::vector<std::string> names;
    for (int i = 0; i < m; ++i) names.push_back("theta" + std::to_string(i + 1));
    return names;
  }

  std::vector<std::string> names_;
  Eigen::VectorXd mean_;
  Eigen::VectorXd variance_;
};

inline Eigen::VectorXd sample_prior(const PriorSpec& prior, RandomStream& stream) {
  return prior.sample(stream);
}

// Forward model plus additive zero-mean Gaussian measurement noise at a
// fixed, known design input. Immutable after construction.
class StatisticalModel {
 public:
  StatisticalModel(std::shared_ptr<const ForwardModel> forward,
                   Eigen::VectorXd design, Eigen::MatrixXd noise_covariance)
      : forward_(std::move(forward)),
        design_(std::move(design)),
        noise_(make_centered(std::move(noise_covariance))) {
    if (!forward_) throw std::invalid_argument("StatisticalModel: null forward model");
    if (noise_.dim() != forward_->output_count()) {
      throw std::invalid_argument(
          "StatisticalModel: noise covariance does not match output dimension");
    }
  }

  const ForwardModel& forward() const { return *forward_; }
  std::shared_ptr<const ForwardModel> forward_ptr() const { return forward_; }
  const Eigen::VectorXd& design() const { return design_; }
  const GaussianDensity& noise() const { return noise_; }
  int output_count() const { return forward_->output_count(); }
  int parameter_count() const { return forward_->parameter_count(); }

  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
    return forward_->evaluate(theta, design_);
  }

  double likelihood_logpdf(const Eigen::Ref<const Eigen::VectorXd>& theta,
                           const Eigen::Ref<const Eigen::VectorXd>& y) const {
    return noise_.logpdf(y - predict(theta));
  }

  Eigen::VectorXd sample_observation(const Eigen::Ref<const Eigen::VectorXd>& theta,
                                     RandomStream& stream) const {
    return predict(theta) + noise_.sample(stream);
  }

 private:
  static GaussianDensity make_centered(Eigen::MatrixXd cov) {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(cov.rows());
    return GaussianDensity(std::move(zero), std::move(cov));
  }

  std::shared_ptr<const ForwardModel> forward_;
  Eigen::VectorXd design_;
  GaussianDensity noise_;
};

inline double likelihood_logpdf(const StatisticalModel& model,
                                const Eigen::Ref<const Eigen::VectorXd>& theta,
                                const Eigen::Ref<const Eigen::VectorXd>& y) {
  return model.likelihood_logpdf(theta, y);
}

inline Eigen::VectorXd sample_observation(const StatisticalModel& model,
                                          const Eigen::Ref<const Eigen::VectorXd>& theta,
                                          RandomStream& stream) {
  return model.sample_observation(theta, stream);
}

// y = A theta; the design enters through the construction of A.
class LinearForwardModel : public ForwardModel {
 public:
  explicit LinearForwardModel(Eigen::MatrixXd feature_matrix)
      : A_(std::move(feature_matrix)) {}

  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& theta,
                           const Eigen::Ref<const Eigen::VectorXd>&) const override {
    return A_ * theta;
  }
  int parameter_count() const override { return static_cast<int>(A_.cols()); }
  int output_count() const override { return static_cast<int>(A_.rows()); }

  const Eigen::MatrixXd& feature_matrix() const { return A_; }

 private:
  Eigen::MatrixXd A_;
};

}  // namespace paramid
