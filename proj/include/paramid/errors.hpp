#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace paramid {

// Thrown when a forward model cannot be evaluated (integrator divergence,
// missing ignition, ...). Carries the offending parameter vector and, when
// raised inside an estimator loop, the outer sample index.
class model_evaluation_error : public std::runtime_error {
 public:
  model_evaluation_error(const std::string& what, Eigen::VectorXd theta)
      : std::runtime_error(what), theta_(std::move(theta)) {}

  model_evaluation_error(const std::string& what, Eigen::VectorXd theta,
                         std::size_t sample_index)
      : std::runtime_error(what),
        theta_(std::move(theta)),
        sample_index_(sample_index) {}

  const Eigen::VectorXd& theta() const { return theta_; }
  const std::optional<std::size_t>& sample_index() const { return sample_index_; }

 private:
  Eigen::VectorXd theta_;
  std::optional<std::size_t> sample_index_;
};

// Reactor trajectory shows no temperature rise above the ignition threshold.
class no_ignition_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive step control collapsed below the minimum step size.
class stiffness_error : public std::runtime_error {
 public:
  stiffness_error(const std::string& what, double time, Eigen::VectorXd state)
      : std::runtime_error(what), time_(time), state_(std::move(state)) {}

  double time() const { return time_; }
  const Eigen::VectorXd& state() const { return state_; }

 private:
  double time_;
  Eigen::VectorXd state_;
};

// Sobol analysis of a model whose output carries no variance.
class degenerate_model_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// MCMC started at a point where the target is not finite.
class invalid_start_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration file violates the schema.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace paramid
