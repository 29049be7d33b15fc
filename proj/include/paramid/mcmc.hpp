#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>

#include "paramid/errors.hpp"
#include "paramid/random.hpp"

namespace paramid {

struct ChainConfig {
  int n_steps = 100000;
  int burn_in = -1;            // -1 -> 20% of n_steps
  int adaptation_start = 1000; // steps before covariance adaptation kicks in
  Eigen::MatrixXd initial_proposal_cov;  // must be set, positive definite
  double epsilon = 1e-10;      // covariance regularization
  std::uint64_t seed = 0;

  int effective_burn_in() const {
    return burn_in >= 0 ? burn_in : n_steps / 5;
  }

  void validate(int dim) const {
    if (n_steps < 2) throw std::invalid_argument("ChainConfig: n_steps must be >= 2");
    if (effective_burn_in() >= n_steps) {
      throw std::invalid_argument("ChainConfig: burn_in must be < n_steps");
    }
    if (adaptation_start < 10) {
      throw std::invalid_argument("ChainConfig: adaptation_start must be >= 10");
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("ChainConfig: epsilon must be > 0");
    if (initial_proposal_cov.rows() != dim || initial_proposal_cov.cols() != dim) {
      throw std::invalid_argument("ChainConfig: initial proposal covariance has wrong shape");
    }
  }
};

struct Chain {
  Eigen::MatrixXd samples;       // n_steps x m, row 0 is the initial state
  Eigen::VectorXd log_posterior; // per row
  double acceptance_rate = 0.0;
  int burn_in = 0;

  Eigen::Index n_retained() const { return samples.rows() - burn_in; }
  Eigen::Block<const Eigen::MatrixXd> retained() const {
    return samples.bottomRows(samples.rows() - burn_in);
  }
};

inline constexpr std::uint64_t kMcmcTag = 0x6d636d63ULL;

// Adaptive Metropolis (Haario-style): Gaussian random-walk proposals whose
// covariance, after `adaptation_start` steps, tracks
// (2.4^2 / m) * (cov of chain history + epsilon * I), updated recursively.
// Non-finite target values during the run reject the proposal.
inline Chain adaptive_metropolis(const std::function<double(const Eigen::VectorXd&)>& log_target,
                                 const Eigen::VectorXd& init, const ChainConfig& config) {
  const int m = static_cast<int>(init.size());
  config.validate(m);

  double lp = log_target(init);
  if (!std::isfinite(lp)) {
    throw invalid_start_error("adaptive_metropolis: log target not finite at the start point");
  }

  Chain chain;
  chain.samples.resize(config.n_steps, m);
  chain.log_posterior.resize(config.n_steps);
  chain.burn_in = config.effective_burn_in();
  chain.samples.row(0) = init.transpose();
  chain.log_posterior[0] = lp;

  RandomStream stream(config.seed, stream_id(kMcmcTag, 0, 0, 0));

  const double s_m = 2.4 * 2.4 / static_cast<double>(m);
  Eigen::LLT<Eigen::MatrixXd> proposal_llt(config.initial_proposal_cov);
  if (proposal_llt.info() != Eigen::Success) {
    throw std::invalid_argument("adaptive_metropolis: initial proposal covariance not PD");
  }

  // Welford running moments of the chain history (repeated states included).
  Eigen::VectorXd mean = init;
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(m, m);
  long long count = 1;

  Eigen::VectorXd x = init;
  Eigen::VectorXd z(m), proposal(m);
  long long accepted = 0;

  for (int t = 1; t < config.n_steps; ++t) {
    stream.normal(z);
    proposal = x + proposal_llt.matrixL() * z;

    double lp_new = log_target(proposal);
    if (std::isfinite(lp_new)) {
      const double log_alpha = lp_new - lp;
      if (log_alpha >= 0.0 || std::log(stream.uniform()) < log_alpha) {
        x = proposal;
        lp = lp_new;
        ++accepted;
      }
    }
    chain.samples.row(t) = x.transpose();
    chain.log_posterior[t] = lp;

    // Recursive moment update with the new state.
    ++count;
    const Eigen::VectorXd delta = x - mean;
    mean += delta / static_cast<double>(count);
    scatter.noalias() += delta * (x - mean).transpose();

    if (t + 1 >= config.adaptation_start) {
      Eigen::MatrixXd cov = scatter / static_cast<double>(count - 1);
      cov = 0.5 * (cov + cov.transpose());
      double jitter = config.epsilon;
      for (;;) {
        Eigen::MatrixXd c = s_m * (cov + jitter * Eigen::MatrixXd::Identity(m, m));
        proposal_llt.compute(c);
        if (proposal_llt.info() == Eigen::Success) break;
        jitter *= 10.0;
      }
    }
  }

  chain.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(config.n_steps - 1);
  return chain;
}

}  // namespace paramid
