#pragma once

#include <Eigen/Core>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "paramid/errors.hpp"
#include "paramid/logsumexp.hpp"
#include "paramid/model.hpp"
#include "paramid/parallel.hpp"
#include "paramid/quadrature.hpp"
#include "paramid/random.hpp"

namespace paramid {

// Log densities below this floor are treated as vanished; the clamp is
// counted instead of aborting the run.
inline constexpr double kLogEvidenceFloor = -1e8;

struct EstimatorConfig {
  int n_outer = 1000;          // outer Monte-Carlo samples
  int n_inner = 10;            // quadrature order per inner dimension
  int n_inner_pair = 0;        // order per dimension of the 2-D rule; 0 -> n_inner
  double proposal_scale = 0.3; // importance proposal std-dev, in prior sigmas
  std::uint64_t seed = 0;
  bool use_importance_sampling = true;
  int workers = 1;

  int pair_order() const { return n_inner_pair > 0 ? n_inner_pair : n_inner; }

  void validate() const {
    if (n_outer < 2) throw std::invalid_argument("EstimatorConfig: n_outer must be >= 2");
    if (n_inner < 1) throw std::invalid_argument("EstimatorConfig: n_inner must be >= 1");
    if (n_inner > 200 || pair_order() > 200) {
      throw std::invalid_argument("EstimatorConfig: inner order exceeds quadrature limit");
    }
    if (!(proposal_scale > 0.0)) {
      throw std::invalid_argument("EstimatorConfig: proposal_scale must be positive");
    }
    if (workers < 1) throw std::invalid_argument("EstimatorConfig: workers must be >= 1");
  }
};

struct EstimateResult {
  double value = 0.0;       // nats
  double std_error = 0.0;   // nats
  int n_outer_used = 0;
  long long degenerate_inner_count = 0;
};

namespace detail {

inline EstimateResult summarize(const std::vector<double>& terms,
                                long long degenerate) {
  EstimateResult r;
  r.n_outer_used = static_cast<int>(terms.size());
  r.degenerate_inner_count = degenerate;
  double mean = 0.0;
  for (double t : terms) mean += t;
  mean /= static_cast<double>(terms.size());
  double ss = 0.0;
  for (double t : terms) {
    const double d = t - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(terms.size() - 1);
  r.value = mean;
  r.std_error = std::sqrt(var / static_cast<double>(terms.size()));
  return r;
}

}  // namespace detail

// Quadrature approximation of the conditional evidence
// log p(y | theta_fixed, d), marginalizing the likelihood over the free
// parameter(s) under their priors. Nodes are placed under an importance
// proposal N(center, (proposal_scale * sigma_prior)^2) with weights
// prior/proposal, or directly under the prior when importance sampling is
// off. Two free indices use the full tensor grid of the rule.
//
// Inner model failures and vanished likelihoods are folded into the result
// as zero-likelihood nodes and counted through `degenerate_counter`; if the
// whole sum vanishes the floor value kLogEvidenceFloor is returned.
inline double conditional_evidence_log(const StatisticalModel& model,
                                       const PriorSpec& prior,
                                       const Eigen::Ref<const Eigen::VectorXd>& y,
                                       const Eigen::Ref<const Eigen::VectorXd>& theta_base,
                                       const std::vector<int>& free_indices,
                                       const QuadratureRule& rule,
                                       const Eigen::Ref<const Eigen::VectorXd>& proposal_center,
                                       const EstimatorConfig& config,
                                       long long* degenerate_counter = nullptr) {
  const std::size_t n_free = free_indices.size();
  if (n_free < 1 || n_free > 2) {
    throw std::invalid_argument("conditional_evidence_log: 1 or 2 free indices required");
  }
  if (theta_base.size() != prior.dim()) {
    throw std::invalid_argument("conditional_evidence_log: theta dimension mismatch");
  }
  if (proposal_center.size() != static_cast<Eigen::Index>(n_free)) {
    throw std::invalid_argument("conditional_evidence_log: proposal center size mismatch");
  }

  // Node locations and log weight adjustments per free dimension.
  std::array<Eigen::VectorXd, 2> values;
  std::array<Eigen::VectorXd, 2> log_adjust;
  for (std::size_t t = 0; t < n_free; ++t) {
    const int p = free_indices[t];
    const double sigma_prior = prior.sigma(p);
    const double loc = config.use_importance_sampling ? proposal_center[t]
                                                      : prior.mean()[p];
    const double scale = config.use_importance_sampling
                             ? config.proposal_scale * sigma_prior
                             : sigma_prior;
    values[t].resize(rule.order);
    log_adjust[t].resize(rule.order);
    for (int z = 0; z < rule.order; ++z) {
      const double x = loc + scale * rule.nodes[z];
      values[t][z] = x;
      double w = std::log(rule.weights[z]);
      if (config.use_importance_sampling) {
        w += prior.logpdf_component(p, x) -
             normal_logpdf(x, loc, scale * scale);
      }
      log_adjust[t][z] = w;
    }
  }

  const int n_nodes = n_free == 1 ? rule.order : rule.order * rule.order;
  Eigen::VectorXd log_terms(n_nodes);
  Eigen::VectorXd log_weights(n_nodes);
  Eigen::VectorXd theta = theta_base;
  long long failures = 0;

  int idx = 0;
  for (int a = 0; a < rule.order; ++a) {
    theta[free_indices[0]] = values[0][a];
    const int b_count = n_free == 2 ? rule.order : 1;
    for (int b = 0; b < b_count; ++b) {
      double lw = log_adjust[0][a];
      if (n_free == 2) {
        theta[free_indices[1]] = values[1][b];
        lw += log_adjust[1][b];
      }
      double ll;
      try {
        ll = model.likelihood_logpdf(theta, y);
      } catch (const model_evaluation_error&) {
        ll = -std::numeric_limits<double>::infinity();
        ++failures;
      }
      log_terms[idx] = ll;
      log_weights[idx] = lw;
      ++idx;
    }
  }

  double result = log_sum_exp_weighted(log_terms, log_weights);
  long long clamped = failures;
  if (!std::isfinite(result) || result < kLogEvidenceFloor) {
    result = kLogEvidenceFloor;
    ++clamped;
  }
  if (degenerate_counter && clamped > 0) *degenerate_counter += clamped;
  return result;
}

// Expected information gain about parameter i (nats): the average over
// joint prior-predictive draws (theta^k, y^k) of
// log p(y^k | theta^k, d) - log p_hat(y^k | theta_~i^k, d).
inline EstimateResult information_gain(const StatisticalModel& model,
                                       const PriorSpec& prior, int i,
                                       const EstimatorConfig& config) {
  config.validate();
  if (i < 0 || i >= prior.dim()) {
    throw std::invalid_argument("information_gain: parameter index out of range");
  }
  if (model.parameter_count() != prior.dim()) {
    throw std::invalid_argument("information_gain: prior does not match model");
  }

  const QuadratureRule rule = gauss_hermite_rule(config.n_inner);
  std::vector<double> terms(config.n_outer);
  std::atomic<long long> degenerate{0};
  const std::vector<int> free_idx{i};

  parallel_for(config.n_outer, config.workers, [&](int k) {
    RandomStream stream(config.seed,
                        stream_id(detail::kGainTag, static_cast<std::uint64_t>(i), 0,
                                  static_cast<std::uint64_t>(k)));
    const Eigen::VectorXd theta = prior.sample(stream);
    try {
      const Eigen::VectorXd y = model.sample_observation(theta, stream);
      const double num = model.likelihood_logpdf(theta, y);
      long long local = 0;
      Eigen::VectorXd center(1);
      center[0] = theta[i];
      const double den = conditional_evidence_log(model, prior, y, theta, free_idx,
                                                  rule, center, config, &local);
      if (local > 0) degenerate += local;
      terms[k] = num - den;
    } catch (const model_evaluation_error& e) {
      throw model_evaluation_error(
          std::string(e.what()) + " (outer sample " + std::to_string(k) + ")",
          e.theta(), static_cast<std::size_t>(k));
    }
  });

  return detail::summarize(terms, degenerate.load());
}

// Posterior dependence between parameters i and j (nats): the average of
// log p(y|theta) + log p_hat(y|theta_~ij) - log p_hat(y|theta_i, theta_~ij)
//   - log p_hat(y|theta_j, theta_~ij),
// with the first conditional evidence marginalized over the (i, j) plane on
// the tensor rule and the other two over a single parameter.
inline EstimateResult pairwise_dependence(const StatisticalModel& model,
                                          const PriorSpec& prior, int i, int j,
                                          const EstimatorConfig& config) {
  config.validate();
  if (i == j) throw std::invalid_argument("pairwise_dependence: indices must differ");
  if (i < 0 || i >= prior.dim() || j < 0 || j >= prior.dim()) {
    throw std::invalid_argument("pairwise_dependence: parameter index out of range");
  }
  if (model.parameter_count() != prior.dim()) {
    throw std::invalid_argument("pairwise_dependence: prior does not match model");
  }

  const QuadratureRule rule_1d = gauss_hermite_rule(config.n_inner);
  const QuadratureRule rule_2d = gauss_hermite_rule(config.pair_order());
  std::vector<double> terms(config.n_outer);
  std::atomic<long long> degenerate{0};

  parallel_for(config.n_outer, config.workers, [&](int k) {
    RandomStream stream(config.seed,
                        stream_id(detail::kPairTag, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(j),
                                  static_cast<std::uint64_t>(k)));
    const Eigen::VectorXd theta = prior.sample(stream);
    try {
      const Eigen::VectorXd y = model.sample_observation(theta, stream);
      const double t_full = model.likelihood_logpdf(theta, y);
      long long local = 0;

      Eigen::VectorXd center_ij(2);
      center_ij << theta[i], theta[j];
      const double t_rest = conditional_evidence_log(
          model, prior, y, theta, {i, j}, rule_2d, center_ij, config, &local);

      Eigen::VectorXd center_j(1);
      center_j[0] = theta[j];
      const double t_i_fixed = conditional_evidence_log(
          model, prior, y, theta, {j}, rule_1d, center_j, config, &local);

      Eigen::VectorXd center_i(1);
      center_i[0] = theta[i];
      const double t_j_fixed = conditional_evidence_log(
          model, prior, y, theta, {i}, rule_1d, center_i, config, &local);

      if (local > 0) degenerate += local;
      terms[k] = t_full + t_rest - t_i_fixed - t_j_fixed;
    } catch (const model_evaluation_error& e) {
      throw model_evaluation_error(
          std::string(e.what()) + " (outer sample " + std::to_string(k) + ")",
          e.theta(), static_cast<std::size_t>(k));
    }
  });

  return detail::summarize(terms, degenerate.load());
}

struct ReportEntry {
  EstimateResult result;
  double wall_seconds = 0.0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

struct IdentifiabilityReport {
  std::vector<std::string> parameter_names;
  std::vector<ReportEntry> gains;         // one per parameter
  std::vector<ReportEntry> pair_entries;  // unordered pairs, (0,1), (0,2), ...
  EstimatorConfig config;

  int m() const { return static_cast<int>(parameter_names.size()); }

  // Index of pair (i, j), i != j, into pair_entries.
  int pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return i * m() - i * (i + 1) / 2 + (j - i - 1);
  }

  const ReportEntry& dependence(int i, int j) const {
    return pair_entries[pair_index(i, j)];
  }
};

// Batches information_gain over every parameter and pairwise_dependence
// over every unordered pair. Per-entry failures are recorded in the report
// instead of aborting the remaining entries.
inline IdentifiabilityReport full_report(const StatisticalModel& model,
                                         const PriorSpec& prior,
                                         const EstimatorConfig& config) {
  config.validate();
  IdentifiabilityReport report;
  report.parameter_names = prior.names();
  report.config = config;
  const int m = static_cast<int>(prior.dim());

  auto timed = [&](auto&& fn) {
    ReportEntry entry;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      entry.result = fn();
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    entry.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return entry;
  };

  for (int i = 0; i < m; ++i) {
    report.gains.push_back(
        timed([&] { return information_gain(model, prior, i, config); }));
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      report.pair_entries.push_back(
          timed([&] { return pairwise_dependence(model, prior, i, j, config); }));
    }
  }
  return report;
}

}  // namespace paramid
