#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace paramid {

// log sum_i exp(log_terms[i] + log_weights[i]) with the max-shift trick.
// Safe for terms far below the double exponent range; returns -inf when
// every summand vanishes.
inline double log_sum_exp_weighted(const Eigen::Ref<const Eigen::VectorXd>& log_terms,
                                   const Eigen::Ref<const Eigen::VectorXd>& log_weights) {
  if (log_terms.size() == 0) {
    throw std::invalid_argument("log_sum_exp_weighted: empty input");
  }
  if (log_terms.size() != log_weights.size()) {
    throw std::invalid_argument("log_sum_exp_weighted: length mismatch");
  }
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < log_terms.size(); ++i) {
    const double s = log_terms[i] + log_weights[i];
    if (s > m) m = s;
  }
  if (!std::isfinite(m)) return m;  // all -inf (or a stray +inf)
  double acc = 0.0;
  for (Eigen::Index i = 0; i < log_terms.size(); ++i) {
    acc += std::exp(log_terms[i] + log_weights[i] - m);
  }
  return m + std::log(acc);
}

inline double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& log_terms) {
  return log_sum_exp_weighted(log_terms, Eigen::VectorXd::Zero(log_terms.size()));
}

}  // namespace paramid
