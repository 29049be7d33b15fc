#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "paramid/errors.hpp"
#include "paramid/model.hpp"
#include "paramid/parallel.hpp"
#include "paramid/random.hpp"

namespace paramid {

struct SobolResult {
  std::vector<std::string> parameter_names;
  Eigen::VectorXd first_order;  // per parameter, averaged over outputs
  Eigen::VectorXd std_error;    // delete-one jackknife over base samples
  int n_samples = 0;
};

// First-order (main-effect) Sobol indices of the noise-free forward model by
// Saltelli pick-freeze with the Jansen form
//   V_i = V(Y) - (1/2N) sum_k (f(B)_k - f(A_B^i)_k)^2,
// per output, then averaged uniformly over the outputs. Model evaluations
// over the sample matrices run in parallel; the result is deterministic for
// a given seed, for any worker count.
inline SobolResult first_order_indices(const ForwardModel& forward,
                                       const Eigen::Ref<const Eigen::VectorXd>& design,
                                       const PriorSpec& prior, int n_samples,
                                       std::uint64_t seed, int workers = 1) {
  if (n_samples < 8) throw std::invalid_argument("first_order_indices: n_samples too small");
  const int m = forward.parameter_count();
  const int n_out = forward.output_count();
  if (prior.dim() != m) {
    throw std::invalid_argument("first_order_indices: prior does not match model");
  }
  const int N = n_samples;

  // f_A, f_B: N x n_out; f_AB[i]: N x n_out with column i of A replaced by B's.
  Eigen::MatrixXd f_a(N, n_out), f_b(N, n_out);
  std::vector<Eigen::MatrixXd> f_ab(m, Eigen::MatrixXd(N, n_out));

  parallel_for(N, workers, [&](int k) {
    RandomStream stream(seed, stream_id(detail::kSobolTag, 0, 0,
                                        static_cast<std::uint64_t>(k)));
    const Eigen::VectorXd ta = prior.sample(stream);
    const Eigen::VectorXd tb = prior.sample(stream);
    f_a.row(k) = forward.evaluate(ta, design).transpose();
    f_b.row(k) = forward.evaluate(tb, design).transpose();
    Eigen::VectorXd hybrid = ta;
    for (int i = 0; i < m; ++i) {
      hybrid[i] = tb[i];
      f_ab[i].row(k) = forward.evaluate(hybrid, design).transpose();
      hybrid[i] = ta[i];
    }
  });

  // Per-output accumulators over the pooled (A, B) sample and the Jansen
  // squared differences.
  Eigen::VectorXd s1 = (f_a.colwise().sum() + f_b.colwise().sum()).transpose();
  Eigen::VectorXd s2 =
      (f_a.array().square().colwise().sum() + f_b.array().square().colwise().sum())
          .transpose();
  Eigen::MatrixXd d2(m, n_out);  // sum_k (f_B - f_AB^i)^2 per (i, out)
  std::vector<Eigen::MatrixXd> diff_sq(m);
  for (int i = 0; i < m; ++i) {
    diff_sq[i] = (f_b - f_ab[i]).array().square();
    d2.row(i) = diff_sq[i].colwise().sum();
  }

  auto indices_without = [&](int drop_k) {
    const double cnt = drop_k < 0 ? 2.0 * N : 2.0 * (N - 1);
    const double jansen_n = drop_k < 0 ? static_cast<double>(N)
                                       : static_cast<double>(N - 1);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int o = 0; o < n_out; ++o) {
      double sum = s1[o], sumsq = s2[o];
      if (drop_k >= 0) {
        sum -= f_a(drop_k, o) + f_b(drop_k, o);
        sumsq -= f_a(drop_k, o) * f_a(drop_k, o) + f_b(drop_k, o) * f_b(drop_k, o);
      }
      const double mean = sum / cnt;
      const double var = (sumsq - cnt * mean * mean) / (cnt - 1.0);
      if (!(var > 0.0) || !std::isfinite(var)) {
        throw degenerate_model_error(
            "first_order_indices: output " + std::to_string(o) +
            " carries no variance");
      }
      for (int i = 0; i < m; ++i) {
        double d = d2(i, o);
        if (drop_k >= 0) d -= diff_sq[i](drop_k, o);
        const double v_i = var - d / (2.0 * jansen_n);
        out[i] += v_i / var;
      }
    }
    out /= static_cast<double>(n_out);
    return out;
  };

  SobolResult result;
  result.parameter_names = prior.names();
  result.n_samples = N;
  result.first_order = indices_without(-1);

  // Delete-one jackknife standard errors.
  Eigen::MatrixXd jack(N, m);
  parallel_for(N, workers, [&](int k) { jack.row(k) = indices_without(k).transpose(); });
  const Eigen::RowVectorXd jack_mean = jack.colwise().mean();
  result.std_error.resize(m);
  for (int i = 0; i < m; ++i) {
    const double ss = (jack.col(i).array() - jack_mean[i]).square().sum();
    result.std_error[i] = std::sqrt(ss * static_cast<double>(N - 1) /
                                    static_cast<double>(N));
  }
  return result;
}

}  // namespace paramid
