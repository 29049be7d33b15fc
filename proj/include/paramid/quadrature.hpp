#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace paramid {

// Nodes are in standard-normal coordinates; weights are normalized so that
// sum_i w_i f(x_i) approximates E[f(X)] for X ~ N(0,1). Transform to
// N(mu, sigma^2) via x -> mu + sigma * x.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  int order = 0;
};

// Gauss-Hermite rule by Golub-Welsch: eigen decomposition of the symmetric
// tridiagonal Jacobi matrix of the probabilists' Hermite recurrence. Exact
// for polynomial integrands of degree <= 2*order - 1.
inline QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1 || order > 200) {
    throw std::invalid_argument("gauss_hermite_rule: order must be in [1, 200]");
  }
  QuadratureRule rule;
  rule.order = order;
  if (order == 1) {
    rule.nodes = Eigen::VectorXd::Zero(1);
    rule.weights = Eigen::VectorXd::Ones(1);
    return rule;
  }

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gauss_hermite_rule: eigen decomposition failed");
  }

  rule.nodes = solver.eigenvalues();  // ascending

  // Weights through the Christoffel function, w_j = 1 / sum_k p_k(x_j)^2
  // with orthonormal probabilists' Hermite polynomials. The squared first
  // eigenvector components are the same quantity but lose all relative
  // accuracy at the extreme nodes, where the weights are ~1e-40.
  rule.weights.resize(order);
  for (int j = 0; j < order; ++j) {
    const double x = rule.nodes[j];
    double pm = 0.0, pc = 1.0, acc = 1.0;
    for (int k = 1; k < order; ++k) {
      const double pn = (x * pc - std::sqrt(static_cast<double>(k - 1)) * pm) /
                        std::sqrt(static_cast<double>(k));
      pm = pc;
      pc = pn;
      acc += pc * pc;
    }
    rule.weights[j] = 1.0 / acc;
  }

  // Enforce the exact symmetry of the rule; fp noise in the eigen solve is
  // folded into paired averages.
  for (int i = 0, j = order - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace paramid
