#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "paramid/config.hpp"
#include "paramid/errors.hpp"
#include "paramid/kinetics.hpp"
#include "paramid/linear_gaussian.hpp"
#include "paramid/model.hpp"

namespace paramid {

// A named statistical model assembled from config settings. Models backed by
// the linear-Gaussian reference also expose the closed-form spec used by the
// convergence and oracle-check commands.
struct BuiltModel {
  std::shared_ptr<const ForwardModel> forward;
  std::unique_ptr<StatisticalModel> model;
  std::optional<LinearGaussianSpec> oracle;
};

namespace registry_detail {

inline Eigen::MatrixXd diagonal_noise(int n, double variance) {
  if (!(variance >= 1e-12)) {
    throw config_error("noise_variance must be >= 1e-12 (degenerate noise rejected)");
  }
  return variance * Eigen::MatrixXd::Identity(n, n);
}

inline BuiltModel build_linear_gaussian(const nlohmann::json& settings,
                                        const std::string&) {
  cfg_detail::reject_unknown_keys(settings, "config.model.settings",
                                  {"n_observations", "n_parameters",
                                   "design_interval", "noise_variance"});
  const int n = cfg_detail::optional_value(settings, "model", "n_observations", 100);
  const int m = cfg_detail::optional_value(settings, "model", "n_parameters", 3);
  const std::vector<double> interval = cfg_detail::optional_value(
      settings, "model", "design_interval", std::vector<double>{-1.0, 1.0});
  const double noise_var =
      cfg_detail::optional_value(settings, "model", "noise_variance", 0.1);
  if (n < 1 || m < 1) throw config_error("linear_gaussian: n and m must be >= 1");
  if (interval.size() != 2 || !(interval[1] > interval[0])) {
    throw config_error("linear_gaussian: design_interval must be [lo, hi] with hi > lo");
  }

  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(n, interval[0], interval[1]);
  Eigen::MatrixXd A = build_vandermonde(d, m);

  BuiltModel built;
  built.forward = std::make_shared<LinearForwardModel>(A);
  built.model = std::make_unique<StatisticalModel>(built.forward, d,
                                                   diagonal_noise(n, noise_var));
  LinearGaussianSpec spec;
  spec.feature_matrix = A;
  spec.prior_mean = Eigen::VectorXd::Zero(m);  // overwritten by attach_oracle_priors
  spec.prior_cov = Eigen::MatrixXd::Identity(m, m);
  spec.noise_cov = diagonal_noise(n, noise_var);
  built.oracle = spec;
  return built;
}

inline BuiltModel build_methane_2step(const nlohmann::json& settings,
                                      const std::string& base_dir) {
  cfg_detail::reject_unknown_keys(settings, "config.model.settings",
                                  {"initial_temperatures_K", "equivalence_ratio",
                                   "initial_pressure_Pa", "noise_variance",
                                   "mechanism_file", "rel_tol"});
  const std::vector<double> temps = cfg_detail::optional_value(
      settings, "model", "initial_temperatures_K",
      std::vector<double>{1100.0, 1400.0, 1700.0, 2000.0});
  const double phi = cfg_detail::optional_value(settings, "model", "equivalence_ratio", 1.0);
  const double p0 = cfg_detail::optional_value(settings, "model", "initial_pressure_Pa", 1e5);
  const double noise_var =
      cfg_detail::optional_value(settings, "model", "noise_variance", 0.1);
  const std::string mech_file = cfg_detail::optional_value(
      settings, "model", "mechanism_file", std::string("data/methane_air_2step.json"));
  const double rel_tol = cfg_detail::optional_value(settings, "model", "rel_tol", 1e-8);
  if (temps.empty()) throw config_error("methane_2step: need at least one temperature");

  std::string path = mech_file;
  if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
  Mechanism mech = Mechanism::load(path);

  std::vector<KineticsInput> inputs;
  for (double t0 : temps) {
    KineticsInput in;
    in.initial_temperature = t0;
    in.equivalence_ratio = phi;
    in.initial_pressure = p0;
    in.validate();
    inputs.push_back(in);
  }
  IntegratorOptions options;
  options.rel_tol = rel_tol;

  BuiltModel built;
  built.forward = std::make_shared<CombustionForwardModel>(std::move(mech), inputs, options);
  Eigen::VectorXd design(temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i) design[i] = temps[i];
  built.model = std::make_unique<StatisticalModel>(
      built.forward, design,
      diagonal_noise(static_cast<int>(temps.size()), noise_var));
  return built;
}

}  // namespace registry_detail

using ModelBuilder =
    std::function<BuiltModel(const nlohmann::json& settings, const std::string& base_dir)>;

inline const std::map<std::string, ModelBuilder>& model_registry() {
  static const std::map<std::string, ModelBuilder> registry = {
      {"linear_gaussian", registry_detail::build_linear_gaussian},
      {"methane_2step", registry_detail::build_methane_2step},
  };
  return registry;
}

inline BuiltModel build_model(const std::string& name, const nlohmann::json& settings,
                              const std::string& base_dir) {
  const auto& reg = model_registry();
  const auto it = reg.find(name);
  if (it == reg.end()) {
    std::string known;
    for (const auto& [k, _] : reg) known += (known.empty() ? "" : ", ") + k;
    throw config_error("unknown model '" + name + "' (available: " + known + ")");
  }
  return it->second(settings, base_dir);
}

// The linear-Gaussian oracle spec carries the priors of the run.
inline void attach_oracle_priors(BuiltModel& built, const PriorSpec& prior) {
  if (!built.oracle) return;
  built.oracle->prior_mean = prior.mean();
  built.oracle->prior_cov = prior.variance().asDiagonal();
}

}  // namespace paramid
