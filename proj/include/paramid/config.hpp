#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "paramid/errors.hpp"
#include "paramid/estimators.hpp"

namespace paramid {

namespace cfg_detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::string& path,
                                const std::set<std::string>& allowed) {
  if (!j.is_object()) throw config_error(path + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw config_error(path + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T require(const nlohmann::json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw config_error(path + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(path + "." + key + ": " + e.what());
  }
}

template <typename T>
T optional_value(const nlohmann::json& j, const std::string& path,
                 const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(path + "." + key + ": " + e.what());
  }
}

}  // namespace cfg_detail

struct PriorEntry {
  std::string name;
  double mean = 0.0;
  double variance = 1.0;
};

struct SobolSettings {
  int n_samples = 16384;
};

struct ConvergenceSettings {
  int replicates = 20;
  std::vector<int> n_outer_grid{100, 1000, 10000};
  std::vector<int> n_inner_grid{2, 5, 10, 50};
  int fixed_n_inner = 50;
  int fixed_n_outer = 10000;
};

struct PosteriorSettings {
  int n_steps = 100000;
  double burn_in_fraction = 0.2;
  int adaptation_start = 1000;
  double epsilon = 1e-10;
  double initial_proposal_scale = 0.1;  // in prior sigmas
  int prediction_samples = 2000;
  std::vector<double> reference_theta;  // synthetic-data generator
  std::uint64_t data_seed = 1234;
};

struct RunConfig {
  std::string model_name;
  nlohmann::json model_settings;
  std::vector<PriorEntry> priors;
  EstimatorConfig estimator;
  SobolSettings sobol;
  ConvergenceSettings convergence;
  PosteriorSettings posterior;
  std::string output_dir = "out";
  std::string base_dir = ".";  // directory of the config file, for relative paths
};

// Strict parse: unknown keys anywhere are rejected with the offending path.
inline RunConfig parse_run_config(const nlohmann::json& j, const std::string& base_dir) {
  using cfg_detail::optional_value;
  using cfg_detail::reject_unknown_keys;
  using cfg_detail::require;

  RunConfig cfg;
  cfg.base_dir = base_dir;
  reject_unknown_keys(j, "config",
                      {"model", "priors", "estimator", "sobol", "convergence",
                       "posterior", "output_dir"});

  const auto& jm = j.contains("model") ? j.at("model") : nlohmann::json();
  if (!j.contains("model")) throw config_error("config: missing key 'model'");
  reject_unknown_keys(jm, "config.model", {"name", "settings"});
  cfg.model_name = require<std::string>(jm, "config.model", "name");
  cfg.model_settings = jm.contains("settings") ? jm.at("settings")
                                               : nlohmann::json::object();

  if (!j.contains("priors")) throw config_error("config: missing key 'priors'");
  const auto& jp = j.at("priors");
  if (!jp.is_array() || jp.empty()) {
    throw config_error("config.priors: expected a non-empty array");
  }
  for (std::size_t i = 0; i < jp.size(); ++i) {
    const std::string path = "config.priors[" + std::to_string(i) + "]";
    reject_unknown_keys(jp[i], path, {"name", "mean", "variance"});
    PriorEntry e;
    e.name = require<std::string>(jp[i], path, "name");
    e.mean = require<double>(jp[i], path, "mean");
    e.variance = require<double>(jp[i], path, "variance");
    if (!(e.variance > 0.0)) {
      throw config_error(path + ": variance must be positive");
    }
    cfg.priors.push_back(e);
  }

  if (j.contains("estimator")) {
    const auto& je = j.at("estimator");
    reject_unknown_keys(je, "config.estimator",
                        {"n_outer", "n_inner", "n_inner_pair", "proposal_scale",
                         "seed", "use_importance_sampling", "workers"});
    cfg.estimator.n_outer = optional_value(je, "config.estimator", "n_outer",
                                           cfg.estimator.n_outer);
    cfg.estimator.n_inner = optional_value(je, "config.estimator", "n_inner",
                                           cfg.estimator.n_inner);
    cfg.estimator.n_inner_pair = optional_value(je, "config.estimator", "n_inner_pair",
                                                cfg.estimator.n_inner_pair);
    cfg.estimator.proposal_scale = optional_value(je, "config.estimator", "proposal_scale",
                                                  cfg.estimator.proposal_scale);
    cfg.estimator.seed = optional_value(je, "config.estimator", "seed",
                                        cfg.estimator.seed);
    cfg.estimator.use_importance_sampling =
        optional_value(je, "config.estimator", "use_importance_sampling",
                       cfg.estimator.use_importance_sampling);
    cfg.estimator.workers = optional_value(je, "config.estimator", "workers",
                                           cfg.estimator.workers);
    try {
      cfg.estimator.validate();
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("config.estimator: ") + e.what());
    }
  }

  if (j.contains("sobol")) {
    const auto& js = j.at("sobol");
    reject_unknown_keys(js, "config.sobol", {"n_samples"});
    cfg.sobol.n_samples = optional_value(js, "config.sobol", "n_samples",
                                         cfg.sobol.n_samples);
    if (cfg.sobol.n_samples < 8) {
      throw config_error("config.sobol: n_samples must be >= 8");
    }
  }

  if (j.contains("convergence")) {
    const auto& jc = j.at("convergence");
    reject_unknown_keys(jc, "config.convergence",
                        {"replicates", "n_outer_grid", "n_inner_grid",
                         "fixed_n_inner", "fixed_n_outer"});
    cfg.convergence.replicates = optional_value(jc, "config.convergence", "replicates",
                                                cfg.convergence.replicates);
    cfg.convergence.n_outer_grid = optional_value(jc, "config.convergence", "n_outer_grid",
                                                  cfg.convergence.n_outer_grid);
    cfg.convergence.n_inner_grid = optional_value(jc, "config.convergence", "n_inner_grid",
                                                  cfg.convergence.n_inner_grid);
    cfg.convergence.fixed_n_inner = optional_value(jc, "config.convergence", "fixed_n_inner",
                                                   cfg.convergence.fixed_n_inner);
    cfg.convergence.fixed_n_outer = optional_value(jc, "config.convergence", "fixed_n_outer",
                                                   cfg.convergence.fixed_n_outer);
    if (cfg.convergence.replicates < 1) {
      throw config_error("config.convergence: replicates must be >= 1");
    }
    if (cfg.convergence.n_outer_grid.empty() || cfg.convergence.n_inner_grid.empty()) {
      throw config_error("config.convergence: sweep grids must be non-empty");
    }
  }

  if (j.contains("posterior")) {
    const auto& jq = j.at("posterior");
    reject_unknown_keys(jq, "config.posterior",
                        {"n_steps", "burn_in_fraction", "adaptation_start", "epsilon",
                         "initial_proposal_scale", "prediction_samples",
                         "reference_theta", "data_seed"});
    cfg.posterior.n_steps = optional_value(jq, "config.posterior", "n_steps",
                                           cfg.posterior.n_steps);
    cfg.posterior.burn_in_fraction = optional_value(jq, "config.posterior", "burn_in_fraction",
                                                    cfg.posterior.burn_in_fraction);
    cfg.posterior.adaptation_start = optional_value(jq, "config.posterior", "adaptation_start",
                                                    cfg.posterior.adaptation_start);
    cfg.posterior.epsilon = optional_value(jq, "config.posterior", "epsilon",
                                           cfg.posterior.epsilon);
    cfg.posterior.initial_proposal_scale =
        optional_value(jq, "config.posterior", "initial_proposal_scale",
                       cfg.posterior.initial_proposal_scale);
    cfg.posterior.prediction_samples = optional_value(jq, "config.posterior", "prediction_samples",
                                                      cfg.posterior.prediction_samples);
    cfg.posterior.reference_theta =
        optional_value(jq, "config.posterior", "reference_theta",
                       cfg.posterior.reference_theta);
    cfg.posterior.data_seed = optional_value(jq, "config.posterior", "data_seed",
                                             cfg.posterior.data_seed);
    if (cfg.posterior.burn_in_fraction < 0.0 || cfg.posterior.burn_in_fraction >= 1.0) {
      throw config_error("config.posterior: burn_in_fraction must be in [0, 1)");
    }
  }

  cfg.output_dir = optional_value(j, "config", "output_dir", cfg.output_dir);
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config parse failure: ") + e.what());
  }
  std::string base = ".";
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos) base = path.substr(0, slash);
  return parse_run_config(j, base);
}

// Priors reordered to the model's declared parameter order; names must match
// the model's exactly (as a set).
inline PriorSpec resolve_priors(const RunConfig& cfg,
                                const std::vector<std::string>& parameter_names) {
  if (cfg.priors.size() != parameter_names.size()) {
    throw config_error("config.priors: expected " +
                       std::to_string(parameter_names.size()) + " entries, got " +
                       std::to_string(cfg.priors.size()));
  }
  Eigen::VectorXd mean(parameter_names.size());
  Eigen::VectorXd var(parameter_names.size());
  std::vector<bool> seen(parameter_names.size(), false);
  for (const auto& entry : cfg.priors) {
    const auto it =
        std::find(parameter_names.begin(), parameter_names.end(), entry.name);
    if (it == parameter_names.end()) {
      throw config_error("config.priors: '" + entry.name +
                         "' is not a parameter of model " + cfg.model_name);
    }
    const auto idx = std::distance(parameter_names.begin(), it);
    if (seen[idx]) {
      throw config_error("config.priors: duplicate entry for '" + entry.name + "'");
    }
    seen[idx] = true;
    mean[idx] = entry.mean;
    var[idx] = entry.variance;
  }
  return PriorSpec(parameter_names, mean, var);
}

}  // namespace paramid
