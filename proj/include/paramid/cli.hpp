#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paramid/config.hpp"
#include "paramid/estimators.hpp"
#include "paramid/io.hpp"
#include "paramid/linear_gaussian.hpp"
#include "paramid/mcmc.hpp"
#include "paramid/registry.hpp"
#include "paramid/sobol.hpp"

namespace paramid {
namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitModel = 3;

struct Session {
  RunConfig cfg;
  BuiltModel built;
  PriorSpec prior;
  std::string out_dir;

  Session(RunConfig config, const std::string& out_override)
      : cfg(std::move(config)),
        built(build_model(cfg.model_name, cfg.model_settings, cfg.base_dir)),
        prior(resolve_priors(cfg, built.forward->parameter_names())),
        out_dir(out_override.empty() ? cfg.output_dir : out_override) {
    attach_oracle_priors(built, prior);
    std::filesystem::create_directories(out_dir);
  }

  std::string path(const std::string& file) const { return out_dir + "/" + file; }
};

inline nlohmann::json estimator_echo(const EstimatorConfig& e) {
  return {{"n_outer", e.n_outer},
          {"n_inner", e.n_inner},
          {"n_inner_pair", e.pair_order()},
          {"proposal_scale", e.proposal_scale},
          {"seed", e.seed},
          {"use_importance_sampling", e.use_importance_sampling},
          {"workers", e.workers}};
}

// identify: per-parameter expected information gain -> gains.csv, gains.json
inline int cmd_identify(Session& s) {
  const auto& names = s.prior.names();
  std::vector<ReportEntry> entries;
  bool failed = false;
  for (int i = 0; i < s.prior.dim(); ++i) {
    ReportEntry entry;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      entry.result = information_gain(*s.built.model, s.prior, i, s.cfg.estimator);
    } catch (const std::exception& e) {
      entry.error = e.what();
      failed = true;
    }
    entry.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    entries.push_back(std::move(entry));
  }

  CsvWriter csv(s.path("gains.csv"));
  csv.row({"name", "gain", "std_error", "n_outer", "n_inner"});
  nlohmann::json results = nlohmann::json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const double value = e.ok() ? e.result.value : std::nan("");
    const double se = e.ok() ? e.result.std_error : std::nan("");
    csv.row({names[i], fmt17(value), fmt17(se),
             fmt_int(s.cfg.estimator.n_outer), fmt_int(s.cfg.estimator.n_inner)});
    nlohmann::json r = {{"name", names[i]},
                        {"gain", value},
                        {"std_error", se},
                        {"n_outer", s.cfg.estimator.n_outer},
                        {"n_inner", s.cfg.estimator.n_inner},
                        {"degenerate_inner_count", e.result.degenerate_inner_count},
                        {"wall_seconds", e.wall_seconds}};
    if (!e.ok()) r["error"] = e.error;
    results.push_back(r);
  }
  nlohmann::json out = {{"command", "identify"},
                        {"model", s.cfg.model_name},
                        {"estimator", estimator_echo(s.cfg.estimator)},
                        {"results", results}};
  std::ofstream(s.path("gains.json"), std::ios::binary) << out.dump(2) << "\n";
  return failed ? kExitModel : kExitOk;
}

// depend: pairwise posterior dependence -> dependence.csv, dependence.json
inline int cmd_depend(Session& s) {
  const auto& names = s.prior.names();
  const int m = static_cast<int>(s.prior.dim());
  CsvWriter csv(s.path("dependence.csv"));
  csv.row({"i", "j", "value", "std_error"});
  nlohmann::json results = nlohmann::json::array();
  bool failed = false;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      ReportEntry entry;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        entry.result = pairwise_dependence(*s.built.model, s.prior, i, j, s.cfg.estimator);
      } catch (const std::exception& e) {
        entry.error = e.what();
        failed = true;
      }
      entry.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const double value = entry.ok() ? entry.result.value : std::nan("");
      const double se = entry.ok() ? entry.result.std_error : std::nan("");
      csv.row({fmt_int(i), fmt_int(j), fmt17(value), fmt17(se)});
      nlohmann::json r = {{"i", i},
                          {"j", j},
                          {"name_i", names[i]},
                          {"name_j", names[j]},
                          {"value", value},
                          {"std_error", se},
                          {"degenerate_inner_count", entry.result.degenerate_inner_count},
                          {"wall_seconds", entry.wall_seconds}};
      if (!entry.ok()) r["error"] = entry.error;
      results.push_back(r);
    }
  }
  nlohmann::json out = {{"command", "depend"},
                        {"model", s.cfg.model_name},
                        {"estimator", estimator_echo(s.cfg.estimator)},
                        {"results", results}};
  std::ofstream(s.path("dependence.json"), std::ios::binary) << out.dump(2) << "\n";
  return failed ? kExitModel : kExitOk;
}

// sobol: first-order indices of the noise-free forward model -> sobol.csv
inline int cmd_sobol(Session& s) {
  const SobolResult result = first_order_indices(
      *s.built.forward, s.built.model->design(), s.prior, s.cfg.sobol.n_samples,
      s.cfg.estimator.seed, s.cfg.estimator.workers);
  CsvWriter csv(s.path("sobol.csv"));
  csv.row({"name", "first_order", "std_error", "n_samples"});
  for (int i = 0; i < result.first_order.size(); ++i) {
    csv.row({result.parameter_names[i], fmt17(result.first_order[i]),
             fmt17(result.std_error[i]), fmt_int(result.n_samples)});
  }
  return kExitOk;
}

// convergence: estimator error sweeps against the closed-form reference ->
// variance_sweep.csv, bias_sweep.csv. Only models with an oracle qualify.
inline int cmd_convergence(Session& s) {
  if (!s.built.oracle) {
    throw model_evaluation_error(
        "convergence: model '" + s.cfg.model_name +
            "' has no closed-form reference; only linear_gaussian is supported",
        Eigen::VectorXd());
  }
  const int m = static_cast<int>(s.prior.dim());
  Eigen::VectorXd exact(m);
  for (int i = 0; i < m; ++i) exact[i] = lg_information_gain_exact(*s.built.oracle, i);

  const auto& cv = s.cfg.convergence;
  const int R = cv.replicates;

  auto replicate_seed = [&](int r) {
    return stream_id(0x636f6e76ULL, 0, 0, static_cast<std::uint64_t>(r));
  };

  auto sweep = [&](const std::vector<int>& grid, bool vary_outer, CsvWriter& csv) {
    csv.row({vary_outer ? "n_outer" : "n_inner", "parameter", "mean_abs_error",
             "std_dev", "replicates", "degenerate"});
    for (int g : grid) {
      EstimatorConfig ec = s.cfg.estimator;
      if (vary_outer) {
        ec.n_outer = g;
        ec.n_inner = cv.fixed_n_inner;
      } else {
        ec.n_outer = cv.fixed_n_outer;
        ec.n_inner = g;
      }
      // Common random numbers across grid points: the replicate seed does
      // not depend on g, so bias differences are not masked by outer noise.
      Eigen::MatrixXd estimates(R, m);
      for (int r = 0; r < R; ++r) {
        ec.seed = s.cfg.estimator.seed ^ replicate_seed(r);
        for (int i = 0; i < m; ++i) {
          estimates(r, i) = information_gain(*s.built.model, s.prior, i, ec).value;
        }
      }
      for (int i = 0; i < m; ++i) {
        const double mae = (estimates.col(i).array() - exact[i]).abs().mean();
        double sd = 0.0;
        if (R > 1) {
          const double mean = estimates.col(i).mean();
          sd = std::sqrt((estimates.col(i).array() - mean).square().sum() / (R - 1));
        }
        csv.row({fmt_int(g), s.prior.names()[i], fmt17(mae), fmt17(sd), fmt_int(R),
                 R > 1 ? "0" : "1"});
      }
    }
  };

  CsvWriter variance_csv(s.path("variance_sweep.csv"));
  sweep(cv.n_outer_grid, true, variance_csv);
  CsvWriter bias_csv(s.path("bias_sweep.csv"));
  sweep(cv.n_inner_grid, false, bias_csv);
  return kExitOk;
}

inline double empirical_quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * v[lo] + w * v[hi];
}

// posterior: synthetic-data calibration with adaptive Metropolis ->
// chain.csv (retained samples), prediction.csv (per-output mean + 95% band).
inline int cmd_posterior(Session& s) {
  if (s.cfg.posterior.reference_theta.size() != static_cast<std::size_t>(s.prior.dim())) {
    throw config_error("config.posterior.reference_theta must hold one value per parameter");
  }
  Eigen::VectorXd theta_ref(s.prior.dim());
  for (Eigen::Index i = 0; i < s.prior.dim(); ++i) {
    theta_ref[i] = s.cfg.posterior.reference_theta[i];
  }

  RandomStream data_stream(s.cfg.posterior.data_seed,
                           stream_id(detail::kDataTag, 0, 0, 0));
  const Eigen::VectorXd y = s.built.model->sample_observation(theta_ref, data_stream);

  const StatisticalModel& model = *s.built.model;
  const PriorSpec& prior = s.prior;
  auto log_target = [&](const Eigen::VectorXd& theta) {
    double lp = 0.0;
    for (Eigen::Index i = 0; i < prior.dim(); ++i) {
      lp += prior.logpdf_component(i, theta[i]);
    }
    try {
      return lp + model.likelihood_logpdf(theta, y);
    } catch (const model_evaluation_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  ChainConfig cc;
  cc.n_steps = s.cfg.posterior.n_steps;
  cc.burn_in = static_cast<int>(s.cfg.posterior.burn_in_fraction * cc.n_steps);
  cc.adaptation_start = s.cfg.posterior.adaptation_start;
  cc.epsilon = s.cfg.posterior.epsilon;
  cc.seed = s.cfg.estimator.seed;
  const double ps = s.cfg.posterior.initial_proposal_scale;
  cc.initial_proposal_cov =
      (ps * ps * s.prior.variance().array()).matrix().asDiagonal();

  const Chain chain = adaptive_metropolis(log_target, prior.mean(), cc);

  {
    CsvWriter csv(s.path("chain.csv"));
    csv.row(prior.names());
    const auto retained = chain.retained();
    std::vector<std::string> cells(prior.dim());
    for (Eigen::Index r = 0; r < retained.rows(); ++r) {
      for (Eigen::Index c = 0; c < retained.cols(); ++c) cells[c] = fmt17(retained(r, c));
      csv.row(cells);
    }
  }

  // Aggregate posterior prediction from a thinned subset of the chain.
  const auto retained = chain.retained();
  const int keep = std::min<int>(s.cfg.posterior.prediction_samples,
                                 static_cast<int>(retained.rows()));
  const int n_out = model.output_count();
  std::vector<std::vector<double>> outputs(n_out);
  Eigen::VectorXd mean_out = Eigen::VectorXd::Zero(n_out);
  for (int q = 0; q < keep; ++q) {
    const Eigen::Index row =
        retained.rows() <= keep ? q : q * retained.rows() / keep;
    const Eigen::VectorXd pred = model.predict(retained.row(row).transpose());
    mean_out += pred;
    for (int o = 0; o < n_out; ++o) outputs[o].push_back(pred[o]);
  }
  mean_out /= static_cast<double>(keep);

  CsvWriter csv(s.path("prediction.csv"));
  csv.row({"output", "observed", "mean", "lower95", "upper95"});
  for (int o = 0; o < n_out; ++o) {
    csv.row({fmt_int(o), fmt17(y[o]), fmt17(mean_out[o]),
             fmt17(empirical_quantile(outputs[o], 0.025)),
             fmt17(empirical_quantile(outputs[o], 0.975))});
  }
  return kExitOk;
}

// oracle-check: closed-form gains and dependencies -> oracle_gains.csv,
// oracle_dependence.csv. Only models with an oracle qualify.
inline int cmd_oracle_check(Session& s) {
  if (!s.built.oracle) {
    throw model_evaluation_error(
        "oracle-check: model '" + s.cfg.model_name + "' has no closed-form reference",
        Eigen::VectorXd());
  }
  const int m = static_cast<int>(s.prior.dim());
  {
    CsvWriter csv(s.path("oracle_gains.csv"));
    csv.row({"name", "exact_gain"});
    for (int i = 0; i < m; ++i) {
      csv.row({s.prior.names()[i], fmt17(lg_information_gain_exact(*s.built.oracle, i))});
    }
  }
  {
    CsvWriter csv(s.path("oracle_dependence.csv"));
    csv.row({"i", "j", "exact_value"});
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        csv.row({fmt_int(i), fmt_int(j), fmt17(lg_pairwise_exact(*s.built.oracle, i, j))});
      }
    }
  }
  return kExitOk;
}

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  int workers = 0;
};

inline int dispatch(const std::string& command, const CommonFlags& flags) {
  try {
    RunConfig cfg = load_run_config(flags.config_path);
    if (flags.seed >= 0) cfg.estimator.seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.workers > 0) cfg.estimator.workers = flags.workers;
    Session session(cfg, flags.out_dir);
    if (command == "identify") return cmd_identify(session);
    if (command == "depend") return cmd_depend(session);
    if (command == "sobol") return cmd_sobol(session);
    if (command == "convergence") return cmd_convergence(session);
    if (command == "posterior") return cmd_posterior(session);
    if (command == "oracle-check") return cmd_oracle_check(session);
    std::cerr << "unknown command: " << command << "\n";
    return kExitConfig;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitModel;
  }
}

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Global practical identifiability of statistical-model parameters"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<CLI::App*> subs;
  for (const std::string name :
       {"identify", "depend", "sobol", "convergence", "posterior", "oracle-check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config_path, "JSON run configuration")
        ->required();
    sub->add_option("--seed", flags.seed, "override the config seed");
    sub->add_option("--workers", flags.workers, "parallel workers for the estimators");
    sub->add_option("--out", flags.out_dir, "output directory (overrides config)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  for (CLI::App* sub : subs) {
    if (sub->parsed()) return dispatch(sub->get_name(), flags);
  }
  return kExitConfig;
}

}  // namespace cli
}  // namespace paramid
