#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "paramid/errors.hpp"
#include "paramid/model.hpp"

namespace paramid {

inline constexpr double kUniversalGasConstant = 8.31446261815324;  // J/(mol K)

// NASA-7 polynomial thermochemistry for one species. Coefficients come from
// the mechanism data file; `low` covers T <= t_mid, `high` above.
struct SpeciesThermo {
  std::string name;
  double molar_mass = 0.0;  // g/mol
  double atoms_c = 0.0, atoms_h = 0.0, atoms_o = 0.0, atoms_n = 0.0;
  double t_mid = 1000.0;
  std::array<double, 7> low{};
  std::array<double, 7> high{};

  const std::array<double, 7>& coefficients(double temperature) const {
    return temperature <= t_mid ? low : high;
  }

  // cp / Ru, dimensionless.
  double cp_over_r(double temperature) const {
    const double t = clamp_t(temperature);
    const auto& a = coefficients(t);
    return a[0] + t * (a[1] + t * (a[2] + t * (a[3] + t * a[4])));
  }

  // h / (Ru T), dimensionless; includes the enthalpy of formation.
  double enthalpy_over_rt(double temperature) const {
    const double t = clamp_t(temperature);
    const auto& a = coefficients(t);
    return a[0] + t * (a[1] / 2 + t * (a[2] / 3 + t * (a[3] / 4 + t * a[4] / 5))) +
           a[5] / t;
  }

 private:
  static double clamp_t(double t) { return std::min(std::max(t, 200.0), 5000.0); }
};

// One irreversible reaction channel with concentration-power rate law
// r = A exp(-Ea / (R T)) prod_i [c_i]^order_i, in mol/(cm^3 s).
struct Reaction {
  std::string name;
  double preexponential = 0.0;            // units absorb the concentration orders
  double activation_energy_cal = 0.0;     // cal/mol
  std::vector<std::pair<int, double>> orders;          // (species, exponent)
  std::vector<std::pair<int, double>> stoichiometry;   // (species, net coefficient)
};

struct Mechanism {
  std::vector<SpeciesThermo> species;
  std::vector<Reaction> reactions;
  double gas_constant_cal = 1.9872;       // cal/(mol K), for activation energies
  double concentration_floor = 1e-20;     // mol/cm^3, hard floor
  double mole_fraction_floor = 1e-4;      // scales the floor with the mixture
  std::string description;
  int format_version = 0;

  int species_index(const std::string& name) const {
    for (std::size_t i = 0; i < species.size(); ++i) {
      if (species[i].name == name) return static_cast<int>(i);
    }
    throw std::invalid_argument("Mechanism: unknown species " + name);
  }

  static Mechanism from_json(const nlohmann::json& j);
  static Mechanism load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Mechanism::load: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }
};

inline Mechanism Mechanism::from_json(const nlohmann::json& j) {
  Mechanism mech;
  mech.format_version = j.at("format_version").get<int>();
  mech.description = j.value("description", "");
  mech.gas_constant_cal = j.at("gas_constant_cal_mol_K").get<double>();
  mech.concentration_floor = j.at("concentration_floor_mol_cm3").get<double>();
  mech.mole_fraction_floor = j.at("rate_law_mole_fraction_floor").get<double>();
  for (const auto& js : j.at("species")) {
    SpeciesThermo s;
    s.name = js.at("name").get<std::string>();
    s.molar_mass = js.at("molar_mass_g_mol").get<double>();
    const auto& el = js.at("elements");
    s.atoms_c = el.value("C", 0.0);
    s.atoms_h = el.value("H", 0.0);
    s.atoms_o = el.value("O", 0.0);
    s.atoms_n = el.value("N", 0.0);
    const auto& nasa = js.at("nasa7");
    s.t_mid = nasa.at("t_mid_K").get<double>();
    const auto low = nasa.at("low").get<std::vector<double>>();
    const auto high = nasa.at("high").get<std::vector<double>>();
    if (low.size() != 7 || high.size() != 7) {
      throw std::runtime_error("Mechanism: NASA-7 blocks must hold 7 coefficients");
    }
    std::copy(low.begin(), low.end(), s.low.begin());
    std::copy(high.begin(), high.end(), s.high.begin());
    mech.species.push_back(std::move(s));
  }
  for (const auto& jr : j.at("reactions")) {
    Reaction r;
    r.name = jr.at("name").get<std::string>();
    r.preexponential = jr.at("arrhenius").at("preexponential").get<double>();
    r.activation_energy_cal =
        jr.at("arrhenius").at("activation_energy_cal_mol").get<double>();
    for (const auto& [sp, ord] : jr.at("orders").items()) {
      r.orders.emplace_back(mech.species_index(sp), ord.get<double>());
    }
    for (const auto& [sp, nu] : jr.at("stoichiometry").items()) {
      r.stoichiometry.emplace_back(mech.species_index(sp), nu.get<double>());
    }
    mech.reactions.push_back(std::move(r));
  }
  return mech;
}

// Instantaneous thermochemical state of the constant-pressure reactor.
struct ReactorState {
  Eigen::VectorXd concentration;  // mol/cm^3, one entry per mechanism species
  double temperature = 0.0;       // K
  double pressure = 0.0;          // Pa, held constant
};

struct KineticsInput {
  double initial_temperature = 1500.0;  // K
  double equivalence_ratio = 1.0;
  double initial_pressure = 1e5;        // Pa

  void validate() const {
    if (initial_temperature < 900.0 || initial_temperature > 2500.0) {
      throw std::invalid_argument("KineticsInput: initial temperature outside [900, 2500] K");
    }
    if (!(equivalence_ratio > 0.0)) {
      throw std::invalid_argument("KineticsInput: equivalence ratio must be positive");
    }
    if (!(initial_pressure > 0.0)) {
      throw std::invalid_argument("KineticsInput: initial pressure must be positive");
    }
  }
};

struct Trajectory {
  std::vector<double> time;                      // s, strictly increasing
  std::vector<double> temperature;               // K
  std::vector<double> temperature_rate;          // K/s
  std::vector<Eigen::VectorXd> concentration;    // mol/cm^3 per species
};

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol_concentration = 1e-14;  // mol/cm^3
  double abs_tol_temperature = 1e-8;     // K
  double min_step = 1e-26;               // s
  long long max_steps = 50000000;
  bool stop_after_ignition = false;      // stop once the heat-release spike has passed
  double ignition_rise = 50.0;           // K, minimum rise that counts as ignition
  double plateau_fraction = 1e-3;        // dT/dt threshold relative to the peak
};

// log A = theta1 + tanh(theta2 + theta3 * phi) * T0 / 1000 (base-10 log).
inline double preexponential_log_a(const Eigen::Ref<const Eigen::VectorXd>& theta,
                                   double initial_temperature, double phi) {
  if (theta.size() != 3) {
    throw std::invalid_argument("preexponential_log_a: theta must have 3 entries");
  }
  return theta[0] + std::tanh(theta[1] + theta[2] * phi) * initial_temperature / 1000.0;
}

namespace kin_detail {

// Concentration power with a floor applied inside fractional and negative
// exponents. Above the floor the exact power law holds; below, the factor
// ramps linearly to zero so that rates stay bounded, vanish with the
// reactant (keeping the clamp at zero inert and elements conserved), and
// never open a boundary layer faster than the physical burn.
inline double rate_factor(double c, double order, double floor_c) {
  c = std::max(c, 0.0);
  if (order == 1.0) return c;
  if (c >= floor_c) return std::pow(c, order);
  return (c / floor_c) * std::pow(floor_c, order);
}

}  // namespace kin_detail

// Volumetric rates of the mechanism's reaction channels, mol/(cm^3 s).
// `preexponential` overrides the first reaction's A factor (the calibrated
// channel); the remaining channels use the data-file constants. The rate-law
// floor scales with the mixture: max(concentration_floor,
// mole_fraction_floor * c_tot).
inline Eigen::VectorXd reaction_rates(const Mechanism& mech, const ReactorState& state,
                                      double preexponential) {
  Eigen::VectorXd rates(mech.reactions.size());
  const double rt = mech.gas_constant_cal * state.temperature;
  const double floor_c = std::max(mech.concentration_floor,
                                  mech.mole_fraction_floor *
                                      std::max(state.concentration.sum(), 0.0));
  for (std::size_t r = 0; r < mech.reactions.size(); ++r) {
    const Reaction& rx = mech.reactions[r];
    const double a = r == 0 ? preexponential : rx.preexponential;
    double rate = a * std::exp(-rx.activation_energy_cal / rt);
    for (const auto& [sp, order] : rx.orders) {
      rate *= kin_detail::rate_factor(state.concentration[sp], order, floor_c);
    }
    rates[r] = rate;
  }
  return rates;
}

// Net molar production rates, mol/(cm^3 s).
inline Eigen::VectorXd production_rates(const Mechanism& mech,
                                        const Eigen::Ref<const Eigen::VectorXd>& rates) {
  Eigen::VectorXd wdot = Eigen::VectorXd::Zero(mech.species.size());
  for (std::size_t r = 0; r < mech.reactions.size(); ++r) {
    for (const auto& [sp, nu] : mech.reactions[r].stoichiometry) {
      wdot[sp] += nu * rates[r];
    }
  }
  return wdot;
}

// Stoichiometric methane-air composition: CH4 : O2 : N2 = phi : 2 : 7.52,
// ideal gas at (T0, P0).
inline ReactorState initial_state(const Mechanism& mech, const KineticsInput& input) {
  input.validate();
  ReactorState state;
  state.temperature = input.initial_temperature;
  state.pressure = input.initial_pressure;
  state.concentration = Eigen::VectorXd::Zero(mech.species.size());
  const double phi = input.equivalence_ratio;
  const double total_moles = phi + 2.0 + 2.0 * 3.76;
  // mol/m^3 -> mol/cm^3
  const double c_tot = input.initial_pressure /
                       (kUniversalGasConstant * input.initial_temperature) * 1e-6;
  state.concentration[mech.species_index("CH4")] = c_tot * phi / total_moles;
  state.concentration[mech.species_index("O2")] = c_tot * 2.0 / total_moles;
  state.concentration[mech.species_index("N2")] = c_tot * 2.0 * 3.76 / total_moles;
  return state;
}

namespace kin_detail {

// Right-hand side of the constant-pressure adiabatic reactor in
// concentration-temperature form. The dilution term keeps sum_i c_i equal
// to P / (Ru T) as the mixture expands:
//   dT/dt  = -sum_i h_i wdot_i / sum_i c_i cp_i
//   dc_i/dt = wdot_i - c_i (Tdot / T + sum_j wdot_j / c_tot)
inline void reactor_rhs(const Mechanism& mech, double preexponential,
                        double pressure, const Eigen::VectorXd& z,
                        Eigen::VectorXd& dz) {
  const int ns = static_cast<int>(mech.species.size());
  ReactorState state;
  state.concentration = z.head(ns).cwiseMax(0.0);
  state.temperature = z[ns];
  state.pressure = pressure;

  const Eigen::VectorXd rates = reaction_rates(mech, state, preexponential);
  const Eigen::VectorXd wdot = production_rates(mech, rates);

  const double t = state.temperature;
  double heat = 0.0;      // J/(cm^3 s)
  double cp_vol = 0.0;    // J/(cm^3 K)
  double c_tot = 0.0;
  for (int i = 0; i < ns; ++i) {
    const SpeciesThermo& sp = mech.species[i];
    heat += sp.enthalpy_over_rt(t) * kUniversalGasConstant * t * wdot[i];
    cp_vol += state.concentration[i] * sp.cp_over_r(t) * kUniversalGasConstant;
    c_tot += state.concentration[i];
  }
  const double t_dot = -heat / cp_vol;
  const double dilution = t_dot / t + wdot.sum() / c_tot;

  dz.head(ns) = wdot - state.concentration * dilution;
  dz[ns] = t_dot;
}

// Dormand-Prince 5(4) coefficients.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

struct IgnitionTracker {
  double t0_temperature = 0.0;
  double peak_rate = 0.0;
  double max_temperature = 0.0;
  // Rolling window of the last three accepted samples and the best triple
  // bracketing the heat-release peak so far.
  std::array<double, 3> win_t{}, win_r{};
  int win_fill = 0;
  bool have_peak = false;
  std::array<double, 3> best_t{}, best_r{};

  void push(double time, double temperature, double rate) {
    max_temperature = std::max(max_temperature, temperature);
    peak_rate = std::max(peak_rate, rate);
    if (win_fill < 3) {
      win_t[win_fill] = time;
      win_r[win_fill] = rate;
      ++win_fill;
    } else {
      win_t = {win_t[1], win_t[2], time};
      win_r = {win_r[1], win_r[2], rate};
    }
    if (win_fill == 3 && win_r[1] >= win_r[0] && win_r[1] >= win_r[2] &&
        (!have_peak || win_r[1] >= best_r[1])) {
      best_t = win_t;
      best_r = win_r;
      have_peak = true;
    }
  }

  bool ignited(double rise) const {
    return have_peak && max_temperature - t0_temperature >= rise;
  }

  bool plateau(double rise, double fraction) const {
    return win_fill == 3 && max_temperature - t0_temperature >= rise &&
           win_r[2] < fraction * peak_rate && win_r[2] < win_r[1];
  }

  // Quadratic interpolation of the rate maximum through the best triple.
  double ignition_time() const {
    const double t1 = best_t[0], t2 = best_t[1], t3 = best_t[2];
    const double r1 = best_r[0], r2 = best_r[1], r3 = best_r[2];
    const double h1 = t2 - t1, h2 = t3 - t2;
    const double d1 = (r2 - r1) / h1, d2 = (r3 - r2) / h2;
    const double curv = (d2 - d1) / (h1 + h2);
    if (!(curv < 0.0)) return t2;
    double vertex = t2 + 0.5 * (d1 + d2) / (-2.0 * curv);
    return std::min(std::max(vertex, t1), t3);
  }
};

inline double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                         const Eigen::VectorXd& y1, const IntegratorOptions& opt) {
  const int ns = static_cast<int>(err.size()) - 1;
  double acc = 0.0;
  for (int i = 0; i <= ns; ++i) {
    const double atol = i < ns ? opt.abs_tol_concentration : opt.abs_tol_temperature;
    const double scale = atol + opt.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = err[i] / scale;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(ns + 1));
}

// Adaptive Dormand-Prince integration of the reactor. Records every
// accepted step into `record` when given; always feeds the ignition
// tracker. Throws stiffness_error when step control collapses.
inline void integrate_core(const Mechanism& mech, const KineticsInput& input,
                           double preexponential, double t_end,
                           const IntegratorOptions& opt, Trajectory* record,
                           IgnitionTracker& tracker) {
  const ReactorState init = initial_state(mech, input);
  const int ns = static_cast<int>(mech.species.size());
  const int dim = ns + 1;

  Eigen::VectorXd y(dim);
  y.head(ns) = init.concentration;
  y[ns] = init.temperature;
  tracker.t0_temperature = init.temperature;

  auto rhs = [&](const Eigen::VectorXd& z, Eigen::VectorXd& dz) {
    reactor_rhs(mech, preexponential, init.pressure, z, dz);
  };

  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  Eigen::VectorXd tmp(dim), y_new(dim), err(dim);
  double t = 0.0;
  rhs(y, k1);

  auto emit = [&](double time, const Eigen::VectorXd& state, double t_rate) {
    tracker.push(time, state[ns], t_rate);
    if (record) {
      record->time.push_back(time);
      record->temperature.push_back(state[ns]);
      record->temperature_rate.push_back(t_rate);
      record->concentration.push_back(state.head(ns).cwiseMax(0.0));
    }
  };
  emit(0.0, y, k1[ns]);

  // Initial step from the fastest component's own timescale.
  double dt = t_end;
  for (int i = 0; i < dim; ++i) {
    if (std::abs(k1[i]) > 0.0) {
      const double atol = i < ns ? opt.abs_tol_concentration : opt.abs_tol_temperature;
      const double scale = std::abs(y[i]) * opt.rel_tol + atol;
      dt = std::min(dt, 0.01 * std::max(scale, 1e-3 * std::abs(y[i])) / std::abs(k1[i]));
    }
  }
  dt = std::max(dt, opt.min_step);

  using D = Dopri5;
  long long steps = 0;
  while (t < t_end) {
    if (++steps > opt.max_steps) {
      throw stiffness_error("integrate_reactor: step budget exhausted", t, y);
    }
    dt = std::min(dt, t_end - t);

    tmp = y + dt * (D::a21 * k1);
    rhs(tmp, k2);
    tmp = y + dt * (D::a31 * k1 + D::a32 * k2);
    rhs(tmp, k3);
    tmp = y + dt * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3);
    rhs(tmp, k4);
    tmp = y + dt * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4);
    rhs(tmp, k5);
    tmp = y + dt * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 + D::a64 * k4 + D::a65 * k5);
    rhs(tmp, k6);
    y_new = y + dt * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 + D::b6 * k6);
    rhs(y_new, k7);
    err = dt * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 + D::e6 * k6 + D::e7 * k7);

    const double norm = error_norm(err, y, y_new, opt);
    if (std::isfinite(norm) && norm <= 1.0) {
      t += dt;
      y = y_new;
      y.head(ns) = y.head(ns).cwiseMax(0.0);  // clamp fp undershoot
      k1 = k7;                                // FSAL
      emit(t, y, k1[ns]);
      if (opt.stop_after_ignition &&
          tracker.plateau(opt.ignition_rise, opt.plateau_fraction)) {
        return;
      }
    }

    double factor = std::isfinite(norm)
                        ? 0.9 * std::pow(std::max(norm, 1e-10), -0.2)
                        : 0.2;
    factor = std::min(std::max(factor, 0.2), 5.0);
    dt *= factor;
    if (dt < opt.min_step) {
      throw stiffness_error("integrate_reactor: step size collapsed below minimum",
                            t, y);
    }
  }
}

}  // namespace kin_detail

// Integrates the constant-pressure adiabatic reactor to t_end and returns
// the recorded trajectory.
inline Trajectory integrate_reactor(const Mechanism& mech, const KineticsInput& input,
                                    double preexponential, double t_end,
                                    const IntegratorOptions& options = {}) {
  if (!(t_end > 0.0)) throw std::invalid_argument("integrate_reactor: t_end must be > 0");
  Trajectory traj;
  kin_detail::IgnitionTracker tracker;
  kin_detail::integrate_core(mech, input, preexponential, t_end, options, &traj, tracker);
  return traj;
}

// Time of the steepest temperature rise, located by quadratic interpolation
// around the discrete maximum of dT/dt. Requires a rise of at least
// `minimum_rise` K over the start temperature.
inline double ignition_delay(const Trajectory& trajectory, double minimum_rise = 50.0) {
  if (trajectory.time.size() < 3) {
    throw no_ignition_error("ignition_delay: trajectory too short");
  }
  const double t0 = trajectory.temperature.front();
  double t_max = t0;
  std::size_t peak = 0;
  for (std::size_t k = 0; k < trajectory.time.size(); ++k) {
    t_max = std::max(t_max, trajectory.temperature[k]);
    if (trajectory.temperature_rate[k] > trajectory.temperature_rate[peak]) peak = k;
  }
  if (t_max - t0 < minimum_rise) {
    throw no_ignition_error("ignition_delay: no temperature rise above threshold");
  }
  if (peak == 0 || peak + 1 == trajectory.time.size()) {
    return trajectory.time[peak];
  }
  kin_detail::IgnitionTracker tracker;
  tracker.best_t = {trajectory.time[peak - 1], trajectory.time[peak],
                    trajectory.time[peak + 1]};
  tracker.best_r = {trajectory.temperature_rate[peak - 1],
                    trajectory.temperature_rate[peak],
                    trajectory.temperature_rate[peak + 1]};
  return tracker.ignition_time();
}

// Forward model for the calibrated 2-step mechanism: theta parameterizes the
// first reaction's pre-exponential factor through preexponential_log_a, the
// outputs are the natural-log ignition delays at the configured operating
// points.
class CombustionForwardModel : public ForwardModel {
 public:
  CombustionForwardModel(Mechanism mechanism, std::vector<KineticsInput> inputs,
                         IntegratorOptions options = {})
      : mech_(std::move(mechanism)), inputs_(std::move(inputs)), options_(options) {
    if (inputs_.empty()) {
      throw std::invalid_argument("CombustionForwardModel: no operating points");
    }
    for (const auto& in : inputs_) in.validate();
    options_.stop_after_ignition = true;
  }

  int parameter_count() const override { return 3; }
  int output_count() const override { return static_cast<int>(inputs_.size()); }

  const Mechanism& mechanism() const { return mech_; }
  const std::vector<KineticsInput>& inputs() const { return inputs_; }

  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& theta,
                           const Eigen::Ref<const Eigen::VectorXd>&) const override {
    Eigen::VectorXd out(inputs_.size());
    for (std::size_t q = 0; q < inputs_.size(); ++q) {
      const double log_a = preexponential_log_a(theta, inputs_[q].initial_temperature,
                                                inputs_[q].equivalence_ratio);
      const double a = std::pow(10.0, log_a);
      try {
        out[q] = std::log(ignition_delay_for(inputs_[q], a));
      } catch (const std::exception& e) {
        throw model_evaluation_error(
            "combustion forward model failed at T0 = " +
                std::to_string(inputs_[q].initial_temperature) + " K: " + e.what(),
            theta);
      }
    }
    return out;
  }

 private:
  // Integration horizon from the initial fuel-depletion timescale, extended
  // geometrically until the heat-release peak is inside the window.
  double ignition_delay_for(const KineticsInput& input, double preexponential) const {
    const ReactorState init = initial_state(mech_, input);
    const Eigen::VectorXd r0 = reaction_rates(mech_, init, preexponential);
    const double fuel = init.concentration[mech_.species_index("CH4")];
    if (!(r0[0] > 0.0)) {
      throw no_ignition_error("fuel oxidation rate vanishes at the initial state");
    }
    double horizon = 50.0 * fuel / r0[0];
    for (int attempt = 0; attempt < 14; ++attempt) {
      kin_detail::IgnitionTracker tracker;
      kin_detail::integrate_core(mech_, input, preexponential, horizon, options_,
                                 nullptr, tracker);
      if (tracker.ignited(options_.ignition_rise)) return tracker.ignition_time();
      horizon *= 32.0;
    }
    throw no_ignition_error("no ignition within the maximum integration horizon");
  }

  Mechanism mech_;
  std::vector<KineticsInput> inputs_;
  IntegratorOptions options_;
};

// Convenience wrapper matching the batch signature used by the estimators.
inline Eigen::VectorXd combustion_forward(const Mechanism& mech,
                                          const Eigen::Ref<const Eigen::VectorXd>& theta,
                                          const std::vector<KineticsInput>& inputs,
                                          const IntegratorOptions& options = {}) {
  CombustionForwardModel model(mech, inputs, options);
  return model.evaluate(theta, Eigen::VectorXd());
}

// Element totals per unit mass (mol of atoms per gram of mixture); conserved
// along any trajectory of the closed reactor.
inline Eigen::Vector4d element_totals_per_mass(const Mechanism& mech,
                                               const Eigen::Ref<const Eigen::VectorXd>& concentration) {
  double mass = 0.0;  // g/cm^3
  Eigen::Vector4d atoms = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < mech.species.size(); ++i) {
    const SpeciesThermo& sp = mech.species[i];
    mass += concentration[i] * sp.molar_mass;
    atoms[0] += concentration[i] * sp.atoms_c;
    atoms[1] += concentration[i] * sp.atoms_h;
    atoms[2] += concentration[i] * sp.atoms_o;
    atoms[3] += concentration[i] * sp.atoms_n;
  }
  return atoms / mass;
}

}  // namespace paramid
