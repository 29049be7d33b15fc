#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "paramid/errors.hpp"
#include "paramid/kinetics.hpp"

using namespace paramid;

namespace {

const Mechanism& mech() {
  static const Mechanism m =
      Mechanism::load(std::string(PARAMID_SOURCE_DIR) + "/data/methane_air_2step.json");
  return m;
}

std::vector<KineticsInput> calibration_grid() {
  std::vector<KineticsInput> inputs;
  for (double t : {1100.0, 1400.0, 1700.0, 2000.0}) {
    KineticsInput q;
    q.initial_temperature = t;
    inputs.push_back(q);
  }
  return inputs;
}

constexpr double kBaselineA = 2.8e9;

}  // namespace

TEST_CASE("mechanism file loads with the expected structure") {
  const Mechanism& m = mech();
  CHECK(m.format_version == 1);
  REQUIRE(m.species.size() == 6);
  REQUIRE(m.reactions.size() == 3);
  CHECK(m.species_index("CH4") >= 0);
  CHECK(m.species[m.species_index("N2")].atoms_n == 2.0);
  CHECK_THAT(m.species[m.species_index("CO2")].molar_mass,
             Catch::Matchers::WithinAbs(44.009, 1e-6));
  CHECK(m.reactions[0].preexponential == kBaselineA);
  CHECK_THROWS_AS(m.species_index("AR"), std::invalid_argument);

  // thermochemistry sanity: CO2 formation enthalpy at 298 K
  const auto& co2 = m.species[m.species_index("CO2")];
  const double h298 = co2.enthalpy_over_rt(298.15) * kUniversalGasConstant * 298.15;
  CHECK_THAT(h298, Catch::Matchers::WithinAbs(-393.5e3, 1.0e3));
}

TEST_CASE("pre-exponential parameterization") {
  Eigen::VectorXd theta(3);
  theta << 18.0, 0.0, 0.0;
  CHECK(preexponential_log_a(theta, 1500.0, 1.0) == 18.0);
  theta << 7.25, 0.0, 0.0;
  CHECK(preexponential_log_a(theta, 2000.0, 0.7) == 7.25);

  // swapping the two correction parameters at phi = 1 is an exact symmetry
  Eigen::VectorXd swapped(3);
  theta << 17.5, 0.8, -0.3;
  swapped << 17.5, -0.3, 0.8;
  CHECK(preexponential_log_a(theta, 1300.0, 1.0) ==
        preexponential_log_a(swapped, 1300.0, 1.0));
  CHECK(preexponential_log_a(theta, 1300.0, 0.9) !=
        preexponential_log_a(swapped, 1300.0, 0.9));
}

TEST_CASE("reaction rates") {
  ReactorState state = initial_state(mech(), KineticsInput{});
  SECTION("no carbon dioxide, no reverse rate") {
    const auto rates = reaction_rates(mech(), state, kBaselineA);
    CHECK(rates[2] == 0.0);
  }
  SECTION("forward CO oxidation is first order in CO") {
    ReactorState s1 = state;
    const int co = mech().species_index("CO");
    const int h2o = mech().species_index("H2O");
    s1.concentration[co] = 1e-7;
    s1.concentration[h2o] = 2e-7;
    ReactorState s2 = s1;
    s2.concentration[co] = 2e-7;
    const auto r1 = reaction_rates(mech(), s1, kBaselineA);
    const auto r2 = reaction_rates(mech(), s2, kBaselineA);
    CHECK_THAT(r2[1], Catch::Matchers::WithinRel(2.0 * r1[1], 1e-12));
  }
  SECTION("fuel oxidation matches the hand-evaluated rate law") {
    const double t = state.temperature;  // 1500 K
    const double arrhenius = std::exp(-48400.0 / (1.9872 * t));
    CHECK_THAT(arrhenius, Catch::Matchers::WithinRel(8.85e-8, 1e-2));
    const double ch4 = state.concentration[mech().species_index("CH4")];
    const double o2 = state.concentration[mech().species_index("O2")];
    const double expected =
        kBaselineA * arrhenius * std::pow(ch4, -0.3) * std::pow(o2, 1.3);
    const auto rates = reaction_rates(mech(), state, kBaselineA);
    CHECK_THAT(rates[0], Catch::Matchers::WithinRel(expected, 1e-12));
  }
}

TEST_CASE("zero pre-exponential factor leaves the reactor inert") {
  const Trajectory traj = integrate_reactor(mech(), KineticsInput{}, 0.0, 1e-4);
  double dev = 0.0;
  for (double t : traj.temperature) dev = std::max(dev, std::abs(t - 1500.0));
  CHECK(dev < 1e-9);
  CHECK_THROWS_AS(ignition_delay(traj), no_ignition_error);
}

TEST_CASE("baseline ignition trajectory", "[slow]") {
  const Trajectory traj = integrate_reactor(mech(), KineticsInput{}, kBaselineA, 1.5e-3);

  SECTION("single steep rise to a plateau above 2500 K") {
    CHECK(traj.temperature.back() > 2500.0);
    // temperature is monotonically nondecreasing within integrator noise
    for (std::size_t k = 1; k < traj.temperature.size(); ++k) {
      CHECK(traj.temperature[k] >= traj.temperature[k - 1] - 1e-6);
    }
  }

  SECTION("element totals per unit mass are conserved") {
    const Eigen::Vector4d ref = element_totals_per_mass(mech(), traj.concentration.front());
    double worst = 0.0;
    for (const auto& c : traj.concentration) {
      const Eigen::Vector4d e = element_totals_per_mass(mech(), c);
      for (int q = 0; q < 4; ++q) {
        if (ref[q] > 1e-12) worst = std::max(worst, std::abs(e[q] - ref[q]) / ref[q]);
      }
    }
    CHECK(worst < 1e-3);
  }

  SECTION("ignition delay agrees with a dense fixed-step reference") {
    const double t_ign = ignition_delay(traj);
    // classical RK4 at dt = 1e-9 s over the rise
    const int ns = static_cast<int>(mech().species.size());
    const ReactorState init = initial_state(mech(), KineticsInput{});
    Eigen::VectorXd y(ns + 1), k1(ns + 1), k2(ns + 1), k3(ns + 1), k4(ns + 1),
        tmp(ns + 1);
    y.head(ns) = init.concentration;
    y[ns] = init.temperature;
    const double h = 1e-9;
    double t = 0.0, best_rate = -1.0, best_t = 0.0, prev_rate = 0.0, prev_t = 0.0;
    const long long n_steps = static_cast<long long>(1.2 * t_ign / h);
    for (long long s = 0; s < n_steps; ++s) {
      kin_detail::reactor_rhs(mech(), kBaselineA, init.pressure, y, k1);
      tmp = y + 0.5 * h * k1;
      kin_detail::reactor_rhs(mech(), kBaselineA, init.pressure, tmp, k2);
      tmp = y + 0.5 * h * k2;
      kin_detail::reactor_rhs(mech(), kBaselineA, init.pressure, tmp, k3);
      tmp = y + h * k3;
      kin_detail::reactor_rhs(mech(), kBaselineA, init.pressure, tmp, k4);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      y.head(ns) = y.head(ns).cwiseMax(0.0);
      t += h;
      if (k1[ns] > best_rate) {
        best_rate = k1[ns];
        best_t = prev_t;  // rate was evaluated at the step start
      }
      prev_rate = k1[ns];
      prev_t = t;
      (void)prev_rate;
    }
    CHECK_THAT(best_t, Catch::Matchers::WithinRel(t_ign, 0.01));
  }

  SECTION("halving the tolerances moves the delay by less than 1e-3 in log") {
    IntegratorOptions tight;
    tight.rel_tol = 0.5e-8;
    tight.abs_tol_concentration = 0.5e-14;
    const Trajectory fine =
        integrate_reactor(mech(), KineticsInput{}, kBaselineA, 1.5e-3, tight);
    CHECK(std::abs(std::log(ignition_delay(fine)) -
                   std::log(ignition_delay(traj))) < 1e-3);
  }
}

TEST_CASE("ignition delay extraction") {
  SECTION("no rise means no ignition") {
    Trajectory flat;
    for (int k = 0; k < 10; ++k) {
      flat.time.push_back(1e-6 * k);
      flat.temperature.push_back(1500.0);
      flat.temperature_rate.push_back(0.0);
      flat.concentration.push_back(Eigen::VectorXd::Zero(6));
    }
    CHECK_THROWS_AS(ignition_delay(flat), no_ignition_error);
  }
  SECTION("time shift moves the delay by exactly the shift") {
    Trajectory traj;
    for (int k = 0; k < 200; ++k) {
      const double t = 1e-6 * k;
      const double peak = 1e-4;  // synthetic smooth pulse
      const double rate = std::exp(-std::pow((t - peak) / 2e-5, 2));
      traj.time.push_back(t);
      traj.temperature.push_back(1500.0 + 1000.0 * rate * 1e-2 * k);
      traj.temperature_rate.push_back(rate);
      traj.concentration.push_back(Eigen::VectorXd::Zero(6));
    }
    const double base = ignition_delay(traj);
    Trajectory shifted = traj;
    const double c = 3.7e-3;
    for (auto& t : shifted.time) t += c;
    CHECK_THAT(ignition_delay(shifted) - base, Catch::Matchers::WithinAbs(c, 1e-15));
  }
}

TEST_CASE("combustion forward model", "[slow]") {
  CombustionForwardModel fwd(mech(), calibration_grid());
  REQUIRE(fwd.output_count() == 4);
  REQUIRE(fwd.parameter_count() == 3);

  SECTION("collapses to the unmodified mechanism at the baseline") {
    std::vector<KineticsInput> one{KineticsInput{}};
    CombustionForwardModel single(mech(), one);
    Eigen::VectorXd theta(3);
    theta << std::log10(kBaselineA), 0.0, 0.0;
    const double from_forward = std::exp(single.evaluate(theta, Eigen::VectorXd())[0]);
    const Trajectory traj = integrate_reactor(mech(), KineticsInput{}, kBaselineA, 1.5e-3);
    CHECK_THAT(from_forward, Catch::Matchers::WithinRel(ignition_delay(traj), 1e-6));
  }

  SECTION("swapping the correction parameters at phi = 1 is bit exact") {
    Eigen::VectorXd theta(3), swapped(3);
    theta << 18.0, 0.7, -0.4;
    swapped << 18.0, -0.4, 0.7;
    CHECK(fwd.evaluate(theta, Eigen::VectorXd()) ==
          fwd.evaluate(swapped, Eigen::VectorXd()));
  }

  SECTION("raising the rate factor shortens every delay") {
    Eigen::VectorXd prev;
    for (double t1 : {16.0, 17.0, 18.0, 19.0, 20.0}) {
      Eigen::VectorXd theta(3);
      theta << t1, 0.3, -0.2;
      const Eigen::VectorXd out = fwd.evaluate(theta, Eigen::VectorXd());
      if (prev.size()) CHECK((out.array() < prev.array()).all());
      prev = out;
    }
  }

  SECTION("a dead mixture propagates as a model evaluation error") {
    Eigen::VectorXd theta(3);
    theta << -40.0, 0.0, 0.0;  // A = 1e-40: no ignition on any horizon
    CHECK_THROWS_AS(fwd.evaluate(theta, Eigen::VectorXd()), model_evaluation_error);
  }
}

TEST_CASE("input validation and stiffness guard") {
  KineticsInput bad;
  bad.initial_temperature = 500.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.equivalence_ratio = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.initial_pressure = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(integrate_reactor(mech(), KineticsInput{}, kBaselineA, 0.0),
                  std::invalid_argument);

  // an absurd rate factor collapses the step size and reports the last state
  try {
    integrate_reactor(mech(), KineticsInput{}, 1e32, 1e-3);
    FAIL("expected stiffness_error");
  } catch (const stiffness_error& e) {
    CHECK(e.state().size() == 7);
    CHECK(e.time() >= 0.0);
  }
}
