#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <memory>

#include "paramid/errors.hpp"
#include "paramid/linear_gaussian.hpp"
#include "paramid/model.hpp"

using namespace paramid;

namespace {

StatisticalModel identity_model(int n, double noise_var) {
  auto fwd = std::make_shared<LinearForwardModel>(Eigen::MatrixXd::Identity(n, n));
  return StatisticalModel(fwd, Eigen::VectorXd::Zero(n),
                          noise_var * Eigen::MatrixXd::Identity(n, n));
}

class ThrowingForward : public ForwardModel {
 public:
  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& theta,
                           const Eigen::Ref<const Eigen::VectorXd>&) const override {
    throw model_evaluation_error("integrator diverged", theta);
  }
  int parameter_count() const override { return 2; }
  int output_count() const override { return 1; }
};

}  // namespace

TEST_CASE("likelihood at the predictive mean") {
  auto model = identity_model(3, 1.0);
  Eigen::VectorXd theta(3);
  theta << 0.4, -1.0, 2.0;
  const double expected = -1.5 * std::log(2.0 * M_PI);
  CHECK_THAT(model.likelihood_logpdf(theta, model.predict(theta)),
             Catch::Matchers::WithinAbs(expected, 1e-12));
}

TEST_CASE("scalar likelihood against the closed form") {
  auto model = identity_model(1, 0.1);
  Eigen::VectorXd theta(1), y(1);
  theta << 0.0;
  y << 1.0;
  CHECK_THAT(model.likelihood_logpdf(theta, y),
             Catch::Matchers::WithinAbs(normal_logpdf(1.0, 0.0, 0.1), 1e-13));
}

TEST_CASE("likelihood peaks at the predictive mean") {
  auto model = identity_model(2, 0.5);
  RandomStream stream(17, 0);
  Eigen::VectorXd theta(2);
  theta << 1.0, -0.5;
  const double at_mean = model.likelihood_logpdf(theta, model.predict(theta));
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd y = model.predict(theta) + stream.normal(2);
    CHECK(model.likelihood_logpdf(theta, y) <= at_mean + 1e-12);
  }
}

TEST_CASE("observation sampling in the noiseless limit") {
  auto model = identity_model(2, 1e-30);
  Eigen::VectorXd theta(2);
  theta << 0.7, -0.2;
  RandomStream stream(3, 0);
  const Eigen::VectorXd y = model.sample_observation(theta, stream);
  CHECK((y - model.predict(theta)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("observation sampling is seed deterministic") {
  auto model = identity_model(4, 0.3);
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(4, 0.5);
  RandomStream s1(99, 2), s2(99, 2);
  CHECK(model.sample_observation(theta, s1) == model.sample_observation(theta, s2));
}

TEST_CASE("observation sample mean converges to the prediction") {
  auto model = identity_model(2, 0.25);
  Eigen::VectorXd theta(2);
  theta << 1.0, 2.0;
  RandomStream stream(8, 0);
  const int n = 100000;
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i) acc += model.sample_observation(theta, stream);
  acc /= n;
  const double band = 4.0 * std::sqrt(0.25 / n);
  CHECK(std::abs(acc[0] - 1.0) < band);
  CHECK(std::abs(acc[1] - 2.0) < band);
}

TEST_CASE("prior sampling: degenerate variance returns the means") {
  PriorSpec prior({"a", "b"}, (Eigen::VectorXd(2) << 3.0, -1.0).finished(),
                  Eigen::VectorXd::Constant(2, 1e-30));
  RandomStream stream(1, 1);
  const Eigen::VectorXd draw = sample_prior(prior, stream);
  CHECK_THAT(draw[0], Catch::Matchers::WithinAbs(3.0, 1e-10));
  CHECK_THAT(draw[1], Catch::Matchers::WithinAbs(-1.0, 1e-10));
}

TEST_CASE("prior sampling reproduces with the seed and decorrelates components") {
  PriorSpec prior = PriorSpec::standard_normal(3);
  RandomStream s1(6, 0), s2(6, 0);
  CHECK(sample_prior(prior, s1) == sample_prior(prior, s2));

  RandomStream stream(6, 1);
  const int n = 100000;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d x = prior.sample(stream);
    mean += x;
    acc += x * x.transpose();
  }
  mean /= n;
  const Eigen::Matrix3d cov = acc / n - mean * mean.transpose();
  const double diag_band = 4.0 * std::sqrt(2.0 / n);
  const double off_band = 4.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(cov(i, i) - 1.0) < diag_band);
    for (int j = 0; j < i; ++j) CHECK(std::abs(cov(i, j)) < off_band);
  }
}

TEST_CASE("self-generated samples average to the negative noise entropy") {
  Eigen::MatrixXd gamma(2, 2);
  gamma << 0.5, 0.1, 0.1, 0.3;
  auto fwd = std::make_shared<LinearForwardModel>(Eigen::MatrixXd::Identity(2, 2));
  StatisticalModel model(fwd, Eigen::VectorXd::Zero(2), gamma);
  Eigen::VectorXd theta(2);
  theta << 0.2, -0.4;
  RandomStream stream(13, 0);
  const int n = 50000;
  double acc = 0.0, acc2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ll =
        model.likelihood_logpdf(theta, model.sample_observation(theta, stream));
    acc += ll;
    acc2 += ll * ll;
  }
  const double mean = acc / n;
  const double se = std::sqrt((acc2 / n - mean * mean) / n);
  CHECK_THAT(mean, Catch::Matchers::WithinAbs(-gaussian_entropy(gamma), 5.0 * se));
}

TEST_CASE("forward purity: repeated evaluation is bit identical") {
  Eigen::MatrixXd a(3, 2);
  a << 1.0, 0.5, -0.25, 2.0, 0.0, 1.0 / 3.0;
  LinearForwardModel fwd(a);
  Eigen::VectorXd theta(2);
  theta << 0.123456789, -9.87654321;
  const Eigen::VectorXd first = fwd.evaluate(theta, Eigen::VectorXd());
  for (int i = 0; i < 5; ++i) {
    CHECK(fwd.evaluate(theta, Eigen::VectorXd()) == first);
  }
}

TEST_CASE("model evaluation failures carry the parameter vector") {
  auto fwd = std::make_shared<ThrowingForward>();
  StatisticalModel model(fwd, Eigen::VectorXd(), Eigen::MatrixXd::Identity(1, 1));
  Eigen::VectorXd theta(2);
  theta << 4.0, 5.0;
  try {
    model.likelihood_logpdf(theta, Eigen::VectorXd::Zero(1));
    FAIL("expected model_evaluation_error");
  } catch (const model_evaluation_error& e) {
    CHECK(e.theta() == theta);
  }
}

TEST_CASE("construction validates dimensions and prior variances") {
  auto fwd = std::make_shared<LinearForwardModel>(Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(StatisticalModel(fwd, Eigen::VectorXd::Zero(2),
                                   Eigen::MatrixXd::Identity(3, 3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(PriorSpec({"a"}, Eigen::VectorXd::Zero(1),
                            Eigen::VectorXd::Constant(1, -1.0)),
                  std::invalid_argument);
}
