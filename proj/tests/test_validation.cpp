#include <doctest.h>

#include <boost/math/distributions/negative_binomial.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "mg1/errors.hpp"
#include "mg1/pgf.hpp"
#include "mg1/validation.hpp"

using namespace mg1;

TEST_CASE("quadrature oracle matches the geometric law for exponential service") {
  const auto service = ServiceDist::exponential(2.0);
  for (std::uint64_t k = 0; k <= 20; ++k) {
    const double closed = (2.0 / 3.0) * std::pow(1.0 / 3.0, static_cast<double>(k));
    CHECK(std::abs(oracle_a_pmf(service, 1.0, k) - closed) < 1e-10);
    CHECK(a_pmf_closed_form(service, 1.0, k).value() == doctest::Approx(closed).epsilon(1e-14));
  }
}

TEST_CASE("quadrature oracle matches the negative binomial law for Erlang service") {
  // Erlang(2, 4) arrivals at rate 1: NB(r = 2, success probability 4/5).
  const boost::math::negative_binomial_distribution<double> nb(2.0, 0.8);
  const auto service = ServiceDist::erlang(2, 4.0);
  for (std::uint64_t k = 0; k <= 25; ++k) {
    CHECK(std::abs(oracle_a_pmf(service, 1.0, k) - boost::math::pdf(nb, static_cast<double>(k))) < 1e-10);
  }
  CHECK_FALSE(a_pmf_closed_form(service, 1.0, 0).has_value());
}

TEST_CASE("quadrature oracle matches the geometric mixture for hyper-exponential service") {
  const auto service = ServiceDist::hyper_exponential({0.3, 0.7}, {1.0, 5.0});
  const double lambda = 0.8;
  for (std::uint64_t k = 0; k <= 15; ++k) {
    double mix = 0.0;
    for (auto [w, mu] : {std::pair{0.3, 1.0}, std::pair{0.7, 5.0}}) {
      mix += w * mu / (mu + lambda) * std::pow(lambda / (mu + lambda), static_cast<double>(k));
    }
    CHECK(std::abs(oracle_a_pmf(service, lambda, k) - mix) < 1e-10);
  }
}

TEST_CASE("deterministic service gives a Poisson count") {
  const auto service = ServiceDist::deterministic(0.7);
  double fact = 1.0;
  for (std::uint64_t k = 0; k <= 20; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    const double poisson = std::exp(-1.4) * std::pow(1.4, static_cast<double>(k)) / fact;
    CHECK(std::abs(oracle_a_pmf(service, 2.0, k) - poisson) < 1e-10);
  }
}

TEST_CASE("oracle agreement report") {
  const auto report = oracle_agreement(ServiceDist::deterministic(1.0), 1.0, 20);
  CHECK(report.pass);
  CHECK(report.metric("max_abs_difference") < 1e-10);
  CHECK_THROWS(report.metric("missing"));
}

TEST_CASE("covariance kernels") {
  const ArrivalCountPgf a0(ServiceDist::exponential(2.0), 1.0);
  auto a = [](double z) { return 2.0 / (3.0 - z); };
  auto da = [](double z) { return 2.0 / ((3.0 - z) * (3.0 - z)); };
  for (double u : {0.2, 0.5, 0.8}) {
    for (double v : {0.2, 0.5, 0.8}) {
      CHECK(covariance_H(a0, u, v) == doctest::Approx(a(u * v) - a(u) * a(v)).epsilon(1e-12));
      CHECK(covariance_H(a0, u, v) == doctest::Approx(covariance_H(a0, v, u)));
      for (double lambda0 : {1.0, 2.0}) {
        const double su = 1.0 - u / lambda0;
        const double sv = 1.0 - v / lambda0;
        const double k = a(su * sv) - a(su) * a(sv) + u * v / std::pow(lambda0, 6) * da(su) * da(sv);
        CHECK(covariance_K(a0, lambda0, u, v) == doctest::Approx(k).epsilon(1e-12));
      }
    }
  }
  CHECK(covariance_H(a0, 1.0, 0.4) == doctest::Approx(0.0));
}

TEST_CASE("normality distance separates Gaussian and skewed samples") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal(3.0, 2.0);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> g(5000), e(5000);
  for (auto& x : g) x = normal(gen);
  for (auto& x : e) x = expo(gen);
  CHECK(normality_distance(g) < 0.03);
  CHECK(normality_distance(e) > 0.1);
}

TEST_CASE("report key=value output") {
  ExperimentReport r;
  r.name = "demo";
  r.seed = 4;
  r.add_parameter("n", "10");
  r.add_metric("err", 0.25);
  r.pass = true;
  std::ostringstream out;
  r.write_key_values(out);
  CHECK(out.str() == "name=demo\nseed=4\nparam.n=10\nmetric.err=0.25\npass=true\n");
}

TEST_CASE("rate posterior concentrates in a short consistency run") {
  ConsistencyConfig config;
  config.n_list = {200, 2000};
  config.truth.seed = 8;
  const auto report = consistency_experiment(config);
  CHECK(report.metric("rate_error.n2000") < 0.1);
  CHECK(report.metric("gamma_sup_error.n2000") < report.metric("gamma_sup_error.n0"));
}

TEST_CASE("stationary pgf check on a simulated path") {
  SimConfig sim;
  sim.n = 20000;
  sim.seed = 17;
  const auto path = simulate_path(sim);
  const auto report = pi_empirical_check(path, EstimatorContext::exact(sim.service, sim.lambda));
  CHECK(report.metric("sup_gap") < 0.02);
  CHECK(report.metric("zero_gap") < 0.02);
}
