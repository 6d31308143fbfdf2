#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mg1/bayes_matrix.hpp"
#include "mg1/bayes_rate.hpp"
#include "mg1/pgf.hpp"
#include "mg1/service.hpp"
#include "mg1/sim.hpp"
#include "mg1/transforms.hpp"

namespace mg1 {

struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, double>> metrics;
  bool pass = false;
  std::uint64_t seed = 0;

  void add_metric(std::string key, double value) { metrics.emplace_back(std::move(key), value); }
  void add_parameter(std::string key, std::string value) { parameters.emplace_back(std::move(key), std::move(value)); }
  /// Throws InvalidArgument if absent.
  double metric(std::string_view key) const;

  /// `key=value` lines: name, seed, param.*, metric.*, pass.
  void write_key_values(std::ostream& out) const;
  void print_table(std::ostream& out) const;
};

/// P(A_S = k) = (1/k!) int exp(-lambda t) (lambda t)^k G(dt) by adaptive
/// Gauss-Kronrod quadrature over [0, mean + 40 sd]; Poisson(lambda d) for
/// deterministic service.
double oracle_a_pmf(const ServiceDist& service, double lambda, std::uint64_t k);

/// Closed forms where they exist: geometric (exponential service) and
/// Poisson (deterministic service).
std::optional<double> a_pmf_closed_form(const ServiceDist& service, double lambda, std::uint64_t k);

/// Limit covariance of the centred, rescaled DP posterior pgf: a0(uv) - a0(u) a0(v).
double covariance_H(const Pgf& a0, double u, double v);

/// Limit covariance for the service LST estimate:
/// H(1 - u/l0, 1 - v/l0) + u v l0^-6 a0'(1 - u/l0) a0'(1 - v/l0).
double covariance_K(const Pgf& a0, double lambda0, double u, double v);

struct ConsistencyConfig {
  SimConfig truth;
  std::vector<std::uint64_t> n_list{100, 1000, 10000, 50000};
  GammaPosterior rate_prior{1.0, 1.0};
  double alpha = 1.0;
  BasePmf base = BasePmf::poisson(1.0);
  double lst_range = 5.0;  // sup over z in [0, lst_range]
  std::size_t grid_points = 101;
  std::size_t oracle_terms = 200;
  double rate_error_threshold = 0.05;
  double lst_error_threshold = 0.02;
};

/// Posterior updates along one simulated path, with sup-errors of gamma_n
/// (on [0,1], against the quadrature oracle) and of g_hat (on [0, lst_range],
/// against the true LST) at each sample size. Passes iff the final rate error
/// and final LST error are within threshold and the LST error never increases.
ExperimentReport consistency_experiment(const ConsistencyConfig& config);

struct BvmConfig {
  SimConfig truth;
  std::uint64_t n = 10000;
  std::size_t draws = 2000;
  std::vector<double> z_grid{0.2, 0.5, 0.8};
  std::size_t truncation = 200;
  GammaPosterior rate_prior{1.0, 1.0};
  double alpha = 1.0;
  BasePmf base = BasePmf::geometric(0.5);
  double covariance_tolerance = 0.15;
  double rate_tolerance = 0.15;
  /// Kolmogorov distance between standardised draws and N(0,1).
  double normality_threshold = 0.05;
  std::size_t doubling_draws = 200;
};

/// Posterior-normality check on one simulated dataset of size n.
ExperimentReport bvm_experiment(const BvmConfig& config);

struct PiCheckConfig {
  std::size_t grid_points = 101;
  double sup_gap_threshold = 0.02;
  double zero_gap_threshold = 0.01;
};

/// Compares pi_hat on [0,1] with the empirical pgf of the observed marks.
ExperimentReport pi_empirical_check(const DeparturePath& path, const EstimatorContext& ctx,
                                    const PiCheckConfig& config = {});

/// Quadrature oracle against closed forms for k <= k_max, plus normalisation
/// over k <= 200.
ExperimentReport oracle_agreement(const ServiceDist& service, double lambda, std::uint64_t k_max,
                                  double tolerance = 1e-10);

/// Kolmogorov distance of the standardised sample to N(0,1).
double normality_distance(std::vector<double> sample);

}  // namespace mg1
