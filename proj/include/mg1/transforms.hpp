#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mg1/bayes_matrix.hpp"
#include "mg1/bayes_rate.hpp"
#include "mg1/pgf.hpp"

namespace mg1 {

/// Inputs shared by every plug-in estimator: the rate estimate and the
/// generating function of arrivals per service.
class EstimatorContext {
 public:
  EstimatorContext(double lambda_bar, std::shared_ptr<const Pgf> arrivals);

  /// Posterior means: lambda_bar from the Gamma law, gamma_n from the DP law.
  static EstimatorContext from_posteriors(const GammaPosterior& rate, const DeltaDirichletPosterior& matrix);
  /// Exact inputs for a known system (no estimation noise).
  static EstimatorContext exact(const ServiceDist& service, double lambda);

  double lambda_bar() const { return lambda_bar_; }
  const Pgf& arrivals() const { return *arrivals_; }
  double rho_hat() const { return arrivals_->mean(); }
  bool stable() const { return rho_hat() < 1.0; }

 private:
  double lambda_bar_;
  std::shared_ptr<const Pgf> arrivals_;
};

struct FixedPointOptions {
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

double gamma_n(const EstimatorContext& ctx, double z);
/// Service-time LST estimate gamma_n(1 - z / lambda_bar).
double g_hat(const EstimatorContext& ctx, double z);
double g_hat_derivative(const EstimatorContext& ctx, double z);

/// Mean arrivals per service under gamma_n, straight from the increment pmf.
double rho_hat(const EstimatorContext& ctx);
/// The same quantity as lambda_bar * sigma_hat, sigma_hat = -g_hat'(0).
double rho_hat_from_lst(const EstimatorContext& ctx);

double q_hat(const EstimatorContext& ctx, double z);
double m_hat(const EstimatorContext& ctx, double z);
double w_hat(const EstimatorContext& ctx, double s);
double pi_hat(const EstimatorContext& ctx, double z);

/// Minimal root of b = g_hat(s + lambda_bar (1 - b)) by plain iteration from 0.
double busy_b(const EstimatorContext& ctx, double s, FixedPointOptions opts = {});
/// Minimal root of m = z g_hat(lambda_bar (1 - m)) by plain iteration from 0.
double served_mb(const EstimatorContext& ctx, double z, FixedPointOptions opts = {});

enum class TransformKind { g, w, q, m, pi, b, mb };

TransformKind parse_transform_kind(std::string_view name);
std::string_view to_string(TransformKind kind);

double evaluate(const EstimatorContext& ctx, TransformKind kind, double arg);

struct TransformEstimate {
  TransformKind kind;
  std::vector<double> grid;
  /// Empty where the argument fell outside the estimator's domain.
  std::vector<std::optional<double>> values;
  std::vector<std::string> warnings;
  std::string domain_note;
};

TransformEstimate estimate_on_grid(const EstimatorContext& ctx, TransformKind kind, const std::vector<double>& grid);

/// Natural argument range of each transform, with any pgf radius applied.
std::string domain_note(const EstimatorContext& ctx, TransformKind kind);

}  // namespace mg1
