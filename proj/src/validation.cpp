#include "mg1/validation.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mg1/errors.hpp"
#include "mg1/text_format.hpp"

namespace mg1 {

namespace {

double poisson_pmf(double mean, std::uint64_t k) {
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  std::vector<double> out;
  if (points == 1) return {lo};
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return out;
}

std::string join(const std::vector<std::uint64_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::string format_metric(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

double ExperimentReport::metric(std::string_view key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw InvalidArgument("report '" + name + "' has no metric '" + std::string(key) + "'");
}

void ExperimentReport::write_key_values(std::ostream& out) const {
  out << "name=" << name << '\n';
  out << "seed=" << seed << '\n';
  for (const auto& [k, v] : parameters) out << "param." << k << '=' << v << '\n';
  for (const auto& [k, v] : metrics) out << "metric." << k << '=' << format_metric(v) << '\n';
  out << "pass=" << (pass ? "true" : "false") << '\n';
}

void ExperimentReport::print_table(std::ostream& out) const {
  std::size_t width = 0;
  for (const auto& [k, v] : parameters) width = std::max(width, k.size());
  for (const auto& [k, v] : metrics) width = std::max(width, k.size());
  const int column = static_cast<int>(width + 2);
  out << "experiment: " << name << " (seed " << seed << ")\n";
  for (const auto& [k, v] : parameters) out << "  " << std::left << std::setw(column) << k << v << '\n';
  for (const auto& [k, v] : metrics) out << "  " << std::left << std::setw(column) << k << format_metric(v) << '\n';
  out << "  result: " << (pass ? "PASS" : "FAIL") << '\n';
}

double oracle_a_pmf(const ServiceDist& service, double lambda, std::uint64_t k) {
  if (!(lambda > 0.0)) throw InvalidArgument("oracle_a_pmf needs lambda > 0");
  if (const auto* det = std::get_if<Deterministic>(&service.family())) return poisson_pmf(lambda * det->value, k);

  const double kd = static_cast<double>(k);
  const double log_norm = std::lgamma(kd + 1.0);
  auto integrand = [&](double t) {
    if (t <= 0.0) return k == 0 ? service.density(0.0) : 0.0;
    const double lt = lambda * t;
    return std::exp(-lt + kd * std::log(lt) - log_norm) * service.density(t);
  };
  // The integrand is at most the density, so the neglected tail is at most
  // P(S > upper); forty standard deviations puts that far below 1e-12.
  const double upper = service.mean() + 40.0 * std::sqrt(service.variance());
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, upper, 20, 1e-14, &error);
  return value;
}

std::optional<double> a_pmf_closed_form(const ServiceDist& service, double lambda, std::uint64_t k) {
  if (const auto* e = std::get_if<Exponential>(&service.family())) {
    const double q = lambda / (lambda + e->rate);
    return (1.0 - q) * std::pow(q, static_cast<double>(k));
  }
  if (const auto* d = std::get_if<Deterministic>(&service.family())) return poisson_pmf(lambda * d->value, k);
  return std::nullopt;
}

double covariance_H(const Pgf& a0, double u, double v) { return a0.value(u * v) - a0.value(u) * a0.value(v); }

double covariance_K(const Pgf& a0, double lambda0, double u, double v) {
  const double su = 1.0 - u / lambda0;
  const double sv = 1.0 - v / lambda0;
  return covariance_H(a0, su, sv) + u * v * std::pow(lambda0, -6.0) * a0.derivative(su) * a0.derivative(sv);
}

ExperimentReport consistency_experiment(const ConsistencyConfig& config) {
  if (config.n_list.empty()) throw InvalidArgument("consistency experiment needs a non-empty n_list");
  if (!std::is_sorted(config.n_list.begin(), config.n_list.end())) {
    throw InvalidArgument("consistency n_list must be increasing");
  }
  ExperimentReport report;
  report.name = "consistency";
  report.seed = config.truth.seed;
  report.add_parameter("lambda", format_double(config.truth.lambda));
  report.add_parameter("service", config.truth.service.to_string());
  report.add_parameter("n_list", join(config.n_list));
  report.add_parameter("prior.gamma", format_double(config.rate_prior.shape()) + "," +
                                          format_double(config.rate_prior.rate()));
  report.add_parameter("prior.alpha", format_double(config.alpha));
  report.add_parameter("prior.base", config.base.to_string());
  report.add_parameter("lst_range", format_double(config.lst_range));
  report.add_parameter("rate_error_threshold", format_double(config.rate_error_threshold));
  report.add_parameter("lst_error_threshold", format_double(config.lst_error_threshold));

  SimConfig sim = config.truth;
  sim.n = config.n_list.back() + 1;
  const auto path = simulate_path(sim);
  const auto durations = interdeparture_times(path.records);
  const auto marks = marks_of(path.records);

  std::vector<double> a0_series;
  a0_series.reserve(config.oracle_terms + 1);
  for (std::size_t k = 0; k <= config.oracle_terms; ++k) {
    a0_series.push_back(oracle_a_pmf(config.truth.service, config.truth.lambda, k));
  }
  const FinitePmfPgf a0(a0_series);
  const auto unit_grid = linspace(0.0, 1.0, config.grid_points);
  const auto lst_grid = linspace(0.0, config.lst_range, config.grid_points);

  auto errors_for = [&](const GammaPosterior& rate, const DeltaDirichletPosterior& dp) {
    const auto ctx = EstimatorContext::from_posteriors(rate, dp);
    double gamma_err = 0.0;
    for (double z : unit_grid) gamma_err = std::max(gamma_err, std::abs(gamma_n(ctx, z) - a0.value(z)));
    double lst_err = 0.0;
    for (double z : lst_grid) {
      try {
        lst_err = std::max(lst_err, std::abs(g_hat(ctx, z) - config.truth.service.lst(z)));
      } catch (const DomainError&) {
        lst_err = std::numeric_limits<double>::infinity();
      }
    }
    return std::pair{gamma_err, lst_err};
  };

  const DeltaDirichletPosterior prior_dp(config.alpha, config.base);
  {
    const auto [gamma_err, lst_err] = errors_for(config.rate_prior, prior_dp);
    report.add_metric("rate_error.n0", std::abs(config.rate_prior.mean() - config.truth.lambda));
    report.add_metric("gamma_sup_error.n0", gamma_err);
    report.add_metric("lst_sup_error.n0", lst_err);
  }

  bool lst_monotone = true;
  double previous_lst = std::numeric_limits<double>::infinity();
  double final_rate = 0.0;
  double final_lst = 0.0;
  bool first = true;
  for (const auto n : config.n_list) {
    const auto rate = config.rate_prior.update(std::span(durations).first(n));
    const auto dp = prior_dp.update_with_marks(std::span(marks).first(n + 1));
    const auto [gamma_err, lst_err] = errors_for(rate, dp);
    const auto tag = ".n" + std::to_string(n);
    final_rate = std::abs(rate.mean() - config.truth.lambda);
    final_lst = lst_err;
    report.add_metric("rate_error" + tag, final_rate);
    report.add_metric("rate_posterior_mass_lower_bound" + tag,
                      rate.mass_near_lower_bound(config.truth.lambda, config.rate_error_threshold));
    report.add_metric("gamma_sup_error" + tag, gamma_err);
    report.add_metric("lst_sup_error" + tag, lst_err);
    if (!first && !(lst_err <= previous_lst)) lst_monotone = false;
    previous_lst = lst_err;
    first = false;
  }
  report.add_metric("lst_error_monotone", lst_monotone ? 1.0 : 0.0);
  report.pass = final_rate <= config.rate_error_threshold && lst_monotone && final_lst <= config.lst_error_threshold;
  return report;
}

double normality_distance(std::vector<double> sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw InvalidArgument("normality distance needs at least two values");
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) return 1.0;
  for (double& x : sample) x = (x - mean) / sd;
  std::sort(sample.begin(), sample.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

ExperimentReport bvm_experiment(const BvmConfig& config) {
  if (config.draws < 2) throw InvalidArgument("bvm experiment needs at least two draws");
  if (config.z_grid.empty()) throw InvalidArgument("bvm experiment needs a non-empty z grid");
  ExperimentReport report;
  report.name = "bvm";
  report.seed = config.truth.seed;
  report.add_parameter("lambda", format_double(config.truth.lambda));
  report.add_parameter("service", config.truth.service.to_string());
  report.add_parameter("n", std::to_string(config.n));
  report.add_parameter("draws", std::to_string(config.draws));
  report.add_parameter("z_grid", join(config.z_grid));
  report.add_parameter("truncation", std::to_string(config.truncation));
  report.add_parameter("prior.alpha", format_double(config.alpha));
  report.add_parameter("prior.base", config.base.to_string());
  report.add_parameter("covariance_tolerance", format_double(config.covariance_tolerance));
  report.add_parameter("rate_tolerance", format_double(config.rate_tolerance));
  report.add_parameter("normality_threshold", format_double(config.normality_threshold));

  SimConfig sim = config.truth;
  sim.n = config.n + 1;
  const auto path = simulate_path(sim);
  const auto rate = config.rate_prior.update(interdeparture_times(path.records));
  const auto dp = DeltaDirichletPosterior(config.alpha, config.base).update_with_marks(marks_of(path.records));
  const PosteriorMeanPgf gamma(dp);
  const ArrivalCountPgf a0(config.truth.service, config.truth.lambda);

  const std::size_t dims = config.z_grid.size();
  const double root_n = std::sqrt(static_cast<double>(config.n));
  std::vector<double> centre(dims);
  for (std::size_t i = 0; i < dims; ++i) centre[i] = gamma.value(config.z_grid[i]);

  // Draw streams are keyed by (seed, draw index), independent of the data streams.
  const std::uint64_t draw_seed = config.truth.seed ^ 0x5DEECE66DULL;
  std::vector<std::vector<double>> coords(dims, std::vector<double>(config.draws));
  std::vector<double> rate_coord(config.draws);
  for (std::size_t d = 0; d < config.draws; ++d) {
    auto rng = RandomStream::derive(draw_seed, d);
    const auto row = dp.sample_posterior_pmf(config.truncation, rng);
    const FinitePmfPgf drawn(row.pmf);
    for (std::size_t i = 0; i < dims; ++i) coords[i][d] = root_n * (drawn.value(config.z_grid[i]) - centre[i]);
    rate_coord[d] = root_n * (rate.sample(rng) - rate.mean());
  }

  auto mean_of = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  auto covariance = [&](const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - mx) * (y[k] - my);
    return s / static_cast<double>(x.size() - 1);
  };

  double max_rel_cov = 0.0;
  for (std::size_t i = 0; i < dims; ++i) {
    for (std::size_t j = i; j < dims; ++j) {
      const double emp = covariance(coords[i], coords[j]);
      const double h = covariance_H(a0, config.z_grid[i], config.z_grid[j]);
      const double rel = std::abs(emp - h) / std::abs(h);
      const auto tag = format_double(config.z_grid[i]) + "," + format_double(config.z_grid[j]);
      report.add_metric("cov_empirical[" + tag + "]", emp);
      report.add_metric("cov_H[" + tag + "]", h);
      max_rel_cov = std::max(max_rel_cov, rel);
    }
  }
  report.add_metric("cov_max_relative_error", max_rel_cov);

  double max_normality = 0.0;
  for (std::size_t i = 0; i < dims; ++i) {
    const double ks = normality_distance(coords[i]);
    report.add_metric("normality_distance[" + format_double(config.z_grid[i]) + "]", ks);
    max_normality = std::max(max_normality, ks);
  }
  report.add_metric("normality_distance_max", max_normality);

  const double rate_var = covariance(rate_coord, rate_coord);
  const double lambda0 = config.truth.lambda;
  const double rate_target = std::pow(lambda0, -2.0);
  const double rate_rel = std::abs(rate_var - rate_target) / rate_target;
  report.add_metric("rate_scaled_variance", rate_var);
  report.add_metric("rate_target_variance", rate_target);
  report.add_metric("rate_relative_error", rate_rel);
  report.add_metric("rate_normality_distance", normality_distance(rate_coord));

  // Truncation doubling: mean leftover stick mass at L and 2L.
  double residual_l = 0.0;
  double residual_2l = 0.0;
  for (std::size_t d = 0; d < config.doubling_draws; ++d) {
    auto rng = RandomStream::derive(draw_seed ^ 0xA5A5A5A5ULL, d);
    residual_l += dp.sample_posterior_pmf(config.truncation, rng).truncation_residual;
    residual_2l += dp.sample_posterior_pmf(2 * config.truncation, rng).truncation_residual;
  }
  if (config.doubling_draws > 0) {
    report.add_metric("truncation_residual_L", residual_l / static_cast<double>(config.doubling_draws));
    report.add_metric("truncation_residual_2L", residual_2l / static_cast<double>(config.doubling_draws));
  }

  report.pass = max_rel_cov <= config.covariance_tolerance && rate_rel <= config.rate_tolerance &&
                max_normality <= config.normality_threshold;
  return report;
}

ExperimentReport pi_empirical_check(const DeparturePath& path, const EstimatorContext& ctx,
                                    const PiCheckConfig& config) {
  if (path.records.empty()) throw InvalidArgument("pi check needs a non-empty path");
  ExperimentReport report;
  report.name = "pi-check";
  report.seed = path.config.seed;
  report.add_parameter("lambda", format_double(path.config.lambda));
  report.add_parameter("service", path.config.service.to_string());
  report.add_parameter("n", std::to_string(path.records.size()));
  report.add_parameter("sup_gap_threshold", format_double(config.sup_gap_threshold));
  report.add_parameter("zero_gap_threshold", format_double(config.zero_gap_threshold));

  std::vector<double> mark_pmf;
  for (const auto& r : path.records) {
    if (r.n >= mark_pmf.size()) mark_pmf.resize(r.n + 1, 0.0);
    mark_pmf[r.n] += 1.0;
  }
  for (double& p : mark_pmf) p /= static_cast<double>(path.records.size());
  const FinitePmfPgf empirical(mark_pmf);

  double sup_gap = 0.0;
  for (double z : linspace(0.0, 1.0, config.grid_points)) {
    sup_gap = std::max(sup_gap, std::abs(pi_hat(ctx, z) - empirical.value(z)));
  }
  const double pi0 = pi_hat(ctx, 0.0);
  const double zero_gap = std::abs(pi0 - mark_pmf[0]);
  const double idle_gap = std::abs(pi0 - (1.0 - path.config.rho()));
  report.add_metric("sup_gap", sup_gap);
  report.add_metric("pi_hat_at_0", pi0);
  report.add_metric("empirical_zero_fraction", mark_pmf[0]);
  report.add_metric("zero_gap", zero_gap);
  report.add_metric("idle_gap_vs_true", idle_gap);
  report.pass = sup_gap <= config.sup_gap_threshold && zero_gap <= config.zero_gap_threshold &&
                idle_gap <= config.zero_gap_threshold;
  return report;
}

ExperimentReport oracle_agreement(const ServiceDist& service, double lambda, std::uint64_t k_max, double tolerance) {
  ExperimentReport report;
  report.name = "oracles";
  report.add_parameter("lambda", format_double(lambda));
  report.add_parameter("service", service.to_string());
  report.add_parameter("k_max", std::to_string(k_max));
  report.add_parameter("tolerance", format_double(tolerance));

  double max_diff = 0.0;
  bool have_closed_form = false;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    const auto closed = a_pmf_closed_form(service, lambda, k);
    if (!closed) break;
    have_closed_form = true;
    max_diff = std::max(max_diff, std::abs(oracle_a_pmf(service, lambda, k) - *closed));
  }
  double total = 0.0;
  for (std::uint64_t k = 0; k <= 200; ++k) total += oracle_a_pmf(service, lambda, k);
  report.add_metric("closed_form_available", have_closed_form ? 1.0 : 0.0);
  report.add_metric("max_abs_difference", max_diff);
  report.add_metric("normalisation_error", std::abs(total - 1.0));
  report.pass = max_diff <= tolerance && std::abs(total - 1.0) <= 1e-8;
  return report;
}

}  // namespace mg1
