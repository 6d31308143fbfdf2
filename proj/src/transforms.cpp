#include "mg1/transforms.hpp"

#include <cmath>

#include "mg1/errors.hpp"
#include "mg1/text_format.hpp"

namespace mg1 {

namespace {

constexpr double kSingularityBand = 1e-6;

void require_stable(const EstimatorContext& ctx) {
  const double rho = ctx.rho_hat();
  if (!(rho < 1.0)) throw StabilityError("estimated traffic intensity " + format_double(rho) + " >= 1", rho);
}

void require_unit_interval(double z, const char* what) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError(std::string(what) + " argument must lie in [0,1]", z < 0 ? 0 : 1);
}

template <class Step>
double solve_minimal_fixed_point(Step step, FixedPointOptions opts, const char* what) {
  double x = 0.0;
  double delta = 0.0;
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    const double next = step(x);
    delta = std::abs(next - x);
    x = next;
    if (delta < opts.tol) return x;
  }
  throw ConvergenceError(std::string(what) + " did not converge; last step " + format_double(delta), delta);
}

}  // namespace

EstimatorContext::EstimatorContext(double lambda_bar, std::shared_ptr<const Pgf> arrivals)
    : lambda_bar_(lambda_bar), arrivals_(std::move(arrivals)) {
  if (!(lambda_bar > 0.0) || !std::isfinite(lambda_bar)) throw InvalidArgument("lambda_bar must be positive");
  if (!arrivals_) throw InvalidArgument("estimator context needs an arrival pgf");
}

EstimatorContext EstimatorContext::from_posteriors(const GammaPosterior& rate, const DeltaDirichletPosterior& matrix) {
  return EstimatorContext(rate.mean(), std::make_shared<PosteriorMeanPgf>(matrix));
}

EstimatorContext EstimatorContext::exact(const ServiceDist& service, double lambda) {
  return EstimatorContext(lambda, std::make_shared<ArrivalCountPgf>(service, lambda));
}

double gamma_n(const EstimatorContext& ctx, double z) {
  ctx.arrivals().require_in_domain(z);
  return ctx.arrivals().value(z);
}

double g_hat(const EstimatorContext& ctx, double z) {
  if (z < 0.0) throw DomainError("g_hat needs z >= 0", 0.0);
  return gamma_n(ctx, 1.0 - z / ctx.lambda_bar());
}

double g_hat_derivative(const EstimatorContext& ctx, double z) {
  const double arg = 1.0 - z / ctx.lambda_bar();
  ctx.arrivals().require_in_domain(arg);
  return -ctx.arrivals().derivative(arg) / ctx.lambda_bar();
}

double rho_hat(const EstimatorContext& ctx) { return ctx.rho_hat(); }

double rho_hat_from_lst(const EstimatorContext& ctx) {
  const double sigma_hat = -g_hat_derivative(ctx, 0.0);
  return ctx.lambda_bar() * sigma_hat;
}

double q_hat(const EstimatorContext& ctx, double z) {
  require_stable(ctx);
  require_unit_interval(z, "q_hat");
  if (std::abs(1.0 - z) < kSingularityBand) return 1.0;
  const double denom = g_hat(ctx, ctx.lambda_bar() * (1.0 - z)) - z;
  if (std::abs(denom) < 1e-14) throw NumericalSingularity("q_hat denominator vanishes at z = " + format_double(z));
  return (1.0 - ctx.rho_hat()) * (1.0 - z) / denom;
}

double m_hat(const EstimatorContext& ctx, double z) {
  const double q = q_hat(ctx, z);
  if (std::abs(1.0 - z) < kSingularityBand) return 1.0;
  return g_hat(ctx, ctx.lambda_bar() * (1.0 - z)) * q;
}

double w_hat(const EstimatorContext& ctx, double s) {
  require_stable(ctx);
  if (s < 0.0) throw DomainError("w_hat needs s >= 0", 0.0);
  if (s < kSingularityBand) return 1.0;
  const double lambda = ctx.lambda_bar();
  const double denom = s - lambda + lambda * g_hat(ctx, s);
  if (std::abs(denom) < 1e-14) throw NumericalSingularity("w_hat denominator vanishes at s = " + format_double(s));
  return s * (1.0 - ctx.rho_hat()) / denom;
}

double pi_hat(const EstimatorContext& ctx, double z) {
  require_stable(ctx);
  require_unit_interval(z, "pi_hat");
  return pi_pgf(ctx.arrivals(), z);
}

double busy_b(const EstimatorContext& ctx, double s, FixedPointOptions opts) {
  require_stable(ctx);
  if (!(s > 0.0)) throw DomainError("busy_b needs s > 0", 0.0);
  const double lambda = ctx.lambda_bar();
  const double b = solve_minimal_fixed_point([&](double x) { return g_hat(ctx, s + lambda * (1.0 - x)); }, opts,
                                             "busy-period fixed point");
  const double residual = std::abs(b - g_hat(ctx, s + lambda * (1.0 - b)));
  if (!(residual < opts.tol)) throw ConvergenceError("busy-period residual above tolerance", residual);
  return b;
}

double served_mb(const EstimatorContext& ctx, double z, FixedPointOptions opts) {
  require_stable(ctx);
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("served_mb needs z in [0,1)", z < 0 ? 0 : 1);
  const double lambda = ctx.lambda_bar();
  const double m = solve_minimal_fixed_point([&](double x) { return z * g_hat(ctx, lambda * (1.0 - x)); }, opts,
                                             "served-count fixed point");
  const double residual = std::abs(m - z * g_hat(ctx, lambda * (1.0 - m)));
  if (!(residual < opts.tol)) throw ConvergenceError("served-count residual above tolerance", residual);
  return m;
}

TransformKind parse_transform_kind(std::string_view name) {
  if (name == "g") return TransformKind::g;
  if (name == "w") return TransformKind::w;
  if (name == "q") return TransformKind::q;
  if (name == "m") return TransformKind::m;
  if (name == "pi") return TransformKind::pi;
  if (name == "b") return TransformKind::b;
  if (name == "mb") return TransformKind::mb;
  throw InvalidArgument("unknown transform '" + std::string(name) + "'");
}

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::g: return "g";
    case TransformKind::w: return "w";
    case TransformKind::q: return "q";
    case TransformKind::m: return "m";
    case TransformKind::pi: return "pi";
    case TransformKind::b: return "b";
    case TransformKind::mb: return "mb";
  }
  return "?";
}

double evaluate(const EstimatorContext& ctx, TransformKind kind, double arg) {
  switch (kind) {
    case TransformKind::g: return g_hat(ctx, arg);
    case TransformKind::w: return w_hat(ctx, arg);
    case TransformKind::q: return q_hat(ctx, arg);
    case TransformKind::m: return m_hat(ctx, arg);
    case TransformKind::pi: return pi_hat(ctx, arg);
    case TransformKind::b: return busy_b(ctx, arg);
    case TransformKind::mb: return served_mb(ctx, arg);
  }
  throw InvalidArgument("unknown transform");
}

std::string domain_note(const EstimatorContext& ctx, TransformKind kind) {
  const auto d = ctx.arrivals().domain();
  switch (kind) {
    case TransformKind::g:
    case TransformKind::w: {
      // 1 - z / lambda_bar >= d.lo  <=>  z <= lambda_bar (1 - d.lo)
      if (!std::isfinite(d.lo)) return "s in [0,inf)";
      return "s in [0," + format_double(ctx.lambda_bar() * (1.0 - d.lo)) + "]";
    }
    case TransformKind::b: {
      if (!std::isfinite(d.lo)) return "s in (0,inf)";
      return "s in (0," + format_double(ctx.lambda_bar() * (-d.lo)) + "]";
    }
    case TransformKind::q:
    case TransformKind::m:
    case TransformKind::pi: return "z in [0,1]";
    case TransformKind::mb: return "z in [0,1)";
  }
  return "";
}

TransformEstimate estimate_on_grid(const EstimatorContext& ctx, TransformKind kind, const std::vector<double>& grid) {
  TransformEstimate est{kind, grid, {}, {}, domain_note(ctx, kind)};
  est.values.reserve(grid.size());
  for (double x : grid) {
    try {
      est.values.emplace_back(evaluate(ctx, kind, x));
    } catch (const DomainError& e) {
      est.values.emplace_back(std::nullopt);
      est.warnings.push_back("arg " + format_double(x) + ": " + e.what());
    } catch (const ConvergenceError& e) {
      est.values.emplace_back(std::nullopt);
      est.warnings.push_back("arg " + format_double(x) + ": " + e.what());
    } catch (const NumericalSingularity& e) {
      est.values.emplace_back(std::nullopt);
      est.warnings.push_back("arg " + format_double(x) + ": " + e.what());
    }
  }
  return est;
}

}  // namespace mg1
