#include "mg1/bayes_matrix.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "mg1/errors.hpp"
#include "mg1/text_format.hpp"

namespace mg1 {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Margin kept inside the geometric radius of convergence.
constexpr double kRadiusMargin = 1e-9;

}  // namespace

BasePmf::BasePmf(Family family) : family_(family) {
  std::visit(overloaded{
                 [](const GeometricBase& g) {
                   if (!(g.p > 0.0 && g.p < 1.0)) throw InvalidArgument("geometric base needs p in (0,1)");
                 },
                 [](const PoissonBase& p) {
                   if (!(p.theta > 0.0) || !std::isfinite(p.theta)) {
                     throw InvalidArgument("poisson base needs theta > 0");
                   }
                 },
             },
             family_);
}

BasePmf BasePmf::parse(std::string_view text) {
  text = trim(text);
  if (text.starts_with("geom:")) return geometric(parse_double(text.substr(5)));
  if (text.starts_with("pois:")) return poisson(parse_double(text.substr(5)));
  throw InvalidArgument("base must be geom:<p> or pois:<theta>, got '" + std::string(text) + "'");
}

std::string BasePmf::to_string() const {
  return std::visit(overloaded{
                        [](const GeometricBase& g) { return "geom:" + format_double(g.p); },
                        [](const PoissonBase& p) { return "pois:" + format_double(p.theta); },
                    },
                    family_);
}

bool BasePmf::operator==(const BasePmf& other) const { return to_string() == other.to_string(); }

double BasePmf::pmf(std::uint64_t k) const {
  return std::visit(overloaded{
                        [k](const GeometricBase& g) { return (1.0 - g.p) * std::pow(g.p, static_cast<double>(k)); },
                        [k](const PoissonBase& p) {
                          const double kd = static_cast<double>(k);
                          return std::exp(kd * std::log(p.theta) - p.theta - std::lgamma(kd + 1.0));
                        },
                    },
                    family_);
}

double BasePmf::tail_above(std::uint64_t k) const {
  return std::visit(overloaded{
                        [k](const GeometricBase& g) { return std::pow(g.p, static_cast<double>(k) + 1.0); },
                        // P(X > k) = P(k+1, theta), the lower regularized gamma
                        [k](const PoissonBase& p) { return boost::math::gamma_p(static_cast<double>(k) + 1.0, p.theta); },
                    },
                    family_);
}

double BasePmf::pgf(double z) const {
  return std::visit(overloaded{
                        [z](const GeometricBase& g) { return (1.0 - g.p) / (1.0 - g.p * z); },
                        [z](const PoissonBase& p) { return std::exp(p.theta * (z - 1.0)); },
                    },
                    family_);
}

double BasePmf::pgf_derivative(double z) const {
  return std::visit(overloaded{
                        [z](const GeometricBase& g) {
                          const double d = 1.0 - g.p * z;
                          return (1.0 - g.p) * g.p / (d * d);
                        },
                        [z](const PoissonBase& p) { return p.theta * std::exp(p.theta * (z - 1.0)); },
                    },
                    family_);
}

double BasePmf::mean() const {
  return std::visit(overloaded{
                        [](const GeometricBase& g) { return g.p / (1.0 - g.p); },
                        [](const PoissonBase& p) { return p.theta; },
                    },
                    family_);
}

double BasePmf::radius() const {
  return std::visit(overloaded{
                        [](const GeometricBase& g) { return 1.0 / g.p; },
                        [](const PoissonBase&) { return std::numeric_limits<double>::infinity(); },
                    },
                    family_);
}

std::uint64_t BasePmf::sample(RandomStream& rng) const {
  return std::visit(overloaded{
                        [&](const GeometricBase& g) {
                          return static_cast<std::uint64_t>(std::floor(std::log(rng.uniform()) / std::log(g.p)));
                        },
                        [&](const PoissonBase& p) {
                          std::poisson_distribution<std::uint64_t> dist(p.theta);
                          return dist(rng.engine());
                        },
                    },
                    family_);
}

std::vector<std::uint64_t> increments_of(std::span<const Symbol> marks) {
  if (marks.empty()) return {};
  if (!is_down_skip_free(marks)) throw CorruptData("marks are not down-skip-free");
  return increment_sequence(marks);
}

double TruncatedPmf::total() const {
  double s = tail;
  for (double p : probs) s += p;
  return s;
}

DeltaDirichletPosterior::DeltaDirichletPosterior(double alpha, BasePmf base)
    : alpha_(alpha), base_(std::move(base)) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive");
}

DeltaDirichletPosterior::DeltaDirichletPosterior(double alpha, BasePmf base,
                                                 std::map<std::uint64_t, std::uint64_t> counts,
                                                 std::uint64_t n_obs)
    : DeltaDirichletPosterior(alpha, std::move(base)) {
  std::uint64_t total = 0;
  for (const auto& [k, c] : counts) {
    if (c == 0) continue;
    counts_.emplace(k, c);
    total += c;
  }
  n_obs_ = n_obs;
  if (total != increment_total()) {
    throw CorruptData("posterior counts sum to " + std::to_string(total) + " but n_obs implies " +
                      std::to_string(increment_total()));
  }
}

DeltaDirichletPosterior DeltaDirichletPosterior::update_with_marks(std::span<const Symbol> marks) const {
  if (marks.empty()) return *this;
  DeltaDirichletPosterior next(*this);
  for (auto inc : increments_of(marks)) ++next.counts_[inc];
  next.n_obs_ += n_obs_ == 0 ? marks.size() : marks.size() - 1;
  return next;
}

double DeltaDirichletPosterior::posterior_mean_pmf(std::uint64_t k) const {
  if (n_obs_ <= 1) return base_.pmf(k);
  const auto it = counts_.find(k);
  const double observed = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
  return (alpha_ * base_.pmf(k) + observed) / denominator();
}

double DeltaDirichletPosterior::posterior_mean_tail_above(std::uint64_t k) const {
  if (n_obs_ <= 1) return base_.tail_above(k);
  double observed = 0.0;
  for (auto it = counts_.upper_bound(k); it != counts_.end(); ++it) observed += static_cast<double>(it->second);
  return (alpha_ * base_.tail_above(k) + observed) / denominator();
}

double DeltaDirichletPosterior::posterior_mean_increment() const {
  if (n_obs_ <= 1) return base_.mean();
  double observed = 0.0;
  for (const auto& [k, c] : counts_) observed += static_cast<double>(k) * static_cast<double>(c);
  return (alpha_ * base_.mean() + observed) / denominator();
}

TruncatedPmf DeltaDirichletPosterior::posterior_mean_row(std::size_t k_max) const {
  TruncatedPmf row;
  row.probs.reserve(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) row.probs.push_back(posterior_mean_pmf(k));
  row.tail = posterior_mean_tail_above(k_max);
  return row;
}

double DeltaDirichletPosterior::matrix_entry(std::uint64_t i, std::uint64_t j) const {
  if (i <= 1) return posterior_mean_pmf(j);
  if (j + 1 < i) return 0.0;
  return posterior_mean_pmf(j + 1 - i);
}

TruncatedPmf DeltaDirichletPosterior::predictive_next_state(std::uint64_t current, std::size_t k_max) const {
  auto row = posterior_mean_row(k_max);
  // next = current + r - 1 (current > 0) or r (current == 0)
  row.first = current == 0 ? 0 : current - 1;
  return row;
}

SampledRow DeltaDirichletPosterior::sample_posterior_pmf(std::size_t truncation, RandomStream& rng) const {
  if (truncation == 0) throw InvalidArgument("truncation level must be at least 1");
  SampledRow out;
  auto add = [&out](std::uint64_t atom, double weight) {
    if (atom >= out.pmf.size()) out.pmf.resize(atom + 1, 0.0);
    out.pmf[atom] += weight;
  };

  // Split of total mass between the prior component and each observed atom.
  double prior_share = rng.gamma(alpha_, 1.0);
  std::vector<std::pair<std::uint64_t, double>> atom_shares;
  double total = prior_share;
  for (const auto& [k, c] : counts_) {
    const double g = rng.gamma(static_cast<double>(c), 1.0);
    atom_shares.emplace_back(k, g);
    total += g;
  }
  if (counts_.empty()) prior_share = total = 1.0;
  for (const auto& [k, g] : atom_shares) add(k, g / total);

  // Stick-breaking draw of DP(alpha c0), Beta(1, alpha) sticks by inversion.
  std::vector<std::pair<std::uint64_t, double>> sticks;
  double remaining = 1.0;
  for (std::size_t i = 0; i < truncation; ++i) {
    const double v = 1.0 - std::pow(rng.uniform(), 1.0 / alpha_);
    sticks.emplace_back(base_.sample(rng), remaining * v);
    remaining *= 1.0 - v;
  }
  out.truncation_residual = remaining;
  const double used = 1.0 - remaining;
  const double scale = prior_share / total;
  for (const auto& [atom, w] : sticks) add(atom, scale * w / used);
  return out;
}

PosteriorMeanPgf::PosteriorMeanPgf(DeltaDirichletPosterior posterior) : posterior_(std::move(posterior)) {}

PgfDomain PosteriorMeanPgf::domain() const {
  const double r = posterior_.base().radius();
  if (!std::isfinite(r)) return {};
  return {-(r - kRadiusMargin), r - kRadiusMargin};
}

double PosteriorMeanPgf::value(double z) const {
  require_in_domain(z);
  const auto& base = posterior_.base();
  if (posterior_.n_obs() <= 1) return base.pgf(z);
  double observed = 0.0;
  for (const auto& [k, c] : posterior_.counts()) {
    observed += static_cast<double>(c) * std::pow(z, static_cast<double>(k));
  }
  return (posterior_.alpha() * base.pgf(z) + observed) /
         (posterior_.alpha() + static_cast<double>(posterior_.increment_total()));
}

double PosteriorMeanPgf::derivative(double z) const {
  require_in_domain(z);
  const auto& base = posterior_.base();
  if (posterior_.n_obs() <= 1) return base.pgf_derivative(z);
  double observed = 0.0;
  for (const auto& [k, c] : posterior_.counts()) {
    if (k == 0) continue;
    const double kd = static_cast<double>(k);
    observed += static_cast<double>(c) * kd * std::pow(z, kd - 1.0);
  }
  return (posterior_.alpha() * base.pgf_derivative(z) + observed) /
         (posterior_.alpha() + static_cast<double>(posterior_.increment_total()));
}

double pi_pgf(const Pgf& a, double z) {
  const double rho = a.mean();
  if (!(rho < 1.0)) throw StabilityError("stationary law requires a'(1) < 1, got " + format_double(rho), rho);
  if (!(z >= 0.0 && z <= 1.0)) throw InvalidArgument("pi_pgf argument must lie in [0,1]");
  if (std::abs(1.0 - z) < 1e-6) return 1.0;
  const double az = a.value(z);
  const double denom = az - z;
  if (std::abs(denom) < 1e-14) throw NumericalSingularity("a(z) - z vanishes at z = " + format_double(z));
  return az * (1.0 - z) * (1.0 - rho) / denom;
}

double path_likelihood(std::span<const double> row0, std::span<const Symbol> marks) {
  if (marks.empty()) throw InvalidArgument("likelihood of an empty path");
  if (!is_down_skip_free(marks)) return -std::numeric_limits<double>::infinity();
  double loglik = 0.0;
  for (std::size_t j = 0; j + 1 < marks.size(); ++j) {
    const auto inc = zero_adjusted_increment(marks[j], marks[j + 1]);
    if (inc >= row0.size() || !(row0[inc] > 0.0)) return -std::numeric_limits<double>::infinity();
    loglik += std::log(row0[inc]);
  }
  return loglik;
}

}  // namespace mg1
