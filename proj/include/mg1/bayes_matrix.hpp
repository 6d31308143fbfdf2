#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mg1/pgf.hpp"
#include "mg1/rng.hpp"
#include "mg1/tau.hpp"

namespace mg1 {

struct GeometricBase {
  double p;  // c0({k}) = (1 - p) p^k
};

struct PoissonBase {
  double theta;
};

/// Prior guess c0 for the law of arrivals during a service.
class BasePmf {
 public:
  using Family = std::variant<GeometricBase, PoissonBase>;

  explicit BasePmf(Family family);
  static BasePmf geometric(double p) { return BasePmf(GeometricBase{p}); }
  static BasePmf poisson(double theta) { return BasePmf(PoissonBase{theta}); }

  /// `geom:<p>` or `pois:<theta>`.
  static BasePmf parse(std::string_view text);
  std::string to_string() const;

  const Family& family() const { return family_; }

  double pmf(std::uint64_t k) const;
  /// P(X > k), computed in closed form.
  double tail_above(std::uint64_t k) const;
  double pgf(double z) const;
  double pgf_derivative(double z) const;
  double mean() const;
  /// Radius of convergence of the pgf series (infinite for Poisson).
  double radius() const;
  std::uint64_t sample(RandomStream& rng) const;

  bool operator==(const BasePmf&) const;

 private:
  Family family_;
};

/// Zero-adjusted increments of a mark sequence, in path order.
/// Throws CorruptData if the marks are not down-skip-free.
std::vector<std::uint64_t> increments_of(std::span<const Symbol> marks);

/// Posterior-mean row truncated at k_max; `tail` holds the mass above k_max.
struct TruncatedPmf {
  std::uint64_t first = 0;  // value of probs[0]
  std::vector<double> probs;
  double tail = 0.0;

  double total() const;
};

struct SampledRow {
  std::vector<double> pmf;  // index = number of arrivals
  /// Stick mass left beyond the truncation level before renormalising.
  double truncation_residual = 0.0;
};

/// Dirichlet-process law of row 0 of the homogeneous Delta(1,1) matrix,
/// with base measure alpha c0 plus the observed zero-adjusted increments.
class DeltaDirichletPosterior {
 public:
  static constexpr std::size_t kDefaultTruncation = 256;

  DeltaDirichletPosterior(double alpha, BasePmf base);
  /// Restores a posterior; requires sum(counts) == max(n_obs - 1, 0).
  DeltaDirichletPosterior(double alpha, BasePmf base, std::map<std::uint64_t, std::uint64_t> counts,
                          std::uint64_t n_obs);

  double alpha() const { return alpha_; }
  const BasePmf& base() const { return base_; }
  const std::map<std::uint64_t, std::uint64_t>& counts() const { return counts_; }
  std::uint64_t n_obs() const { return n_obs_; }
  std::uint64_t increment_total() const { return n_obs_ > 0 ? n_obs_ - 1 : 0; }

  /// Folds in a chunk of marks. After the first chunk, each further chunk must
  /// start with the last mark of the previous one; that mark is not recounted.
  DeltaDirichletPosterior update_with_marks(std::span<const Symbol> marks) const;

  /// (alpha c0({k}) + counts[k]) / (alpha + n_obs - 1); c0({k}) while n_obs <= 1.
  double posterior_mean_pmf(std::uint64_t k) const;
  double posterior_mean_tail_above(std::uint64_t k) const;
  /// Sum of k times the posterior-mean pmf.
  double posterior_mean_increment() const;
  TruncatedPmf posterior_mean_row(std::size_t k_max = kDefaultTruncation) const;

  /// Entry (i, j) of the posterior-mean transition matrix.
  double matrix_entry(std::uint64_t i, std::uint64_t j) const;

  /// Law of the next mark given the current one, drawn in increment space.
  TruncatedPmf predictive_next_state(std::uint64_t current, std::size_t k_max = kDefaultTruncation) const;

  /// One random row. The observed atoms get exact Dirichlet weights; the
  /// alpha c0 component is a stick-breaking draw truncated at `truncation`
  /// sticks and renormalised.
  SampledRow sample_posterior_pmf(std::size_t truncation, RandomStream& rng) const;

  bool operator==(const DeltaDirichletPosterior&) const = default;

 private:
  double denominator() const { return alpha_ + static_cast<double>(increment_total()); }

  double alpha_;
  BasePmf base_;
  std::map<std::uint64_t, std::uint64_t> counts_;
  std::uint64_t n_obs_ = 0;
};

/// gamma_n, the posterior-mean generating function of arrivals per service.
class PosteriorMeanPgf final : public Pgf {
 public:
  explicit PosteriorMeanPgf(DeltaDirichletPosterior posterior);

  double value(double z) const override;
  double derivative(double z) const override;
  double mean() const override { return posterior_.posterior_mean_increment(); }
  PgfDomain domain() const override;

  const DeltaDirichletPosterior& posterior() const { return posterior_; }

 private:
  DeltaDirichletPosterior posterior_;
};

/// Stationary mark pgf from the arrival pgf:
/// a(z) (1 - z) (1 - a'(1)) / (a(z) - z), equal to 1 at z = 1.
/// Throws StabilityError when a'(1) >= 1.
double pi_pgf(const Pgf& a, double z);

/// log prod m_{x_i, x_{i+1}} for the Delta(1,1) matrix whose row 0 is `row0`.
/// Returns -inf if any step has zero probability.
double path_likelihood(std::span<const double> row0, std::span<const Symbol> marks);

}  // namespace mg1
