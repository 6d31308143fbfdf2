#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mg1/bayes_matrix.hpp"
#include "mg1/errors.hpp"
#include "mg1/pgf.hpp"
#include "mg1/service.hpp"

using namespace mg1;

namespace {

std::vector<Symbol> marks(const char* text) {
  const auto s = DssString::parse(text);
  return {s.symbols().begin(), s.symbols().end()};
}

}  // namespace

TEST_CASE("base pmfs") {
  const auto geo = BasePmf::parse("geom:0.25");
  CHECK(geo.pmf(0) == doctest::Approx(0.75));
  CHECK(geo.pmf(2) == doctest::Approx(0.75 * 0.0625));
  CHECK(geo.tail_above(1) == doctest::Approx(0.0625));
  CHECK(geo.pgf(2.0) == doctest::Approx(0.75 / (1.0 - 0.5)));
  CHECK(geo.mean() == doctest::Approx(1.0 / 3.0));
  CHECK(geo.radius() == doctest::Approx(4.0));
  CHECK(geo.to_string() == "geom:0.25");

  const auto poi = BasePmf::parse("pois:1.5");
  double sum = 0.0;
  for (std::uint64_t k = 0; k <= 3; ++k) sum += poi.pmf(k);
  CHECK(poi.tail_above(3) == doctest::Approx(1.0 - sum));
  CHECK(poi.pgf(-2.0) == doctest::Approx(std::exp(1.5 * -3.0)));
  CHECK(poi.pgf_derivative(0.5) == doctest::Approx(1.5 * std::exp(1.5 * -0.5)));

  CHECK_THROWS_AS(BasePmf::parse("geom:1"), InvalidArgument);
  CHECK_THROWS_AS(BasePmf::parse("pois:-1"), InvalidArgument);
  CHECK_THROWS_AS(BasePmf::parse("beta:1"), InvalidArgument);
}

TEST_CASE("increments of a mark sequence") {
  CHECK(increments_of(marks("102232101")) == std::vector<std::uint64_t>{0, 2, 1, 2, 0, 0, 0, 1});
  CHECK_THROWS_AS(increments_of(std::vector<Symbol>{4, 1}), CorruptData);
}

TEST_CASE("fresh posterior mean equals the base") {
  const DeltaDirichletPosterior dp(2.0, BasePmf::geometric(0.5));
  for (std::uint64_t k = 0; k < 6; ++k) CHECK(dp.posterior_mean_pmf(k) == dp.base().pmf(k));
  CHECK(dp.posterior_mean_increment() == doctest::Approx(1.0));
}

TEST_CASE("posterior mean after observing marks") {
  const auto base = BasePmf::geometric(0.5);
  const auto dp = DeltaDirichletPosterior(1.0, base).update_with_marks(marks("121211100"));
  CHECK(dp.n_obs() == 9);
  const std::map<std::uint64_t, std::uint64_t> expected{{0, 4}, {1, 2}, {2, 2}};
  CHECK(dp.counts() == expected);
  for (std::uint64_t k = 0; k < 5; ++k) {
    const double count = expected.count(k) ? static_cast<double>(expected.at(k)) : 0.0;
    CHECK(dp.posterior_mean_pmf(k) == doctest::Approx((base.pmf(k) + count) / 9.0));
  }
  const auto row = dp.posterior_mean_row(40);
  CHECK(row.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dp.posterior_mean_tail_above(1) == doctest::Approx(1.0 - dp.posterior_mean_pmf(0) - dp.posterior_mean_pmf(1)));
}

TEST_CASE("streaming updates with a repeated boundary mark match a batch update") {
  const auto all = marks("1021023232100123");
  const DeltaDirichletPosterior prior(1.5, BasePmf::poisson(1.0));
  const auto batch = prior.update_with_marks(all);
  const auto first = prior.update_with_marks(std::span(all).first(7));
  const auto second = first.update_with_marks(std::span(all).subspan(6));
  CHECK(second == batch);
  CHECK(prior.update_with_marks({}) == prior);
}

TEST_CASE("counts must agree with the observation total") {
  CHECK_THROWS_AS(DeltaDirichletPosterior(1.0, BasePmf::geometric(0.5), {{0, 3}}, 10), CorruptData);
  CHECK_NOTHROW(DeltaDirichletPosterior(1.0, BasePmf::geometric(0.5), {{0, 3}}, 4));
  CHECK_THROWS_AS(DeltaDirichletPosterior(0.0, BasePmf::geometric(0.5)), InvalidArgument);
}

TEST_CASE("matrix entries have the shifted-row structure") {
  const auto dp = DeltaDirichletPosterior(1.0, BasePmf::geometric(0.4)).update_with_marks(marks("0121021"));
  for (std::uint64_t j = 0; j < 6; ++j) CHECK(dp.matrix_entry(0, j) == dp.matrix_entry(1, j));
  CHECK(dp.matrix_entry(3, 1) == 0.0);
  CHECK(dp.matrix_entry(3, 2) == dp.posterior_mean_pmf(0));
  CHECK(dp.matrix_entry(4, 6) == dp.posterior_mean_pmf(3));
  const auto next = dp.predictive_next_state(3, 30);
  CHECK(next.first == 2);
  CHECK(next.probs[0] == dp.posterior_mean_pmf(0));
  CHECK(dp.predictive_next_state(0, 30).first == 0);
}

TEST_CASE("posterior mean pgf agrees with its series and respects the domain") {
  const auto dp = DeltaDirichletPosterior(1.0, BasePmf::geometric(0.5)).update_with_marks(marks("012321001"));
  const PosteriorMeanPgf pgf(dp);
  for (double z : {-1.5, 0.0, 0.3, 1.0, 1.8}) {
    double series = 0.0;
    double power = 1.0;
    for (std::uint64_t k = 0; k < 400; ++k, power *= z) series += dp.posterior_mean_pmf(k) * power;
    CHECK(pgf.value(z) == doctest::Approx(series).epsilon(1e-10));
    const double h = 1e-6;
    CHECK(pgf.derivative(z) == doctest::Approx((pgf.value(z + h) - pgf.value(z - h)) / (2 * h)).epsilon(1e-6));
  }
  CHECK(pgf.value(1.0) == doctest::Approx(1.0));
  CHECK(pgf.mean() == doctest::Approx(pgf.derivative(1.0)));
  CHECK_THROWS_AS(pgf.value(2.5), DomainError);
}

TEST_CASE("stationary pgf for an exact M/M/1 arrival law") {
  const ArrivalCountPgf a(ServiceDist::exponential(2.0), 1.0);
  for (double z : {0.0, 0.25, 0.5, 0.999999, 1.0}) {
    CHECK(pi_pgf(a, z) == doctest::Approx(0.5 / (1.0 - 0.5 * z)).epsilon(1e-8));
  }
  const ArrivalCountPgf heavy(ServiceDist::exponential(1.0), 1.5);
  CHECK_THROWS_AS(pi_pgf(heavy, 0.5), StabilityError);
}

TEST_CASE("path likelihood multiplies row entries over increments") {
  const std::vector<double> row{0.5, 0.3, 0.2};
  CHECK(path_likelihood(row, marks("0121")) == doctest::Approx(std::log(0.3 * 0.2 * 0.5)));
  CHECK(path_likelihood(row, marks("05")) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(path_likelihood(row, {}), InvalidArgument);
}

TEST_CASE("posterior draws have Dirichlet moments") {
  const auto dp = DeltaDirichletPosterior(2.0, BasePmf::geometric(0.5)).update_with_marks(marks("0121121001232101"));
  RandomStream rng(99);
  const int draws = 20000;
  std::vector<double> sum(4, 0.0), sq(4, 0.0);
  for (int d = 0; d < draws; ++d) {
    const auto row = dp.sample_posterior_pmf(200, rng);
    CHECK(std::accumulate(row.pmf.begin(), row.pmf.end(), 0.0) == doctest::Approx(1.0));
    for (std::size_t k = 0; k < 4; ++k) {
      const double v = k < row.pmf.size() ? row.pmf[k] : 0.0;
      sum[k] += v;
      sq[k] += v * v;
    }
  }
  const double concentration = 2.0 + static_cast<double>(dp.increment_total());
  for (std::size_t k = 0; k < 4; ++k) {
    const double m = dp.posterior_mean_pmf(k);
    const double mean = sum[k] / draws;
    CHECK(mean == doctest::Approx(m).epsilon(0.03));
    CHECK(sq[k] / draws - mean * mean == doctest::Approx(m * (1.0 - m) / (concentration + 1.0)).epsilon(0.1));
  }
}

TEST_CASE("a single stick gives a degenerate draw") {
  const DeltaDirichletPosterior dp(1.0, BasePmf::geometric(0.5));
  RandomStream rng(1);
  const auto row = dp.sample_posterior_pmf(1, rng);
  CHECK(*std::max_element(row.pmf.begin(), row.pmf.end()) == doctest::Approx(1.0));
  CHECK_THROWS_AS(dp.sample_posterior_pmf(0, rng), InvalidArgument);
}
