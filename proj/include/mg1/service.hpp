#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mg1/rng.hpp"

namespace mg1 {

struct Exponential {
  double rate;
};

struct Erlang {
  unsigned shape;
  double rate;
};

struct Deterministic {
  double value;
};

struct HyperExponential {
  std::vector<double> weights;
  std::vector<double> rates;
};

/// Service-time law G. Parameters are validated on construction; an
/// instance always has a finite, strictly positive mean.
class ServiceDist {
 public:
  using Family = std::variant<Exponential, Erlang, Deterministic, HyperExponential>;

  explicit ServiceDist(Family family);

  static ServiceDist exponential(double rate) { return ServiceDist(Exponential{rate}); }
  static ServiceDist erlang(unsigned shape, double rate) { return ServiceDist(Erlang{shape, rate}); }
  static ServiceDist deterministic(double value) { return ServiceDist(Deterministic{value}); }
  static ServiceDist hyper_exponential(std::vector<double> weights, std::vector<double> rates) {
    return ServiceDist(HyperExponential{std::move(weights), std::move(rates)});
  }

  /// Grammar: `exp:<mu>`, `erlang:<k>,<mu>`, `det:<d>`,
  /// `hyper:<w1>,<mu1>;<w2>,<mu2>[;...]`.
  static ServiceDist parse(std::string_view text);
  std::string to_string() const;

  const Family& family() const { return family_; }

  double mean() const;
  double variance() const;
  double sample(RandomStream& rng) const;

  /// Laplace-Stieltjes transform E[exp(-s S)]; finite for s > lst_abscissa().
  double lst(double s) const;
  double lst_derivative(double s) const;
  /// Left edge of the region where the LST is finite (-inf for bounded service).
  double lst_abscissa() const;

  bool has_density() const;
  /// Density of an absolutely continuous family; throws for Deterministic.
  double density(double t) const;

 private:
  Family family_;
};

}  // namespace mg1
