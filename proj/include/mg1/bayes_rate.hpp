#pragma once

#include <span>

#include "mg1/rng.hpp"

namespace mg1 {

/// Gamma(shape, rate) law of the departure rate. The update is the
/// exponential-likelihood conjugate step: (a, b) -> (a + n, b + sum d).
class GammaPosterior {
 public:
  GammaPosterior(double shape, double rate);

  double shape() const { return shape_; }
  double rate() const { return rate_; }

  /// Throws InvalidArgument on a non-positive or non-finite duration.
  GammaPosterior update(std::span<const double> durations) const;

  double mean() const { return shape_ / rate_; }
  double variance() const { return shape_ / (rate_ * rate_); }

  /// Lomax density of the next interdeparture time, a b^a / (b + x)^(a+1).
  double predictive_density(double x) const;
  /// b / (a - 1); throws InvalidArgument when a <= 1 (the mean is infinite).
  double predictive_mean() const;

  /// Markov-inequality lower bound on P(|lambda - target| <= eps) under this law.
  double mass_near_lower_bound(double target, double eps) const;

  double sample(RandomStream& rng) const { return rng.gamma(shape_, rate_); }

  bool operator==(const GammaPosterior&) const = default;

 private:
  double shape_;
  double rate_;
};

}  // namespace mg1
