#include "mg1/bayes_rate.hpp"

#include <algorithm>
#include <cmath>

#include "mg1/errors.hpp"
#include "mg1/text_format.hpp"

namespace mg1 {

GammaPosterior::GammaPosterior(double shape, double rate) : shape_(shape), rate_(rate) {
  if (!(shape > 0.0) || !std::isfinite(shape) || !(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidArgument("gamma parameters must be positive and finite");
  }
}

GammaPosterior GammaPosterior::update(std::span<const double> durations) const {
  double total = 0.0;
  for (double d : durations) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw InvalidArgument("interdeparture time must be positive, got " + format_double(d));
    }
    total += d;
  }
  return GammaPosterior(shape_ + static_cast<double>(durations.size()), rate_ + total);
}

double GammaPosterior::predictive_density(double x) const {
  if (x < 0.0) return 0.0;
  // log form keeps large shapes finite
  return std::exp(std::log(shape_) + shape_ * std::log(rate_) - (shape_ + 1.0) * std::log(rate_ + x));
}

double GammaPosterior::predictive_mean() const {
  if (!(shape_ > 1.0)) {
    throw InvalidArgument("predictive mean undefined for shape " + format_double(shape_) + " <= 1");
  }
  return rate_ / (shape_ - 1.0);
}

double GammaPosterior::mass_near_lower_bound(double target, double eps) const {
  // E[(lambda - target)^2] = var + (mean - target)^2
  const double bias = mean() - target;
  const double second_moment = variance() + bias * bias;
  return std::max(0.0, 1.0 - second_moment / (eps * eps));
}

}  // namespace mg1
