#include "mg1/pgf.hpp"

#include <cmath>

#include "mg1/errors.hpp"
#include "mg1/text_format.hpp"

namespace mg1 {

std::string PgfDomain::describe() const {
  return "[" + format_double(lo) + "," + format_double(hi) + "]";
}

void Pgf::require_in_domain(double z) const {
  const auto d = domain();
  if (d.contains(z)) return;
  const double bound = z < d.lo ? d.lo : d.hi;
  throw DomainError("argument " + format_double(z) + " outside generating-function domain " + d.describe(),
                    bound);
}

FinitePmfPgf::FinitePmfPgf(std::vector<double> pmf) : pmf_(std::move(pmf)) {
  for (double p : pmf_) {
    if (!(p >= 0.0)) throw InvalidArgument("pmf entries must be non-negative");
  }
}

double FinitePmfPgf::value(double z) const {
  double acc = 0.0;
  for (auto it = pmf_.rbegin(); it != pmf_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double FinitePmfPgf::derivative(double z) const {
  double acc = 0.0;
  for (std::size_t k = pmf_.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * pmf_[k];
  return acc;
}

double FinitePmfPgf::mean() const {
  double m = 0.0;
  for (std::size_t k = 1; k < pmf_.size(); ++k) m += static_cast<double>(k) * pmf_[k];
  return m;
}

ArrivalCountPgf::ArrivalCountPgf(ServiceDist service, double lambda)
    : service_(std::move(service)), lambda_(lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("arrival rate must be positive");
}

double ArrivalCountPgf::value(double z) const {
  require_in_domain(z);
  return service_.lst(lambda_ * (1.0 - z));
}

double ArrivalCountPgf::derivative(double z) const {
  require_in_domain(z);
  return -lambda_ * service_.lst_derivative(lambda_ * (1.0 - z));
}

PgfDomain ArrivalCountPgf::domain() const {
  // lambda (1 - z) must stay right of the LST abscissa, which is a pole.
  const double abscissa = service_.lst_abscissa();
  PgfDomain d;
  if (std::isfinite(abscissa)) d.hi = 1.0 - abscissa / lambda_ - 1e-9;
  return d;
}

}  // namespace mg1
