#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mg1/service.hpp"

namespace mg1 {

/// Closed interval of arguments at which a generating function may be evaluated.
struct PgfDomain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double z) const { return z >= lo && z <= hi; }
  std::string describe() const;
};

/// Probability generating function of a law on the non-negative integers.
class Pgf {
 public:
  virtual ~Pgf() = default;

  virtual double value(double z) const = 0;
  virtual double derivative(double z) const = 0;
  /// First moment; equals derivative(1) but may be computed by a separate route.
  virtual double mean() const = 0;
  virtual PgfDomain domain() const = 0;

  /// Throws DomainError (carrying the violated bound) when z is outside domain().
  void require_in_domain(double z) const;
};

/// Generating function of an explicit finite pmf (index = value).
class FinitePmfPgf final : public Pgf {
 public:
  explicit FinitePmfPgf(std::vector<double> pmf);

  double value(double z) const override;
  double derivative(double z) const override;
  double mean() const override;
  PgfDomain domain() const override { return {}; }

  const std::vector<double>& pmf() const { return pmf_; }

 private:
  std::vector<double> pmf_;
};

/// Arrivals during one service: a(z) = g(lambda (1 - z)) with g the service LST.
class ArrivalCountPgf final : public Pgf {
 public:
  ArrivalCountPgf(ServiceDist service, double lambda);

  double value(double z) const override;
  double derivative(double z) const override;
  double mean() const override { return lambda_ * service_.mean(); }
  PgfDomain domain() const override;

  const ServiceDist& service() const { return service_; }
  double lambda() const { return lambda_; }

 private:
  ServiceDist service_;
  double lambda_;
};

}  // namespace mg1
