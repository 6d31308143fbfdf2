#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mg1/rng.hpp"
#include "mg1/service.hpp"

namespace mg1 {

struct SimConfig {
  double lambda = 1.0;
  ServiceDist service = ServiceDist::exponential(2.0);
  std::uint64_t n = 1000;
  std::uint64_t warmup = 1000;
  std::uint64_t seed = 0;

  /// Traffic intensity lambda * E[S].
  double rho() const { return lambda * service.mean(); }

  /// Throws InvalidArgument on bad values and StabilityError when rho >= 1.
  void validate() const;
};

/// One observation of the departure process: epoch and the number of
/// customers left behind.
struct MarkedDeparture {
  double t;
  std::uint64_t n;

  bool operator==(const MarkedDeparture&) const = default;
};

struct DeparturePath {
  std::vector<MarkedDeparture> records;
  SimConfig config;
};

struct ChainState {
  std::uint64_t n = 0;
  double t = 0.0;

  bool operator==(const ChainState&) const = default;
};

/// Independent draws for service times, arrival epochs and idle remainders,
/// all derived from one seed.
struct SimStreams {
  explicit SimStreams(std::uint64_t seed);

  RandomStream service;
  RandomStream arrivals;
  RandomStream idle;
};

/// Number of Poisson(lambda) arrivals in a service of the given length,
/// produced by walking exponential inter-arrival gaps across the interval.
std::uint64_t sample_arrivals_during_service(double service_time, double lambda, RandomStream& rng);

/// The embedded-chain recursion with all randomness supplied. `idle` is only
/// used when the system is empty.
ChainState advance(ChainState state, double service_time, std::uint64_t arrivals, double idle);

ChainState embedded_step(ChainState state, const SimConfig& config, SimStreams& streams);

/// Starts empty at t = 0, discards `warmup` departures, records `n`.
DeparturePath simulate_path(const SimConfig& config);

/// Departure file: header `t,n`, then `<t>,<n>` per record with t written in
/// shortest round-trip form.
void write_departures(std::ostream& out, std::span<const MarkedDeparture> records);

/// Throws CorruptData on malformed rows, non-increasing epochs, or marks that
/// drop by more than one.
std::vector<MarkedDeparture> read_departures(std::istream& in);

std::vector<double> interdeparture_times(std::span<const MarkedDeparture> records);
std::vector<std::uint32_t> marks_of(std::span<const MarkedDeparture> records);

}  // namespace mg1
