#include "mg1/sim.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "mg1/errors.hpp"
#include "mg1/text_format.hpp"

namespace mg1 {

namespace {
constexpr std::uint64_t kServiceStream = 1;
constexpr std::uint64_t kArrivalStream = 2;
constexpr std::uint64_t kIdleStream = 3;
}  // namespace

void SimConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive");
  if (n == 0) throw InvalidArgument("n must be at least 1");
  const double r = rho();
  if (!(r < 1.0)) {
    throw StabilityError("unstable system: rho = " + format_double(r) + " >= 1", r);
  }
}

SimStreams::SimStreams(std::uint64_t seed)
    : service(RandomStream::derive(seed, kServiceStream)),
      arrivals(RandomStream::derive(seed, kArrivalStream)),
      idle(RandomStream::derive(seed, kIdleStream)) {}

std::uint64_t sample_arrivals_during_service(double service_time, double lambda, RandomStream& rng) {
  std::uint64_t count = 0;
  double clock = rng.exponential(lambda);
  while (clock <= service_time) {
    ++count;
    clock += rng.exponential(lambda);
  }
  return count;
}

ChainState advance(ChainState state, double service_time, std::uint64_t arrivals, double idle) {
  if (state.n == 0) return {arrivals, state.t + idle + service_time};
  return {state.n + arrivals - 1, state.t + service_time};
}

ChainState embedded_step(ChainState state, const SimConfig& config, SimStreams& streams) {
  const double idle = state.n == 0 ? streams.idle.exponential(config.lambda) : 0.0;
  const double service_time = config.service.sample(streams.service);
  const auto arrivals = sample_arrivals_during_service(service_time, config.lambda, streams.arrivals);
  return advance(state, service_time, arrivals, idle);
}

DeparturePath simulate_path(const SimConfig& config) {
  config.validate();
  SimStreams streams(config.seed);
  ChainState state;
  for (std::uint64_t i = 0; i < config.warmup; ++i) state = embedded_step(state, config, streams);

  DeparturePath path{{}, config};
  path.records.reserve(config.n);
  for (std::uint64_t i = 0; i < config.n; ++i) {
    state = embedded_step(state, config, streams);
    path.records.push_back({state.t, state.n});
  }
  return path;
}

void write_departures(std::ostream& out, std::span<const MarkedDeparture> records) {
  out << "t,n\n";
  for (const auto& r : records) out << format_double(r.t) << ',' << r.n << '\n';
}

std::vector<MarkedDeparture> read_departures(std::istream& in) {
  std::vector<MarkedDeparture> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != "t,n") throw CorruptData("departure file must start with header 't,n'");
      header_seen = true;
      continue;
    }
    const auto fields = split(text, ',');
    if (fields.size() != 2) {
      throw CorruptData("line " + std::to_string(line_no) + ": expected '<t>,<n>'");
    }
    MarkedDeparture rec{};
    try {
      rec.t = parse_double(fields[0]);
      rec.n = parse_uint(fields[1]);
    } catch (const InvalidArgument& e) {
      throw CorruptData("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!std::isfinite(rec.t)) throw CorruptData("line " + std::to_string(line_no) + ": non-finite epoch");
    if (rec.n > std::numeric_limits<std::uint32_t>::max()) {
      throw CorruptData("line " + std::to_string(line_no) + ": mark out of range");
    }
    if (!records.empty()) {
      const auto& prev = records.back();
      if (!(rec.t > prev.t)) {
        throw CorruptData("line " + std::to_string(line_no) + ": departure epochs must strictly increase");
      }
      if (prev.n > rec.n + 1) {
        throw CorruptData("line " + std::to_string(line_no) + ": mark drops by more than one");
      }
    }
    records.push_back(rec);
  }
  return records;
}

std::vector<double> interdeparture_times(std::span<const MarkedDeparture> records) {
  std::vector<double> out;
  if (records.size() < 2) return out;
  out.reserve(records.size() - 1);
  for (std::size_t i = 1; i < records.size(); ++i) out.push_back(records[i].t - records[i - 1].t);
  return out;
}

std::vector<std::uint32_t> marks_of(std::span<const MarkedDeparture> records) {
  std::vector<std::uint32_t> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(static_cast<std::uint32_t>(r.n));
  return out;
}

}  // namespace mg1
