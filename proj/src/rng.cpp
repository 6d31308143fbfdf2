#include "mg1/rng.hpp"

#include <cmath>

namespace mg1 {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

RandomStream RandomStream::derive(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::uint64_t state = master_seed;
  const std::uint64_t base = splitmix64(state);
  state = base ^ (stream_id * 0xD1B54A32D192ED03ULL);
  splitmix64(state);
  return RandomStream(splitmix64(state));
}

double RandomStream::uniform() {
  // 53 random bits, shifted by half an ulp so neither 0 nor 1 is produced.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential(double rate) { return -std::log(uniform()) / rate; }

double RandomStream::gamma(double shape, double rate) {
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(engine_);
}

}  // namespace mg1
