#pragma once

#include <cstdint>
#include <random>

namespace mg1 {

/// SplitMix64 step; advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// A seeded 64-bit Mersenne Twister stream. Independent streams are derived
/// from one master seed and a stream id, so adding a stream never shifts the
/// draws of another.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  static RandomStream derive(std::uint64_t master_seed, std::uint64_t stream_id);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double exponential(double rate);
  double gamma(double shape, double rate);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mg1
