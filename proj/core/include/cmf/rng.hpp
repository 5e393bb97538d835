#pragma once

// Counter-based random streams for reproducible Monte Carlo.
//
// Every trial owns a stream identified by (master_seed, stream_index). The
// stream key is
//
//   key = mix64(mix64(master_seed) ^ (stream_index * 0xD1B54A32D192ED03 + 1))
//
// and sub-streams for independent uses (sample locations, noise, scene truth)
// are keyed by mix64(key ^ purpose_tag). The n-th 64-bit word of a stream is
// mix64(key + n * 0x9E3779B97F4A7C15), so any draw is a pure function of its
// position and trials can run in any order or on any thread.
//
// mix64 is the SplitMix64 finaliser. Uniform doubles take the top 53 bits.
// Standard normals come in pairs from Box-Muller, consuming two uniforms:
// u1 -> radius sqrt(-2 log(1 - u1)), u2 -> angle 2 pi u2, returning
// (r cos, r sin).

#include <cstdint>
#include <utility>

namespace cmf {

std::uint64_t mix64(std::uint64_t x);

struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  std::uint64_t stream_key() const;
  bool operator==(const RngSpec&) const = default;
};

enum class StreamPurpose : std::uint64_t {
  Locations = 0x4c4f43415449304eULL,
  Noise = 0x4e4f495345303030ULL,
  Truth = 0x5452555448303030ULL,
};

class CounterRng {
 public:
  CounterRng(const RngSpec& spec, StreamPurpose purpose);
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform01();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Two independent standard normals.
  std::pair<double, double> normal_pair();

  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cmf
