#include "cmf/rng.hpp"

#include <cmath>
#include <numbers>

namespace cmf {

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t RngSpec::stream_key() const {
  return mix64(mix64(master_seed) ^ (stream_index * 0xD1B54A32D192ED03ULL + 1));
}

CounterRng::CounterRng(const RngSpec& spec, StreamPurpose purpose)
    : key_(mix64(spec.stream_key() ^ static_cast<std::uint64_t>(purpose))) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::pair<double, double> CounterRng::normal_pair() {
  double u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log1p(-u1));
  double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace cmf
