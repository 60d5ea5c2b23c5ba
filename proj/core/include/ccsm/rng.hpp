#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ccsm {

// SplitMix64 generator (Steele, Lea, Flood 2014). Chosen because its output
// sequence is fully determined by the seed arithmetic below, independent of
// platform and standard library, and because seeding a new generator from a
// (seed, stream) pair gives cheap independent streams: trial i of a benchmark
// uses stream(seed, i) and is unaffected by how many trials run before it.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_index) {
    SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ULL * (stream_index + 1)));
    return SplitMix64(mixer.next_u64());
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  int uniform_int(int lo, int hi) {  // inclusive on both ends
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Box-Muller; implemented here rather than via std::normal_distribution so
  // the drawn sequence is identical on every platform.
  double normal(double mean, double stddev) {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace ccsm
