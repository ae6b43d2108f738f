#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ldperm {

// splitmix64 finalizer: a cheap, well-mixed 64-bit permutation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive a substream key from a master seed and up to two labels.
// Distinct (master, a, b) triples give statistically independent streams.
inline std::uint64_t stream_key(std::uint64_t master, std::uint64_t a,
                                std::uint64_t b = 0) {
  return mix64(mix64(mix64(master) ^ a) ^ b);
}

// Counter-based random substream.  Draw i of the stream is a pure function of
// (key, i), so any consumer can be replayed from its key alone; no generator
// state is shared between streams.  Normals come from Box-Muller (the sine
// twin is discarded to keep every draw a pure function of the counter).
class SubstreamRng {
 public:
  explicit SubstreamRng(std::uint64_t key) : key_(key) {}
  SubstreamRng(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0)
      : key_(stream_key(master, a, b)) {}

  std::uint64_t next_u64() { return mix64(key_ ^ mix64(counter_++)); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_open() { return 1.0 - uniform(); }

  double normal(double stddev = 1.0) {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return stddev * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform integer in [0, n).  Modulo bias is < n / 2^64, irrelevant here.
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ldperm
