#pragma once

#include <cstdint>
#include <string>

namespace qepi {

// Deterministic counter-based generator. The stream is a function of
// (seed, stream, counter) only, so identical configurations reproduce
// identical draws on any platform. Algorithm: splitmix64 applied to the
// running counter, keyed by seed and stream id.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Identifier embedded in report headers.
  static const char* algorithm() { return "splitmix64-counter"; }

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Standard normal via Box-Muller (no cached spare; fully deterministic).
  double normal();

  // Independent child stream, for per-trial generators.
  Rng child(std::uint64_t stream) const;

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace qepi
