#pragma once

#include <cstdint>
#include <random>

namespace growthcast {

// Seeded random stream. All stochastic code in the library draws through
// this wrapper so that a run is reproducible from a single integer seed.
// Distribution objects are constructed per call; the only state carried
// between calls is the underlying engine.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Uniform on [0, 1).
  double uniform();
  // Uniform on [low, high).
  double uniform(double low, double high);
  // Uniform on (0, 1], safe to pass through log().
  double uniform_positive();
  double normal();
  double normal(double mean, double sd);
  // Gamma with the given shape and scale (mean = shape * scale).
  double gamma(double shape, double scale);

  std::uint64_t seed() const { return seed_; }

  // Independent substream for a worker identified by `stream`. Derivation
  // is a splitmix64 hash of (seed, stream), so substreams are stable across
  // runs and do not overlap for distinct ids in any way that matters.
  RandomStream derive(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace growthcast
