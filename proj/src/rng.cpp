#include "growthcast/rng.hpp"

#include <stdexcept>

namespace growthcast {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double RandomStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RandomStream::uniform(double low, double high) {
  if (!(low < high)) {
    throw std::invalid_argument("RandomStream::uniform: low must be < high");
  }
  return std::uniform_real_distribution<double>(low, high)(engine_);
}

double RandomStream::uniform_positive() { return 1.0 - uniform(); }

double RandomStream::normal() {
  return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

double RandomStream::normal(double mean, double sd) {
  if (!(sd > 0.0)) {
    throw std::invalid_argument("RandomStream::normal: sd must be > 0");
  }
  return mean + sd * normal();
}

double RandomStream::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("RandomStream::gamma: parameters must be > 0");
  }
  return std::gamma_distribution<double>(shape, scale)(engine_);
}

RandomStream RandomStream::derive(std::uint64_t stream) const {
  return RandomStream(splitmix64(seed_ ^ splitmix64(stream + 1)));
}

}  // namespace growthcast
