#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace qprecode {

// splitmix64 finalizer; mixes a 64-bit state into a well-distributed output.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministically derived substream: stream i of a run keyed by (seed, i).
// Distinct (seed, stream) pairs land in distinct mt19937_64 seed values.
inline std::mt19937_64 derive_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1)));
}

// One draw from the standard circularly-symmetric complex Gaussian CN(0, 1):
// real and imaginary parts i.i.d. N(0, 1/2).
inline std::complex<double> cnormal(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace qprecode
