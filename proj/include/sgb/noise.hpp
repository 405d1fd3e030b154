#pragma once

#include "sgb/spectral.hpp"

#include <cstdint>
#include <limits>

namespace sgb {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of an independent stream derived from a base seed and a tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Counter-based uniform bit generator: the output sequence is a pure
/// function of the key, so any (seed, sample, step) triple can be generated
/// independently of every other.
class CounterEngine {
 public:
  using result_type = std::uint64_t;
  explicit CounterEngine(std::uint64_t key) : key_(key) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Increments of the cylindrical Brownian motion restricted to the lattice.
///
/// Per half mode: dW_k = (xi + i zeta) sqrt(dt/2) times the unit polarization,
/// xi, zeta iid standard normal; dW_{-k} = conj(dW_k). The increment of step
/// n of sample j depends only on (seed, j, n).
///
/// With substeps = s > 1, step n is the sum of the fine increments
/// s n .. s n + s - 1 of width dt/s, so a run with M steps and s = 2 sees the
/// same Brownian path as a run with 2M steps and s = 1.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t sample_index, std::uint64_t substeps = 1)
      : seed_(seed), sample_(sample_index), substeps_(substeps == 0 ? 1 : substeps) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t sample_index() const { return sample_; }
  std::uint64_t substeps() const { return substeps_; }

  SpectralField increment(const Spectral& s, std::uint64_t step, double dt) const;
  void increment_into(const Spectral& s, std::uint64_t step, double dt, SpectralField& out) const;

 private:
  std::uint64_t seed_;
  std::uint64_t sample_;
  std::uint64_t substeps_;
};

}  // namespace sgb
