#include "sgb/noise.hpp"

#include <cmath>
#include <random>

namespace sgb {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed) ^ (tag * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

SpectralField NoiseStream::increment(const Spectral& s, std::uint64_t step, double dt) const {
  SpectralField out = s.zero();
  increment_into(s, step, dt, out);
  return out;
}

void NoiseStream::increment_into(const Spectral& s, std::uint64_t step, double dt, SpectralField& out) const {
  out.require_lattice(s.lattice());
  out.set_zero();
  const Lattice& lat = s.lattice();
  const double scale = std::sqrt(0.5 * dt / static_cast<double>(substeps_));
  for (std::uint64_t sub = 0; sub < substeps_; ++sub) {
    const std::uint64_t fine = step * substeps_ + sub;
    const std::uint64_t key = mix64(mix64(mix64(seed_) ^ sample_) ^ (fine + 0x5851f42d4c957f2dULL));
    CounterEngine engine(key);
    std::normal_distribution<double> normal;
    for (std::size_t m = 0; m < lat.half_size(); ++m) {
      const double re = normal(engine);
      const double im = normal(engine);
      const cplx z(scale * re, scale * im);
      const auto pol = polarization(lat, m);
      for (int c = 0; c < lat.dimension(); ++c) out.at(m, c) += z * pol[c];
    }
  }
}

}  // namespace sgb
