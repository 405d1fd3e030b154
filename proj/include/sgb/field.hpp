#pragma once

#include "sgb/lattice.hpp"

#include <complex>
#include <span>
#include <vector>

namespace sgb {

using cplx = std::complex<double>;

/// Fourier coefficients of a real, mean-free vector field on the torus.
///
/// Only half-lattice modes are stored (`dimension` complex components per
/// mode, mode-major); the partner coefficient is u_{-k} = conj(u_k), so the
/// reality condition holds by construction. Full-lattice sums over |u_k|^2
/// therefore equal twice the stored sums.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const Lattice& lattice)
      : spec_(lattice.spec()),
        coeffs_(lattice.half_size() * static_cast<std::size_t>(lattice.dimension())) {}

  const LatticeSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension; }
  std::size_t mode_count() const {
    return spec_.dimension == 0 ? 0 : coeffs_.size() / static_cast<std::size_t>(spec_.dimension);
  }

  cplx& at(std::size_t mode, int component = 0) { return coeffs_[mode * spec_.dimension + component]; }
  const cplx& at(std::size_t mode, int component = 0) const {
    return coeffs_[mode * spec_.dimension + component];
  }

  std::span<cplx> coeffs() { return coeffs_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  /// Interleaved (re, im) view for the flat kernels.
  std::span<double> doubles() { return {reinterpret_cast<double*>(coeffs_.data()), 2 * coeffs_.size()}; }
  std::span<const double> doubles() const {
    return {reinterpret_cast<const double*>(coeffs_.data()), 2 * coeffs_.size()};
  }

  /// Coefficient at an arbitrary lattice point (zero at k = 0 and outside).
  cplx value_at(const Lattice& lattice, const Mode& k, int component = 0) const;

  bool same_lattice(const SpectralField& other) const { return spec_ == other.spec_; }
  void require_same_lattice(const SpectralField& other) const;
  void require_lattice(const Lattice& lattice) const;

  void set_zero();

  SpectralField& operator+=(const SpectralField& rhs);
  SpectralField& operator-=(const SpectralField& rhs);
  SpectralField& operator*=(double s);
  /// this += s * x
  SpectralField& add_scaled(double s, const SpectralField& x);

  bool operator==(const SpectralField&) const = default;

 private:
  LatticeSpec spec_{0, 0};  // default-constructed: on no lattice
  std::vector<cplx> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Unit polarization of a half mode: 1 in d = 1, k_perp/|k| = (-k2, k1)/|k|
/// in d = 2. Setting u_k = a * polarization gives a divergence-free mode.
std::array<double, kMaxDimension> polarization(const Lattice& lattice, std::size_t mode);

/// Largest |k . u_k| / (|k| |u_k|) over modes with u_k != 0 (0 in d = 1).
double divergence_defect(const Lattice& lattice, const SpectralField& u);

/// Per-mode vectors that are not yet in H: may carry a k = 0 component and a
/// gradient part. Same half-lattice layout as SpectralField.
struct RawField {
  explicit RawField(const Lattice& lattice)
      : zero_mode(static_cast<std::size_t>(lattice.dimension())), half(lattice) {}

  std::vector<cplx> zero_mode;
  SpectralField half;
};

}  // namespace sgb
