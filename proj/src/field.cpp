#include "sgb/field.hpp"

#include "sgb/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sgb {

namespace {

std::string describe(const LatticeSpec& s) {
  return "(d=" + std::to_string(s.dimension) + ", N=" + std::to_string(s.cutoff) + ")";
}

}  // namespace

cplx SpectralField::value_at(const Lattice& lattice, const Mode& k, int component) const {
  const auto slot = lattice.locate(k);
  if (!slot) return {};
  const cplx v = at(slot->half_index, component);
  return slot->conjugate ? std::conj(v) : v;
}

void SpectralField::require_same_lattice(const SpectralField& other) const {
  if (!same_lattice(other)) {
    throw LatticeMismatch("field lattices differ: " + describe(spec_) + " vs " + describe(other.spec_));
  }
}

void SpectralField::require_lattice(const Lattice& lattice) const {
  if (spec_ != lattice.spec()) {
    throw LatticeMismatch("field lattice " + describe(spec_) + " does not match model lattice " +
                          describe(lattice.spec()));
  }
}

void SpectralField::set_zero() { std::fill(coeffs_.begin(), coeffs_.end(), cplx{}); }

SpectralField& SpectralField::operator+=(const SpectralField& rhs) {
  require_same_lattice(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& rhs) {
  require_same_lattice(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::add_scaled(double s, const SpectralField& x) {
  require_same_lattice(x);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * x.coeffs_[i];
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

std::array<double, kMaxDimension> polarization(const Lattice& lattice, std::size_t mode) {
  if (lattice.dimension() == 1) return {1.0, 0.0};
  const Mode& k = lattice.mode(mode);
  const double n = std::sqrt(lattice.mode_norm_sq(mode));
  return {-k[1] / n, k[0] / n};
}

double divergence_defect(const Lattice& lattice, const SpectralField& u) {
  if (lattice.dimension() == 1) return 0.0;
  double worst = 0.0;
  for (std::size_t m = 0; m < lattice.half_size(); ++m) {
    const Mode& k = lattice.mode(m);
    cplx dot{};
    double mag2 = 0.0;
    for (int c = 0; c < lattice.dimension(); ++c) {
      dot += u.at(m, c) * static_cast<double>(k[c]);
      mag2 += std::norm(u.at(m, c));
    }
    if (mag2 == 0.0) continue;
    worst = std::max(worst, std::abs(dot) / (std::sqrt(lattice.mode_norm_sq(m)) * std::sqrt(mag2)));
  }
  return worst;
}

}  // namespace sgb
