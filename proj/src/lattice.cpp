#include "sgb/lattice.hpp"

#include "sgb/error.hpp"

#include <string>

namespace sgb {

namespace {

bool is_positive_representative(const Mode& k, int dimension) {
  for (int i = 0; i < dimension; ++i) {
    if (k[i] != 0) return k[i] > 0;
  }
  return false;
}

}  // namespace

Lattice::Lattice(LatticeSpec spec) : spec_(spec) {
  if (spec.dimension < 1 || spec.dimension > kMaxDimension) {
    throw ParameterError("dimension must be 1 or 2, got " + std::to_string(spec.dimension));
  }
  if (spec.cutoff < 1) {
    throw ParameterError("cutoff must be >= 1, got " + std::to_string(spec.cutoff));
  }
  const std::size_t side = 2 * static_cast<std::size_t>(spec.cutoff) + 1;
  full_extent_ = spec.dimension == 1 ? side : side * side;
  full_to_half_.assign(full_extent_, -1);
  full_is_conjugate_.assign(full_extent_, 0);

  for (std::size_t f = 0; f < full_extent_; ++f) {
    const Mode k = mode_of_full(f);
    if (!is_positive_representative(k, spec.dimension)) continue;
    double n2 = 0.0;
    for (int i = 0; i < spec.dimension; ++i) n2 += static_cast<double>(k[i]) * k[i];
    full_to_half_[f] = static_cast<std::int64_t>(half_modes_.size());
    half_modes_.push_back(k);
    norm_sq_.push_back(n2);
    half_to_full_.push_back(f);
  }
  for (std::size_t h = 0; h < half_modes_.size(); ++h) {
    Mode neg{};
    for (int i = 0; i < spec.dimension; ++i) neg[i] = -half_modes_[h][i];
    const std::size_t f = full_index(neg);
    full_to_half_[f] = static_cast<std::int64_t>(h);
    full_is_conjugate_[f] = 1;
  }
}

std::size_t Lattice::full_index(const Mode& k) const {
  const std::size_t side = 2 * static_cast<std::size_t>(spec_.cutoff) + 1;
  std::size_t idx = 0;
  for (int i = 0; i < spec_.dimension; ++i) {
    idx = idx * side + static_cast<std::size_t>(k[i] + spec_.cutoff);
  }
  return idx;
}

Mode Lattice::mode_of_full(std::size_t full_index) const {
  const std::size_t side = 2 * static_cast<std::size_t>(spec_.cutoff) + 1;
  Mode k{};
  for (int i = spec_.dimension - 1; i >= 0; --i) {
    k[i] = static_cast<int>(full_index % side) - spec_.cutoff;
    full_index /= side;
  }
  return k;
}

bool Lattice::contains(const Mode& k) const {
  for (int i = 0; i < spec_.dimension; ++i) {
    if (k[i] < -spec_.cutoff || k[i] > spec_.cutoff) return false;
  }
  return true;
}

std::optional<Lattice::Slot> Lattice::locate(const Mode& k) const {
  if (!contains(k)) return std::nullopt;
  return locate_full(full_index(k));
}

std::optional<Lattice::Slot> Lattice::locate_full(std::size_t full_index) const {
  const std::int64_t h = full_to_half_[full_index];
  if (h < 0) return std::nullopt;
  return Slot{static_cast<std::size_t>(h), full_is_conjugate_[full_index] != 0};
}

}  // namespace sgb
