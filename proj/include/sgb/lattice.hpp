#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sgb {

inline constexpr int kMaxDimension = 2;

/// Truncation geometry: modes k in Z^d \ {0} with |k|_inf <= cutoff.
struct LatticeSpec {
  int dimension = 1;
  int cutoff = 4;

  bool operator==(const LatticeSpec&) const = default;
};

using Mode = std::array<int, kMaxDimension>;

/// Half-lattice enumeration of the truncated punctured lattice.
///
/// The full lattice {-N..N}^d is traversed in lexicographic order of the
/// coordinates (first coordinate slowest). A mode is kept as a half-lattice
/// representative iff its first non-zero coordinate is positive, so every pair
/// {k, -k} is represented exactly once and k = 0 never is. Half-lattice order
/// is the order of first appearance in that traversal.
///
/// The full index of a mode is its row-major position in {-N..N}^d; it is used
/// by the convolution tables. Full index `center()` is k = 0.
class Lattice {
 public:
  explicit Lattice(LatticeSpec spec);

  const LatticeSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension; }
  int cutoff() const { return spec_.cutoff; }

  std::size_t half_size() const { return half_modes_.size(); }
  std::size_t full_extent() const { return full_extent_; }
  std::size_t center() const { return full_extent_ / 2; }

  const Mode& mode(std::size_t half_index) const { return half_modes_[half_index]; }
  /// |k|^2 (Euclidean) of a half-lattice mode.
  double mode_norm_sq(std::size_t half_index) const { return norm_sq_[half_index]; }

  std::size_t full_index(const Mode& k) const;
  std::size_t full_index_of_half(std::size_t half_index) const { return half_to_full_[half_index]; }
  Mode mode_of_full(std::size_t full_index) const;

  /// Half index representing +k or -k; `conjugate` is set when k is the
  /// negative partner. Empty for k = 0 or k outside the truncation.
  struct Slot {
    std::size_t half_index;
    bool conjugate;
  };
  std::optional<Slot> locate(const Mode& k) const;
  std::optional<Slot> locate_full(std::size_t full_index) const;

  bool contains(const Mode& k) const;

  bool operator==(const Lattice& other) const { return spec_ == other.spec_; }

 private:
  LatticeSpec spec_;
  std::size_t full_extent_ = 0;
  std::vector<Mode> half_modes_;
  std::vector<double> norm_sq_;
  std::vector<std::size_t> half_to_full_;
  // Per full index: half index, or -1 for k = 0; sign bit stored separately.
  std::vector<std::int64_t> full_to_half_;
  std::vector<std::uint8_t> full_is_conjugate_;
};

}  // namespace sgb
