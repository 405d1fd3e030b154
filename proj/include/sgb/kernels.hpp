#pragma once

// Flat arithmetic kernels behind the spectral operators.
//
// Every kernel has a scalar reference implementation; SIMD variants must agree
// with it to rounding (see tests/test_kernels.cpp). The active variant is
// chosen once at startup from the CPU features and can be overridden with the
// SGB_ISA environment variable ("scalar", "avx2") or select_isa().

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sgb::kernels {

/// Pair tables of the Galerkin convolution
///   out_l = i * sum_{(a, b) in pairs(l)} (u_a . m_b) v_b,
/// where a is the full index of l - m and b the full index of m. Arrays are
/// structure-of-arrays; `m_coord[c * pair_count + p]` is component c of m.
struct ConvolutionTables {
  int dimension = 1;
  std::size_t output_count = 0;   // half-lattice modes
  std::size_t full_extent = 0;    // stride of the full-lattice input arrays
  std::span<const std::uint32_t> offsets;  // output_count + 1
  std::span<const std::int32_t> a_index;
  std::span<const std::int32_t> b_index;
  std::span<const double> m_coord;
};

/// Full-lattice inputs, component-major: re[c * full_extent + f].
struct FullFieldView {
  const double* re;
  const double* im;
};

struct KernelTable {
  std::string_view name;

  /// sum_i w_i x_i^2
  double (*weighted_sumsq)(const double* w, const double* x, std::size_t n);
  /// sum_i w_i x_i y_i
  double (*weighted_dot)(const double* w, const double* x, const double* y, std::size_t n);
  /// out_i = w_i x_i (out may alias x)
  void (*scale)(const double* w, const double* x, double* out, std::size_t n);
  /// out_i = damp_i * (x_i + drift_coef * drift_i + noise_w_i * noise_i)
  /// `drift` and `noise` may be null (treated as zero).
  void (*damped_update)(const double* damp, const double* x, double drift_coef, const double* drift,
                        const double* noise_w, const double* noise, double* out, std::size_t n);
  /// Interleaved complex output, `dimension` components per half mode.
  void (*convolve)(const ConvolutionTables& t, FullFieldView u, FullFieldView v, double* out);
};

enum class Isa { scalar, avx2 };

const KernelTable& scalar_table();
/// Null when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table();

std::vector<Isa> available_isas();
const KernelTable& table_for(Isa isa);

/// Active table used by the spectral operators.
const KernelTable& active();
Isa active_isa();
/// Throws sgb::Error if the ISA is unavailable.
void select_isa(Isa isa);
std::string_view isa_name(Isa isa);

}  // namespace sgb::kernels
