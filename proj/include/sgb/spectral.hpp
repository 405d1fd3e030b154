#pragma once

#include "sgb/field.hpp"
#include "sgb/lattice.hpp"
#include "sgb/params.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace sgb {

/// Which (squared) norm to evaluate. All are full-lattice sums.
struct Space {
  enum class Kind { H, V_theta, Q };
  Kind kind = Kind::H;
  double theta = 0.0;

  static Space H() { return {Kind::H, 0.0}; }
  static Space V() { return {Kind::V_theta, 1.0}; }
  static Space v_theta(double t) { return {Kind::V_theta, t}; }
  static Space Q() { return {Kind::Q, 0.0}; }
};

/// Mode-wise multiplier.
struct Diagonal {
  enum class Kind { semigroup, Q, Q_inverse, L_power };
  Kind kind;
  double param = 0.0;  // s for the semigroup, beta for L_power

  static Diagonal semigroup(double s) { return {Kind::semigroup, s}; }
  static Diagonal q() { return {Kind::Q, 0.0}; }
  static Diagonal q_inverse() { return {Kind::Q_inverse, 0.0}; }
  static Diagonal l_power(double beta) { return {Kind::L_power, beta}; }
};

/// Truncated lattice plus the diagonal operators L = lambda0 A^(delta+1) and
/// Q = A^(-sigma). Immutable after construction.
///
/// Weight arrays are laid out per double of the interleaved coefficient
/// storage and include the factor 2 that turns half-lattice sums into
/// full-lattice sums.
class Spectral {
 public:
  Spectral(const LatticeSpec& lattice, const ModelParams& params);

  const Lattice& lattice() const { return lattice_; }
  const ModelParams& params() const { return params_; }
  int dimension() const { return lattice_.dimension(); }

  /// Eigenvalue of L on half mode m: lambda0 |k|^(2(delta+1)).
  double eigenvalue(std::size_t mode) const { return eigen_[mode]; }
  /// |k|^(-2 sigma)
  double noise_factor(std::size_t mode) const { return qfac_[mode]; }
  /// Noise polarizations per full-lattice mode: 1 in d = 1, d - 1 otherwise.
  int polarizations() const { return dimension() == 1 ? 1 : dimension() - 1; }

  SpectralField zero() const { return SpectralField(lattice_); }

  std::span<const double> h_weight() const { return w_h_; }
  std::span<const double> v_weight() const { return w_v_; }
  std::span<const double> v_theta_weight() const { return w_vtheta_; }
  std::span<const double> q_norm_weight() const { return w_q_; }
  /// 2 |k|^(2 sigma): <Q^{-1} a, b>_H as a weighted dot.
  std::span<const double> q_inverse_dot_weight() const { return w_qinv_dot_; }
  /// |k|^(-2 sigma) per double.
  std::span<const double> q_factor() const { return d_q_; }
  /// lambda_k per double.
  std::span<const double> eigen_per_double() const { return d_eigen_; }

 private:
  Lattice lattice_;
  ModelParams params_;
  std::vector<double> eigen_;
  std::vector<double> qfac_;
  std::vector<double> w_h_, w_v_, w_vtheta_, w_q_, w_qinv_dot_, d_q_, d_eigen_;
};

/// Squared norm of u in the given space.
double norm_sq(const Spectral& s, const SpectralField& u, Space space = Space::H());
inline double norm(const Spectral& s, const SpectralField& u, Space space = Space::H()) {
  return std::sqrt(norm_sq(s, u, space));
}

/// Real inner product <u, v>_H = sum_k Re(u_k . conj(v_k)) over the full lattice.
double inner(const Spectral& s, const SpectralField& u, const SpectralField& v);

SpectralField apply_diagonal(const Spectral& s, const SpectralField& u, Diagonal op);

/// Drops k = 0 and, in d >= 2, applies (I - k k^T / |k|^2) mode-wise.
SpectralField leray_project(const Lattice& lattice, const RawField& raw);
/// In-place projection of the half-lattice part (k = 0 is never stored).
void leray_project_in_place(const Lattice& lattice, SpectralField& u);

/// sum over Z^d \ {0} of |k|^(-p), split as an explicit partial sum over
/// |k|_inf <= radius and an integral upper bound of the remainder.
struct LatticeSum {
  double partial = 0.0;
  double tail_bound = 0.0;
  int radius = 0;
  double upper() const { return partial + tail_bound; }
};
LatticeSum lattice_power_sum(int dimension, double p, int radius);

/// Constants of the structural bounds on Q and B for this model.
struct AssumptionConstants {
  double k1 = 0.0;            // lambda0^(-theta)
  double k2 = 0.0;            // 4^(2 delta theta + 1) / lambda0^(2 theta) * S(2(delta+1)theta), upper bound
  double k2_proof = 0.0;      // 2 (4^((delta+1)theta - 1) + 4^((delta+1)theta)) / lambda0^(2 theta) * S
  double c_a2 = 0.0;          // (1/lambda0) * S(2 delta), upper bound
  double q_op_norm = 0.0;     // max_k |k|^(-2 sigma)
  double q_hs_sq = 0.0;       // truncated lattice, governs the simulated noise
  double q_hs_sq_infinite = 0.0;
  LatticeSum k2_sum;
  LatticeSum c_a2_sum;
  LatticeSum hs_sum;

  /// max(k2, k2_proof): the constant the Q-norm bound on B is asserted against.
  double k2_asserted() const { return k2 > k2_proof ? k2 : k2_proof; }
};

AssumptionConstants compute_constants(const ModelParams& p, const LatticeSpec& lattice);

/// Complex Gaussian coefficients scaled by |k|^(-envelope_exponent), then
/// Leray-projected.
SpectralField random_field(const Spectral& s, std::mt19937_64& rng, double envelope_exponent);

/// Field with a single half mode set to amplitude * polarization(mode).
SpectralField mode_field(const Lattice& lattice, std::size_t mode, cplx amplitude);

}  // namespace sgb
