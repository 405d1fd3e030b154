#pragma once

#include "sgb/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sgb {

/// Galerkin-truncated convection term
///   B(u, v)_l = P [ i * sum_{m != l} (u_{l-m} . m) v_m ],   |l|_inf <= N,
/// by direct convolution over the lattice. Output modes beyond the cutoff
/// are dropped and the result is Leray-projected.
SpectralField bilinear_b(const Model& model, const SpectralField& u, const SpectralField& v);

/// Allocation-free variant; `out` must already live on the model lattice.
void bilinear_b_into(const Model& model, const SpectralField& u, const SpectralField& v, SpectralField& out);

/// B(u, v) + B(v, u).
SpectralField b_tilde(const Model& model, const SpectralField& u, const SpectralField& v);
void b_tilde_into(const Model& model, const SpectralField& u, const SpectralField& v, SpectralField& out);

/// Worst observed ratio of one structural inequality over the sampled pairs.
struct InequalityStat {
  std::string name;
  std::string statement;
  double worst_ratio = 0.0;
  double threshold = 1.0;  // pass iff worst_ratio <= threshold
  bool asserted = true;     // informational entries never fail the report
  bool pass() const { return worst_ratio <= threshold; }
};

struct AssumptionReport {
  LatticeSpec lattice;
  ModelParams params;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  AssumptionConstants constants;
  /// q_coercivity, skew_symmetry, h_bound, q_bound (asserted with the larger
  /// of the two K2 candidates), q_bound_k2_stated and q_bound_k2_proof.
  std::vector<InequalityStat> inequalities;

  bool pass() const;
};

/// Draws n_samples field pairs (enveloped |k|^-(delta+2) and un-enveloped,
/// both Leray-projected) and checks
///   ||u||_Q^2 <= K1 ||u||_{V_theta}^2
///   |<v, B(v,v)>| <= 1e-10 ||v||_H ||v||_V^2
///   ||B(u,v)||_H^2 <= C ||u||_H^2 ||v||_V^2
///   ||B(u,v)||_Q^2 <= K2 ||u||_{V_theta}^2 ||v||_{V_theta}^2.
/// Throws AssumptionViolation with the serialized witness pair on failure.
AssumptionReport check_assumptions(const Model& model, std::size_t n_samples, std::uint64_t seed);

}  // namespace sgb
