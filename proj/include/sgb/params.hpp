#pragma once

#include "sgb/lattice.hpp"

namespace sgb {

/// Exponents of L = lambda0 * A^(delta+1), Q = A^(-sigma) and of the gradient
/// space V_theta = D(L^(theta/2)).
struct ModelParams {
  double lambda0 = 1.0;
  double delta = 1.0;
  double sigma = 0.375;
  double theta = 1.0;

  bool operator==(const ModelParams&) const = default;
};

/// Returns `p` unchanged when
///   lambda0 > 0, delta > d/2, sigma in (d/4, delta/2],
///   theta in [(2 sigma + 1)/(delta + 1), 1];
/// otherwise throws ParameterError naming the violated constraint.
ModelParams validate_params(const ModelParams& p, const LatticeSpec& lattice);

}  // namespace sgb
