#pragma once

#include "sgb/spectral.hpp"

#include <string>

namespace sgb {

/// Test functions f: H -> R.
///
///   bounded_tanh   tanh(gain <u, phi>)
///   gaussian_bump  exp(-||u||_H^2)
///   linear         <u, e>               (unbounded; OU mode only)
///   constant       c
///   tanh_squared   floor + tanh^2(gain <u, phi>)   (positive, for entropy checks)
class TestFunctional {
 public:
  enum class Kind { bounded_tanh, gaussian_bump, linear, constant, tanh_squared };

  static TestFunctional bounded_tanh(SpectralField direction, double gain);
  static TestFunctional gaussian_bump();
  static TestFunctional linear(SpectralField direction);
  static TestFunctional constant(double c);
  static TestFunctional tanh_squared(SpectralField direction, double gain, double floor);

  Kind kind() const { return kind_; }
  std::string name() const;
  bool bounded() const { return kind_ != Kind::linear; }
  /// Lower bound over H, when one exists (used by the entropy check).
  double infimum() const;
  const SpectralField& direction() const { return direction_; }
  double gain() const { return gain_; }
  double level() const { return level_; }

  double operator()(const Spectral& s, const SpectralField& u) const;

 private:
  Kind kind_ = Kind::constant;
  SpectralField direction_;
  double gain_ = 1.0;
  double level_ = 0.0;  // c for constant, floor for tanh_squared
};

}  // namespace sgb
