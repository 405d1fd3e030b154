#pragma once

#include "sgb/error.hpp"
#include "sgb/model.hpp"
#include "sgb/noise.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sgb {

enum class Scheme { exponential_euler, semi_implicit_euler };

std::string_view scheme_name(Scheme s);
/// Accepts "exponential_euler" / "semi_implicit_euler" (and "semi_implicit").
Scheme parse_scheme(std::string_view name);

struct IntegratorConfig {
  double t_final = 0.5;
  std::size_t steps = 100;
  Scheme scheme = Scheme::exponential_euler;
  bool nonlinearity = true;  // false: Ornstein-Uhlenbeck test mode
  /// Multiplies Q dW; 0 gives the deterministic flow.
  double noise_amplitude = 1.0;

  double dt() const { return t_final / static_cast<double>(steps); }
  double time(std::size_t n) const { return t_final * static_cast<double>(n) / static_cast<double>(steps); }
  /// Throws ParameterError unless t_final > 0, steps >= 1, amplitude >= 0.
  void validate() const;
};

/// Guard threshold on ||X||_H.
inline constexpr double kDivergenceThreshold = 1e12;

/// Discretization of dX = a Q dW - (L X + B(X)) dt on a fixed grid.
///
///   exponential_euler:    X' = e^{-dt L} (x - dt drift + a Q dW)
///   semi_implicit_euler:  X' = (I + dt L)^{-1} (x - dt drift + a Q dW)
///
/// The drift is B(x), or zero in OU mode.
class Integrator {
 public:
  Integrator(const Model& model, const IntegratorConfig& cfg);

  const Model& model() const { return *model_; }
  const IntegratorConfig& config() const { return cfg_; }
  double dt() const { return cfg_.dt(); }

  /// out = damp (x - dt * drift + a Q dW) with an explicit drift (null: zero).
  /// `out` may alias `x`.
  void advance(const SpectralField& x, const SpectralField* drift, const SpectralField& dw,
               SpectralField& out) const;

  /// One step of the configured scheme. `out` may alias `x`.
  void step(const SpectralField& x, const SpectralField& dw, SpectralField& out) const;
  SpectralField step(const SpectralField& x, const SpectralField& dw) const;

  /// Runs the scheme from x0, calling obs(n, X_n, dW_n) before each step
  /// n = 0..M-1, and returns X_M. Throws DivergenceError on blow-up.
  template <class Observer>
  SpectralField run(const SpectralField& x0, const NoiseStream& noise, Observer&& obs) const;

  SpectralField run(const SpectralField& x0, const NoiseStream& noise) const {
    return run(x0, noise, [](std::size_t, const SpectralField&, const SpectralField&) {});
  }

  /// e^{-s_n L} h for n = 0..M (semigroup along the grid).
  std::vector<SpectralField> semigroup_orbit(const SpectralField& h) const;

 private:
  void guard(const SpectralField& x, std::uint64_t sample) const;

  const Model* model_;
  IntegratorConfig cfg_;
  std::vector<double> damp_;
  std::vector<double> noise_w_;
};

template <class Observer>
SpectralField Integrator::run(const SpectralField& x0, const NoiseStream& noise, Observer&& obs) const {
  x0.require_lattice(model_->lattice());
  SpectralField x = x0;
  SpectralField dw = model_->zero();
  for (std::size_t n = 0; n < cfg_.steps; ++n) {
    noise.increment_into(*model_, n, dt(), dw);
    obs(n, static_cast<const SpectralField&>(x), static_cast<const SpectralField&>(dw));
    step(x, dw, x);
    guard(x, noise.sample_index());
  }
  return x;
}

/// A simulated trajectory.
struct PathRecord {
  IntegratorConfig config;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
  std::vector<SpectralField> states;      // X_{s_0} .. X_{s_M}
  std::vector<SpectralField> increments;  // dW_0 .. dW_{M-1}
  double integrated_v_norm = 0.0;         // sum_n dt ||X_{s_n}||_V^2
  double stochastic_integral = 0.0;       // 2 sum_n <X_{s_n}, a Q dW_n>
};

PathRecord simulate(const Model& model, const IntegratorConfig& cfg, const SpectralField& x0,
                    const NoiseStream& noise);

/// ||X_t||^2 - ||x0||^2 - [-2 int ||X||_V^2 + a^2 ||Q||_HS^2 t + 2 sum <X, a Q dW>]
/// with the truncated Hilbert-Schmidt norm.
double energy_identity_residual(const Model& model, const PathRecord& path);

/// Rows (step, s, mode_index, re, im); component index is appended to the
/// mode index as `mode*d + c` in d = 2.
void write_path_csv(std::ostream& out, const Model& model, const PathRecord& path);

}  // namespace sgb
