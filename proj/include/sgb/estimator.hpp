#pragma once

#include "sgb/functional.hpp"
#include "sgb/integrator.hpp"
#include "sgb/parallel.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sgb {

struct EstimatorResult {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t n_samples = 0;
  std::optional<double> elapsed;  // seconds; only filled when timing is requested

  double ci_low() const { return mean - 1.96 * std_err; }
  double ci_high() const { return mean + 1.96 * std_err; }
};

EstimatorResult to_result(const Summary& s);
EstimatorResult estimate_mean(std::span<const double> samples);

struct SamplingOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Bismut weight integrand along one grid, for a fixed set of directions:
///
///   w(h) = (1/a) sum_n < Q^{-1} [ (1/t) g_n - ((t - s_n)/t) B~(X_n, g_n) ], dW_n >_H,
///   g_n = e^{-s_n L} h,
///
/// a the noise amplitude. B~ is skipped in OU mode.
class BismutPlan {
 public:
  BismutPlan(const Integrator& integ, std::vector<SpectralField> directions);

  const Integrator& integrator() const { return *integ_; }
  std::size_t direction_count() const { return orbits_.size(); }

  /// Adds the step-n contribution to weights[i] for every direction i.
  void accumulate(std::size_t n, const SpectralField& x, const SpectralField& dw, std::span<double> weights) const;

 private:
  const Integrator* integ_;
  std::vector<std::vector<SpectralField>> orbits_;
};

/// Weight of a stored path for direction h.
double bismut_weight(const Model& model, const PathRecord& path, const SpectralField& h);

struct BismutSample {
  SpectralField final_state;
  std::vector<double> weights;
};

/// Simulates one path from x and returns X_t with the weights of every
/// direction of the plan.
BismutSample sample_bismut(const BismutPlan& plan, const SpectralField& x, const NoiseStream& noise);

/// All samples of a run, in sample order.
std::vector<BismutSample> bismut_samples(const BismutPlan& plan, const SpectralField& x, const SamplingOptions& opt);

/// Monte Carlo D_h P_t f(x) = E[f(X_t) w(h)]. Unbounded f requires OU mode.
EstimatorResult estimate_gradient(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                                  const SpectralField& h, const TestFunctional& f, const SamplingOptions& opt);

/// Central difference [f(X_t^{x+eps h}) - f(X_t^{x-eps h})] / (2 eps). Both
/// trajectories share the noise of the sample unless common_noise is false,
/// in which case the second uses an independent stream.
EstimatorResult fd_gradient_crn(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                                const SpectralField& h, const TestFunctional& f, double eps,
                                const SamplingOptions& opt, bool common_noise = true);

/// <e^{-tL} h, e>_H
double ou_gradient_oracle(const Model& model, double t, const SpectralField& h, const SpectralField& e);

/// Checks a functional is admissible for the configuration.
void require_admissible(const TestFunctional& f, const IntegratorConfig& cfg);

struct CouplingResult {
  double max_residual = 0.0;  // max_n ||(Y_n - X_n) - Z_n||_H
  double final_gap = 0.0;     // ||Y_M - X_M||_H
  double initial_gap = 0.0;   // ||Y_0 - X_0||_H = eps ||h||_H
};

/// X from x, Y from x + eps h with drift B(X) + (eps/t) e^{-sL} h, both driven
/// by `noise`; Z_n = eps (1 - s_n/t) e^{-s_n L} h.
CouplingResult coupling_residual(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                                 const SpectralField& h, double eps, const NoiseStream& noise);

struct GirsanovReport {
  double epsilon = 0.0;
  EstimatorResult density;    // R_t
  EstimatorResult reweighted; // R_t f(X_t^x)
  EstimatorResult perturbed;  // f(X_t^{x + eps h}), independent noise
  double max_identity_error = 0.0;  // worst relative error of the eta/eps expansion
  double identity_tolerance = 1e-10;

  bool density_pass() const;
  bool reweighted_pass() const;
  bool identity_pass() const { return max_identity_error <= identity_tolerance; }
  bool pass() const { return density_pass() && reweighted_pass() && identity_pass(); }
};

/// Path-level Girsanov checks. With Z_n as above,
///   eta_n = B~(X_n, Z_n) + B(Z_n, Z_n) - (eps/t) g_n,
///   log R_t = -sum <(aQ)^{-1} eta_n, dW_n> - 1/2 sum dt ||(aQ)^{-1} eta_n||_H^2,
/// and eta_n / eps is compared against
///   ((t - s)/t) B~(X_n, g_n) - g_n/t + eps ((t - s)/t)^2 B(g_n, g_n).
/// Requires 0 <= eps <= 0.1.
GirsanovReport girsanov_checks(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                               const SpectralField& h, double eps, const TestFunctional& f,
                               const SamplingOptions& opt);

}  // namespace sgb
