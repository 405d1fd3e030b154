#pragma once

#include "sgb/estimator.hpp"
#include "sgb/report.hpp"

#include <string>
#include <vector>

namespace sgb {

enum class Variant { local, global };
std::string_view variant_name(Variant v);

/// Outcome of one inequality check. Estimated quantities enter with a
/// one-sided 3-stderr allowance (see slack_policy).
struct InequalityReport {
  std::string check;
  std::string variant;
  json params;
  double lhs_mean = 0.0;
  double lhs_stderr = 0.0;
  double rhs = 0.0;
  std::string slack_policy;
  bool pass = false;
  std::uint64_t seed = 0;
  json details = json::object();

  json to_json() const;
};

/// {2 K1/t + (4 K2 / lambda0^(2-theta)) (||x||_H^2 + ||Q||_HS^2 t)}
double gradient_bound_rhs(const Model& model, const SpectralField& x, double t);

/// delta_0 = 4 sqrt(K2) ||Q|| lambda0^((theta-3)/2)
double entropy_threshold(const Model& model);
/// t_delta = delta^2 lambda0^(3-theta) / (4 ||Q||^2 e K2)
double entropy_time(const Model& model, double delta);
/// r_0 = (alpha-1) lambda0^((3-theta)/2) / (4 alpha ||Q|| sqrt(K2))
double harnack_radius(const Model& model, double alpha);

/// Per direction (normalized to ||h||_{V_theta} = 1): pass iff
///   (|mean_D| - 3 se_D)_+^2 <= (mean_{f^2} + 3 se_{f^2}) * bracket.
std::vector<InequalityReport> check_gradient_estimate(const Model& model, const IntegratorConfig& cfg,
                                                      const SpectralField& x,
                                                      const std::vector<SpectralField>& directions,
                                                      const TestFunctional& f, const SamplingOptions& opt);

/// |D_h P_t f| <= delta Ent + (2/delta) {..} P_t f for positive f, with h
/// normalized in V_theta. The local variant requires delta >= delta_0.
InequalityReport entropy_gradient_check(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                                        const SpectralField& h, const TestFunctional& f, double delta,
                                        Variant variant, const SamplingOptions& opt);

/// (P_t f(x))^alpha <= P_t f^alpha(y) exp[..] for f >= 0. The local variant
/// requires ||x - y||_{V_theta} <= r_0.
InequalityReport harnack_check(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                               const SpectralField& y, double alpha, const TestFunctional& f, Variant variant,
                               const SamplingOptions& opt);

/// Exponential moments of G = int ||X_s||_V^2 ds for c = lambda0^2/(2||Q||^2)
/// and c = 2/(||Q||^2 e t). Hard check: c (mean G - 3 se) <= c (||x||^2 +
/// ||Q||_HS^2 t); the full moment mean(exp(c G)) is reported only.
std::vector<InequalityReport> exp_moment_check(const Model& model, const IntegratorConfig& cfg,
                                               const SpectralField& x, const SamplingOptions& opt);

}  // namespace sgb
