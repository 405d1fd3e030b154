#include "sgb/estimator.hpp"

#include "sgb/error.hpp"
#include "sgb/kernels.hpp"
#include "sgb/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

namespace sgb {

namespace {

// Stream tags of the auxiliary runs derived from a user seed.
constexpr std::uint64_t kIndependentTag = 0x696e646570ULL;
constexpr std::uint64_t kPerturbedTag = 0x7065727475ULL;

double q_inverse_dot(const Spectral& s, const SpectralField& a, const SpectralField& b) {
  const auto x = a.doubles();
  return kernels::active().weighted_dot(s.q_inverse_dot_weight().data(), x.data(), b.doubles().data(), x.size());
}

void require_direction(const Model& model, const SpectralField& h) {
  h.require_lattice(model.lattice());
  if (!(norm_sq(model, h, Space::v_theta(model.params().theta)) > 0.0)) {
    throw ParameterError("direction h must have positive V_theta norm");
  }
}

void require_noise(const IntegratorConfig& cfg) {
  if (!(cfg.noise_amplitude > 0.0)) throw ParameterError("derivative weights need a positive noise amplitude");
}

}  // namespace

EstimatorResult to_result(const Summary& s) {
  EstimatorResult r;
  r.mean = s.mean;
  r.std_err = s.std_err;
  r.n_samples = s.n;
  return r;
}

EstimatorResult estimate_mean(std::span<const double> samples) { return to_result(summarize(samples)); }

void require_admissible(const TestFunctional& f, const IntegratorConfig& cfg) {
  if (!f.bounded() && cfg.nonlinearity) {
    throw ParameterError("functional '" + f.name() + "' is unbounded and only admitted with the nonlinearity disabled");
  }
}

BismutPlan::BismutPlan(const Integrator& integ, std::vector<SpectralField> directions) : integ_(&integ) {
  require_noise(integ.config());
  orbits_.reserve(directions.size());
  for (const auto& h : directions) {
    require_direction(integ.model(), h);
    orbits_.push_back(integ.semigroup_orbit(h));
  }
}

void BismutPlan::accumulate(std::size_t n, const SpectralField& x, const SpectralField& dw,
                            std::span<double> weights) const {
  const Model& model = integ_->model();
  const IntegratorConfig& cfg = integ_->config();
  const double t = cfg.t_final;
  const double c = (t - cfg.time(n)) / t;
  const double inv_a = 1.0 / cfg.noise_amplitude;
  thread_local SpectralField bt;
  if (!bt.same_lattice(x)) bt = model.zero();
  for (std::size_t i = 0; i < orbits_.size(); ++i) {
    const SpectralField& g = orbits_[i][n];
    double term = q_inverse_dot(model, g, dw) / t;
    if (cfg.nonlinearity && c != 0.0) {
      b_tilde_into(model, x, g, bt);
      term -= c * q_inverse_dot(model, bt, dw);
    }
    weights[i] += inv_a * term;
  }
}

double bismut_weight(const Model& model, const PathRecord& path, const SpectralField& h) {
  const Integrator integ(model, path.config);
  const BismutPlan plan(integ, {h});
  double w = 0.0;
  for (std::size_t n = 0; n < path.increments.size(); ++n) {
    plan.accumulate(n, path.states[n], path.increments[n], {&w, 1});
  }
  return w;
}

BismutSample sample_bismut(const BismutPlan& plan, const SpectralField& x, const NoiseStream& noise) {
  BismutSample s;
  s.weights.assign(plan.direction_count(), 0.0);
  s.final_state = plan.integrator().run(x, noise, [&](std::size_t n, const SpectralField& xn, const SpectralField& dw) {
    plan.accumulate(n, xn, dw, s.weights);
  });
  return s;
}

std::vector<BismutSample> bismut_samples(const BismutPlan& plan, const SpectralField& x, const SamplingOptions& opt) {
  return map_samples(opt.samples, opt.workers,
                     [&](std::size_t j) { return sample_bismut(plan, x, NoiseStream(opt.seed, j)); });
}

EstimatorResult estimate_gradient(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                                  const SpectralField& h, const TestFunctional& f, const SamplingOptions& opt) {
  require_admissible(f, cfg);
  const Integrator integ(model, cfg);
  const BismutPlan plan(integ, {h});
  const auto values = map_samples(opt.samples, opt.workers, [&](std::size_t j) {
    const BismutSample s = sample_bismut(plan, x, NoiseStream(opt.seed, j));
    return f(model, s.final_state) * s.weights[0];
  });
  return estimate_mean(values);
}

EstimatorResult fd_gradient_crn(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                                const SpectralField& h, const TestFunctional& f, double eps,
                                const SamplingOptions& opt, bool common_noise) {
  require_admissible(f, cfg);
  if (!(eps > 0.0)) throw ParameterError("finite-difference epsilon must be positive");
  h.require_lattice(model.lattice());
  const Integrator integ(model, cfg);
  SpectralField plus = x;
  plus.add_scaled(eps, h);
  SpectralField minus = x;
  minus.add_scaled(-eps, h);
  const std::uint64_t other_seed = common_noise ? opt.seed : derive_seed(opt.seed, kIndependentTag);
  const auto values = map_samples(opt.samples, opt.workers, [&](std::size_t j) {
    const double fp = f(model, integ.run(plus, NoiseStream(opt.seed, j)));
    const double fm = f(model, integ.run(minus, NoiseStream(other_seed, j)));
    return (fp - fm) / (2.0 * eps);
  });
  return estimate_mean(values);
}

double ou_gradient_oracle(const Model& model, double t, const SpectralField& h, const SpectralField& e) {
  return inner(model, apply_diagonal(model, h, Diagonal::semigroup(t)), e);
}

CouplingResult coupling_residual(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                                 const SpectralField& h, double eps, const NoiseStream& noise) {
  const Integrator integ(model, cfg);
  x.require_lattice(model.lattice());
  h.require_lattice(model.lattice());
  const auto orbit = integ.semigroup_orbit(h);
  const double t = cfg.t_final;

  SpectralField xn = x;
  SpectralField yn = x;
  yn.add_scaled(eps, h);
  SpectralField dw = model.zero();
  SpectralField drift = model.zero();
  SpectralField diff = model.zero();

  CouplingResult r;
  r.initial_gap = norm(model, yn - xn);
  auto record = [&](std::size_t n) {
    diff = yn;
    diff -= xn;
    diff.add_scaled(-eps * (1.0 - cfg.time(n) / t), orbit[n]);
    r.max_residual = std::max(r.max_residual, norm(model, diff));
  };
  for (std::size_t n = 0; n < cfg.steps; ++n) {
    record(n);
    noise.increment_into(model, n, cfg.dt(), dw);
    if (cfg.nonlinearity) {
      bilinear_b_into(model, xn, xn, drift);
    } else {
      drift.set_zero();
    }
    drift.add_scaled(eps / t, orbit[n]);
    integ.advance(yn, &drift, dw, yn);
    integ.step(xn, dw, xn);
  }
  record(cfg.steps);
  r.final_gap = norm(model, yn - xn);
  return r;
}

bool GirsanovReport::density_pass() const {
  return std::abs(density.mean - 1.0) <= 3.0 * density.std_err;
}

bool GirsanovReport::reweighted_pass() const {
  const double se = std::sqrt(reweighted.std_err * reweighted.std_err + perturbed.std_err * perturbed.std_err);
  return std::abs(reweighted.mean - perturbed.mean) <= 3.0 * se;
}

GirsanovReport girsanov_checks(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                               const SpectralField& h, double eps, const TestFunctional& f,
                               const SamplingOptions& opt) {
  if (!(eps >= 0.0) || eps > 0.1) throw ParameterError("Girsanov epsilon must lie in [0, 0.1]");
  require_admissible(f, cfg);
  require_noise(cfg);
  h.require_lattice(model.lattice());
  const Integrator integ(model, cfg);
  const auto orbit = integ.semigroup_orbit(h);
  const double t = cfg.t_final;
  const double a = cfg.noise_amplitude;

  struct Sample {
    double r = 1.0;
    double rf = 0.0;
    double identity_error = 0.0;
  };
  const auto samples = map_samples(opt.samples, opt.workers, [&](std::size_t j) {
    SpectralField z = model.zero();
    SpectralField eta = model.zero();
    SpectralField tmp = model.zero();
    SpectralField expansion = model.zero();
    double log_r = 0.0;
    double worst = 0.0;
    const SpectralField xt = integ.run(x, NoiseStream(opt.seed, j), [&](std::size_t n, const SpectralField& xn,
                                                                        const SpectralField& dw) {
      const SpectralField& g = orbit[n];
      const double c = (t - cfg.time(n)) / t;
      z.set_zero();
      z.add_scaled(eps * c, g);
      eta.set_zero();
      if (cfg.nonlinearity) {
        b_tilde_into(model, xn, z, eta);
        bilinear_b_into(model, z, z, tmp);
        eta += tmp;
      }
      eta.add_scaled(-eps / t, g);
      log_r -= q_inverse_dot(model, eta, dw) / a + 0.5 * cfg.dt() * norm_sq(model, eta, Space::Q()) / (a * a);

      if (eps > 0.0) {
        expansion.set_zero();
        if (cfg.nonlinearity) {
          b_tilde_into(model, xn, g, expansion);
          expansion *= c;
          bilinear_b_into(model, g, g, tmp);
          expansion.add_scaled(eps * c * c, tmp);
        }
        expansion.add_scaled(-1.0 / t, g);
        tmp = eta;
        tmp *= 1.0 / eps;
        const double scale = norm(model, tmp);
        tmp -= expansion;
        if (scale > 0.0) worst = std::max(worst, norm(model, tmp) / scale);
      }
    });
    Sample s;
    s.r = std::exp(log_r);
    s.rf = s.r * f(model, xt);
    s.identity_error = worst;
    return s;
  });

  SpectralField shifted = x;
  shifted.add_scaled(eps, h);
  const std::uint64_t perturbed_seed = derive_seed(opt.seed, kPerturbedTag);
  const auto perturbed = map_samples(opt.samples, opt.workers, [&](std::size_t j) {
    return f(model, integ.run(shifted, NoiseStream(perturbed_seed, j)));
  });

  std::vector<double> r(samples.size()), rf(samples.size());
  GirsanovReport report;
  report.epsilon = eps;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    r[j] = samples[j].r;
    rf[j] = samples[j].rf;
    report.max_identity_error = std::max(report.max_identity_error, samples[j].identity_error);
  }
  report.density = estimate_mean(r);
  report.reweighted = estimate_mean(rf);
  report.perturbed = estimate_mean(perturbed);
  return report;
}

}  // namespace sgb
