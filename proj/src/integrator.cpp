#include "sgb/integrator.hpp"

#include "sgb/kernels.hpp"
#include "sgb/nonlinearity.hpp"

#include <iomanip>
#include <sstream>

namespace sgb {

std::string_view scheme_name(Scheme s) {
  return s == Scheme::exponential_euler ? "exponential_euler" : "semi_implicit_euler";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "exponential_euler") return Scheme::exponential_euler;
  if (name == "semi_implicit_euler" || name == "semi_implicit") return Scheme::semi_implicit_euler;
  throw ParameterError("unknown scheme '" + std::string(name) + "'");
}

void IntegratorConfig::validate() const {
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ParameterError("t_final must be positive");
  if (steps < 1) throw ParameterError("steps must be at least 1");
  if (!(noise_amplitude >= 0.0) || !std::isfinite(noise_amplitude)) {
    throw ParameterError("noise amplitude must be nonnegative");
  }
}

Integrator::Integrator(const Model& model, const IntegratorConfig& cfg) : model_(&model), cfg_(cfg) {
  cfg_.validate();
  const auto eig = model.eigen_per_double();
  const auto q = model.q_factor();
  damp_.resize(eig.size());
  noise_w_.resize(eig.size());
  const double h = cfg_.dt();
  for (std::size_t i = 0; i < eig.size(); ++i) {
    damp_[i] = cfg_.scheme == Scheme::exponential_euler ? std::exp(-h * eig[i]) : 1.0 / (1.0 + h * eig[i]);
    noise_w_[i] = cfg_.noise_amplitude * q[i];
  }
}

void Integrator::advance(const SpectralField& x, const SpectralField* drift, const SpectralField& dw,
                         SpectralField& out) const {
  x.require_lattice(model_->lattice());
  dw.require_lattice(model_->lattice());
  if (drift) drift->require_lattice(model_->lattice());
  if (!out.same_lattice(x)) out = model_->zero();
  const double* noise = cfg_.noise_amplitude == 0.0 ? nullptr : dw.doubles().data();
  kernels::active().damped_update(damp_.data(), x.doubles().data(), -dt(), drift ? drift->doubles().data() : nullptr,
                                  noise_w_.data(), noise, out.doubles().data(), damp_.size());
}

void Integrator::step(const SpectralField& x, const SpectralField& dw, SpectralField& out) const {
  if (!cfg_.nonlinearity) {
    advance(x, nullptr, dw, out);
    return;
  }
  thread_local SpectralField drift;
  if (!drift.same_lattice(x)) drift = model_->zero();
  bilinear_b_into(*model_, x, x, drift);
  advance(x, &drift, dw, out);
}

SpectralField Integrator::step(const SpectralField& x, const SpectralField& dw) const {
  SpectralField out = model_->zero();
  step(x, dw, out);
  return out;
}

std::vector<SpectralField> Integrator::semigroup_orbit(const SpectralField& h) const {
  std::vector<SpectralField> orbit;
  orbit.reserve(cfg_.steps + 1);
  for (std::size_t n = 0; n <= cfg_.steps; ++n) {
    orbit.push_back(apply_diagonal(*model_, h, Diagonal::semigroup(cfg_.time(n))));
  }
  return orbit;
}

void Integrator::guard(const SpectralField& x, std::uint64_t sample) const {
  const double n2 = norm_sq(*model_, x, Space::H());
  if (!(n2 <= kDivergenceThreshold * kDivergenceThreshold)) {
    std::ostringstream msg;
    msg << "trajectory diverged (||X||_H exceeds 1e12 or is not finite) in sample " << sample
        << "; reduce the step size (dt = " << dt() << ")";
    throw DivergenceError(msg.str(), sample);
  }
}

PathRecord simulate(const Model& model, const IntegratorConfig& cfg, const SpectralField& x0,
                    const NoiseStream& noise) {
  const Integrator integ(model, cfg);
  PathRecord path;
  path.config = cfg;
  path.seed = noise.seed();
  path.sample_index = noise.sample_index();
  path.states.reserve(cfg.steps + 1);
  path.increments.reserve(cfg.steps);
  const double h = cfg.dt();
  const double a = cfg.noise_amplitude;
  SpectralField xt = integ.run(x0, noise, [&](std::size_t, const SpectralField& x, const SpectralField& dw) {
    path.states.push_back(x);
    path.increments.push_back(dw);
    path.integrated_v_norm += h * norm_sq(model, x, Space::V());
    path.stochastic_integral += 2.0 * a * inner(model, x, apply_diagonal(model, dw, Diagonal::q()));
  });
  path.states.push_back(std::move(xt));
  return path;
}

double energy_identity_residual(const Model& model, const PathRecord& path) {
  const auto& cfg = path.config;
  const double a = cfg.noise_amplitude;
  const double x0 = norm_sq(model, path.states.front(), Space::H());
  const double xt = norm_sq(model, path.states.back(), Space::H());
  const double rhs = -2.0 * path.integrated_v_norm + a * a * model.constants().q_hs_sq * cfg.t_final +
                     path.stochastic_integral;
  return xt - x0 - rhs;
}

void write_path_csv(std::ostream& out, const Model& model, const PathRecord& path) {
  const int d = model.dimension();
  out << "step,s,mode_index,re,im\n";
  out << std::setprecision(17);
  for (std::size_t n = 0; n < path.states.size(); ++n) {
    const auto& x = path.states[n];
    for (std::size_t m = 0; m < x.mode_count(); ++m) {
      for (int c = 0; c < d; ++c) {
        const cplx v = x.at(m, c);
        out << n << ',' << path.config.time(n) << ',' << m * d + c << ',' << v.real() << ',' << v.imag() << '\n';
      }
    }
  }
}

}  // namespace sgb
