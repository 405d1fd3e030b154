#include "sgb/inequalities.hpp"

#include "sgb/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sgb {

namespace {

constexpr std::uint64_t kHarnackTag = 0x6861726eULL;
constexpr const char* kLenient =
    "estimated lhs lowered by 3 stderr, estimated rhs terms raised by 3 stderr";

json run_params(const Model& model, const IntegratorConfig& cfg, const SamplingOptions& opt) {
  return json{{"lattice", to_json(model.lattice().spec())},
              {"model", to_json(model.params())},
              {"t", cfg.t_final},
              {"steps", cfg.steps},
              {"scheme", scheme_name(cfg.scheme)},
              {"nonlinearity", cfg.nonlinearity},
              {"noise_amplitude", cfg.noise_amplitude},
              {"samples", opt.samples}};
}

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

SpectralField normalized(const Model& model, const SpectralField& h) {
  const double n = norm(model, h, Space::v_theta(model.params().theta));
  if (!(n > 0.0)) throw ParameterError("direction h must have positive V_theta norm");
  SpectralField out = h;
  out *= 1.0 / n;
  return out;
}

double k2(const Model& model) { return model.constants().k2_asserted(); }
double q_norm(const Model& model) { return model.constants().q_op_norm; }
double hs_sq(const Model& model, const IntegratorConfig& cfg) {
  return cfg.noise_amplitude * cfg.noise_amplitude * model.constants().q_hs_sq;
}

InequalityReport base_report(const Model& model, const IntegratorConfig& cfg, const SamplingOptions& opt,
                             std::string check, Variant variant) {
  InequalityReport r;
  r.check = std::move(check);
  r.variant = variant_name(variant);
  r.params = run_params(model, cfg, opt);
  r.slack_policy = kLenient;
  r.seed = opt.seed;
  return r;
}

}  // namespace

std::string_view variant_name(Variant v) { return v == Variant::local ? "local" : "global"; }

json InequalityReport::to_json() const {
  return json{{"check", check},     {"variant", variant},           {"params", params},
              {"lhs_mean", lhs_mean}, {"lhs_stderr", lhs_stderr}, {"rhs", rhs},
              {"slack_policy", slack_policy}, {"pass", pass},     {"seed", seed},
              {"details", details}};
}

double gradient_bound_rhs(const Model& model, const SpectralField& x, double t) {
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  const auto& p = model.params();
  const auto& c = model.constants();
  return 2.0 * c.k1 / t +
         4.0 * k2(model) / std::pow(p.lambda0, 2.0 - p.theta) * (norm_sq(model, x, Space::H()) + c.q_hs_sq * t);
}

double entropy_threshold(const Model& model) {
  const auto& p = model.params();
  return 4.0 * std::sqrt(k2(model)) * q_norm(model) * std::pow(p.lambda0, 0.5 * (p.theta - 3.0));
}

double entropy_time(const Model& model, double delta) {
  const auto& p = model.params();
  const double q = q_norm(model);
  return delta * delta * std::pow(p.lambda0, 3.0 - p.theta) / (4.0 * q * q * std::numbers::e * k2(model));
}

double harnack_radius(const Model& model, double alpha) {
  if (!(alpha > 1.0)) throw ParameterError("alpha must exceed 1");
  const auto& p = model.params();
  return (alpha - 1.0) * std::pow(p.lambda0, 0.5 * (3.0 - p.theta)) /
         (4.0 * alpha * q_norm(model) * std::sqrt(k2(model)));
}

std::vector<InequalityReport> check_gradient_estimate(const Model& model, const IntegratorConfig& cfg,
                                                      const SpectralField& x,
                                                      const std::vector<SpectralField>& directions,
                                                      const TestFunctional& f, const SamplingOptions& opt) {
  require_admissible(f, cfg);
  std::vector<SpectralField> hs;
  hs.reserve(directions.size());
  for (const auto& h : directions) hs.push_back(normalized(model, h));
  const Integrator integ(model, cfg);
  const BismutPlan plan(integ, hs);
  const auto samples = bismut_samples(plan, x, opt);

  std::vector<double> f2(samples.size());
  std::vector<double> fv(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    fv[j] = f(model, samples[j].final_state);
    f2[j] = fv[j] * fv[j];
  }
  const EstimatorResult m2 = estimate_mean(f2);
  const double bracket = gradient_bound_rhs(model, x, cfg.t_final);
  const double rhs = (m2.mean + 3.0 * m2.std_err) * bracket;

  std::vector<InequalityReport> out;
  std::vector<double> d(samples.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    for (std::size_t j = 0; j < samples.size(); ++j) d[j] = fv[j] * samples[j].weights[i];
    const EstimatorResult g = estimate_mean(d);
    InequalityReport r = base_report(model, cfg, opt, "gradient_estimate", Variant::global);
    r.variant = "direction_" + std::to_string(i);
    const double lhs_low = positive_part(std::abs(g.mean) - 3.0 * g.std_err);
    r.lhs_mean = g.mean * g.mean;
    r.lhs_stderr = 2.0 * std::abs(g.mean) * g.std_err;
    r.rhs = rhs;
    r.pass = lhs_low * lhs_low <= rhs;
    r.details = json{{"gradient_mean", g.mean},     {"gradient_stderr", g.std_err},
                     {"f2_mean", m2.mean},           {"f2_stderr", m2.std_err},
                     {"bracket", bracket},           {"direction", field_to_json(model.lattice(), hs[i])}};
    out.push_back(std::move(r));
  }
  return out;
}

InequalityReport entropy_gradient_check(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                                        const SpectralField& h, const TestFunctional& f, double delta,
                                        Variant variant, const SamplingOptions& opt) {
  require_admissible(f, cfg);
  if (!(f.infimum() > 0.0)) throw ParameterError("entropy check needs a positive functional (e.g. tanh_squared)");
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  const double delta0 = entropy_threshold(model);
  if (variant == Variant::local && delta < delta0 * (1.0 - 1e-12)) {
    throw ParameterError("delta below the local threshold delta_0 = " + std::to_string(delta0));
  }
  const SpectralField hn = normalized(model, h);
  const Integrator integ(model, cfg);
  const BismutPlan plan(integ, {hn});
  const auto samples = bismut_samples(plan, x, opt);

  const std::size_t n = samples.size();
  std::vector<double> fv(n), flogf(n), d(n);
  for (std::size_t j = 0; j < n; ++j) {
    fv[j] = f(model, samples[j].final_state);
    if (!(fv[j] > 0.0)) throw ParameterError("functional returned a nonpositive value in sample " + std::to_string(j));
    flogf[j] = fv[j] * std::log(fv[j]);
    d[j] = fv[j] * samples[j].weights[0];
  }
  const EstimatorResult pf = estimate_mean(fv);
  const EstimatorResult pflogf = estimate_mean(flogf);
  const EstimatorResult grad = estimate_mean(d);
  // Delta method: Ent = E[f log f] - m log m has influence f log f - (log m + 1) f.
  std::vector<double> psi(n);
  const double lm = std::log(pf.mean);
  for (std::size_t j = 0; j < n; ++j) psi[j] = flogf[j] - (lm + 1.0) * fv[j];
  const double ent = pflogf.mean - pf.mean * lm;
  const double ent_se = estimate_mean(psi).std_err;

  const auto& p = model.params();
  const auto& c = model.constants();
  const double t = cfg.t_final;
  const double energy = norm_sq(model, x, Space::H()) + hs_sq(model, cfg) * t;
  double bracket = 0.0;
  double t_eff = t;
  if (variant == Variant::local) {
    bracket = c.k1 / t + 2.0 * k2(model) / std::pow(p.lambda0, 1.0 - p.theta) * energy;
  } else {
    t_eff = std::min(t, entropy_time(model, delta));
    bracket = c.k1 / t_eff + 2.0 * k2(model) * std::numbers::e / std::pow(p.lambda0, 1.0 - p.theta) * energy;
  }

  InequalityReport r = base_report(model, cfg, opt, "entropy_gradient", variant);
  const bool jensen_ok = ent + 3.0 * ent_se >= 0.0;
  const double ent_high = positive_part(ent + 3.0 * ent_se);
  r.lhs_mean = std::abs(grad.mean);
  r.lhs_stderr = grad.std_err;
  r.rhs = delta * ent_high + 2.0 / delta * bracket * (pf.mean + 3.0 * pf.std_err);
  r.pass = jensen_ok && positive_part(std::abs(grad.mean) - 3.0 * grad.std_err) <= r.rhs;
  r.details = json{{"delta", delta},          {"delta0", delta0},           {"t_effective", t_eff},
                   {"entropy", ent},          {"entropy_stderr", ent_se},   {"jensen_guard", jensen_ok},
                   {"pf_mean", pf.mean},      {"pf_stderr", pf.std_err},    {"bracket", bracket},
                   {"gradient_mean", grad.mean}};
  return r;
}

InequalityReport harnack_check(const Model& model, const IntegratorConfig& cfg, const SpectralField& x,
                               const SpectralField& y, double alpha, const TestFunctional& f, Variant variant,
                               const SamplingOptions& opt) {
  if (!(alpha > 1.0)) throw ParameterError("alpha must exceed 1");
  require_admissible(f, cfg);
  if (f.infimum() < 0.0) throw ParameterError("Harnack check needs a nonnegative functional");
  const auto& p = model.params();
  const auto& c = model.constants();
  const double r0 = harnack_radius(model, alpha);
  const double dist = norm(model, x - y, Space::v_theta(p.theta));
  if (variant == Variant::local && dist > r0) {
    throw ParameterError("outside local radius: ||x - y||_{V_theta} = " + std::to_string(dist) +
                         " > r_0 = " + std::to_string(r0));
  }

  const Integrator integ(model, cfg);
  const std::uint64_t seed_y = derive_seed(opt.seed, kHarnackTag);
  const auto fx = map_samples(opt.samples, opt.workers,
                              [&](std::size_t j) { return f(model, integ.run(x, NoiseStream(opt.seed, j))); });
  const auto fy = map_samples(opt.samples, opt.workers, [&](std::size_t j) {
    return std::pow(f(model, integ.run(y, NoiseStream(seed_y, j))), alpha);
  });
  const EstimatorResult mx = estimate_mean(fx);
  const EstimatorResult my = estimate_mean(fy);

  const double t = cfg.t_final;
  const double q = q_norm(model);
  const double energy = std::max(norm_sq(model, x, Space::H()), norm_sq(model, y, Space::H())) + hs_sq(model, cfg) * t;
  const double r2 = dist * dist;
  double brace = 0.0;
  if (variant == Variant::local) {
    brace = c.k1 / t + 2.0 * k2(model) / std::pow(p.lambda0, 1.0 - p.theta) * energy;
  } else {
    const double e = std::numbers::e;
    const double inner_max =
        std::max(1.0 / t, 4.0 * alpha * alpha * q * q * e * k2(model) * r2 /
                              ((alpha - 1.0) * (alpha - 1.0) * std::pow(p.lambda0, 3.0 - p.theta)));
    brace = c.k1 * inner_max + 2.0 * k2(model) * e / std::pow(p.lambda0, 1.0 - p.theta) * energy;
  }
  const double exponent = 2.0 * alpha * r2 / (alpha - 1.0) * brace;

  InequalityReport r = base_report(model, cfg, opt, "harnack", variant);
  r.lhs_mean = std::pow(positive_part(mx.mean), alpha);
  r.lhs_stderr = alpha * std::pow(positive_part(mx.mean), alpha - 1.0) * mx.std_err;
  r.rhs = (my.mean + 3.0 * my.std_err) * std::exp(exponent);
  r.pass = std::pow(positive_part(mx.mean - 3.0 * mx.std_err), alpha) <= r.rhs;
  r.details = json{{"alpha", alpha},         {"distance", dist},        {"radius", r0},
                   {"exponent", exponent},   {"pf_x_mean", mx.mean},    {"pf_x_stderr", mx.std_err},
                   {"pfa_y_mean", my.mean},  {"pfa_y_stderr", my.std_err}};
  return r;
}

std::vector<InequalityReport> exp_moment_check(const Model& model, const IntegratorConfig& cfg,
                                               const SpectralField& x, const SamplingOptions& opt) {
  const Integrator integ(model, cfg);
  const double h = cfg.dt();
  const auto g = map_samples(opt.samples, opt.workers, [&](std::size_t j) {
    double acc = 0.0;
    integ.run(x, NoiseStream(opt.seed, j), [&](std::size_t, const SpectralField& xn, const SpectralField&) {
      acc += h * norm_sq(model, xn, Space::V());
    });
    return acc;
  });
  const EstimatorResult mg = estimate_mean(g);
  const auto& p = model.params();
  const double t = cfg.t_final;
  // ||Q|| of the unscaled operator: the amplitude only enters through the
  // Hilbert-Schmidt term, which keeps the zero-noise case finite.
  const double q = q_norm(model);
  const double level = norm_sq(model, x, Space::H()) + hs_sq(model, cfg) * t;

  struct Form {
    const char* variant;
    double c;
  };
  const Form forms[] = {{"lambda0_sq_over_2q_sq", p.lambda0 * p.lambda0 / (2.0 * q * q)},
                        {"two_over_q_sq_e_t", 2.0 / (q * q * std::numbers::e * t)}};

  std::vector<InequalityReport> out;
  std::vector<double> eg(g.size());
  for (const Form& form : forms) {
    for (std::size_t j = 0; j < g.size(); ++j) eg[j] = std::exp(form.c * g[j]);
    const EstimatorResult full = estimate_mean(eg);
    std::vector<double> sorted = eg;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t top = std::max<std::size_t>(1, sorted.size() / 100);
    double top_sum = 0.0, total = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      total += sorted[j];
      if (j + top >= sorted.size()) top_sum += sorted[j];
    }
    const double top_share = total > 0.0 ? top_sum / total : 0.0;

    InequalityReport r = base_report(model, cfg, opt, "exp_moment", Variant::global);
    r.variant = form.variant;
    r.slack_policy = "Jensen-weakened: mean(G) lowered by 3 stderr; full moment reported, not asserted";
    r.lhs_mean = std::exp(form.c * mg.mean);
    r.lhs_stderr = form.c * r.lhs_mean * mg.std_err;
    r.rhs = std::exp(form.c * level);
    r.pass = form.c * (mg.mean - 3.0 * mg.std_err) <= form.c * level;
    r.details = json{{"c", form.c},
                     {"g_mean", mg.mean},
                     {"g_stderr", mg.std_err},
                     {"full_moment_mean", full.mean},
                     {"full_moment_stderr", full.std_err},
                     {"full_moment_within_bound", full.mean <= r.rhs},
                     {"top1pct_share", top_share},
                     {"heavy_tail_warning", top_share > 0.5}};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sgb
