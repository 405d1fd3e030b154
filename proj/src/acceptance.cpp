#include "sgb/acceptance.hpp"

#include "sgb/commands.hpp"
#include "sgb/error.hpp"
#include "sgb/inequalities.hpp"
#include "sgb/nonlinearity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sgb {

namespace {

namespace fs = std::filesystem;

const ModelParams kBurgers{1.0, 1.0, 0.375, 1.0};
const ModelParams kNavierStokes{1.0, 2.0, 0.75, 1.0};
constexpr double kT = 0.5;
constexpr std::size_t kSamples = 100000;

IntegratorConfig config(std::size_t steps, bool nonlinear, Scheme scheme = Scheme::exponential_euler) {
  IntegratorConfig c;
  c.t_final = kT;
  c.steps = steps;
  c.nonlinearity = nonlinear;
  c.scheme = scheme;
  return c;
}

SpectralField d1_mode(const Model& m, int k, cplx value) {
  SpectralField u = m.zero();
  u.at(m.lattice().locate({k, 0})->half_index) = value;
  return u;
}

SpectralField x_start(const Model& m) { return d1_mode(m, 1, 0.5) + d1_mode(m, 2, cplx(0.0, 0.25)); }

CriterionResult criterion(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

json result_json(const EstimatorResult& r) {
  return json{{"mean", r.mean}, {"stderr", r.std_err}, {"n_samples", r.n_samples}};
}

SamplingOptions sampling(const AcceptanceOptions& opt, std::uint64_t tag, std::size_t n = kSamples) {
  return SamplingOptions{n, derive_seed(opt.seed, tag), opt.workers};
}

CriterionResult assumptions(const AcceptanceOptions& opt) {
  CriterionResult r = criterion(1, "assumption_suite");
  bool pass = true;
  std::ostringstream summary;
  for (const auto& [spec, params] : {std::pair{LatticeSpec{1, 8}, kBurgers}, std::pair{LatticeSpec{2, 4}, kNavierStokes}}) {
    const Model model(spec, params);
    const std::string key = "d" + std::to_string(spec.dimension) + "_N" + std::to_string(spec.cutoff);
    try {
      const AssumptionReport rep = check_assumptions(model, 1000, derive_seed(opt.seed, 1));
      json worst = json::object();
      for (const auto& s : rep.inequalities) worst[s.name] = s.worst_ratio;
      r.details[key] = worst;
      pass = pass && rep.pass();
      summary << key << " worst q_bound ratio " << fmt(worst["q_bound"].get<double>()) << ", skew "
              << fmt(worst["skew_symmetry"].get<double>()) << "; ";
    } catch (const AssumptionViolation& e) {
      pass = false;
      r.details[key] = json{{"violation", e.what()}, {"witness", json::parse(e.witness())}};
      summary << key << " violated: " << e.what() << "; ";
    }
  }
  r.pass = pass;
  r.summary = summary.str() + "1000 pairs each";
  return r;
}

CriterionResult ou_oracle(const AcceptanceOptions& opt) {
  CriterionResult r = criterion(2, "ou_oracle");
  const Model model({1, 4}, kBurgers);
  const IntegratorConfig cfg = config(100, false);
  const std::pair<int, cplx> pairs[] = {{1, 1.0}, {1, cplx(0.0, 1.0)}, {2, 1.0}};
  bool pass = true;
  std::ostringstream summary;
  int i = 0;
  for (const auto& [k, amp] : pairs) {
    const SpectralField h = d1_mode(model, k, amp);
    const SpectralField e = d1_mode(model, k, amp);
    const double oracle = ou_gradient_oracle(model, kT, h, e);
    const EstimatorResult est =
        estimate_gradient(model, cfg, x_start(model), h, TestFunctional::linear(e), sampling(opt, 20 + i));
    const double z = std::abs(est.mean - oracle) / est.std_err;
    const bool ok = std::abs(est.mean - oracle) <= 3.0 * est.std_err;
    pass = pass && ok;
    r.details["pair_" + std::to_string(i)] = json{{"k", k}, {"oracle", oracle}, {"estimate", result_json(est)}, {"pass", ok}};
    summary << "pair " << i << " |est-oracle|/se=" << fmt(z) << (ok ? "" : " (FAIL)") << "; ";
    ++i;
  }
  r.pass = pass;
  r.summary = summary.str() + "1e5 samples, M=100";
  return r;
}

CriterionResult bismut_vs_fd(const AcceptanceOptions& opt) {
  CriterionResult r = criterion(3, "bismut_vs_fd");
  const Model model({1, 4}, kBurgers);
  const IntegratorConfig cfg = config(200, true);
  const SpectralField h = d1_mode(model, 1, 1.0);
  const TestFunctional f = TestFunctional::bounded_tanh(d1_mode(model, 1, 1.0), 2.0);
  const Integrator integ(model, cfg);
  const BismutPlan plan(integ, {h});
  const auto samples = bismut_samples(plan, x_start(model), sampling(opt, 30));
  std::vector<double> fw(samples.size()), w(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    w[j] = samples[j].weights[0];
    fw[j] = f(model, samples[j].final_state) * w[j];
  }
  const EstimatorResult b = estimate_mean(fw);
  const EstimatorResult weight = estimate_mean(w);
  const EstimatorResult fd = fd_gradient_crn(model, cfg, x_start(model), h, f, 1e-3, sampling(opt, 31));
  const double combined = std::hypot(b.std_err, fd.std_err);
  const double diff = std::abs(b.mean - fd.mean);
  const bool weight_ok = std::abs(weight.mean) <= 3.0 * weight.std_err;
  r.pass = diff <= 3.0 * combined && weight_ok;
  r.details = json{{"bismut", result_json(b)},
                   {"fd", result_json(fd)},
                   {"weight", result_json(weight)},
                   {"difference", diff},
                   {"combined_stderr", combined},
                   {"weight_mean_zero", weight_ok}};
  r.summary = "bismut " + fmt(b.mean) + " +- " + fmt(b.std_err) + ", fd " + fmt(fd.mean) + " +- " + fmt(fd.std_err) +
              ", |diff|/combined=" + fmt(diff / combined) + ", weight mean/se=" + fmt(weight.mean / weight.std_err);
  return r;
}

CriterionResult coupling(const AcceptanceOptions& opt) {
  CriterionResult r = criterion(4, "coupling_identity");
  const Model model({1, 4}, kBurgers);
  const SpectralField h = d1_mode(model, 1, 1.0) + d1_mode(model, 2, 0.5);
  const double eps = 0.05;
  const NoiseStream noise(derive_seed(opt.seed, 40), 0);
  const double h_v = norm(model, h, Space::V());
  const double dt = kT / 200.0;
  const double bound = 10.0 * dt * eps * h_v;

  const CouplingResult ee = coupling_residual(model, config(200, true), x_start(model), h, eps, noise);
  const CouplingResult ee_fine = coupling_residual(model, config(400, true), x_start(model), h, eps, noise);
  const CouplingResult si =
      coupling_residual(model, config(200, true, Scheme::semi_implicit_euler), x_start(model), h, eps, noise);
  const CouplingResult si_fine =
      coupling_residual(model, config(400, true, Scheme::semi_implicit_euler), x_start(model), h, eps, noise);
  const double ratio = si.max_residual / si_fine.max_residual;
  const bool ee_ok = ee.max_residual <= bound && ee.final_gap <= bound;
  const bool si_ok = si.max_residual <= bound && ratio >= 1.5;
  r.pass = ee_ok && si_ok;
  r.details = json{{"bound", bound},
                   {"exponential_euler", json{{"residual_M200", ee.max_residual},
                                              {"residual_M400", ee_fine.max_residual},
                                              {"final_gap", ee.final_gap}}},
                   {"semi_implicit_euler", json{{"residual_M200", si.max_residual},
                                                {"residual_M400", si_fine.max_residual},
                                                {"halving_ratio", ratio}}}};
  r.summary = "bound " + fmt(bound) + "; exponential Euler residual " + fmt(ee.max_residual) + ", X_t-Y_t " +
              fmt(ee.final_gap) + "; semi-implicit residual " + fmt(si.max_residual) + ", halving ratio " + fmt(ratio);
  return r;
}

CriterionResult girsanov(const AcceptanceOptions& opt) {
  CriterionResult r = criterion(5, "girsanov");
  const Model model({1, 4}, kBurgers);
  const IntegratorConfig cfg = config(200, true);
  const TestFunctional f = TestFunctional::bounded_tanh(d1_mode(model, 1, 1.0), 2.0);
  const GirsanovReport rep =
      girsanov_checks(model, cfg, x_start(model), d1_mode(model, 1, 1.0), 0.05, f, sampling(opt, 50));
  r.pass = rep.pass();
  r.details = json{{"density", result_json(rep.density)},
                   {"reweighted", result_json(rep.reweighted)},
                   {"perturbed", result_json(rep.perturbed)},
                   {"max_identity_error", rep.max_identity_error}};
  r.summary = "E R_t=" + fmt(rep.density.mean) + " +- " + fmt(rep.density.std_err) + ", E[R f]=" +
              fmt(rep.reweighted.mean) + " vs P f(x+eps h)=" + fmt(rep.perturbed.mean) +
              ", eta identity rel err " + fmt(rep.max_identity_error);
  return r;
}

CriterionResult energy(const AcceptanceOptions& opt) {
  CriterionResult r = criterion(6, "energy_identity");
  const Model model({1, 4}, kBurgers);
  const std::uint64_t seed = derive_seed(opt.seed, 60);
  auto median_residual = [&](std::size_t steps, std::uint64_t substeps) {
    const IntegratorConfig cfg = config(steps, true);
    auto res = map_samples(100, opt.workers, [&](std::size_t j) {
      return std::abs(energy_identity_residual(model, simulate(model, cfg, x_start(model), NoiseStream(seed, j, substeps))));
    });
    std::sort(res.begin(), res.end());
    return 0.5 * (res[49] + res[50]);
  };
  // Both grids see the same Brownian path.
  const double coarse = median_residual(200, 2);
  const double fine = median_residual(400, 1);
  const double ratio = coarse / fine;
  r.pass = ratio >= 1.5;
  r.details = json{{"median_M200", coarse}, {"median_M400", fine}, {"ratio", ratio}};
  r.summary = "median |r| " + fmt(coarse) + " (M=200) -> " + fmt(fine) + " (M=400), ratio " + fmt(ratio);
  return r;
}

CriterionResult inequality_suite(const AcceptanceOptions& opt) {
  CriterionResult r = criterion(7, "inequality_suite");
  const Model model({1, 4}, kBurgers);
  const IntegratorConfig cfg = config(200, true);
  const SpectralField x = x_start(model);
  const SpectralField dir = d1_mode(model, 1, 1.0);
  const TestFunctional bounded = TestFunctional::bounded_tanh(dir, 2.0);
  const TestFunctional positive = TestFunctional::tanh_squared(dir, 2.0, 0.1);

  std::vector<InequalityReport> reports;
  std::vector<SpectralField> basis;
  for (int k = 1; k <= 4; ++k) {
    basis.push_back(d1_mode(model, k, 1.0));
    basis.push_back(d1_mode(model, k, cplx(0.0, 1.0)));
  }
  for (auto& rep : check_gradient_estimate(model, cfg, x, basis, bounded, sampling(opt, 70))) {
    reports.push_back(std::move(rep));
  }
  const double d0 = entropy_threshold(model);
  reports.push_back(entropy_gradient_check(model, cfg, x, dir, positive, d0, Variant::local, sampling(opt, 71)));
  reports.back().variant = "local_delta0";
  reports.push_back(entropy_gradient_check(model, cfg, x, dir, positive, 2.0 * d0, Variant::local, sampling(opt, 72)));
  reports.back().variant = "local_2delta0";
  reports.push_back(entropy_gradient_check(model, cfg, x, dir, positive, d0 / 10.0, Variant::global, sampling(opt, 73)));
  reports.back().variant = "global_delta0_over_10";

  const double alpha = 2.0;
  const double r0 = harnack_radius(model, alpha);
  SpectralField unit = dir;
  unit *= 1.0 / norm(model, unit, Space::v_theta(model.params().theta));
  SpectralField y_near = x;
  y_near.add_scaled(0.5 * r0, unit);
  SpectralField y_far = x;
  y_far.add_scaled(2.0 * r0, unit);
  reports.push_back(harnack_check(model, cfg, x, y_near, alpha, positive, Variant::local, sampling(opt, 74)));
  reports.back().variant = "local_half_radius";
  reports.push_back(harnack_check(model, cfg, x, y_far, alpha, positive, Variant::global, sampling(opt, 75)));
  reports.back().variant = "global_twice_radius";
  for (auto& rep : exp_moment_check(model, cfg, x, sampling(opt, 76))) reports.push_back(std::move(rep));

  bool pass = true;
  std::ostringstream failed;
  json list = json::array();
  for (const auto& rep : reports) {
    pass = pass && rep.pass;
    if (!rep.pass) failed << rep.check << "/" << rep.variant << " ";
    list.push_back(json{{"check", rep.check}, {"variant", rep.variant}, {"lhs_mean", rep.lhs_mean},
                        {"rhs", rep.rhs}, {"pass", rep.pass}});
  }
  r.pass = pass;
  r.details = json{{"reports", list}};
  r.summary = std::to_string(reports.size()) + " checks (8 gradient directions, 3 entropy, 2 Harnack, 2 exp-moment)" +
              (pass ? ", all pass" : ", failed: " + failed.str());
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CriterionResult determinism(const AcceptanceOptions& opt) {
  CriterionResult r = criterion(8, "determinism");
  const fs::path root = fs::path(opt.scratch_dir) / "determinism";
  const std::vector<std::string> commands = {"check-assumptions", "simulate", "bismut",
                                             "coupling",          "inequalities", "sample-longrun"};
  bool pass = true;
  std::ostringstream summary;
  std::ostringstream sink;
  for (const auto& cmd : commands) {
    std::vector<std::string> outputs;
    for (const char* run : {"a", "b", "c"}) {
      const fs::path dir = root / run;
      const std::string workers = std::string(run) == "c" ? "3" : "1";
      const int code = run_cli({cmd, "--samples", "400", "--steps", "50", "--seed", std::to_string(opt.seed),
                                "--workers", workers, "--output_dir", dir.string()},
                               sink, sink);
      if (code == kExitConfigError) pass = false;
      outputs.push_back(slurp(dir / (cmd + ".jsonl")) + slurp(dir / (cmd + ".csv")));
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    pass = pass && same;
    r.details[cmd] = json{{"identical", same}, {"bytes", outputs[0].size()}};
    summary << cmd << (same ? " ok" : " DIFFERS") << "; ";
  }
  r.pass = pass;
  r.summary = summary.str() + "reruns with 1 and 3 workers";
  return r;
}

// Runtime budgets in seconds (0: none).
double budget(int id) {
  switch (id) {
    case 1: return 60.0;
    case 2: return 300.0;
    case 3: return 600.0;
    case 7: return 1200.0;
    default: return 0.0;
  }
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = assumptions(opt); break;
    case 2: r = ou_oracle(opt); break;
    case 3: r = bismut_vs_fd(opt); break;
    case 4: r = coupling(opt); break;
    case 5: r = girsanov(opt); break;
    case 6: r = energy(opt); break;
    case 7: r = inequality_suite(opt); break;
    case 8: r = determinism(opt); break;
    default: throw ParameterError("no acceptance criterion " + std::to_string(id));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double limit = budget(id);
  if (limit > 0.0 && r.seconds > limit) {
    r.pass = false;
    r.summary += "; runtime " + fmt(r.seconds) + " s exceeds " + fmt(limit) + " s";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    out.push_back(run_criterion(id, opt));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result_line(const CriterionResult& r, bool with_time) {
  std::ostringstream s;
  s << "criterion " << r.id << ' ' << (r.pass ? "PASS" : "FAIL") << ' ' << r.name << ": " << r.summary;
  if (with_time) s << " [" << std::fixed << std::setprecision(1) << r.seconds << " s]";
  return s.str();
}

}  // namespace sgb
