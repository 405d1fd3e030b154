#include "sgb/commands.hpp"

#include "sgb/acceptance.hpp"
#include "sgb/config.hpp"
#include "sgb/error.hpp"
#include "sgb/inequalities.hpp"
#include "sgb/nonlinearity.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

namespace sgb {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  unsigned workers = 1;
  bool timing = false;
  bool dump_path = false;
  KeyValues overrides;
};

/// A check failed; the run still writes its reports.
struct CheckFailure {
  std::string check;
};

std::string num(double v) { return json(v).dump(); }

/// Collects JSON-lines records and CSV rows; writes both files at the end.
class Reporter {
 public:
  Reporter(const RunConfig& rc, std::string command, bool timing)
      : rc_(rc), command_(std::move(command)), timing_(timing) {
    json hashed = json::object();
    for (const auto& [k, v] : rc.values) {
      if (k != "output_dir") hashed[k] = v;
    }
    hash_ = params_hash(hashed);
  }

  fs::path jsonl_path() const { return fs::path(rc_.output_dir) / (command_ + ".jsonl"); }
  fs::path csv_path() const { return fs::path(rc_.output_dir) / (command_ + ".csv"); }
  const std::string& hash() const { return hash_; }

  void record(json j) { lines_.push_back(std::move(j)); }

  /// Estimator record {op, params_hash, mean, stderr, n_samples, seed, elapsed}.
  void estimate(const std::string& op, const EstimatorResult& r, std::uint64_t seed, double seconds) {
    record(json{{"op", op},
                {"params_hash", hash_},
                {"mean", r.mean},
                {"stderr", r.std_err},
                {"n_samples", r.n_samples},
                {"seed", seed},
                {"elapsed", timing_ ? json(seconds) : json(nullptr)}});
  }

  void row(const std::string& check, const std::string& variant, std::size_t samples, std::uint64_t seed, double lhs,
           double stderr_value, double rhs, bool pass) {
    std::string line = check + "," + variant + "," + std::to_string(rc_.lattice.dimension) + "," +
                       std::to_string(rc_.lattice.cutoff) + "," + num(rc_.integrator.t_final) + "," +
                       std::to_string(samples) + "," + std::to_string(seed) + "," + num(lhs) + "," +
                       num(stderr_value) + "," + num(rhs) + "," + (pass ? "true" : "false");
    rows_.push_back(std::move(line));
    if (!pass && !failed_) failed_ = check + "/" + variant;
  }

  void inequality(const InequalityReport& r, std::size_t samples) {
    json j = json{{"op", "inequality"}, {"params_hash", hash_}};
    const json body = r.to_json();
    for (const auto& [k, v] : body.items()) j[k] = v;
    record(std::move(j));
    row(r.check, r.variant, samples, r.seed, r.lhs_mean, r.lhs_stderr, r.rhs, r.pass);
  }

  const std::optional<std::string>& failed() const { return failed_; }

  void write() const {
    fs::create_directories(rc_.output_dir);
    std::ofstream j(jsonl_path(), std::ios::binary | std::ios::trunc);
    for (const auto& line : lines_) j << line.dump() << '\n';
    std::ofstream c(csv_path(), std::ios::binary | std::ios::trunc);
    c << "check,variant,d,N,t,samples,seed,lhs,stderr,rhs,pass\n";
    for (const auto& line : rows_) c << line << '\n';
    if (!j || !c) throw ConfigError("cannot write reports to " + rc_.output_dir);
  }

 private:
  const RunConfig& rc_;
  std::string command_;
  bool timing_;
  std::string hash_;
  std::vector<json> lines_;
  std::vector<std::string> rows_;
  std::optional<std::string> failed_;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Everything a command needs, built once from the resolved configuration.
struct Context {
  const RunConfig& rc;
  const Options& opt;
  const Model& model;
  SpectralField x0;
  SpectralField h;
  TestFunctional f;
  Reporter& rep;
  std::ostream& out;

  SamplingOptions sampling(std::uint64_t tag = 0) const {
    return {rc.samples, tag == 0 ? rc.seed : derive_seed(rc.seed, tag), opt.workers};
  }
};

// Positive functional for the entropy and Harnack checks: f itself when it
// is bounded below by a positive constant, else floor + tanh^2 along h.
TestFunctional positive_functional(const Context& c) {
  if (c.f.infimum() > 0.0) return c.f;
  const bool directed = c.f.kind() == TestFunctional::Kind::bounded_tanh || c.f.kind() == TestFunctional::Kind::tanh_squared;
  return TestFunctional::tanh_squared(directed ? c.f.direction() : c.h, directed ? c.f.gain() : 2.0, 0.1);
}

// Real and imaginary unit directions of every half mode.
std::vector<SpectralField> mode_basis(const Model& model) {
  std::vector<SpectralField> out;
  for (std::size_t m = 0; m < model.lattice().half_size(); ++m) {
    out.push_back(mode_field(model.lattice(), m, 1.0));
    out.push_back(mode_field(model.lattice(), m, cplx(0.0, 1.0)));
  }
  return out;
}

void cmd_check_assumptions(Context& c) {
  const AssumptionReport r = check_assumptions(c.model, c.rc.samples, c.rc.seed);
  json stats = json::array();
  for (const auto& s : r.inequalities) {
    stats.push_back(json{{"name", s.name}, {"statement", s.statement}, {"worst_ratio", s.worst_ratio},
                         {"threshold", s.threshold}, {"asserted", s.asserted}, {"pass", s.pass()}});
    c.rep.row(s.name, s.asserted ? "asserted" : "informational", r.n_samples, r.seed, s.worst_ratio, 0.0,
              s.threshold, s.pass() || !s.asserted);
  }
  c.rep.record(json{{"op", "check_assumptions"},
                    {"params_hash", c.rep.hash()},
                    {"lattice", to_json(r.lattice)},
                    {"params", to_json(r.params)},
                    {"constants", to_json(r.constants)},
                    {"n_samples", r.n_samples},
                    {"seed", r.seed},
                    {"inequalities", stats},
                    {"pass", r.pass()}});
}

void cmd_simulate(Context& c) {
  const IntegratorConfig& cfg = c.rc.integrator;
  const Stopwatch clock;
  struct PathStats {
    double residual, final_energy;
  };
  const auto stats = map_samples(c.rc.samples, c.opt.workers, [&](std::size_t j) {
    const PathRecord p = simulate(c.model, cfg, c.x0, NoiseStream(c.rc.seed, j));
    return PathStats{energy_identity_residual(c.model, p), norm_sq(c.model, p.states.back(), Space::H())};
  });
  std::vector<double> residual(stats.size()), energy(stats.size()), abs_res(stats.size());
  for (std::size_t j = 0; j < stats.size(); ++j) {
    residual[j] = stats[j].residual;
    abs_res[j] = std::abs(stats[j].residual);
    energy[j] = stats[j].final_energy;
  }
  const double seconds = clock.seconds();
  const EstimatorResult e = estimate_mean(energy);
  const EstimatorResult r = estimate_mean(residual);
  c.rep.estimate("final_energy", e, c.rc.seed, seconds);
  c.rep.estimate("energy_identity_residual", r, c.rc.seed, seconds);
  std::sort(abs_res.begin(), abs_res.end());
  const double median = abs_res.empty() ? 0.0 : abs_res[abs_res.size() / 2];
  const double worst = abs_res.empty() ? 0.0 : abs_res.back();
  c.rep.record(json{{"op", "energy_identity_summary"},
                    {"params_hash", c.rep.hash()},
                    {"scheme", scheme_name(cfg.scheme)},
                    {"steps", cfg.steps},
                    {"median_abs_residual", median},
                    {"max_abs_residual", worst}});
  // Discretization error only: reported, never asserted.
  c.rep.row("energy_identity", std::string(scheme_name(cfg.scheme)), c.rc.samples, c.rc.seed, median, 0.0, worst,
            std::isfinite(worst));
  c.rep.row("final_energy", "mean", c.rc.samples, c.rc.seed, e.mean, e.std_err, e.mean, true);
  if (c.opt.dump_path) {
    const fs::path p = fs::path(c.rc.output_dir) / "path_0.csv";
    fs::create_directories(c.rc.output_dir);
    std::ofstream o(p, std::ios::binary | std::ios::trunc);
    write_path_csv(o, c.model, simulate(c.model, cfg, c.x0, NoiseStream(c.rc.seed, 0)));
    c.out << "path written to " << p.string() << '\n';
  }
}

void cmd_bismut(Context& c) {
  const IntegratorConfig& cfg = c.rc.integrator;
  Stopwatch clock;
  const EstimatorResult b = estimate_gradient(c.model, cfg, c.x0, c.h, c.f, c.sampling());
  c.rep.estimate("bismut_gradient", b, c.rc.seed, clock.seconds());
  clock = Stopwatch();
  const std::uint64_t fd_seed = derive_seed(c.rc.seed, 31);
  const EstimatorResult fd =
      fd_gradient_crn(c.model, cfg, c.x0, c.h, c.f, c.rc.epsilon_fd, c.sampling(31));
  c.rep.estimate("fd_gradient_crn", fd, fd_seed, clock.seconds());
  const double combined = std::hypot(b.std_err, fd.std_err);
  c.rep.row("bismut_vs_fd", c.f.name(), c.rc.samples, c.rc.seed, std::abs(b.mean - fd.mean), combined,
            3.0 * combined, std::abs(b.mean - fd.mean) <= 3.0 * combined);

  // OU oracle: same direction, linear functional along h, nonlinearity off.
  IntegratorConfig ou = cfg;
  ou.nonlinearity = false;
  clock = Stopwatch();
  const std::uint64_t ou_seed = derive_seed(c.rc.seed, 32);
  const EstimatorResult o = estimate_gradient(c.model, ou, c.x0, c.h, TestFunctional::linear(c.h), c.sampling(32));
  c.rep.estimate("bismut_gradient_ou", o, ou_seed, clock.seconds());
  const double oracle = ou_gradient_oracle(c.model, cfg.t_final, c.h, c.h);
  c.rep.record(json{{"op", "ou_oracle"}, {"params_hash", c.rep.hash()}, {"value", oracle}});
  c.rep.row("bismut_vs_ou_oracle", "linear_h", c.rc.samples, ou_seed, std::abs(o.mean - oracle), o.std_err,
            3.0 * o.std_err, std::abs(o.mean - oracle) <= 3.0 * o.std_err);
}

void cmd_coupling(Context& c) {
  const IntegratorConfig& cfg = c.rc.integrator;
  const double eps = c.rc.epsilon_girsanov;
  const NoiseStream noise(c.rc.seed, 0);
  const CouplingResult r = coupling_residual(c.model, cfg, c.x0, c.h, eps, noise);
  IntegratorConfig fine = cfg;
  fine.steps *= 2;
  const CouplingResult rf = coupling_residual(c.model, fine, c.x0, c.h, eps, noise);
  const double bound = 10.0 * cfg.dt() * eps * norm(c.model, c.h, Space::V());
  c.rep.record(json{{"op", "coupling_residual"},
                    {"params_hash", c.rep.hash()},
                    {"scheme", scheme_name(cfg.scheme)},
                    {"epsilon", eps},
                    {"max_residual", r.max_residual},
                    {"max_residual_half_step", rf.max_residual},
                    {"final_gap", r.final_gap},
                    {"initial_gap", r.initial_gap},
                    {"bound", bound}});
  c.rep.row("coupling_residual", std::string(scheme_name(cfg.scheme)), 1, c.rc.seed, r.max_residual, 0.0, bound,
            r.max_residual <= bound);

  const Stopwatch clock;
  const GirsanovReport g = girsanov_checks(c.model, cfg, c.x0, c.h, eps, c.f, c.sampling());
  const double seconds = clock.seconds();
  c.rep.estimate("girsanov_density", g.density, c.rc.seed, seconds);
  c.rep.estimate("girsanov_reweighted", g.reweighted, c.rc.seed, seconds);
  c.rep.estimate("girsanov_perturbed", g.perturbed, c.rc.seed, seconds);
  c.rep.record(json{{"op", "girsanov_identity"},
                    {"params_hash", c.rep.hash()},
                    {"max_identity_error", g.max_identity_error},
                    {"tolerance", g.identity_tolerance}});
  c.rep.row("girsanov_density", "mean_minus_one", c.rc.samples, c.rc.seed, std::abs(g.density.mean - 1.0),
            g.density.std_err, 3.0 * g.density.std_err, g.density_pass());
  const double combined = std::hypot(g.reweighted.std_err, g.perturbed.std_err);
  c.rep.row("girsanov_reweighted", c.f.name(), c.rc.samples, c.rc.seed, std::abs(g.reweighted.mean - g.perturbed.mean),
            combined, 3.0 * combined, g.reweighted_pass());
  c.rep.row("girsanov_identity", "relative", c.rc.samples, c.rc.seed, g.max_identity_error, 0.0, g.identity_tolerance,
            g.identity_pass());
}

void cmd_inequalities(Context& c) {
  const IntegratorConfig& cfg = c.rc.integrator;
  const std::size_t n = c.rc.samples;
  for (const auto& r : check_gradient_estimate(c.model, cfg, c.x0, mode_basis(c.model), c.f, c.sampling(70))) {
    c.rep.inequality(r, n);
  }
  const TestFunctional pos = positive_functional(c);
  const double d0 = entropy_threshold(c.model);
  const double delta = c.rc.delta_entropy > 0.0 ? c.rc.delta_entropy : d0;
  const Variant ev = delta >= d0 ? Variant::local : Variant::global;
  c.rep.inequality(entropy_gradient_check(c.model, cfg, c.x0, c.h, pos, delta, ev, c.sampling(71)), n);

  const double r0 = harnack_radius(c.model, c.rc.alpha);
  SpectralField unit = c.h;
  unit *= 1.0 / norm(c.model, c.h, Space::v_theta(c.model.params().theta));
  for (auto [rho, v] : {std::pair{0.5 * r0, Variant::local}, std::pair{2.0 * r0, Variant::global}}) {
    SpectralField y = c.x0;
    y.add_scaled(rho, unit);
    c.rep.inequality(harnack_check(c.model, cfg, c.x0, y, c.rc.alpha, pos, v, c.sampling(74)), n);
  }
  for (const auto& r : exp_moment_check(c.model, cfg, c.x0, c.sampling(76))) c.rep.inequality(r, n);
}

// Undocumented: one long trajectory cut into `samples` windows of length
// t_final; compares the time average of ||X||_V^2 with the stationary
// energy balance a^2 ||Q||_HS^2 / 2.
void cmd_sample_longrun(Context& c) {
  const IntegratorConfig& cfg = c.rc.integrator;
  const Integrator integ(c.model, cfg);
  SpectralField x = c.x0;
  std::vector<double> window(c.rc.samples);
  for (std::size_t j = 0; j < c.rc.samples; ++j) {
    double acc = 0.0;
    x = integ.run(x, NoiseStream(c.rc.seed, j), [&](std::size_t, const SpectralField& xn, const SpectralField&) {
      acc += norm_sq(c.model, xn, Space::V());
    });
    window[j] = acc / static_cast<double>(cfg.steps);
  }
  // Batch means over the second half only.
  const std::span<const double> tail(window.data() + window.size() / 2, window.size() - window.size() / 2);
  const EstimatorResult r = estimate_mean(tail);
  const double a = cfg.noise_amplitude;
  const double target = 0.5 * a * a * c.model.constants().q_hs_sq;
  c.rep.estimate("longrun_v_energy", r, c.rc.seed, 0.0);
  c.rep.record(json{{"op", "longrun_balance"}, {"params_hash", c.rep.hash()}, {"stationary_value", target}});
  c.rep.row("longrun_v_energy", "batch_means", tail.size(), c.rc.seed, r.mean, r.std_err, target, true);
}

int cmd_accept(const RunConfig& rc, const Options& opt, Reporter& rep, std::ostream& out) {
  AcceptanceOptions ao;
  ao.seed = rc.seed;
  ao.workers = opt.workers;
  ao.scratch_dir = (fs::path(rc.output_dir) / "acceptance_scratch").string();
  run_acceptance(ao, [&](const CriterionResult& r) {
    out << format_result_line(r, opt.timing) << std::endl;
    rep.record(json{{"op", "acceptance"},
                    {"criterion", r.id},
                    {"name", r.name},
                    {"pass", r.pass},
                    {"summary", r.summary},
                    {"details", r.details},
                    {"elapsed", opt.timing ? json(r.seconds) : json(nullptr)}});
    rep.row("criterion_" + std::to_string(r.id), r.name, 0, rc.seed, r.pass ? 1.0 : 0.0, 0.0, 1.0, r.pass);
  });
  return 0;
}

const std::vector<std::pair<std::string, std::string>>& commands() {
  static const std::vector<std::pair<std::string, std::string>> c = {
      {"check-assumptions", "Check the structural bounds on B on random field pairs"},
      {"simulate", "Simulate paths and report energy identity residuals"},
      {"bismut", "Bismut gradient estimate against finite differences and the OU oracle"},
      {"coupling", "Coupling residual and Girsanov checks"},
      {"inequalities", "Gradient, entropy, Harnack and exponential moment checks"},
      {"accept", "Run the acceptance suite"},
      {"sample-longrun", ""},
  };
  return c;
}

int dispatch(const std::string& command, const Options& opt, std::ostream& out, std::ostream& err) {
  std::optional<KeyValues> file;
  if (!opt.config_path.empty()) file = read_config_file(opt.config_path);
  const RunConfig rc = resolve_config(file, opt.overrides);
  const Model model(rc.lattice, rc.params);
  Reporter rep(rc, command, opt.timing);

  int code = kExitOk;
  try {
    if (command == "accept") {
      code = cmd_accept(rc, opt, rep, out);
    } else {
      Context c{rc,  opt, model, parse_modes(model.lattice(), rc.x0), parse_modes(model.lattice(), rc.h),
                parse_functional(model.lattice(), rc.functional), rep, out};
      static const std::map<std::string, std::function<void(Context&)>> table = {
          {"check-assumptions", cmd_check_assumptions}, {"simulate", cmd_simulate},
          {"bismut", cmd_bismut},                       {"coupling", cmd_coupling},
          {"inequalities", cmd_inequalities},           {"sample-longrun", cmd_sample_longrun}};
      table.at(command)(c);
    }
  } catch (const AssumptionViolation& e) {
    rep.record(json{{"op", "assumption_violation"}, {"message", e.what()}, {"witness", json::parse(e.witness())}});
    rep.write();
    err << command << ": " << e.what() << " (report: " << rep.jsonl_path().string() << ")\n";
    return kExitCheckFailed;
  } catch (const DivergenceError& e) {
    rep.record(json{{"op", "divergence"}, {"message", e.what()}, {"sample_index", e.sample_index()}});
    rep.write();
    err << command << ": divergence in sample " << e.sample_index() << ": " << e.what()
        << " (report: " << rep.jsonl_path().string() << ")\n";
    return kExitCheckFailed;
  }
  rep.write();
  if (rep.failed()) {
    err << command << ": check failed: " << *rep.failed() << " (report: " << rep.csv_path().string() << ")\n";
    return kExitCheckFailed;
  }
  out << command << ": ok (reports: " << rep.jsonl_path().string() << ", " << rep.csv_path().string() << ")\n";
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral Galerkin SPDE gradient and Harnack estimates"};
  app.name("sgb");
  app.require_subcommand(1);
  // No "-h": "--h" is the direction override.
  app.set_help_flag("--help", "Print this help message and exit");
  Options opt;
  std::string selected;
  for (const auto& [name, description] : commands()) {
    CLI::App* sub = app.add_subcommand(name, description);
    if (description.empty()) sub->group("");
    sub->add_option("--config", opt.config_path, "INI file with the run parameters")->check(CLI::ExistingFile);
    sub->add_option("--workers", opt.workers, "Worker threads (never changes results)")->check(CLI::Range(1u, 1024u));
    sub->add_flag("--timing", opt.timing, "Record elapsed seconds in the reports");
    if (name == "simulate") sub->add_flag("--dump-path", opt.dump_path, "Write sample 0 to path_0.csv");
    for (const auto& key : config_keys()) {
      sub->add_option("--" + key, opt.overrides[key], "Override " + key);
    }
    sub->callback([&selected, name = name] { selected = name; });
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "sgb: " << e.what() << '\n';
    return kExitConfigError;
  }
  // Keep only the overrides that were actually given.
  for (auto it = opt.overrides.begin(); it != opt.overrides.end();) {
    it = it->second.empty() ? opt.overrides.erase(it) : std::next(it);
  }
  try {
    return dispatch(selected, opt, out, err);
  } catch (const ConfigError& e) {
    err << selected << ": " << e.what() << '\n';
  } catch (const ParameterError& e) {
    err << selected << ": " << e.what() << '\n';
  } catch (const LatticeMismatch& e) {
    err << selected << ": " << e.what() << '\n';
  }
  return kExitConfigError;
}

}  // namespace sgb
