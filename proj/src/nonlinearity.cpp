#include "sgb/nonlinearity.hpp"

#include "sgb/error.hpp"
#include "sgb/kernels.hpp"
#include "sgb/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sgb {

namespace {

struct ExpandScratch {
  std::vector<double> u_re, u_im, v_re, v_im;
};

// Writes the full-lattice component-major arrays of `u`.
void expand(const Model& model, const SpectralField& u, std::vector<double>& re, std::vector<double>& im) {
  const int d = model.dimension();
  const std::size_t fe = model.lattice().full_extent();
  re.assign(fe * d, 0.0);
  im.assign(fe * d, 0.0);
  const auto src = model.plan().full_source();
  const auto conj = model.plan().full_conjugate();
  for (std::size_t f = 0; f < fe; ++f) {
    const std::int32_t h = src[f];
    if (h < 0) continue;
    const double sign = conj[f] ? -1.0 : 1.0;
    for (int c = 0; c < d; ++c) {
      const cplx v = u.at(static_cast<std::size_t>(h), c);
      re[c * fe + f] = v.real();
      im[c * fe + f] = sign * v.imag();
    }
  }
}

kernels::ConvolutionTables tables_of(const Model& model) {
  const ConvolutionPlan& plan = model.plan();
  kernels::ConvolutionTables t;
  t.dimension = model.dimension();
  t.output_count = model.lattice().half_size();
  t.full_extent = model.lattice().full_extent();
  t.offsets = plan.offsets();
  t.a_index = plan.a_index();
  t.b_index = plan.b_index();
  t.m_coord = plan.m_coord();
  return t;
}

double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

void bilinear_b_into(const Model& model, const SpectralField& u, const SpectralField& v, SpectralField& out) {
  u.require_lattice(model.lattice());
  v.require_lattice(model.lattice());
  out.require_lattice(model.lattice());
  thread_local ExpandScratch scratch;
  expand(model, u, scratch.u_re, scratch.u_im);
  expand(model, v, scratch.v_re, scratch.v_im);
  kernels::active().convolve(tables_of(model), {scratch.u_re.data(), scratch.u_im.data()},
                             {scratch.v_re.data(), scratch.v_im.data()}, out.doubles().data());
  leray_project_in_place(model.lattice(), out);
}

SpectralField bilinear_b(const Model& model, const SpectralField& u, const SpectralField& v) {
  u.require_same_lattice(v);
  SpectralField out = model.zero();
  bilinear_b_into(model, u, v, out);
  return out;
}

void b_tilde_into(const Model& model, const SpectralField& u, const SpectralField& v, SpectralField& out) {
  thread_local SpectralField tmp;
  if (!tmp.same_lattice(out)) tmp = model.zero();
  // tmp first: inputs may alias `out`.
  bilinear_b_into(model, v, u, tmp);
  bilinear_b_into(model, u, v, out);
  out += tmp;
}

SpectralField b_tilde(const Model& model, const SpectralField& u, const SpectralField& v) {
  u.require_same_lattice(v);
  SpectralField out = model.zero();
  b_tilde_into(model, u, v, out);
  return out;
}

bool AssumptionReport::pass() const {
  return std::all_of(inequalities.begin(), inequalities.end(),
                     [](const InequalityStat& s) { return !s.asserted || s.pass(); });
}

AssumptionReport check_assumptions(const Model& model, std::size_t n_samples, std::uint64_t seed) {
  const auto& c = model.constants();
  const double theta = model.params().theta;
  AssumptionReport report;
  report.lattice = model.lattice().spec();
  report.params = model.params();
  report.n_samples = n_samples;
  report.seed = seed;
  report.constants = c;
  report.inequalities = {
      {"q_coercivity", "||u||_Q^2 <= K1 ||u||_{V_theta}^2", 0.0, 1.0, true},
      {"skew_symmetry", "|<v,B(v,v)>| <= 1e-10 ||v||_H ||v||_V^2", 0.0, 1e-10, true},
      {"h_bound", "||B(u,v)||_H^2 <= C ||u||_H^2 ||v||_V^2", 0.0, 1.0, true},
      {"q_bound", "||B(u,v)||_Q^2 <= max(K2, K2_proof) ||u||_{V_theta}^2 ||v||_{V_theta}^2", 0.0, 1.0, true},
      {"q_bound_k2_stated", "||B(u,v)||_Q^2 <= K2 ||u||_{V_theta}^2 ||v||_{V_theta}^2", 0.0, 1.0, false},
      {"q_bound_k2_proof", "||B(u,v)||_Q^2 <= K2_proof ||u||_{V_theta}^2 ||v||_{V_theta}^2", 0.0, 1.0, false},
  };

  std::mt19937_64 rng(seed);
  const double envelope = model.params().delta + 2.0;
  SpectralField b = model.zero();
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (double exponent : {envelope, 0.0}) {
      const SpectralField u = random_field(model, rng, exponent);
      const SpectralField v = random_field(model, rng, exponent);
      const double u_h = norm_sq(model, u, Space::H());
      const double u_vt = norm_sq(model, u, Space::v_theta(theta));
      const double v_h = norm_sq(model, v, Space::H());
      const double v_v = norm_sq(model, v, Space::V());
      const double v_vt = norm_sq(model, v, Space::v_theta(theta));

      bilinear_b_into(model, v, v, b);
      const double skew = std::abs(inner(model, v, b));
      bilinear_b_into(model, u, v, b);
      const double b_h = norm_sq(model, b, Space::H());
      const double b_q = norm_sq(model, b, Space::Q());

      const double ratios[] = {
          safe_ratio(norm_sq(model, u, Space::Q()), c.k1 * u_vt),
          safe_ratio(skew, std::sqrt(v_h) * v_v),
          safe_ratio(b_h, c.c_a2 * u_h * v_v),
          safe_ratio(b_q, c.k2_asserted() * u_vt * v_vt),
          safe_ratio(b_q, c.k2 * u_vt * v_vt),
          safe_ratio(b_q, c.k2_proof * u_vt * v_vt),
      };
      for (std::size_t j = 0; j < report.inequalities.size(); ++j) {
        auto& stat = report.inequalities[j];
        stat.worst_ratio = std::max(stat.worst_ratio, ratios[j]);
        if (stat.asserted && !stat.pass()) {
          json witness{{"inequality", stat.name},
                       {"ratio", ratios[j]},
                       {"sample", i},
                       {"u", field_to_json(model.lattice(), u)},
                       {"v", field_to_json(model.lattice(), v)}};
          throw AssumptionViolation("structural inequality " + stat.name + " violated: " + stat.statement,
                                    witness.dump());
        }
      }
    }
  }
  return report;
}

}  // namespace sgb
