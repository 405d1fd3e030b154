#include "sgb/spectral.hpp"

#include "sgb/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace sgb {

namespace {

// Expands a per-mode value into per-double weights (dimension components,
// re and im each).
std::vector<double> per_double(const std::vector<double>& per_mode, int dimension, double factor) {
  std::vector<double> out;
  out.reserve(per_mode.size() * 2 * dimension);
  for (double v : per_mode) {
    for (int i = 0; i < 2 * dimension; ++i) out.push_back(factor * v);
  }
  return out;
}

}  // namespace

Spectral::Spectral(const LatticeSpec& lattice, const ModelParams& params)
    : lattice_(lattice), params_(validate_params(params, lattice)) {
  const std::size_t n = lattice_.half_size();
  eigen_.resize(n);
  qfac_.resize(n);
  std::vector<double> eig_theta(n), q_norm(n), q_inv(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double k2 = lattice_.mode_norm_sq(m);
    eigen_[m] = params_.lambda0 * std::pow(k2, params_.delta + 1.0);
    eig_theta[m] = std::pow(eigen_[m], params_.theta);
    qfac_[m] = std::pow(k2, -params_.sigma);
    q_norm[m] = std::pow(k2, 2.0 * params_.sigma);
    q_inv[m] = std::pow(k2, params_.sigma);
  }
  const int d = lattice_.dimension();
  w_h_ = per_double(std::vector<double>(n, 1.0), d, 2.0);
  w_v_ = per_double(eigen_, d, 2.0);
  w_vtheta_ = per_double(eig_theta, d, 2.0);
  w_q_ = per_double(q_norm, d, 2.0);
  w_qinv_dot_ = per_double(q_inv, d, 2.0);
  d_q_ = per_double(qfac_, d, 1.0);
  d_eigen_ = per_double(eigen_, d, 1.0);
}

double norm_sq(const Spectral& s, const SpectralField& u, Space space) {
  u.require_lattice(s.lattice());
  const auto x = u.doubles();
  const auto& k = kernels::active();
  switch (space.kind) {
    case Space::Kind::H:
      return k.weighted_sumsq(s.h_weight().data(), x.data(), x.size());
    case Space::Kind::Q:
      return k.weighted_sumsq(s.q_norm_weight().data(), x.data(), x.size());
    case Space::Kind::V_theta:
      if (space.theta == 1.0) return k.weighted_sumsq(s.v_weight().data(), x.data(), x.size());
      if (space.theta == s.params().theta) {
        return k.weighted_sumsq(s.v_theta_weight().data(), x.data(), x.size());
      }
      {
        std::vector<double> w(x.size());
        const auto eig = s.eigen_per_double();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = 2.0 * std::pow(eig[i], space.theta);
        return k.weighted_sumsq(w.data(), x.data(), x.size());
      }
  }
  return 0.0;
}

double inner(const Spectral& s, const SpectralField& u, const SpectralField& v) {
  u.require_lattice(s.lattice());
  v.require_lattice(s.lattice());
  const auto x = u.doubles();
  return kernels::active().weighted_dot(s.h_weight().data(), x.data(), v.doubles().data(), x.size());
}

SpectralField apply_diagonal(const Spectral& s, const SpectralField& u, Diagonal op) {
  u.require_lattice(s.lattice());
  SpectralField out = u;
  const auto x = u.doubles();
  const auto eig = s.eigen_per_double();
  std::vector<double> w(x.size());
  switch (op.kind) {
    case Diagonal::Kind::semigroup:
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-op.param * eig[i]);
      break;
    case Diagonal::Kind::Q:
      std::copy(s.q_factor().begin(), s.q_factor().end(), w.begin());
      break;
    case Diagonal::Kind::Q_inverse:
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / s.q_factor()[i];
      break;
    case Diagonal::Kind::L_power:
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(eig[i], op.param);
      break;
  }
  kernels::active().scale(w.data(), x.data(), out.doubles().data(), x.size());
  return out;
}

void leray_project_in_place(const Lattice& lattice, SpectralField& u) {
  u.require_lattice(lattice);
  if (lattice.dimension() == 1) return;
  const int d = lattice.dimension();
  for (std::size_t m = 0; m < lattice.half_size(); ++m) {
    const Mode& k = lattice.mode(m);
    cplx dot{};
    for (int c = 0; c < d; ++c) dot += u.at(m, c) * static_cast<double>(k[c]);
    const cplx coef = dot / lattice.mode_norm_sq(m);
    for (int c = 0; c < d; ++c) u.at(m, c) -= coef * static_cast<double>(k[c]);
  }
}

SpectralField leray_project(const Lattice& lattice, const RawField& raw) {
  SpectralField out = raw.half;
  leray_project_in_place(lattice, out);
  return out;
}

LatticeSum lattice_power_sum(int dimension, double p, int radius) {
  LatticeSum s;
  s.radius = radius;
  const Lattice big(LatticeSpec{dimension, radius});
  // Each half mode stands for the pair {k, -k}.
  for (std::size_t m = 0; m < big.half_size(); ++m) {
    s.partial += 2.0 * std::pow(big.mode_norm_sq(m), -0.5 * p);
  }
  // Shells |k|_inf = j > radius hold 2 (d = 1) or 8 j (d = 2) points with
  // |k| >= j; bound the shell sum by the integral of the decreasing envelope.
  const double r = radius;
  if (dimension == 1) {
    s.tail_bound = 2.0 * std::pow(r, 1.0 - p) / (p - 1.0);
  } else {
    s.tail_bound = 8.0 * std::pow(r, 2.0 - p) / (p - 2.0);
  }
  return s;
}

AssumptionConstants compute_constants(const ModelParams& p, const LatticeSpec& lattice) {
  validate_params(p, lattice);
  const int d = lattice.dimension;
  const int radius = std::max(64, 8 * lattice.cutoff);
  AssumptionConstants c;
  c.k1 = std::pow(p.lambda0, -p.theta);

  const double k2_exp = 2.0 * (p.delta + 1.0) * p.theta;
  c.k2_sum = lattice_power_sum(d, k2_exp, radius);
  const double l2t = std::pow(p.lambda0, 2.0 * p.theta);
  c.k2 = std::pow(4.0, 2.0 * p.delta * p.theta + 1.0) / l2t * c.k2_sum.upper();
  c.k2_proof = 2.0 *
               (std::pow(4.0, (p.delta + 1.0) * p.theta - 1.0) + std::pow(4.0, (p.delta + 1.0) * p.theta)) /
               l2t * c.k2_sum.upper();

  c.c_a2_sum = lattice_power_sum(d, 2.0 * p.delta, radius);
  c.c_a2 = c.c_a2_sum.upper() / p.lambda0;

  // |k| = 1 is always on the lattice.
  c.q_op_norm = 1.0;
  const int pol = d == 1 ? 1 : d - 1;
  const Lattice lat(lattice);
  for (std::size_t m = 0; m < lat.half_size(); ++m) {
    c.q_hs_sq += 2.0 * pol * std::pow(lat.mode_norm_sq(m), -2.0 * p.sigma);
  }
  c.hs_sum = lattice_power_sum(d, 4.0 * p.sigma, radius);
  c.q_hs_sq_infinite = pol * c.hs_sum.upper();
  return c;
}

SpectralField random_field(const Spectral& s, std::mt19937_64& rng, double envelope_exponent) {
  std::normal_distribution<double> normal;
  SpectralField u = s.zero();
  const Lattice& lat = s.lattice();
  for (std::size_t m = 0; m < lat.half_size(); ++m) {
    const double env = std::pow(lat.mode_norm_sq(m), -0.5 * envelope_exponent);
    for (int c = 0; c < lat.dimension(); ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      u.at(m, c) = env * cplx(re, im);
    }
  }
  leray_project_in_place(lat, u);
  return u;
}

SpectralField mode_field(const Lattice& lattice, std::size_t mode, cplx amplitude) {
  SpectralField u(lattice);
  const auto pol = polarization(lattice, mode);
  for (int c = 0; c < lattice.dimension(); ++c) u.at(mode, c) = amplitude * pol[c];
  return u;
}

}  // namespace sgb
