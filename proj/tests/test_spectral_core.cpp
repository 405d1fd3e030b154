#include "doctest.h"

#include "sgb/error.hpp"
#include "sgb/model.hpp"
#include "sgb/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace sgb;

namespace {

const double kPi = std::numbers::pi;

ModelParams params(double lambda0, double delta, double sigma, double theta) {
  return ModelParams{lambda0, delta, sigma, theta};
}

// u_k = value at the half mode +k in d = 1.
SpectralField d1_field(const Lattice& lat, int k, cplx value) {
  SpectralField u(lat);
  u.at(lat.locate({k, 0})->half_index) = value;
  return u;
}

}  // namespace

TEST_CASE("lattice pairs every nonzero mode with its partner exactly once") {
  for (LatticeSpec spec : {LatticeSpec{1, 4}, LatticeSpec{1, 8}, LatticeSpec{2, 1}, LatticeSpec{2, 4}}) {
    const Lattice lat(spec);
    const int n = 2 * spec.cutoff + 1;
    const std::size_t full = spec.dimension == 1 ? n : n * n;
    CHECK(lat.half_size() * 2 == full - 1);
    std::set<std::pair<int, int>> seen;
    for (std::size_t m = 0; m < lat.half_size(); ++m) {
      const Mode k = lat.mode(m);
      CHECK((k[0] != 0 || k[1] != 0));
      CHECK(seen.insert({k[0], k[1]}).second);
      CHECK(seen.count({-k[0], -k[1]}) == 0);
      const auto neg = lat.locate({-k[0], -k[1]});
      REQUIRE(neg);
      CHECK(neg->half_index == m);
      CHECK(neg->conjugate);
    }
    CHECK_FALSE(lat.locate({0, 0}));
  }
}

TEST_CASE("half-lattice order is lexicographic") {
  const Lattice lat(LatticeSpec{2, 2});
  for (std::size_t m = 1; m < lat.half_size(); ++m) {
    CHECK(lat.mode(m - 1) < lat.mode(m));
  }
  CHECK(lat.mode(0) == Mode{0, 1});
}

TEST_CASE("validate_params accepts and rejects the documented ranges") {
  CHECK_NOTHROW(validate_params(params(1, 1, 0.5, 1), {1, 4}));
  CHECK_NOTHROW(validate_params(params(1, 2, 1, 1), {2, 4}));
  try {
    validate_params(params(1, 0.4, 0.3, 1), {1, 4});
    FAIL("expected rejection");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("delta must exceed d/2") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_params(params(1, 1, 0.2, 1), {1, 4}), ParameterError);
  CHECK_THROWS_AS(validate_params(params(1, 1, 0.6, 1), {1, 4}), ParameterError);
  CHECK_THROWS_AS(validate_params(params(1, 1, 0.5, 0.9), {1, 4}), ParameterError);
  CHECK_THROWS_AS(validate_params(params(0, 1, 0.5, 1), {1, 4}), ParameterError);
  CHECK_THROWS_AS(validate_params(params(1, 1, 0.5, 1), {3, 4}), ParameterError);
  CHECK_THROWS_AS(Lattice(LatticeSpec{1, 0}), ParameterError);
}

TEST_CASE("norms follow the spectral definitions") {
  const Spectral s({1, 4}, params(1, 1, 0.5, 1));
  const SpectralField u = d1_field(s.lattice(), 1, 0.5);
  CHECK(norm_sq(s, u, Space::H()) == doctest::Approx(0.5));
  CHECK(norm_sq(s, u, Space::V()) == doctest::Approx(0.5));
  CHECK(norm_sq(s, d1_field(s.lattice(), 2, 0.5), Space::V()) == doctest::Approx(8.0));

  const Spectral s1({1, 4}, params(1, 2, 1, 1));
  CHECK(norm_sq(s1, d1_field(s1.lattice(), 1, 1.0), Space::Q()) == doctest::Approx(2.0));
  // |k|^{4 sigma} at k = 3 with sigma = 1.
  CHECK(norm_sq(s1, d1_field(s1.lattice(), 3, 1.0), Space::Q()) == doctest::Approx(2.0 * 81.0));
  // V_theta' with theta' = 0.5 at k = 2, delta = 2: (2^6)^0.5 = 8.
  CHECK(norm_sq(s1, d1_field(s1.lattice(), 2, 1.0), Space::v_theta(0.5)) == doctest::Approx(16.0));
}

TEST_CASE("diagonal operators") {
  const Spectral s({1, 4}, params(2, 1, 0.5, 1));
  const SpectralField u = d1_field(s.lattice(), 1, 1.0);
  const SpectralField e = apply_diagonal(s, u, Diagonal::semigroup(0.5));
  CHECK(e.at(0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(e.at(0).real() == doctest::Approx(0.367879).epsilon(1e-6));

  std::mt19937_64 rng(3);
  const SpectralField r = random_field(s, rng, 0.0);
  CHECK(apply_diagonal(s, r, Diagonal::semigroup(0.0)) == r);
  const SpectralField qq = apply_diagonal(s, apply_diagonal(s, r, Diagonal::q()), Diagonal::q_inverse());
  for (std::size_t i = 0; i < r.coeffs().size(); ++i) {
    CHECK(std::abs(qq.coeffs()[i] - r.coeffs()[i]) <= 1e-15 * std::abs(r.coeffs()[i]));
  }
  const SpectralField lp = apply_diagonal(s, d1_field(s.lattice(), 2, 1.0), Diagonal::l_power(0.5));
  CHECK(lp.at(1).real() == doctest::Approx(std::sqrt(2.0 * 16.0)));
}

TEST_CASE("diagonal operators commute mode-wise") {
  const Spectral s({2, 4}, params(1, 2, 0.75, 1));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const SpectralField u = random_field(s, rng, 1.0);
    const SpectralField a = apply_diagonal(s, apply_diagonal(s, u, Diagonal::q()), Diagonal::semigroup(0.01));
    const SpectralField b = apply_diagonal(s, apply_diagonal(s, u, Diagonal::semigroup(0.01)), Diagonal::q());
    // Mode-wise products commute up to the rounding of the two multiplications.
    for (std::size_t k = 0; k < a.coeffs().size(); ++k) {
      CHECK(std::abs(a.coeffs()[k] - b.coeffs()[k]) <= 4e-16 * std::abs(a.coeffs()[k]));
    }
  }
}

TEST_CASE("Leray projection") {
  const Lattice lat({2, 2});
  const std::size_t m = lat.locate({1, 0})->half_index;
  RawField raw(lat);
  raw.half.at(m, 0) = 1.0;
  CHECK(leray_project(lat, raw).at(m, 0) == cplx(0.0));
  CHECK(leray_project(lat, raw).at(m, 1) == cplx(0.0));

  RawField ortho(lat);
  ortho.half.at(m, 1) = 1.0;
  const SpectralField p = leray_project(lat, ortho);
  CHECK(p.at(m, 0) == cplx(0.0));
  CHECK(p.at(m, 1) == cplx(1.0));

  const Lattice l1({1, 3});
  RawField mean(l1);
  mean.zero_mode[0] = 3.0;
  mean.half.at(1) = cplx(0.5, -0.25);
  const SpectralField q = leray_project(l1, mean);
  CHECK(q == mean.half);
}

TEST_CASE("Leray projection is idempotent and leaves divergence-free fields") {
  const Lattice lat({2, 4});
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 10; ++trial) {
    RawField raw(lat);
    for (auto& c : raw.half.coeffs()) c = cplx(normal(rng), normal(rng));
    const SpectralField once = leray_project(lat, raw);
    CHECK(divergence_defect(lat, once) <= 1e-12);
    SpectralField twice = once;
    leray_project_in_place(lat, twice);
    for (std::size_t i = 0; i < once.coeffs().size(); ++i) {
      CHECK(std::abs(twice.coeffs()[i] - once.coeffs()[i]) <= 1e-15 * (1.0 + std::abs(once.coeffs()[i])));
    }
  }
}

TEST_CASE("constants") {
  SUBCASE("K1") {
    const auto c = compute_constants(params(4, 3, 0.3, 0.5), {1, 4});
    CHECK(c.k1 == doctest::Approx(0.5));
  }
  SUBCASE("infinite Hilbert-Schmidt norm against the zeta(4) series") {
    double zeta4 = 0.0;
    for (int k = 1000000; k >= 1; --k) zeta4 += 1.0 / std::pow(static_cast<double>(k), 4);
    const double oracle = 2.0 * zeta4;
    CHECK(oracle == doctest::Approx(std::pow(kPi, 4) / 45.0).epsilon(1e-12));
    const auto c = compute_constants(params(1, 2, 1, 1), {1, 4});
    CHECK(c.q_hs_sq_infinite >= oracle);
    CHECK(c.q_hs_sq_infinite - oracle <= c.hs_sum.tail_bound);
    CHECK(c.q_hs_sq_infinite == doctest::Approx(2.16465).epsilon(1e-4));
    // Truncated: 2 (1 + 1/16 + 1/81 + 1/256).
    CHECK(c.q_hs_sq == doctest::Approx(2.0 * (1 + 1.0 / 16 + 1.0 / 81 + 1.0 / 256)));
    CHECK(c.q_op_norm == 1.0);
  }
  SUBCASE("K2 in d = 1 against 64 pi^4 / 45") {
    const double oracle = 64.0 * std::pow(kPi, 4) / 45.0;
    const auto c = compute_constants(params(1, 1, 0.5, 1), {1, 8});
    CHECK(c.k2 >= oracle);
    CHECK(c.k2 == doctest::Approx(138.5).epsilon(1e-3));
    CHECK(c.k2 - oracle <= 64.0 * c.k2_sum.tail_bound);
    CHECK(c.k2_proof == doctest::Approx(40.0 * c.k2_sum.upper()));
    CHECK(c.k2_asserted() == c.k2);
    // C = S(2 delta) / lambda0 with S(2) = pi^2 / 3.
    CHECK(c.c_a2 >= kPi * kPi / 3.0);
    CHECK(c.c_a2 - kPi * kPi / 3.0 <= c.c_a2_sum.tail_bound);
  }
  SUBCASE("d = 2 lattice sum against 4 zeta(2) beta(2)") {
    const double catalan = 0.915965594177219015;
    const double oracle = 4.0 * (kPi * kPi / 6.0) * catalan;
    const LatticeSum s = lattice_power_sum(2, 4.0, 64);
    CHECK(s.partial <= oracle);
    CHECK(s.upper() >= oracle);
    CHECK(s.upper() - oracle <= s.tail_bound);
  }
  SUBCASE("proof constant dominates when (1 - delta) theta is large enough") {
    // ratio proof/stated = 0.625 * 4^((1 - delta) theta)
    const auto c = compute_constants(params(1, 0.6, 0.26, 1), {1, 4});
    CHECK(c.k2_proof / c.k2 == doctest::Approx(0.625 * std::pow(4.0, 0.4)));
    CHECK(c.k2_proof > c.k2);
    CHECK(c.k2_asserted() == c.k2_proof);
  }
}

TEST_CASE("property: Parseval, norm ordering and the coercivity bound") {
  for (LatticeSpec spec : {LatticeSpec{1, 8}, LatticeSpec{2, 4}}) {
    const ModelParams p = spec.dimension == 1 ? params(1.5, 1, 0.375, 1) : params(0.7, 2, 0.75, 1);
    const Model model(spec, p);
    const double k1 = model.constants().k1;
    std::mt19937_64 rng(17);
    for (int i = 0; i < 1000; ++i) {
      const double env = (i % 2) ? p.delta + 2.0 : 0.0;
      const SpectralField u = random_field(model, rng, env);
      const SpectralField v = random_field(model, rng, env);
      const double lhs = norm_sq(model, u + v) + norm_sq(model, u - v);
      const double rhs = 2.0 * norm_sq(model, u) + 2.0 * norm_sq(model, v);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
      for (double tp : {0.25, 0.5, 1.0}) {
        CHECK(norm(model, u) <= std::pow(p.lambda0, -tp / 2.0) * norm(model, u, Space::v_theta(tp)) * (1 + 1e-14));
      }
      CHECK(norm_sq(model, u, Space::Q()) <= k1 * norm_sq(model, u, Space::v_theta(p.theta)) * (1 + 1e-14));
    }
  }
}

TEST_CASE("H norm is twice the half-lattice sum") {
  const Spectral s({2, 3}, params(1, 2, 0.75, 1));
  std::mt19937_64 rng(2);
  const SpectralField u = random_field(s, rng, 0.0);
  double half = 0.0;
  for (const cplx& c : u.coeffs()) half += std::norm(c);
  CHECK(norm_sq(s, u) == doctest::Approx(2.0 * half).epsilon(1e-14));
}

TEST_CASE("field operations require a common lattice") {
  const Lattice a({1, 4});
  const Lattice b({1, 5});
  SpectralField u(a);
  const SpectralField v(b);
  CHECK_THROWS_AS(u += v, LatticeMismatch);
  const Spectral s({1, 4}, params(1, 1, 0.5, 1));
  CHECK_THROWS_AS(norm_sq(s, v), LatticeMismatch);
}
