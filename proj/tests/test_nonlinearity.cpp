#include "doctest.h"

#include "sgb/error.hpp"
#include "sgb/nonlinearity.hpp"

#include <cmath>
#include <random>

using namespace sgb;

namespace {

const Model& burgers(int n = 4) {
  static const Model m4({1, 4}, ModelParams{1, 1, 0.5, 1});
  static const Model m8({1, 8}, ModelParams{1, 1, 0.5, 1});
  return n == 4 ? m4 : m8;
}

const Model& navier_stokes() {
  static const Model m({2, 4}, ModelParams{1, 2, 0.75, 1});
  return m;
}

SpectralField d1_mode(const Model& m, int k, cplx value) {
  SpectralField u = m.zero();
  u.at(m.lattice().locate({k, 0})->half_index) = value;
  return u;
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) d = std::max(d, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return d;
}

double max_abs(const SpectralField& a) {
  double d = 0.0;
  for (const cplx& c : a.coeffs()) d = std::max(d, std::abs(c));
  return d;
}

}  // namespace

TEST_CASE("B of the first Fourier pair") {
  // Hand convolution: l = 2 gets m = 1 only, i (u_1 . 1) v_1 = i.
  const Model& m = burgers();
  const SpectralField u = d1_mode(m, 1, 1.0);
  const SpectralField b = bilinear_b(m, u, u);
  CHECK(b.value_at(m.lattice(), {2, 0}) == cplx(0.0, 1.0));
  CHECK(b.value_at(m.lattice(), {-2, 0}) == cplx(0.0, -1.0));
  for (int k : {1, 3, 4}) CHECK(b.value_at(m.lattice(), {k, 0}) == cplx(0.0));
}

TEST_CASE("B with zero argument vanishes") {
  const Model& m = navier_stokes();
  std::mt19937_64 rng(1);
  const SpectralField u = random_field(m, rng, 0.0);
  CHECK(max_abs(bilinear_b(m, u, m.zero())) == 0.0);
  CHECK(max_abs(bilinear_b(m, m.zero(), u)) == 0.0);
}

TEST_CASE("a single transverse mode is a steady flow in d = 2") {
  const Model& m = navier_stokes();
  SpectralField u = m.zero();
  u.at(m.lattice().locate({1, 0})->half_index, 1) = cplx(0.3, -0.7);
  CHECK(max_abs(bilinear_b(m, u, u)) == 0.0);
}

TEST_CASE("b_tilde") {
  const Model& m = burgers();
  const SpectralField u = d1_mode(m, 1, 1.0);
  const SpectralField v = d1_mode(m, 2, 1.0);
  // l = 3: i[(u_1 . 2) v_2 + (v_2 . 1) u_1] = 3i.
  CHECK(b_tilde(m, u, v).value_at(m.lattice(), {3, 0}) == cplx(0.0, 3.0));

  std::mt19937_64 rng(4);
  for (const Model* model : {&burgers(8), &navier_stokes()}) {
    const SpectralField a = random_field(*model, rng, 0.0);
    const SpectralField b = random_field(*model, rng, 0.0);
    CHECK(b_tilde(*model, a, b) == b_tilde(*model, b, a));
    SpectralField twice = bilinear_b(*model, a, a);
    twice *= 2.0;
    CHECK(max_abs_diff(b_tilde(*model, a, a), twice) <= 1e-15 * max_abs(twice));
  }
}

TEST_CASE("b_tilde_into tolerates aliasing") {
  const Model& m = navier_stokes();
  std::mt19937_64 rng(6);
  const SpectralField u = random_field(m, rng, 0.0);
  const SpectralField v = random_field(m, rng, 0.0);
  const SpectralField expected = b_tilde(m, u, v);
  SpectralField a = u;
  b_tilde_into(m, a, v, a);
  CHECK(a == expected);
  SpectralField b = v;
  b_tilde_into(m, u, b, b);
  CHECK(b == expected);
}

TEST_CASE("lattice mismatch is reported") {
  const Model& m = burgers();
  const SpectralField other(Lattice({1, 5}));
  CHECK_THROWS_AS(bilinear_b(m, m.zero(), other), LatticeMismatch);
}

TEST_CASE("property: bilinearity, homogeneity, invariants") {
  std::mt19937_64 rng(8);
  for (const Model* model : {&burgers(8), &navier_stokes()}) {
    for (int trial = 0; trial < 50; ++trial) {
      const SpectralField u = random_field(*model, rng, 0.0);
      const SpectralField u2 = random_field(*model, rng, 0.0);
      const SpectralField v = random_field(*model, rng, 0.0);
      const double alpha = 0.7, beta = -1.3;
      SpectralField combo = u;
      combo *= alpha;
      combo.add_scaled(beta, u2);
      SpectralField expected = bilinear_b(*model, u, v);
      expected *= alpha;
      expected.add_scaled(beta, bilinear_b(*model, u2, v));
      const SpectralField lhs = bilinear_b(*model, combo, v);
      CHECK(max_abs_diff(lhs, expected) <= 1e-12 * max_abs(expected));

      SpectralField second = bilinear_b(*model, v, u);
      second *= alpha;
      second.add_scaled(beta, bilinear_b(*model, v, u2));
      CHECK(max_abs_diff(bilinear_b(*model, v, combo), second) <= 1e-12 * max_abs(second));

      // Scaling by 2 is exact in binary floating point.
      SpectralField u_scaled = u, v_scaled = v;
      u_scaled *= 2.0;
      v_scaled *= 2.0;
      SpectralField four = bilinear_b(*model, u, v);
      four *= 4.0;
      CHECK(bilinear_b(*model, u_scaled, v_scaled) == four);

      CHECK(divergence_defect(model->lattice(), lhs) <= 1e-12);
      const double skew = std::abs(inner(*model, v, bilinear_b(*model, v, v)));
      CHECK(skew <= 1e-10 * norm(*model, v) * norm_sq(*model, v, Space::V()));
    }
  }
}

TEST_CASE("skew symmetry holds trivially on disjoint support") {
  const Model& m = burgers();
  const SpectralField v = d1_mode(m, 1, cplx(0.4, 0.2));
  CHECK(inner(m, v, bilinear_b(m, v, v)) == 0.0);
}

TEST_CASE("assumption checks") {
  SUBCASE("zero fields pass with zero ratios") {
    const AssumptionReport r = check_assumptions(burgers(), 0, 1);
    CHECK(r.pass());
    for (const auto& s : r.inequalities) CHECK(s.worst_ratio == 0.0);
  }
  SUBCASE("1000 random pairs, d = 1, N = 8") {
    const AssumptionReport r = check_assumptions(burgers(8), 1000, 7);
    CHECK(r.pass());
    for (const auto& s : r.inequalities) {
      CAPTURE(s.name);
      if (s.name == "q_bound") CHECK(s.worst_ratio < 1.0);
      if (s.asserted) CHECK(s.worst_ratio <= s.threshold);
    }
  }
  SUBCASE("1000 random pairs, d = 2, N = 4") {
    const AssumptionReport r = check_assumptions(navier_stokes(), 1000, 7);
    CHECK(r.pass());
  }
}
