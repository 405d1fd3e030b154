#include "doctest.h"

#include "sgb/error.hpp"
#include "sgb/inequalities.hpp"

#include <cmath>
#include <numbers>

using namespace sgb;

namespace {

const Model& burgers() {
  static const Model m({1, 4}, ModelParams{1, 1, 0.375, 1});
  return m;
}

SpectralField d1_mode(const Model& m, int k, cplx value) {
  SpectralField u = m.zero();
  u.at(m.lattice().locate({k, 0})->half_index) = value;
  return u;
}

IntegratorConfig config(double t, std::size_t steps, bool nonlinear) {
  IntegratorConfig c;
  c.t_final = t;
  c.steps = steps;
  c.nonlinearity = nonlinear;
  return c;
}

SpectralField x_start(const Model& m) { return d1_mode(m, 1, 0.5) + d1_mode(m, 2, cplx(0.0, 0.25)); }

std::vector<SpectralField> basis(const Model& m) {
  std::vector<SpectralField> out;
  for (int k = 1; k <= 4; ++k) {
    out.push_back(d1_mode(m, k, 1.0));
    out.push_back(d1_mode(m, k, cplx(0.0, 1.0)));
  }
  return out;
}

}  // namespace

TEST_CASE("gradient bound bracket") {
  const Model& m = burgers();
  const auto& c = m.constants();
  CHECK(gradient_bound_rhs(m, m.zero(), 1.0) == doctest::Approx(2.0 * c.k1 + 4.0 * c.k2 * c.q_hs_sq));
  // Linear growth in t with slope 4 K2 HS / lambda0^(2 - theta).
  const double slope = (gradient_bound_rhs(m, m.zero(), 2000.0) - gradient_bound_rhs(m, m.zero(), 1000.0)) / 1000.0;
  CHECK(slope == doctest::Approx(4.0 * c.k2 * c.q_hs_sq).epsilon(1e-6));
  CHECK(gradient_bound_rhs(m, x_start(m), 0.5) > gradient_bound_rhs(m, m.zero(), 0.5));
  CHECK_THROWS_AS(gradient_bound_rhs(m, m.zero(), 0.0), ParameterError);
}

TEST_CASE("gradient bound bracket for the N = 8 reference set") {
  const Model m({1, 8}, ModelParams{1, 1, 0.5, 1});
  double hs = 0.0;
  for (int k = 1; k <= 8; ++k) hs += 2.0 / (k * k);
  const double k2_series = 64.0 * std::pow(std::numbers::pi, 4) / 45.0;
  const SpectralField x = d1_mode(m, 1, std::sqrt(0.5));
  CHECK(norm_sq(m, x) == doctest::Approx(1.0));
  const double bracket = gradient_bound_rhs(m, x, 0.5);
  const double oracle = 2.0 / 0.5 + 4.0 * k2_series * (1.0 + hs * 0.5);
  // K2 is returned as a certified upper bound of the series value.
  CHECK(bracket >= oracle);
  CHECK(bracket == doctest::Approx(oracle).epsilon(1e-3));
}

TEST_CASE("thresholds") {
  const Model& m = burgers();
  const double k2 = m.constants().k2;
  CHECK(entropy_threshold(m) == doctest::Approx(4.0 * std::sqrt(k2)));
  CHECK(entropy_time(m, 2.0) == doctest::Approx(4.0 / (4.0 * std::numbers::e * k2)));
  CHECK(harnack_radius(m, 2.0) == doctest::Approx(1.0 / (8.0 * std::sqrt(k2))));
  double previous = 0.0;
  for (double alpha : {1.1, 1.5, 2.0, 4.0, 10.0}) {
    const double r = harnack_radius(m, alpha);
    CHECK(r > previous);
    previous = r;
  }
  CHECK_THROWS_AS(harnack_radius(m, 1.0), ParameterError);
}

TEST_CASE("gradient estimate check") {
  const Model& m = burgers();
  SUBCASE("constant functional") {
    const auto reports = check_gradient_estimate(m, config(0.5, 50, true), x_start(m), basis(m),
                                                 TestFunctional::constant(1.0), SamplingOptions{2000, 1, 1});
    REQUIRE(reports.size() == 8);
    for (const auto& r : reports) CHECK(r.pass);
  }
  SUBCASE("OU linear functional: lhs is the squared semigroup pairing") {
    const SpectralField e = d1_mode(m, 1, 1.0);
    const auto reports = check_gradient_estimate(m, config(0.5, 50, false), x_start(m), {d1_mode(m, 1, 1.0)},
                                                 TestFunctional::linear(e), SamplingOptions{20000, 2, 1});
    REQUIRE(reports.size() == 1);
    // h normalized in V_theta: ||h||_{V_1}^2 = 2 so h = e / sqrt(2); <e^{-tL} h, e> = 2 e^{-t} / sqrt(2).
    const double exact = std::sqrt(2.0) * std::exp(-0.5);
    const double mean = reports[0].details["gradient_mean"].get<double>();
    const double se = reports[0].details["gradient_stderr"].get<double>();
    CHECK(std::abs(mean - exact) <= 3.0 * se);
    // Closed form: E<X_t, e>^2 = <e^{-tL} x, e>^2 + Var, and the bound holds with room.
    const double pairing = 2.0 * 0.5 * std::exp(-0.5);
    const double var = std::pow(2.0, 2) * 0.5 * (1.0 - std::exp(-1.0)) / 2.0;
    CHECK(exact * exact <= (pairing * pairing + var) * gradient_bound_rhs(m, x_start(m), 0.5));
    CHECK(reports[0].pass);
  }
  SUBCASE("bounded nonlinear functional") {
    const auto reports = check_gradient_estimate(m, config(0.5, 100, true), x_start(m), basis(m),
                                                 TestFunctional::bounded_tanh(d1_mode(m, 1, 1.0), 2.0),
                                                 SamplingOptions{4000, 3, 1});
    for (const auto& r : reports) CHECK(r.pass);
  }
}

TEST_CASE("entropy gradient check") {
  const Model& m = burgers();
  const IntegratorConfig cfg = config(0.5, 100, true);
  const SpectralField h = d1_mode(m, 1, 1.0);
  const TestFunctional f = TestFunctional::tanh_squared(d1_mode(m, 1, 1.0), 2.0, 0.1);
  const double d0 = entropy_threshold(m);
  SUBCASE("constant functional") {
    const auto r = entropy_gradient_check(m, cfg, x_start(m), h, TestFunctional::constant(2.0), d0, Variant::local,
                                          SamplingOptions{500, 1, 1});
    CHECK(r.pass);
    CHECK(r.details["entropy"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("local at the threshold and global below it") {
    CHECK(entropy_gradient_check(m, cfg, x_start(m), h, f, d0, Variant::local, SamplingOptions{3000, 2, 1}).pass);
    const auto g = entropy_gradient_check(m, cfg, x_start(m), h, f, d0 / 10, Variant::global, SamplingOptions{3000, 2, 1});
    CHECK(g.pass);
    CHECK(g.details["t_effective"].get<double>() <= 0.5);
    CHECK(g.details["jensen_guard"].get<bool>());
  }
  SUBCASE("contract violations") {
    CHECK_THROWS_AS(entropy_gradient_check(m, cfg, x_start(m), h, f, 0.5 * d0, Variant::local, SamplingOptions{10, 2, 1}),
                    ParameterError);
    CHECK_THROWS_AS(entropy_gradient_check(m, cfg, x_start(m), h, TestFunctional::bounded_tanh(h, 1.0), d0,
                                           Variant::global, SamplingOptions{10, 2, 1}),
                    ParameterError);
  }
}

TEST_CASE("Harnack check") {
  const Model& m = burgers();
  const IntegratorConfig cfg = config(0.5, 100, true);
  const TestFunctional f = TestFunctional::tanh_squared(d1_mode(m, 1, 1.0), 2.0, 0.1);
  const SpectralField x = x_start(m);
  const double r0 = harnack_radius(m, 2.0);
  SpectralField dir = d1_mode(m, 1, 1.0);
  dir *= 1.0 / norm(m, dir, Space::V());
  SUBCASE("x = y reduces to Jensen") {
    const auto r = harnack_check(m, cfg, x, x, 2.0, f, Variant::local, SamplingOptions{2000, 1, 1});
    CHECK(r.details["exponent"].get<double>() == 0.0);
    CHECK(r.pass);
  }
  SUBCASE("constant functional") {
    SpectralField y = x;
    y.add_scaled(0.5 * r0, dir);
    CHECK(harnack_check(m, cfg, x, y, 2.0, TestFunctional::constant(0.3), Variant::local, SamplingOptions{100, 1, 1})
              .pass);
  }
  SUBCASE("local at half radius, global at twice the radius") {
    SpectralField y = x;
    y.add_scaled(0.5 * r0, dir);
    CHECK(harnack_check(m, cfg, x, y, 2.0, f, Variant::local, SamplingOptions{3000, 4, 1}).pass);
    CHECK(harnack_check(m, cfg, x, y, 2.0, f, Variant::global, SamplingOptions{3000, 4, 1}).pass);
    SpectralField far = x;
    far.add_scaled(2.0 * r0, dir);
    CHECK(harnack_check(m, cfg, x, far, 2.0, f, Variant::global, SamplingOptions{3000, 4, 1}).pass);
    CHECK_THROWS_WITH_AS(harnack_check(m, cfg, x, far, 2.0, f, Variant::local, SamplingOptions{10, 4, 1}),
                         doctest::Contains("outside local radius"), ParameterError);
  }
  SUBCASE("alpha must exceed one") {
    CHECK_THROWS_AS(harnack_check(m, cfg, x, x, 1.0, f, Variant::global, SamplingOptions{10, 4, 1}), ParameterError);
  }
}

TEST_CASE("exponential moment check") {
  const Model& m = burgers();
  SUBCASE("from zero") {
    const auto reports = exp_moment_check(m, config(0.5, 100, true), m.zero(), SamplingOptions{2000, 1, 1});
    REQUIRE(reports.size() == 2);
    for (const auto& r : reports) CHECK(r.pass);
    // Taking expectations in the energy identity: E G <= HS t / 2.
    const double g = reports[0].details["g_mean"].get<double>();
    CHECK(g <= 0.5 * m.constants().q_hs_sq * 0.5 + 3.0 * reports[0].details["g_stderr"].get<double>());
  }
  SUBCASE("no noise is the equality edge") {
    IntegratorConfig cfg = config(0.5, 100, true);
    cfg.noise_amplitude = 0.0;
    for (const auto& r : exp_moment_check(m, cfg, m.zero(), SamplingOptions{10, 1, 1})) {
      CHECK(r.lhs_mean == 1.0);
      CHECK(r.rhs == 1.0);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("reports are reproducible byte for byte") {
  const Model& m = burgers();
  const IntegratorConfig cfg = config(0.5, 50, true);
  const TestFunctional f = TestFunctional::tanh_squared(d1_mode(m, 1, 1.0), 2.0, 0.1);
  const auto a = entropy_gradient_check(m, cfg, x_start(m), d1_mode(m, 2, 1.0), f, entropy_threshold(m),
                                        Variant::local, SamplingOptions{300, 8, 1});
  const auto b = entropy_gradient_check(m, cfg, x_start(m), d1_mode(m, 2, 1.0), f, entropy_threshold(m),
                                        Variant::local, SamplingOptions{300, 8, 3});
  CHECK(a.to_json().dump() == b.to_json().dump());
}
