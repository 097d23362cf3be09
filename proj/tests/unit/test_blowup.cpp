#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "strauss/blowup.hpp"
#include "strauss/exponents.hpp"

using namespace strauss;

TEST_CASE("slicing sequence") {
  CHECK(slicing_ell(0) == 1.5);
  CHECK(slicing_ell(1) == 1.75);
  CHECK(slicing_ell(50) < 2.0);
  CHECK(slicing_ell(50) > slicing_ell(49));
  CHECK_THROWS_AS(slicing_ell(-1), std::domain_error);
}

TEST_CASE("exponent sequences follow the recursion and the closed forms") {
  for (int n : {2, 3, 4}) {
    const double p = oracle::strauss_root_bisect(n);
    const auto rows = exponent_sequences(n, 30);
    REQUIRE(rows.size() == 31);
    CHECK(rows[0].a == 1.0);
    CHECK(rows[0].b == 0.0);
    CHECK(rows[0].sigma == doctest::Approx(1.0 + 1.0 / p).epsilon(1e-14));
    CHECK(rows[1].a == doctest::Approx(1.0 + p).epsilon(1e-14));
    CHECK(rows[2].a == doctest::Approx((p * p * p - 1.0) / (p - 1.0)).epsilon(1e-13));
    for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
      CHECK(rows[j + 1].a == doctest::Approx(1.0 + rows[j].a * p).epsilon(1e-12));
      CHECK(std::abs(rows[j + 1].sigma - rows[j + 1].a - 1.0 / p) <= 1e-13 * rows[j + 1].a);
    }
    for (const auto& r : rows) {
      const double pj = std::pow(p, r.j);
      CHECK(r.a == doctest::Approx(p / (p - 1) * pj - 1 / (p - 1)).epsilon(1e-9));
      CHECK(r.b == doctest::Approx(pj - 1).epsilon(1e-9));
      CHECK(r.sigma == doctest::Approx(p / (p - 1) * pj - 1 / ((p - 1) * p)).epsilon(1e-9));
    }
    CHECK(closed_form_deviation(n, rows) < 1e-9);
  }
}

TEST_CASE("ledger seed and first step") {
  IterationConstants c;
  const double p = strauss_p(3);
  const auto led = m_sequence(3, c, 1);
  CHECK(led.rows[0].log_M == 0.0);
  const double expected = std::log(std::pow(2.0, -3) / (3.0 * 1.875 * (p + 1.0)));
  CHECK(led.rows[1].log_M == doctest::Approx(expected).epsilon(1e-14));
  c.M0 = 7.0;
  CHECK(m_sequence(3, c, 0).rows[0].log_M == std::log(7.0));
}

TEST_CASE("ledger recursion coefficient is exact") {
  IterationConstants c;
  c.C0 = 3.0;
  c.M0 = 2.0;
  const double p = strauss_p(3);
  const auto led = m_sequence(3, c, 30);
  for (int j = 0; j < 30; ++j) {
    const auto& r = led.rows[j];
    const double coeff = std::log(c.C0 * std::pow(2.0, -(2 * j + 3)) /
                                  (3.0 * slicing_ell(2 * j + 2) * (r.a * p + 1.0)));
    CHECK(led.rows[j + 1].log_M - p * r.log_M ==
          doctest::Approx(coeff).epsilon(1e-9).scale(std::abs(p * r.log_M)));
  }
}

TEST_CASE("lower-bound row check with default constants") {
  for (int n : {2, 3, 4}) {
    const auto led = m_sequence(n, IterationConstants{}, 30);
    const double p = strauss_p(n);
    CHECK(led.bound_holds);
    CHECK(led.log_C4 == doctest::Approx(std::log((p - 1.0) / (12.0 * p))));
    CHECK(led.log_C5 ==
          doctest::Approx(-p * std::log(4 * p) / ((p - 1) * (p - 1)) + led.log_C4 / (p - 1)));
    for (const auto& r : led.rows) {
      if (r.j < led.j1) continue;
      CHECK(r.log_M - std::pow(p, r.j) * led.log_C5 >= -1e-9 * std::pow(p, r.j));
    }
  }
}

TEST_CASE("first bound index") {
  const double p = strauss_p(3);
  CHECK(first_bound_index(p, -5.0) == 0);
  const double lc4 = 10.0;
  const int j1 = first_bound_index(p, lc4);
  const double x = lc4 / std::log(4 * p) - p / (p - 1);
  CHECK(j1 >= x);
  CHECK(j1 - 1 < x);
}

TEST_CASE("constants validation") {
  IterationConstants c;
  c.C0 = 0.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  IterationConstants d;
  d.epsilon_exp = 0.5;
  CHECK_THROWS_AS(validate(d), std::invalid_argument);
}

TEST_CASE("onset predictor") {
  IterationConstants c;
  const double p = strauss_p(3);
  // C7 (c_l / 2)^{p/(p-1)} > 1 for c_l = 10.
  const auto blow = divergence_onset(3, c, ModulusSpec::log_power(1.0 / p, 10.0), 1e8);
  REQUIRE(blow.has_value());
  CHECK(*blow > 0.0);
  CHECK(onset_base(3, c, ModulusSpec::log_power(1.0 / p, 10.0), *blow * 1.0001) > 1.0);
  CHECK_FALSE(divergence_onset(3, c, ModulusSpec::power_law(1.0), 1e12).has_value());
  IterationConstants tiny;
  tiny.C7 = 1e-30;
  CHECK_FALSE(divergence_onset(3, tiny, ModulusSpec::log_power(1.0 / p, 10.0), 1e12).has_value());
  CHECK_THROWS_AS(onset_base(3, c, ModulusSpec::power_law(1.0), 0.5), std::domain_error);
}

TEST_CASE("functional U") {
  const TestFunctionConfig cfg{3, 1.0, 1.0, 64};
  const double q = q_parameter(3);
  const auto zero = march(RadialData::zero(), ModulusSpec::power_law(1.0), make_grid(0.1, 2.0, 1.0));
  CHECK(functional_U(zero, cfg, q, 1.0) == 0.0);
  CHECK_THROWS_AS(functional_U(zero, cfg, q, 5.0), std::domain_error);
  CHECK_THROWS_AS(functional_U(zero, TestFunctionConfig{2, 1.0, 1.0, 64}, q, 1.0),
                  std::domain_error);

  const auto run = march(RadialData::default_bump(1.0), ModulusSpec::power_law(1.0),
                         make_grid(0.05, 3.0, 1.0));
  for (double t = 0.0; t <= 3.0; t += 0.25) CHECK(functional_U(run, cfg, q, t) >= 0.0);
}

TEST_CASE("functional U of a constant field") {
  const TestFunctionConfig cfg{3, 1.0, 1.0, 64};
  const double q = q_parameter(3);
  const double p = strauss_p(3);
  const double c = 0.3;
  SolutionRun run;
  run.grid = CharacteristicGrid{0.01, 11, 400};
  run.spec = ModulusSpec::power_law(1.0);
  run.data = RadialData::zero();
  run.field.assign(11 * 400, 0.0);
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j <= 100; ++j) run.u(i, j) = c;
  }
  run.levels_computed = 11;
  const double t = 0.0;
  auto w = [&](double r) { return eta_q_eval(cfg, q, t, t, r) * 4 * oracle::kPi * r * r; };
  // Node r = 1 carries full trapezoid weight: one extra half cell.
  const double inner = oracle::gk(w, 0.0, 1.0, 1e-12) + 0.5 * run.grid.h * w(1.0);
  const double expected = c * std::pow(c, 1.0 / p) * inner;
  CHECK(functional_U(run, cfg, q, t) == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("integral identity residual") {
  const TestFunctionConfig cfg{3, 1.0, 1.0, 64};
  const double q = q_parameter(3);
  const auto zero = march(RadialData::zero(), ModulusSpec::power_law(1.0), make_grid(0.1, 2.0, 1.0));
  CHECK(integral_identity_residual(zero, cfg, q, 1.0) == 0.0);
  CHECK_THROWS_AS(integral_identity_residual(zero, cfg, q, 1.05), std::domain_error);

  MarchOptions lin;
  lin.source_enabled = false;
  double prev = 0.0;
  for (double h : {0.1, 0.05, 0.025}) {
    const auto run = march(RadialData::bump_pair(1.0), ModulusSpec::power_law(1.0),
                           make_grid(h, 2.0, 1.0), lin);
    const double res = std::abs(integral_identity_residual(run, cfg, q, 2.0));
    if (prev > 0.0) CHECK(res < prev);
    prev = res;
  }
  CHECK(prev < 1e-3);
}
