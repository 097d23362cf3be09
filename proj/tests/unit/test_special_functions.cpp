#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "strauss/exponents.hpp"
#include "strauss/special_functions.hpp"

using namespace strauss;
using oracle::kPi;

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(sphere_area(2) == doctest::Approx(4 * kPi).epsilon(1e-15));
  CHECK(sphere_area(3) == doctest::Approx(2 * kPi * kPi).epsilon(1e-14));
}

TEST_CASE("Phi against Bessel, closed-form and angular quadrature oracles") {
  CHECK(phi_eval(3, 0.0) == doctest::Approx(4 * kPi).epsilon(1e-15));
  CHECK(phi_eval(2, 0.0) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(phi_eval(3, 1.0) == doctest::Approx(oracle::gk([](double s) { return 2 * kPi * std::exp(s); },
                                                       -1.0, 1.0))
                                .epsilon(1e-13));
  for (int n : {2, 3, 4, 5, 7}) {
    for (double r : {0.0, 0.3, 1.0, 5.0, 20.0, 60.0}) {
      CAPTURE(n);
      CAPTURE(r);
      CHECK(phi_eval(n, r) == doctest::Approx(oracle::phi(n, r)).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(phi_eval(3, -1.0), std::domain_error);
}

TEST_CASE("Phi is increasing in r") {
  for (int n : {2, 3, 4}) {
    double prev = phi_eval(n, 0.0);
    for (double r = 0.25; r <= 50.0; r += 0.25) {
      const double v = phi_eval(n, r);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("scaled Phi stays finite for huge arguments") {
  CHECK(std::isfinite(phi_scaled(3, 1e4)));
  CHECK(std::isfinite(phi_scaled(2, 1e4)));
  CHECK(phi_scaled(2, 500.0) ==
        doctest::Approx(2 * kPi * std::cyl_bessel_i(0.0, 500.0) * std::exp(-500.0)).epsilon(1e-12));
  for (double r : {800.0, 5000.0}) {
    // Hankel expansion of e^{-r} I_0(r).
    const double x = 1.0 / (8.0 * r);
    const double series = 1.0 + x + 9.0 / 2.0 * x * x + 225.0 / 6.0 * x * x * x +
                          11025.0 / 24.0 * x * x * x * x;
    CHECK(phi_scaled(2, r) == doctest::Approx(2 * kPi * series / std::sqrt(2 * kPi * r)).epsilon(1e-12));
  }
}

TEST_CASE("asymptotic ratio") {
  CHECK(std::abs(phi_asymptotic_ratio(3, 20.0) - 2 * kPi) < 1e-8);
  const double a = phi_asymptotic_ratio(2, 10.0);
  const double b = phi_asymptotic_ratio(2, 20.0);
  const double c = phi_asymptotic_ratio(2, 40.0);
  CHECK(std::abs(a - c) / c < 0.05);
  CHECK(std::abs(b - c) / c < 0.05);
  CHECK(c == doctest::Approx(std::sqrt(2 * kPi) * 1.0).epsilon(0.01));
}

TEST_CASE("psi ball integral against closed form and quadrature") {
  CHECK(psi_ball_integral(3, 1.0, 0.0) == doctest::Approx(4 * kPi / std::exp(1.0)).epsilon(1e-13));
  for (double t : {0.0, 1.0, 7.5, 40.0}) {
    const double L = 1.0 + t;
    // 4 pi int zeta sinh zeta = 4 pi (L cosh L - sinh L), times e^{-t}.
    const double exact = 4 * kPi * (0.5 * (L - 1) * std::exp(L - t) + 0.5 * (L + 1) * std::exp(-L - t));
    CHECK(psi_ball_integral(3, 1.0, t) == doctest::Approx(exact).epsilon(1e-12));
  }
  const double ref2 = std::exp(-2.0) *
                      oracle::gk([](double z) { return z * oracle::phi(2, z); }, 0.0, 3.0);
  CHECK(psi_ball_integral(2, 1.0, 2.0) == doctest::Approx(ref2).epsilon(1e-12));
}

TEST_CASE("psi bracket dynamic range") {
  for (int n : {2, 3}) {
    const auto rep = psi_ball_bracket(n, 1.0, 100.0);
    CHECK(rep.pass);
    CHECK(rep.fitted_constant <= 20.0);
    CHECK(rep.diagnostic("lower") > 0.0);
  }
}

TEST_CASE("xi and eta against direct quadrature") {
  const TestFunctionConfig cfg{3, 1.0, 1.0, 64};
  const double q = q_parameter(3);
  for (double t : {0.0, 2.0, 15.0}) {
    for (double r : {0.0, 0.5, 1.0}) {
      CAPTURE(t);
      CAPTURE(r);
      CHECK(xi_q_eval(cfg, q, t, r) ==
            doctest::Approx(oracle::xi3(q, 1.0, 1.0, t, r)).epsilon(1e-10));
      CHECK(eta_q_eval(cfg, q, t, 0.5 * t, r) ==
            doctest::Approx(oracle::eta3(q, 1.0, 1.0, t, 0.5 * t, r)).epsilon(1e-10));
    }
  }
}

TEST_CASE("xi and eta special points") {
  const TestFunctionConfig cfg{3, 1.0, 1.0, 64};
  const double q = q_parameter(3);
  const double incomplete_gamma =
      oracle::tanh_sinh([&](double l) { return std::exp(-l) * std::pow(l, q); }, 0.0, 1.0);
  CHECK(xi_q_eval(cfg, q, 0.0, 0.0) == doctest::Approx(4 * kPi * incomplete_gamma).epsilon(1e-11));
  CHECK(eta_q_eval(cfg, q, 0.0, 0.0, 0.0) == doctest::Approx(xi_q_eval(cfg, q, 0.0, 0.0)).epsilon(1e-14));
  const TestFunctionConfig tiny{3, 2.0, 1e-12, 64};
  CHECK(xi_q_eval(tiny, 0.0, 0.0, 0.0) == doctest::Approx(2.0 * 4 * kPi).epsilon(1e-10));
  const double direct = oracle::tanh_sinh(
      [&](double l) { return std::exp(-l * 4.0) * oracle::phi(3, l * 2.0) * std::pow(l, q); }, 0.0,
      1.0);
  CHECK(eta_q_eval(cfg, q, 3.0, 3.0, 2.0) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("xi and eta argument checks") {
  const TestFunctionConfig cfg;
  CHECK_THROWS_AS(xi_q_eval(cfg, -1.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(xi_q_eval(cfg, 0.5, -1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(eta_q_eval(cfg, 0.5, 1.0, 2.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(validate(TestFunctionConfig{1, 1.0, 1.0, 64}), std::invalid_argument);
  CHECK_THROWS_AS(validate(TestFunctionConfig{3, 0.0, 1.0, 64}), std::invalid_argument);
}

TEST_CASE("sinhc seam is continuous") {
  const TestFunctionConfig cfg;
  const double q = q_parameter(3);
  const double t = 10.0, s = t - 1e-4;
  const double a = eta_q_eval(cfg, q, t, s, 0.7, SinhcPath::Series);
  const double b = eta_q_eval(cfg, q, t, s, 0.7, SinhcPath::Closed);
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("lambda mesh refinement") {
  const double q = q_parameter(2);
  const TestFunctionConfig coarse{2, 1.0, 1.0, 64}, fine{2, 1.0, 1.0, 128};
  for (double t : {0.0, 5.0, 30.0}) {
    const double a = xi_q_eval(coarse, q, t, 0.8);
    const double b = xi_q_eval(fine, q, t, 0.8);
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
    const double c = eta_q_eval(coarse, q, t, 0.3 * t, 0.8);
    const double d = eta_q_eval(fine, q, t, 0.3 * t, 0.8);
    CHECK(std::abs(c - d) <= 1e-8 * std::abs(d));
  }
}

namespace {
const LemmaFitReport& bounds_report(int n) {
  static const LemmaFitReport r2 = xi_eta_bounds_verify({2, 1.0, 1.0, 64}, q_parameter(2));
  static const LemmaFitReport r3 = xi_eta_bounds_verify({3, 1.0, 1.0, 64}, q_parameter(3));
  return n == 2 ? r2 : r3;
}
}  // namespace

TEST_CASE("bounds sweep in dimensions two and three") {
  for (int n : {2, 3}) {
    CAPTURE(n);
    const auto& rep = bounds_report(n);
    CHECK(rep.item_i);
    CHECK(rep.item_ii);
    CHECK(rep.item_iii);
    CHECK(rep.pass);
    CHECK(rep.A0 > 0.0);
    CHECK(rep.B0 > 0.0);
    CHECK(rep.B1 > 0.0);
    CHECK(rep.B2 > 0.0);
    CHECK(rep.samples.size() == rep.sample_item.size());
  }
}

TEST_CASE("item (i) lower bound at the origin is xi itself") {
  const TestFunctionConfig cfg{3, 1.0, 1.0, 64};
  const double q = q_parameter(3);
  const auto& rep = bounds_report(3);
  bool found = false;
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    if (rep.sample_item[i] == 0 && rep.samples[i].x == 0.0 && rep.samples[i].y == 0.0) {
      CHECK(rep.samples[i].value == doctest::Approx(xi_q_eval(cfg, q, 0.0, 0.0)).epsilon(1e-15));
      found = true;
    }
  }
  CHECK(found);
}
