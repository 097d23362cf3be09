#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "strauss/exponents.hpp"
#include "strauss/modulus.hpp"

using namespace strauss;

namespace {
const double kP = 1.0 + std::sqrt(2.0);
const double kE = std::numbers::e;
}  // namespace

TEST_CASE("mu_eval direct substitutions") {
  CHECK(mu_eval(ModulusSpec::power_law(1.0), 0.5) == 0.5);
  CHECK(mu_eval(ModulusSpec::log_power(0.3, 7.0).with_tau0(0.5), std::exp(-1.0)) ==
        doctest::Approx(7.0).epsilon(1e-14));
  const auto dl = ModulusSpec::double_log_global(-1.0).with_tau0(0.1);
  CHECK(mu_eval(dl, std::exp(-kE)) == doctest::Approx(std::exp(-1.0 / kP)).epsilon(1e-13));
  const auto ll = ModulusSpec::log_one_plus(0.5);
  CHECK(mu_eval(ll, 2.0) == doctest::Approx(std::sqrt(std::log(3.0))).epsilon(1e-14));
  const auto it = ModulusSpec::iterated_log_blowup(1.0, 2);
  const double tau = 1e-20;
  const double L = std::log(1.0 / tau);
  CHECK(mu_eval(it, tau) == doctest::Approx(std::pow(L, -1.0 / kP) * std::log(L)).epsilon(1e-12));
  const auto tl = ModulusSpec::triple_log_global(-1.0, 3);
  CHECK(mu_eval(tl, tau) == doctest::Approx(std::pow(L, -1.0 / kP) / std::log(L) /
                                            std::log(std::log(L)))
                                .epsilon(1e-12));
}

TEST_CASE("mu(0) is exactly zero and negative tau is rejected") {
  for (const auto& s : {ModulusSpec::power_law(0.5), ModulusSpec::log_power(0.2, 10.0),
                        ModulusSpec::double_log_global(-1.0),
                        ModulusSpec::triple_log_global(-1.0, 3)}) {
    CHECK(mu_eval(s, 0.0) == 0.0);
    CHECK_THROWS_AS(mu_eval(s, -1e-3), std::domain_error);
  }
}

TEST_CASE("log-type family without continuation has a bounded domain") {
  const auto s = ModulusSpec::log_power(0.2, 1.0).with_continuation(Continuation::None);
  CHECK_NOTHROW(mu_eval(s, 0.05));
  CHECK_THROWS_AS(mu_eval(s, 0.5), std::domain_error);
  const auto c = ModulusSpec::log_power(0.2, 1.0);
  CHECK(std::isfinite(mu_eval(c, 0.5)));
  CHECK(std::isfinite(mu_eval(c, 50.0)));
}

TEST_CASE("validation of family parameters") {
  CHECK_THROWS_AS(validate(ModulusSpec::power_law(1.5)), std::invalid_argument);
  CHECK_THROWS_AS(validate(ModulusSpec::log_power(-0.1, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate(ModulusSpec::double_log_global(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(validate(ModulusSpec::triple_log_global(-1.0, 2)), std::invalid_argument);
  // k = 2 needs tau0 below e^{-1}; k = 3 below e^{-e}.
  CHECK_THROWS_AS(validate(ModulusSpec::iterated_log_blowup(1.0, 2).with_tau0(0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(ModulusSpec::triple_log_global(-1.0, 3).with_tau0(0.1)),
                  std::invalid_argument);
  CHECK(iterated_log_domain_edge(2) == doctest::Approx(std::exp(-1.0)));
  CHECK(iterated_log_domain_edge(3) == doctest::Approx(std::exp(-kE)));
}

TEST_CASE("family names round-trip") {
  for (const char* name :
       {"powerlaw", "logoneplus", "logpower", "iteratedlog", "doublelog", "triplelog"}) {
    const auto f = parse_family(name);
    REQUIRE(f.has_value());
  }
  CHECK_FALSE(parse_family("cubic").has_value());
  CHECK(is_global_formula(ModulusFamily::PowerLaw));
  CHECK_FALSE(is_global_formula(ModulusFamily::LogPower));
}

TEST_CASE("log_mu survives tiny tau") {
  const auto s = ModulusSpec::log_power(0.2, 10.0);
  const double v = log_mu(s, 1e-300);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(std::log(10.0) - 0.2 * std::log(300.0 * std::log(10.0)))
                 .epsilon(1e-13));
}

TEST_CASE("mu_slope matches a centered difference") {
  for (const auto& s : {ModulusSpec::log_power(0.2, 10.0), ModulusSpec::double_log_global(-1.0),
                        ModulusSpec::power_law(0.5)}) {
    const double tau = 1e-4;
    const double d = 1e-9;
    const double fd = (mu_eval(s, tau + d) - mu_eval(s, tau - d)) / (2 * d);
    CHECK(mu_slope(s, tau) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("g_eval values and symmetry") {
  const auto s = ModulusSpec::power_law(1.0);
  CHECK(g_eval(s, 3, 0.0) == 0.0);
  CHECK(g_eval(s, 3, 0.25) == doctest::Approx(0.25 * std::pow(0.25, 1.0 / kP)).epsilon(1e-14));
  oracle::Gen gen(0x6e7a11);
  for (int i = 0; i < 200; ++i) {
    const double t = gen.log_uniform(-10, 1);
    CHECK(g_eval(s, 3, -t) == -g_eval(s, 3, t));
  }
}

TEST_CASE("g convexity on admissible families") {
  std::vector<double> grid;
  for (double t : log_grid(1.0 / 3.0, 12, 8)) {
    grid.push_back(t);
    grid.push_back(-t);
  }
  CHECK(g_convexity_check(ModulusSpec::power_law(1.0), 3, grid).pass);
  CHECK(g_convexity_check(ModulusSpec::log_power(0.2, 100.0).with_tau0(1.0 / 3.0).with_continuation(
                              Continuation::None),
                          3, grid)
            .pass);
  const auto linear = g_convexity_check(ModulusSpec::power_law(0.0), 3, grid);
  CHECK(linear.pass);
  CHECK(linear.fitted_constant == 0.0);
}

TEST_CASE("threshold classification") {
  CHECK(c_str_classify(ModulusSpec::power_law(1.0), 3).c_str_class == CStrClass::Zero);
  const auto fin = c_str_classify(ModulusSpec::log_power(1.0 / kP, 5.0), 3);
  CHECK(fin.c_str_class == CStrClass::Finite);
  CHECK(fin.c_str_estimate == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(c_str_classify(ModulusSpec::log_power(0.2, 1.0), 3).c_str_class == CStrClass::Infinite);
  CHECK(c_str_classify(ModulusSpec::double_log_global(-1.0), 3).c_str_class == CStrClass::Zero);
  CHECK(c_str_classify(ModulusSpec::triple_log_global(-1.0, 3), 3).c_str_class ==
        CStrClass::Zero);
  CHECK_THROWS_AS(c_str_classify(ModulusSpec::power_law(1.0), 3, 5), std::invalid_argument);
}

TEST_CASE("kappa_bar substitutions") {
  CHECK(kappa_bar_eval(ModulusSpec::double_log_global(-1.0, 3, 0.1), 3, std::exp(-kE)) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(kappa_bar_eval(ModulusSpec::power_law(1.0), 3, 1e-6) ==
        doctest::Approx(1e-6 * std::pow(std::log(1e6), 1.0 / kP)).epsilon(1e-13));
  const auto lp = ModulusSpec::log_power(1.0 / kP, 5.0);
  for (double tau : {1e-2, 1e-10, 1e-100, 1e-300}) {
    CHECK(kappa_bar_eval(lp, 3, tau) == doctest::Approx(5.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(kappa_bar_eval(lp, 3, 1.0), std::domain_error);
  CHECK_THROWS_AS(kappa_bar_eval(lp, 3, 0.0), std::domain_error);
}

TEST_CASE("special condition on the global and blow-up classes") {
  for (const auto& s : {ModulusSpec::power_law(1.0), ModulusSpec::double_log_global(-1.0),
                        ModulusSpec::triple_log_global(-1.0, 3)}) {
    CHECK(special_mu_check(s, special_mu_grid(s)).pass);
  }
  const auto lp = ModulusSpec::log_power(1.0 / kP, 2.0);
  CHECK_FALSE(special_mu_check(lp, special_mu_grid(lp)).pass);
}

TEST_CASE("axioms hold for every supported family") {
  const std::vector<ModulusSpec> specs = {
      ModulusSpec::power_law(1.0),           ModulusSpec::power_law(0.3),
      ModulusSpec::log_one_plus(1.0),        ModulusSpec::log_power(0.2, 10.0),
      ModulusSpec::log_power(1.0 / kP, 5.0), ModulusSpec::iterated_log_blowup(1.0, 2),
      ModulusSpec::double_log_global(-1.0),  ModulusSpec::triple_log_global(-1.0, 3)};
  for (const auto& s : specs) {
    CAPTURE(family_name(s.family));
    const auto rep = modulus_axioms_check(s);
    CHECK(rep.pass);
  }
}

TEST_CASE("continuation is monotone beyond tau0") {
  const auto s = ModulusSpec::log_power(0.2, 10.0);
  double prev = mu_eval(s, s.tau0);
  for (double t = s.tau0 * 1.01; t < 100.0; t *= 1.01) {
    const double v = mu_eval(s, t);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("property: concavity on random pairs below tau0") {
  oracle::Gen gen(0xc0ffee01);
  const std::vector<ModulusSpec> specs = {ModulusSpec::log_power(0.2, 10.0),
                                          ModulusSpec::double_log_global(-1.0),
                                          ModulusSpec::power_law(0.7)};
  for (const auto& s : specs) {
    const double hi = std::min(s.tau0, 1.0);
    for (int i = 0; i < 2000; ++i) {
      const double a = hi * gen.log_uniform(-12, 0);
      const double b = hi * gen.log_uniform(-12, 0);
      const double mid = mu_eval(s, 0.5 * (a + b));
      const double avg = 0.5 * (mu_eval(s, a) + mu_eval(s, b));
      CHECK(mid >= avg - 1e-12 * std::max(mid, avg));
    }
  }
}
