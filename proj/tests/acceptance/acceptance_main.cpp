// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "strauss/blowup.hpp"
#include "strauss/exponents.hpp"
#include "strauss/modulus.hpp"
#include "strauss/radial_solver.hpp"
#include "strauss/special_functions.hpp"
#include "strauss/weighted_norms.hpp"

using namespace strauss;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double bump(double r) {
  r = std::abs(r);
  return r < 1.0 ? std::pow(1.0 - r * r, 3) : 0.0;
}

double dbump(double r) {
  return std::abs(r) < 1.0 ? -6.0 * r * std::pow(1.0 - r * r, 2) : 0.0;
}

Outcome exponent_exactness() {
  const double p3 = strauss_p(3);
  double worst = 0.0;
  for (int n = 2; n <= 64; ++n) worst = std::max(worst, std::abs(strauss_residual(n, strauss_p(n))));
  const double dp = std::abs(p3 - (1.0 + std::sqrt(2.0)));
  const double dk = std::abs(exponent_set(3).kappa - std::sqrt(2.0));
  std::ostringstream os;
  os << "|p3-(1+sqrt2)|=" << dp << " max residual=" << worst << " |kappa-sqrt2|=" << dk;
  return {dp <= 1e-12 && worst <= 1e-9 && dk <= 1e-12, os.str()};
}

Outcome identity_suite() {
  double worst = 0.0;
  for (int n = 2; n <= 10; ++n) {
    const auto r = exponent_identity_residuals(n);
    worst = std::max({worst, std::abs(r.holder_weight), std::abs(r.psi_power)});
  }
  return {worst < 1e-10, "max residual=" + fmt("%.3g", worst)};
}

Outcome iteration_ledger() {
  bool ok = true;
  std::ostringstream os;
  for (int n : {2, 3, 4}) {
    const auto ledger = m_sequence(n, IterationConstants{}, 30);
    const double dev = closed_form_deviation(n, ledger.rows);
    const double p = strauss_p(n);
    bool rows_ok = true;
    for (const auto& row : ledger.rows) {
      if (row.j >= ledger.j1 && row.log_M < std::pow(p, row.j) * ledger.log_C5 - 1e-9 * std::abs(row.log_M))
        rows_ok = false;
    }
    ok = ok && dev <= 1e-9 && rows_ok && ledger.bound_holds;
    os << "n=" << n << " dev=" << dev << " j1=" << ledger.j1 << (rows_ok ? " bound ok; " : " bound FAILS; ");
  }
  return {ok, os.str()};
}

Outcome test_function_lemmas() {
  bool ok = true;
  std::ostringstream os;
  for (int n : {2, 3}) {
    const auto br = psi_ball_bracket(n, 1.0, 100.0);
    ok = ok && br.pass && br.fitted_constant <= 20.0;
    os << "n=" << n << " psi range=" << fmt("%.4g", br.fitted_constant);
    const TestFunctionConfig cfg{n, 1.0, 1.0, 64};
    const auto rep = xi_eta_bounds_verify(cfg, q_parameter(n));
    const bool items = rep.item_i && rep.item_ii && rep.item_iii;
    const bool positive = rep.A0 > 0 && rep.B0 > 0 && rep.B1 > 0 && rep.B2 > 0;
    ok = ok && items && positive;
    os << " A0=" << fmt("%.3g", rep.A0) << " B0=" << fmt("%.3g", rep.B0) << " B1=" << fmt("%.3g", rep.B1)
       << " B2=" << fmt("%.3g", rep.B2) << (items ? " items ok; " : " items FAIL; ");
  }
  return {ok, os.str()};
}

Outcome jensen_property() {
  const std::vector<ModulusSpec> families = {ModulusSpec::power_law(1.0), ModulusSpec::power_law(0.5),
                                             ModulusSpec::log_one_plus(1.0),
                                             ModulusSpec::log_power(0.6, 1.0)};
  const auto grid = log_grid(10.0, 8, 20);
  oracle::Gen gen(0x5eed0005ULL);
  constexpr int kTrials = 10000;
  int used = 0, violations = 0;
  double worst = -1e300;
  for (const auto& spec : families) {
    if (!g_convexity_check(spec, 3, grid).pass) continue;
    ++used;
    for (int trial = 0; trial < kTrials; ++trial) {
      auto step = oracle::random_partition(gen, gen.integer(1, 12));
      std::vector<double> alpha(step.lengths.size());
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        step.values[i] = gen.integer(0, 9) == 0 ? 0.0 : gen.log_uniform(-6.0, 1.0);
        alpha[i] = gen.integer(0, 4) == 0 ? 0.0 : gen.uniform(0.0, 1.0);
      }
      alpha[gen.integer(0, static_cast<int>(alpha.size()) - 1)] = gen.uniform(0.1, 1.0);
      double mass = 0.0, mean = 0.0, gmean = 0.0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        const double w = alpha[i] * step.lengths[i];
        mass += w;
        mean += step.values[i] * w;
        gmean += g_eval(spec, 3, step.values[i]) * w;
      }
      if (mass <= 0.0) continue;
      const double lhs = g_eval(spec, 3, mean / mass);
      const double rhs = gmean / mass;
      const double excess = (lhs - rhs) / std::max(std::abs(rhs), 1e-300);
      worst = std::max(worst, excess);
      if (lhs > rhs + 1e-12 * std::abs(rhs)) ++violations;
    }
  }
  std::ostringstream os;
  os << used << " families x " << kTrials << " trials, violations=" << violations
     << " worst relative excess=" << worst;
  return {used >= 3 && violations == 0, os.str()};
}

Outcome linear_solver() {
  MarchOptions lin;
  lin.source_enabled = false;
  const auto grid = make_grid(0.02, 3.0, 1.0);
  const auto run = march(RadialData::default_bump(1.0), ModulusSpec::power_law(1.0), grid, lin);
  double worst = 0.0;
  for (int i = 0; i < run.levels_computed; ++i) {
    const double t = grid.t(i);
    for (int j = 1; j < grid.r_nodes; ++j) {
      const double r = grid.r(j);
      const double exact = ((t + r) * bump(t + r) - (t - r) * bump(t - r)) / (2.0 * r);
      worst = std::max(worst, std::abs(run.u(i, j) - exact));
    }
  }
  const auto conv = convergence_study(RadialData::bump_pair(1.0), ModulusSpec::power_law(1.0),
                                      {0.1, 0.05, 0.025, 0.0125}, 2.0, lin);
  const auto zero = march(RadialData::zero(), ModulusSpec::power_law(1.0), grid);
  const bool zero_ok = std::all_of(zero.field.begin(), zero.field.end(), [](double v) { return v == 0.0; });
  std::ostringstream os;
  os << "max |u-dAlembert|=" << worst << " order=" << fmt("%.4f", conv.order)
     << (zero_ok ? " zero data exact" : " zero data NONZERO");
  return {run.status == RunStatus::Completed && worst <= 1e-12 && conv.conclusive && conv.order >= 1.7 &&
              conv.order <= 2.3 && zero_ok,
          os.str()};
}

Outcome structural_invariants() {
  const auto spec = ModulusSpec::power_law(1.0);
  const double h = 0.02;
  const double horizon = 199 * h;
  // 200 time levels; radial nodes cover the light cone of the farthest support point.
  const auto grid = make_grid(h, horizon, 3.0);
  const auto run = march(RadialData::bump_pair(2.0), spec, make_grid(h, horizon, 1.0));
  if (run.status != RunStatus::Completed) return {false, "base run did not complete: " + run.reason};

  double even_err = 0.0;
  for (int i = 1; i < run.levels_computed; i += 9) {
    for (double r = 0.013; r < 1.0 + grid.t(i); r += 0.171) {
      const double a = duhamel_apply(run, i, r), b = duhamel_apply(run, i, -r);
      even_err = std::max(even_err, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    }
  }

  double support_leak = 0.0, peak = 0.0;
  for (int i = 0; i < run.levels_computed; ++i) {
    for (int j = 0; j < run.grid.r_nodes; ++j) {
      peak = std::max(peak, std::abs(run.u(i, j)));
      if (run.grid.r(j) > 1.0 + run.grid.t(i) + 1e-9) support_leak = std::max(support_leak, std::abs(run.u(i, j)));
    }
  }
  support_leak /= peak;

  auto with_far = [](double weight) {
    RadialData d = RadialData::default_bump(2.0);
    d.u0 = [weight](double r) { return bump(r) + weight * bump((std::abs(r) - 2.75) / 0.25); };
    d.du0 = [weight](double r) { return dbump(r) + 4.0 * weight * dbump((std::abs(r) - 2.75) / 0.25); };
    d.support_radius = 3.0;
    return d;
  };
  const auto a = march(with_far(0.0), spec, grid);
  const auto b = march(with_far(0.5), spec, grid);
  double cone_err = 0.0;
  for (int i = 0; i < std::min(a.levels_computed, b.levels_computed); ++i) {
    for (int j = 0; j < grid.r_nodes; ++j) {
      if (grid.r(j) < 2.5 - grid.t(i) - 1e-9) cone_err = std::max(cone_err, std::abs(a.u(i, j) - b.u(i, j)));
    }
  }

  double window_err = 0.0;
  for (int i = 5; i < run.levels_computed; i += 23) {
    for (int k = 0; k < i; k += 3) {
      for (int j = i; j < run.grid.r_nodes; j += 17) {
        const double c = (i - k) * h, r = j * h;
        const double w = window_integral_direct(run, k, c - r, r - c);
        const double scale = std::abs(window_integral_direct(run, k, 0.0, r - c));
        if (scale > 0.0) window_err = std::max(window_err, std::abs(w) / scale);
      }
    }
  }
  std::ostringstream os;
  os << run.grid.t_levels << "x" << run.grid.r_nodes << " grid; even=" << even_err << " support=" << support_leak
     << " cone=" << cone_err << " window=" << window_err;
  return {run.grid.t_levels == 200 && even_err <= 1e-12 && support_leak <= 1e-12 && cone_err <= 1e-12 &&
              window_err <= 1e-12,
          os.str()};
}

Outcome blowup_side() {
  const auto spec = ModulusSpec::log_power(0.2, 10.0);
  const auto grid = make_grid(0.005, 3.0, 1.0);
  const auto rows = lifespan_sweep(RadialData::default_bump(1.0), spec, {2, 3, 5, 8}, grid);
  bool ok = true;
  std::ostringstream os;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    ok = ok && rows[k].status == RunStatus::BlewUp;
    if (k > 0) ok = ok && rows[k].time <= rows[k - 1].time;
    os << "T(" << rows[k].epsilon << ")=" << rows[k].time << " ";
  }
  const auto fine = march(RadialData::default_bump(5.0), spec, make_grid(0.0025, 3.0, 1.0));
  const auto coarse_T = rows[2].time;
  const auto fine_T = detect_blowup(fine);
  double shift = 1.0;
  if (fine_T) shift = std::abs(*fine_T - coarse_T) / coarse_T;
  ok = ok && fine_T.has_value() && shift < 0.10;
  os << "T(5,h/2)=" << (fine_T ? *fine_T : -1.0) << " shift=" << fmt("%.3f", shift);
  return {ok, os.str()};
}

Outcome global_side() {
  const auto run = march(RadialData::default_bump(0.01), ModulusSpec::power_law(1.0),
                         make_grid(1.0 / 16.0, 100.0, 1.0));
  if (run.status != RunStatus::Completed) return {false, "run stopped: " + run_status_name(run.status)};
  const double norm = x_kappa_norm(run);
  const auto decay = decay_profile_check(run);
  const double growth = decay.diagnostic("tail_growth", INFINITY);
  std::ostringstream os;
  os << "reached t=" << run.status_time << " x_kappa=" << norm << " decay growth=" << growth;
  return {std::isfinite(norm) && decay.pass && growth <= 1.2, os.str()};
}

Outcome key_integral() {
  bool ok = true;
  std::ostringstream os;
  const std::vector<double> xis = {10.0, 1e2, 1e3, 1e4};
  for (const auto& spec : {ModulusSpec::power_law(1.0), ModulusSpec::double_log_global(-1.0)}) {
    const auto sweep = key_integral_sweep(xis, 0.5, spec);
    ok = ok && sweep.pass && sweep.fitted_constant <= 50.0;
    os << family_name(spec.family) << " range=" << fmt("%.3f", sweep.fitted_constant) << "; ";
    const auto zones = zone_J0_check(spec, 0.5, {{100.0, 10.0}, {0.5, 0.9}, {150.0, 100.0}});
    bool zone_ok = zones.pass;
    for (const char* key : {"zone_I_sup", "zone_II_sup", "zone_III_sup"}) {
      const double v = zones.diagnostic(key, -1.0);
      zone_ok = zone_ok && v > 0.0 && std::isfinite(v);
    }
    ok = ok && zone_ok;
    os << (zone_ok ? "zones ok; " : "zones FAIL; ");
  }
  return {ok, os.str()};
}

Outcome threshold_classifier() {
  const double p = strauss_p(3);
  struct Case {
    ModulusSpec spec;
    bool blowup_class;
  };
  const std::vector<Case> cases = {
      {ModulusSpec::log_power(0.2, 1.0), true},
      {ModulusSpec::log_power(1.0 / p, 10.0), true},
      {ModulusSpec::iterated_log_blowup(1.0, 2), true},
      {ModulusSpec::iterated_log_blowup(0.5, 3), true},
      {ModulusSpec::power_law(1.0), false},
      {ModulusSpec::power_law(0.3), false},
      {ModulusSpec::log_one_plus(1.0), false},
      {ModulusSpec::log_one_plus(0.5), false},
      {ModulusSpec::log_power(0.6, 1.0), false},
      {ModulusSpec::double_log_global(-1.0), false},
      {ModulusSpec::double_log_global(-2.0), false},
      {ModulusSpec::triple_log_global(-1.0, 3), false},
  };
  int wrong = 0;
  std::ostringstream os;
  for (const auto& c : cases) {
    const auto v = c_str_classify(c.spec, 3);
    bool ok;
    if (c.blowup_class) {
      ok = v.c_str_class == CStrClass::Infinite ||
           (v.c_str_class == CStrClass::Finite && v.c_str_estimate >= c.spec.c_l * (1.0 - 1e-12));
    } else {
      ok = v.c_str_class == CStrClass::Zero;
    }
    if (!ok) {
      ++wrong;
      os << family_name(c.spec.family) << "(" << c.spec.gamma << ") -> " << cstr_class_name(v.c_str_class) << "; ";
    }
  }
  os << cases.size() - wrong << "/" << cases.size() << " classified as expected";
  return {wrong == 0, os.str()};
}

Outcome integral_identity() {
  const TestFunctionConfig cfg{3, 1.0, 1.0, 64};
  const double q = q_parameter(3);
  const auto spec = ModulusSpec::power_law(1.0);
  const auto coarse = march(RadialData::bump_pair(0.5), spec, make_grid(0.05, 5.0, 1.0));
  const auto fine = march(RadialData::bump_pair(0.5), spec, make_grid(0.025, 5.0, 1.0));
  if (coarse.status != RunStatus::Completed || fine.status != RunStatus::Completed)
    return {false, "run did not reach t=5"};
  const double rc = std::abs(integral_identity_residual(coarse, cfg, q, 5.0));
  const double rf = std::abs(integral_identity_residual(fine, cfg, q, 5.0));
  const double factor = rf > 0.0 ? rc / rf : INFINITY;
  std::ostringstream os;
  os << "residual h=0.05: " << rc << " h=0.025: " << rf << " factor=" << fmt("%.3f", factor);
  return {factor >= 3.0, os.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exponent exactness", 1.0, exponent_exactness},
      {2, "exponent identities", 1.0, identity_suite},
      {3, "iteration ledger", 1.0, iteration_ledger},
      {4, "test-function bounds", 30.0, test_function_lemmas},
      {5, "Jensen property", 5.0, jensen_property},
      {6, "linear solver exactness and order", 60.0, linear_solver},
      {7, "structural solver invariants", 60.0, structural_invariants},
      {8, "blow-up side", 600.0, blowup_side},
      {9, "global side", 600.0, global_side},
      {10, "key integral and zones", 60.0, key_integral},
      {11, "threshold classifier", 5.0, threshold_classifier},
      {12, "integral identity refinement", 300.0, integral_identity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs < c.budget_s;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failures;
    std::printf("%s [%2d] %s: %s (%.2f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.budget_s, in_budget ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
