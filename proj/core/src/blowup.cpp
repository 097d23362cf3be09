#include "strauss/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "strauss/exponents.hpp"

namespace strauss {

double slicing_ell(int j) {
  if (j < 0) throw std::domain_error("slicing_ell: j must be >= 0");
  return 2.0 - std::ldexp(1.0, -(j + 1));
}

void validate(const IterationConstants& c) {
  const double vals[] = {c.C0, c.C1, c.C2, c.C3, c.C6, c.C7, c.M0, c.c_l,
                         c.t0, c.epsilon_exp, c.data_epsilon, c.R, c.lambda0};
  for (double v : vals) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("IterationConstants: all constants must be positive");
    }
  }
  if (c.epsilon_exp > 0.1) throw std::invalid_argument("IterationConstants: epsilon_exp > 0.1");
}

ClosedForms closed_forms(double p, int j) {
  const double pj = std::pow(p, j);
  return {p / (p - 1.0) * pj - 1.0 / (p - 1.0), pj - 1.0,
          p / (p - 1.0) * pj - 1.0 / ((p - 1.0) * p)};
}

std::vector<LedgerRow> exponent_sequences(int n, int J) {
  if (J < 0) throw std::invalid_argument("exponent_sequences: J must be >= 0");
  const double p = strauss_p(n);
  std::vector<LedgerRow> rows;
  LedgerRow r{0, slicing_ell(0), 1.0, 0.0, 1.0 + 1.0 / p, 0.0};
  rows.push_back(r);
  for (int j = 1; j <= J; ++j) {
    LedgerRow next;
    next.j = j;
    next.ell_2j = slicing_ell(2 * j);
    next.a = 1.0 + r.a * p;
    next.b = p - 1.0 + r.b * p;
    next.sigma = 1.0 / p + r.sigma * p;
    rows.push_back(next);
    r = next;
  }
  return rows;
}

double closed_form_deviation(int n, const std::vector<LedgerRow>& rows) {
  const double p = strauss_p(n);
  double worst = 0.0;
  auto rel = [](double x, double ref) {
    return std::abs(x - ref) / std::max(std::abs(ref), 1e-300);
  };
  for (const auto& r : rows) {
    const ClosedForms cf = closed_forms(p, r.j);
    // b_0 = 0 has no relative scale.
    const double db = r.j == 0 ? std::abs(r.b) : rel(r.b, cf.b);
    worst = std::max({worst, rel(r.a, cf.a), db, rel(r.sigma, cf.sigma)});
  }
  return worst;
}

int first_bound_index(double p, double log_C4) {
  const double x = log_C4 / std::log(4.0 * p) - p / (p - 1.0);
  return std::max(0, static_cast<int>(std::ceil(x)));
}

IterationLedger m_sequence(int n, const IterationConstants& c, int J) {
  validate(c);
  const double p = strauss_p(n);
  IterationLedger led;
  led.n = n;
  led.constants = c;
  led.rows = exponent_sequences(n, J);
  led.log_C4 = std::log(c.C0 * (p - 1.0) / (12.0 * p));
  led.log_C5 = std::log(c.M0) - p * std::log(4.0 * p) / ((p - 1.0) * (p - 1.0)) +
               led.log_C4 / (p - 1.0);
  led.j1 = first_bound_index(p, led.log_C4);

  led.rows[0].log_M = std::log(c.M0);
  for (int j = 0; j < J; ++j) {
    const LedgerRow& r = led.rows[j];
    const double coeff = std::log(c.C0) - (2.0 * j + 3.0) * std::numbers::ln2 -
                         std::log(3.0 * slicing_ell(2 * j + 2) * (r.a * p + 1.0));
    led.rows[j + 1].log_M = p * r.log_M + coeff;
  }

  led.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : led.rows) {
    if (r.j < led.j1) continue;
    const double pj = std::pow(p, r.j);
    led.worst_margin = std::min(led.worst_margin, (r.log_M - pj * led.log_C5) / pj);
  }
  led.bound_holds = led.worst_margin >= -1e-9;
  return led;
}

namespace {

int level_index(const SolutionRun& run, double t, bool exact) {
  const double pos = t / run.grid.h;
  const long i = std::llround(pos);
  if (exact && std::abs(pos - i) > 1e-9) {
    throw std::domain_error("integral_identity_residual: t must be a lattice time");
  }
  return static_cast<int>(i);
}

void require_levels(const SolutionRun& run, double t) {
  if (t < 0.0 || t > run.grid.t(run.levels_computed - 1) * (1.0 + 1e-12)) {
    throw std::domain_error("time " + std::to_string(t) + " lies beyond the computed levels");
  }
}

// Trapezoid in r over lattice nodes 0..last of 4 pi r^2 g(r_j).
template <class G>
double radial_integral(const SolutionRun& run, int last, G&& g) {
  double s = 0.0;
  for (int j = 0; j <= last; ++j) {
    const double r = run.grid.r(j);
    const double w = (j == 0 || j == last) ? 0.5 : 1.0;
    s += w * r * r * g(j, r);
  }
  return 4.0 * std::numbers::pi * s * run.grid.h;
}

int support_last(const SolutionRun& run, double t) {
  const int last = static_cast<int>(std::ceil((run.data.support_radius + t) / run.grid.h)) + 1;
  return std::min(last, run.grid.r_nodes - 1);
}

double functional_U_level(const SolutionRun& run, const TestFunctionConfig& cfg, double q,
                          int i) {
  const double t = run.grid.t(i);
  const double inv_p = 1.0 / strauss_p(3);
  return radial_integral(run, support_last(run, t), [&](int j, double r) {
    const double u = run.u(i, j);
    if (u == 0.0) return 0.0;
    return u * std::pow(mu_eval(run.spec, std::abs(u)), inv_p) * eta_q_eval(cfg, q, t, t, r);
  });
}

}  // namespace

double functional_U(const SolutionRun& run, const TestFunctionConfig& cfg, double q, double t) {
  if (cfg.n != 3) throw std::domain_error("functional_U: the solver is three-dimensional");
  require_levels(run, t);
  const double pos = t / run.grid.h;
  const int i = static_cast<int>(std::floor(pos));
  const double f = pos - i;
  const double u0 = functional_U_level(run, cfg, q, i);
  if (f < 1e-12 || i + 1 >= run.levels_computed) return u0;
  return (1.0 - f) * u0 + f * functional_U_level(run, cfg, q, i + 1);
}

double integral_identity_residual(const SolutionRun& run, const TestFunctionConfig& cfg,
                                  double q, double t) {
  if (cfg.n != 3) {
    throw std::domain_error("integral_identity_residual: the solver is three-dimensional");
  }
  require_levels(run, t);
  const int i = level_index(run, t, true);
  const double h = run.grid.h;

  const double lhs = radial_integral(run, support_last(run, t), [&](int j, double r) {
    const double u = run.u(i, j);
    return u == 0.0 ? 0.0 : u * eta_q_eval(cfg, q, t, t, r);
  });

  const int data_last = support_last(run, 0.0);
  const double data_u0 = radial_integral(run, data_last, [&](int, double r) {
    const double v = run.data.initial_value(r);
    return v == 0.0 ? 0.0 : v * xi_q_eval(cfg, q, t, r);
  });
  const double data_u1 = t * radial_integral(run, data_last, [&](int, double r) {
    const double v = run.data.initial_velocity(r);
    return v == 0.0 ? 0.0 : v * eta_q_eval(cfg, q, t, 0.0, r);
  });

  double duhamel = 0.0;
  if (run.options.source_enabled) {
    for (int k = 0; k < i; ++k) {
      const double s = run.grid.t(k);
      const double inner = radial_integral(run, support_last(run, s), [&](int j, double r) {
        const double F = nonlinearity(run.spec, run.u(k, j));
        return F == 0.0 ? 0.0 : F * eta_q_eval(cfg, q, t, s, r);
      });
      const double w = (k == 0) ? 0.5 : 1.0;
      duhamel += w * (t - s) * inner;
    }
    duhamel *= h;
  }
  return lhs - (data_u0 + data_u1 + duhamel);
}

double onset_base(int n, const IterationConstants& c, const ModulusSpec& spec, double t) {
  const double p = strauss_p(n);
  const double expo = 0.5 * (n - 1) + 1.0 / p + c.epsilon_exp;
  const double log_tau = -expo * std::log(c.C6 * t);
  if (!(log_tau < 0.0)) throw std::domain_error("onset_base: tau(t) must lie below 1");
  const double kappa = kappa_bar_eval(spec, n, std::exp(log_tau));
  return c.C7 * std::pow(kappa, p / (p - 1.0));
}

std::optional<double> divergence_onset(int n, const IterationConstants& c,
                                       const ModulusSpec& spec, double t_max) {
  validate(c);
  const double p = strauss_p(n);
  const double expo = 0.5 * (n - 1) + 1.0 / p + c.epsilon_exp;
  const double tau_hi = std::min(spec.tau0, std::exp(-1.0));
  // tau(t) = tau_hi  <=>  t = tau_hi^{-1/expo} / C6.
  const double t_start = std::pow(tau_hi, -1.0 / expo) / c.C6 * (1.0 + 1e-12);
  if (!(t_start <= t_max)) return std::nullopt;
  const auto above = [&](double t) { return onset_base(n, c, spec, t) > 1.0; };
  if (above(t_start)) return t_start;

  constexpr int kScan = 400;
  const double ratio = std::log(t_max / t_start) / kScan;
  double prev = t_start;
  for (int k = 1; k <= kScan; ++k) {
    const double t = t_start * std::exp(ratio * k);
    if (above(t)) {
      double lo = prev, hi = t;
      for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (above(mid) ? hi : lo) = mid;
      }
      return hi;
    }
    prev = t;
  }
  return std::nullopt;
}

}  // namespace strauss
