#include "strauss/weighted_norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "strauss/exponents.hpp"
#include "strauss/quadrature.hpp"

namespace strauss {

namespace {

const double kP = strauss_p(3);
const double kInvP = 1.0 / kP;
const double kKappa = 1.0 + kInvP;

// Running sup at the horizon over running sup at half the horizon.
double tail_growth(const std::vector<double>& level_sups) {
  if (level_sups.size() < 2) return 1.0;
  const std::size_t half = (level_sups.size() - 1) / 2;
  const double early = *std::max_element(level_sups.begin(), level_sups.begin() + half + 1);
  const double all = *std::max_element(level_sups.begin(), level_sups.end());
  if (all == 0.0) return 1.0;
  return early > 0.0 ? all / early : std::numeric_limits<double>::infinity();
}

}  // namespace

double bracket(double y) { return 3.0 + std::abs(y); }

double omega_weight(double tau) {
  if (!(tau >= 3.0)) throw std::domain_error("omega_weight: tau must be >= 3");
  return std::pow(std::log(tau), kInvP);
}

double solution_weight(double t, double r) {
  const double a = std::abs(r);
  const double near = bracket(t - a);
  return omega_weight(near) * bracket(t + a) * std::pow(near, kKappa - 1.0);
}

std::vector<double> weighted_level_sups(const SolutionRun& run) {
  std::vector<double> sups;
  const double h = run.grid.h;
  const double band = run.data.support_radius + 1.0;
  for (int i = 0; i < run.levels_computed; ++i) {
    const double t = run.grid.t(i);
    double s = 0.0;
    for (int j = 0; j < run.grid.r_nodes; ++j) {
      const double r = run.grid.r(j);
      s = std::max(s, solution_weight(t, r) * std::abs(run.u(i, j)));
      if (std::abs(t - r) <= band && j + 1 < run.grid.r_nodes) {
        for (int q = 1; q < 4; ++q) {
          const double rq = r + 0.25 * q * h;
          s = std::max(s, solution_weight(t, rq) * std::abs(run.value_at(i, rq)));
        }
      }
    }
    sups.push_back(s);
  }
  return sups;
}

double x_kappa_norm(const SolutionRun& run) {
  const auto sups = weighted_level_sups(run);
  return sups.empty() ? 0.0 : *std::max_element(sups.begin(), sups.end());
}

DataNorms data_norms(const RadialData& data, int samples) {
  DataNorms dn;
  double a0 = 0.0, a1 = 0.0, b = 0.0;
  const double top = data.support_radius + 1.0;
  for (int k = 0; k < samples; ++k) {
    const double r = top * k / (samples - 1);
    const double br = bracket(r);
    const double w = omega_weight(br) * std::pow(br, kKappa);
    a0 = std::max(a0, w * std::abs(data.initial_value(r)));
    a1 = std::max(a1, w * br * std::abs(data.initial_slope(r)));
    b = std::max(b, w * br * std::abs(data.initial_velocity(r)));
  }
  dn.A_kappa = a0 + a1;
  dn.B_kappa_plus_1 = b;
  return dn;
}

WeightReport linear_decay_check(const RadialData& data, double horizon, double dt) {
  validate(data);
  WeightReport rep;
  rep.region = "t in [0, " + std::to_string(horizon) + "], r in [0, t + R + 0.5]";
  const double norms = data_norms(data).sum();
  const int levels = static_cast<int>(std::llround(horizon / dt)) + 1;
  const double R = data.support_radius;
  std::vector<double> sups;
  double best = 0.0;
  for (int i = 0; i < levels; ++i) {
    const double t = i * dt;
    const double top = t + R + 0.5;
    double s = 0.0;
    Sample arg{t, 0.0, 0.0};
    auto probe = [&](double r) {
      const double v = solution_weight(t, r) * std::abs(linear_propagator(data, t, r));
      if (v > s) {
        s = v;
        arg = {t, r, v};
      }
    };
    const int coarse = static_cast<int>(std::ceil(top / 0.1));
    for (int j = 0; j <= coarse; ++j) probe(top * j / coarse);
    const double lo = std::max(0.0, t - R - 0.5);
    const int fine = static_cast<int>(std::ceil((top - lo) / 0.005));
    for (int j = 0; j <= fine; ++j) probe(lo + (top - lo) * j / fine);
    const double ratio = norms > 0.0 ? s / norms : 0.0;
    sups.push_back(ratio);
    rep.samples.push_back({t, arg.y, ratio});
    if (ratio > best) {
      best = ratio;
      rep.worst_point = {arg.x, arg.y, ratio};
    }
  }
  const double growth = tail_growth(sups);
  rep.fitted_constant = best;
  rep.pass = std::isfinite(best) && growth <= 1.2;
  rep.diagnostics = {{"data_norms", norms}, {"tail_growth", growth}};
  return rep;
}

KeyIntegral key_integral_I(double xi, double eps0, const ModulusSpec& spec) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw std::domain_error("key_integral_I: eps0 in (0, 1)");
  KeyIntegral out;
  const double a = std::abs(xi);
  const double bx = bracket(xi);
  out.bound = bx * std::pow(std::log(bx), -kInvP) * std::log(std::log(bx)) *
              kappa_bar_eval(spec, 3, eps0 / bx);
  if (a == 0.0) return out;
  const auto f = [&](double eta) {
    const double be = bracket(eta);
    const double om = omega_weight(be);
    const double arg = eps0 / (om * bx * std::pow(be, kInvP));
    return bracket(xi + eta) / (std::log(be) * be) * mu_eval(spec, arg);
  };
  const double bp[] = {-a, -0.5 * a, 0.0, 0.5 * a, a};
  out.value = quad::adaptive_split(f, bp, 1e-10).value;
  out.ratio = out.value / out.bound;
  return out;
}

WeightReport key_integral_sweep(const std::vector<double>& xis, double eps0,
                                const ModulusSpec& spec, double max_range) {
  WeightReport rep;
  rep.region = "key integral ratio over the sampled xi";
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double xi : xis) {
    const KeyIntegral k = key_integral_I(xi, eps0, spec);
    rep.samples.push_back({xi, k.value, k.ratio});
    if (xi == 0.0) continue;
    lo = std::min(lo, k.ratio);
    if (k.ratio > hi) {
      hi = k.ratio;
      rep.worst_point = rep.samples.back();
    }
  }
  rep.fitted_constant = hi > 0.0 ? hi / lo : 0.0;
  rep.pass = lo > 0.0 && std::isfinite(hi) && rep.fitted_constant <= max_range;
  rep.diagnostics = {{"ratio_min", lo}, {"ratio_max", hi}};
  return rep;
}

Zone zone_of(double t, double r) {
  if (t < 0.0 || r < 0.0) return Zone::Outside;
  if (t >= 2.0 * r) return Zone::I;
  if (r <= 1.0) return Zone::II;
  if (t >= r) return Zone::III;
  return Zone::Outside;
}

double j0_bound(const ModulusSpec& spec, double eps0, double t, double r) {
  if (!(r > 0.0)) throw std::domain_error("j0_bound: r must be positive");
  const auto f = [&](double x) {
    const double bx = bracket(x);
    return std::pow(bx, 1.0 - kP) * std::pow(std::log(bx), -kInvP) * std::log(std::log(bx)) *
           kappa_bar_eval(spec, 3, eps0 / bx);
  };
  const double lo = std::abs(t - r);
  const double hi = t + r;
  const double mid = 0.5 * (lo + hi);
  const double bp[] = {lo, std::min(mid, lo + 1.0), mid, hi};
  const double integral = quad::adaptive_split(f, bp, 1e-10).value;
  const double near = bracket(t - r);
  return std::pow(std::log(near), kInvP) * bracket(t + r) * std::pow(near, kInvP) / r * integral;
}

WeightReport zone_J0_check(const ModulusSpec& spec, double eps0,
                           const std::vector<std::pair<double, double>>& samples) {
  WeightReport rep;
  rep.region = "zones I (t >= 2r), II (r <= 1, t <= 2r), III (r >= 1, r <= t <= 2r)";
  double sup[3] = {0.0, 0.0, 0.0};
  double growth[3] = {1.0, 1.0, 1.0};
  int skipped = 0;
  bool ok = true;
  for (const auto& [t, r] : samples) {
    const Zone z = zone_of(t, r);
    if (z == Zone::Outside) {
      ++skipped;
      continue;
    }
    const int zi = static_cast<int>(z);
    const double base = j0_bound(spec, eps0, t, r);
    double worst = base;
    ok &= std::isfinite(base);
    rep.samples.push_back({t, r, base});
    if (z != Zone::II) {
      for (double d : {2.0, 4.0}) {
        const double v = j0_bound(spec, eps0, d * t, d * r);
        ok &= std::isfinite(v);
        rep.samples.push_back({d * t, d * r, v});
        worst = std::max(worst, v);
      }
      growth[zi] = std::max(growth[zi], base > 0.0 ? worst / base : 1.0);
    }
    if (worst > sup[zi]) sup[zi] = worst;
    if (worst >= rep.fitted_constant) {
      rep.fitted_constant = worst;
      rep.worst_point = {t, r, worst};
    }
  }
  ok &= growth[0] <= 1.25 && growth[2] <= 1.25;
  rep.pass = ok && skipped < static_cast<int>(samples.size());
  rep.diagnostics = {{"zone_I_sup", sup[0]},         {"zone_II_sup", sup[1]},
                     {"zone_III_sup", sup[2]},       {"zone_I_growth", growth[0]},
                     {"zone_III_growth", growth[2]}, {"skipped", static_cast<double>(skipped)}};
  return rep;
}

WeightReport decay_profile_check(const SolutionRun& run) {
  if (run.status == RunStatus::BlewUp) {
    throw std::domain_error("decay_profile_check: the run blew up");
  }
  WeightReport rep;
  rep.region = "all computed levels of the run";
  const double norms = data_norms(run.data).sum();
  const auto sups = weighted_level_sups(run);
  double best = 0.0;
  for (std::size_t i = 0; i < sups.size(); ++i) {
    const double ratio = norms > 0.0 ? sups[i] / norms : 0.0;
    rep.samples.push_back({run.grid.t(static_cast<int>(i)), 0.0, ratio});
    if (ratio > best) {
      best = ratio;
      rep.worst_point = rep.samples.back();
    }
  }
  const double growth = tail_growth(sups);
  rep.fitted_constant = best;
  rep.pass = std::isfinite(best) && growth <= 1.2;
  rep.diagnostics = {{"data_norms", norms}, {"tail_growth", growth}};
  return rep;
}

}  // namespace strauss
