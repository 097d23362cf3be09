#include "strauss/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "strauss/quadrature.hpp"

namespace strauss {

namespace {

constexpr double kPi = std::numbers::pi;

double bracket3(double y) { return 3.0 + std::abs(y); }

// 2 pi I0(r) e^{-r}.
double phi2_scaled(double r) {
  if (r > 700.0) {
    // Large-argument expansion of I0.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
      const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * r);
      if (next < 1e-17 * sum || next > term) break;
      term = next;
      sum += term;
    }
    return 2.0 * kPi * sum / std::sqrt(2.0 * kPi * r);
  }
  const double x = 0.25 * r * r;
  double term = std::exp(-r);
  double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (static_cast<double>(k) * k);
    sum += term;
    if (k > r && term < 1e-17 * sum) break;
  }
  return 2.0 * kPi * sum;
}

// |S^{n-2}| int_0^pi e^{r(cos th - 1)} sin^{n-2} th d th.
double phi_general_scaled(int n, double r) {
  const auto f = [&](double th) {
    return std::exp(r * (std::cos(th) - 1.0)) * std::pow(std::sin(th), n - 2);
  };
  // The integrand concentrates in th ~ 1/sqrt(r) for large r.
  const double knee = std::min(kPi, 8.0 / std::sqrt(std::max(r, 1.0)));
  const double bp[] = {0.0, knee, kPi};
  return sphere_area(n - 2) * quad::adaptive_split(f, bp, 1e-13).value;
}

void check_q(double q, const char* who) {
  if (!(q > -1.0)) throw std::domain_error(std::string(who) + ": q must exceed -1");
}

// Composite Gauss-Legendre over the graded lambda mesh (0, lambda0].
template <class F>
double lambda_integral(const TestFunctionConfig& cfg, F&& f) {
  const auto edges = quad::graded_edges(0.0, cfg.lambda0, static_cast<std::size_t>(cfg.quad_points),
                                        3.0);
  return quad::composite(f, edges, 8);
}

double sinhc_series(double z) {
  const double z2 = z * z;
  return 1.0 + z2 / 6.0 + z2 * z2 / 120.0 + z2 * z2 * z2 / 5040.0;
}

}  // namespace

void validate(const TestFunctionConfig& cfg) {
  if (cfg.n < 2) throw std::invalid_argument("TestFunctionConfig: n must be >= 2");
  if (!(cfg.lambda0 > 0.0)) throw std::invalid_argument("TestFunctionConfig: lambda0 must be > 0");
  if (!(cfg.R > 0.0)) throw std::invalid_argument("TestFunctionConfig: R must be > 0");
  if (cfg.quad_points < 16) {
    throw std::invalid_argument("TestFunctionConfig: quad_points must be >= 16");
  }
}

double sphere_area(int m) {
  if (m < 0) throw std::domain_error("sphere_area: negative dimension");
  const double d = m + 1.0;
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double phi_scaled(int n, double r) {
  if (n < 2) throw std::domain_error("phi: n must be >= 2");
  if (r < 0.0 || std::isnan(r)) throw std::domain_error("phi: r must be >= 0");
  if (n == 3) {
    if (r < 1e-8) return 4.0 * kPi * (1.0 - r);
    return 2.0 * kPi * (-std::expm1(-2.0 * r)) / r;
  }
  if (n == 2) return phi2_scaled(r);
  return phi_general_scaled(n, r);
}

double phi_eval(int n, double r) {
  const double s = phi_scaled(n, r);
  if (r > 700.0) return std::exp(std::log(s) + r);
  return s * std::exp(r);
}

double phi_asymptotic_ratio(int n, double r) {
  if (r < 1.0) throw std::domain_error("phi_asymptotic_ratio: r must be >= 1");
  return phi_scaled(n, r) * std::pow(r, 0.5 * (n - 1));
}

double psi_ball_integral(int n, double R, double t) {
  if (!(R > 0.0)) throw std::domain_error("psi_ball_integral: R must be positive");
  if (t < 0.0) throw std::domain_error("psi_ball_integral: t must be >= 0");
  const double top = R + t;
  const auto f = [&](double z) {
    return std::pow(z, n - 1) * phi_scaled(n, z) * std::exp(z - t);
  };
  const double bp[] = {0.0, std::max(0.0, top - 60.0), std::max(0.0, top - 5.0), top};
  const auto res = quad::adaptive_split(f, bp, 1e-12);
  if (!std::isfinite(res.value)) {
    throw std::runtime_error("psi_ball_integral: non-finite quadrature value");
  }
  return res.value;
}

WeightReport psi_ball_bracket(int n, double R, double t_max, int samples, double max_range) {
  WeightReport rep;
  rep.region = "t in [0, " + std::to_string(t_max) + "], n = " + std::to_string(n);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = t_max * i / (samples - 1);
    const double ratio = psi_ball_integral(n, R, t) / std::pow(R + t, 0.5 * (n - 1));
    rep.samples.push_back({t, 0.0, ratio});
    if (ratio < lo) lo = ratio;
    if (ratio > hi) {
      hi = ratio;
      rep.worst_point = rep.samples.back();
    }
  }
  rep.fitted_constant = hi / lo;
  rep.pass = lo > 0.0 && std::isfinite(hi) && rep.fitted_constant <= max_range;
  rep.diagnostics = {{"lower", lo}, {"upper", hi}};
  return rep;
}

double xi_q_eval(const TestFunctionConfig& cfg, double q, double t, double r) {
  check_q(q, "xi_q_eval");
  if (t < 0.0) throw std::domain_error("xi_q_eval: t must be >= 0");
  validate(cfg);
  r = std::abs(r);
  // e^{-lam(R+t)} cosh(lam t) = (e^{-lam R} + e^{-lam(R+2t)}) / 2.
  return lambda_integral(cfg, [&](double lam) {
    const double lr = lam * r;
    const double e = std::exp(lr - lam * cfg.R) + std::exp(lr - lam * (cfg.R + 2.0 * t));
    return 0.5 * e * phi_scaled(cfg.n, lr) * std::pow(lam, q);
  });
}

double eta_q_eval(const TestFunctionConfig& cfg, double q, double t, double s, double r,
                  SinhcPath path) {
  check_q(q, "eta_q_eval");
  if (s < 0.0 || t < s) throw std::domain_error("eta_q_eval: need t >= s >= 0");
  validate(cfg);
  r = std::abs(r);
  const double gap = t - s;
  return lambda_integral(cfg, [&](double lam) {
    const double z = lam * gap;
    const double lr = lam * r;
    double kernel;
    const bool series = path == SinhcPath::Series || (path == SinhcPath::Auto && z < 1e-4);
    if (series) {
      kernel = std::exp(lr - lam * (cfg.R + t)) * sinhc_series(z);
    } else {
      // e^{-lam(R+t)} sinh(z)/z = e^{-lam(R+s)} (1 - e^{-2z}) / (2z).
      kernel = std::exp(lr - lam * (cfg.R + s)) * (-std::expm1(-2.0 * z)) / (2.0 * z);
    }
    return kernel * phi_scaled(cfg.n, lr) * std::pow(lam, q);
  });
}

namespace {

struct Fit {
  bool lower;
  double best;
  double eighth;
  double quarter;
  double outer;
};

Fit make_fit(bool lower) {
  const double init = lower ? std::numeric_limits<double>::infinity() : 0.0;
  return {lower, init, init, init, init};
}

void absorb(Fit& f, double t, double t_max, double v) {
  auto take = [&](double& slot) { slot = f.lower ? std::min(slot, v) : std::max(slot, v); };
  take(f.best);
  if (t >= 0.5 * t_max) {
    take(f.outer);
  } else if (t >= 0.25 * t_max) {
    take(f.quarter);
  } else if (t >= 0.125 * t_max) {
    take(f.eighth);
  }
}

// Change of the windowed extremum over the last doubling of t, as a ratio <= 1
// when the bound is tightening.
double stability(const Fit& f) {
  return f.lower ? f.outer / f.quarter : f.quarter / f.outer;
}

// Geometric extrapolation of the windowed extrema over successive doublings.
double extrapolated_limit(const Fit& f) {
  const double d0 = f.quarter - f.eighth;
  const double d1 = f.outer - f.quarter;
  if (d0 == 0.0 || d1 == 0.0) return f.outer;
  const double rho = d1 / d0;
  if (!(rho > 0.0 && rho < 1.0)) {
    return f.lower ? -std::numeric_limits<double>::infinity()
                   : std::numeric_limits<double>::infinity();
  }
  return f.outer + d1 * rho / (1.0 - rho);
}

bool fit_ok(const Fit& f) {
  if (!(std::isfinite(f.best) && f.best > 0.0)) return false;
  const double stab = stability(f);
  if (f.lower ? stab >= 0.9 : stab >= 1.0 / 1.1) return true;
  const double lim = extrapolated_limit(f);
  return f.lower ? lim > 0.0 : std::isfinite(lim);
}

}  // namespace

LemmaFitReport xi_eta_bounds_verify(const TestFunctionConfig& cfg, double q, double t_max,
                                    int t_samples, int r_samples) {
  validate(cfg);
  check_q(q, "xi_eta_bounds_verify");
  if (t_samples < 5 || r_samples < 2 || !(t_max > 0.0)) {
    throw std::invalid_argument("xi_eta_bounds_verify: grid too small");
  }
  const double n = cfg.n;
  LemmaFitReport rep;
  rep.region = "t in [0, " + std::to_string(t_max) + "], s in [0, t), |x| up to R+s or R+t";

  Fit a0 = make_fit(true), b0 = make_fit(true), b1 = make_fit(true), b2 = make_fit(false);
  auto record = [&](int item, double t, double y, double v) {
    rep.samples.push_back({t, y, v});
    rep.sample_item.push_back(item);
  };

  for (int i = 0; i < t_samples; ++i) {
    const double t = t_max * i / (t_samples - 1);
    for (int j = 0; j < r_samples; ++j) {
      const double r = cfg.R * j / (r_samples - 1);
      const double xi = xi_q_eval(cfg, q, t, r);
      absorb(a0, t, t_max, xi);
      record(0, t, r, xi);
      const double e0 = eta_q_eval(cfg, q, t, 0.0, r) * bracket3(t);
      absorb(b0, t, t_max, e0);
      record(1, t, r, e0);
    }
    if (i == 0) continue;

    constexpr int kS = 6;
    for (int m = 0; m < kS; ++m) {
      const double s = t * m / kS;
      for (int j = 0; j < r_samples; ++j) {
        const double r = (cfg.R + s) * j / (r_samples - 1);
        const double v =
            eta_q_eval(cfg, q, t, s, r) * bracket3(t) * std::pow(bracket3(s), q);
        absorb(b1, t, t_max, v);
        record(2, t, s, v);
      }
    }

    std::vector<double> radii;
    for (int j = 0; j < r_samples; ++j) radii.push_back((cfg.R + t) * j / (r_samples - 1));
    radii.push_back(t);
    for (double r : radii) {
      const double v = eta_q_eval(cfg, q, t, t, r) * std::pow(bracket3(t), 0.5 * (n - 1)) *
                       std::pow(bracket3(t - r), q - 0.5 * (n - 3));
      absorb(b2, t, t_max, v);
      record(3, t, r, v);
    }
  }

  rep.A0 = a0.best;
  rep.B0 = b0.best;
  rep.B1 = b1.best;
  rep.B2 = b2.best;
  rep.worst_ratio = std::min({stability(a0), stability(b0), stability(b1), stability(b2)});
  rep.item_i = fit_ok(a0) && fit_ok(b0);
  rep.item_ii = fit_ok(b1);
  rep.item_iii = fit_ok(b2) && q > 0.5 * (n - 3);
  rep.pass = rep.item_i && rep.item_ii && rep.item_iii;
  return rep;
}

}  // namespace strauss
