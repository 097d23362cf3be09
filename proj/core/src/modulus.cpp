#include "strauss/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "strauss/exponents.hpp"

namespace strauss {

namespace {

constexpr double kBridgeEnd = 3.0;

// log mu = log_c + sum_i coeff_i * log(l_i), l_1 = log(1/tau), l_{i+1} = log(l_i).
struct LogForm {
  double log_c = 0.0;
  std::vector<std::pair<int, double>> terms;
  int depth() const {
    int d = 0;
    for (const auto& t : terms) d = std::max(d, t.first);
    return d;
  }
};

LogForm log_form(const ModulusSpec& s) {
  const double inv_p = 1.0 / strauss_p(s.n);
  switch (s.family) {
    case ModulusFamily::LogPower:
      return {std::log(s.c_l), {{1, -s.gamma}}};
    case ModulusFamily::IteratedLogBlowup:
      return {0.0, {{1, -inv_p}, {s.k, s.gamma}}};
    case ModulusFamily::DoubleLogGlobal:
      return {0.0, {{1, -inv_p}, {2, s.gamma}}};
    case ModulusFamily::TripleLogGlobal:
      return {0.0, {{1, -inv_p}, {2, -1.0}, {s.k, s.gamma}}};
    default:
      throw std::logic_error("log_form: not a log-type family");
  }
}

// l_1..l_depth at tau; l_1 formed as -log(tau) so tiny tau never forms 1/tau.
std::vector<double> iterated_logs(double tau, int depth) {
  std::vector<double> l(static_cast<std::size_t>(depth) + 1, 0.0);
  l[1] = -std::log(tau);
  for (int i = 2; i <= depth; ++i) l[i] = std::log(l[i - 1]);
  return l;
}

double log_form_eval(const LogForm& f, double tau) {
  const auto l = iterated_logs(tau, f.depth());
  double v = f.log_c;
  for (const auto& [i, c] : f.terms) v += c * std::log(l[i]);
  return v;
}

// d(log mu)/d tau = sum_i c_i * (-1 / (tau * l_1 * ... * l_i)).
double log_form_dlog(const LogForm& f, double tau) {
  const auto l = iterated_logs(tau, f.depth());
  double d = 0.0;
  for (const auto& [i, c] : f.terms) {
    double prod = tau;
    for (int m = 1; m <= i; ++m) prod *= l[m];
    d -= c / prod;
  }
  return d;
}

struct Bridge {
  double x0, x1, y0, y1, d0, d1;
  double right_c, right_gamma;

  double hermite(double x) const {
    const double h = x1 - x0;
    const double s = (x - x0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
  }
  double right(double x) const { return right_c * std::pow(std::log(x), right_gamma); }
};

double near_value(const ModulusSpec& s, double tau) {
  return std::exp(log_form_eval(log_form(s), tau));
}

Bridge make_bridge(const ModulusSpec& s) {
  Bridge b{};
  b.x0 = s.tau0;
  b.x1 = kBridgeEnd;
  b.y0 = near_value(s, s.tau0);
  b.d0 = b.y0 * log_form_dlog(log_form(s), s.tau0);
  if (s.family == ModulusFamily::LogPower) {
    b.right_c = s.c_l;
    b.right_gamma = s.gamma;
  } else {
    b.right_gamma = 1.0 / strauss_p(s.n);
    b.right_c = std::max(1.0, 2.0 * b.y0 / std::pow(std::log(kBridgeEnd), b.right_gamma));
  }
  b.y1 = b.right(kBridgeEnd);
  b.d1 = b.right_c * b.right_gamma * std::pow(std::log(kBridgeEnd), b.right_gamma - 1.0) /
         kBridgeEnd;
  // Fritsch-Carlson clamp on the endpoint slopes.
  const double secant = (b.y1 - b.y0) / (b.x1 - b.x0);
  if (secant <= 0.0) {
    throw std::invalid_argument("continuation: mu(3) must exceed mu(tau0)");
  }
  const double alpha = b.d0 / secant;
  const double beta = b.d1 / secant;
  const double r2 = alpha * alpha + beta * beta;
  if (r2 > 9.0) {
    const double scale = 3.0 / std::sqrt(r2);
    b.d0 = scale * alpha * secant;
    b.d1 = scale * beta * secant;
  }
  return b;
}

}  // namespace

ModulusSpec ModulusSpec::power_law(double gamma, int n) {
  ModulusSpec s;
  s.family = ModulusFamily::PowerLaw;
  s.gamma = gamma;
  s.n = n;
  s.tau0 = 0.1;
  return s;
}

ModulusSpec ModulusSpec::log_one_plus(double gamma, int n) {
  ModulusSpec s = power_law(gamma, n);
  s.family = ModulusFamily::LogOnePlus;
  return s;
}

ModulusSpec ModulusSpec::log_power(double gamma, double c_l, int n, double tau0) {
  ModulusSpec s;
  s.family = ModulusFamily::LogPower;
  s.gamma = gamma;
  s.c_l = c_l;
  s.n = n;
  s.tau0 = tau0;
  return s;
}

ModulusSpec ModulusSpec::iterated_log_blowup(double gamma, int k, int n, double tau0) {
  ModulusSpec s;
  s.family = ModulusFamily::IteratedLogBlowup;
  s.gamma = gamma;
  s.k = k;
  s.n = n;
  s.tau0 = tau0;
  return s;
}

ModulusSpec ModulusSpec::double_log_global(double gamma, int n, double tau0) {
  ModulusSpec s;
  s.family = ModulusFamily::DoubleLogGlobal;
  s.gamma = gamma;
  s.k = 2;
  s.n = n;
  s.tau0 = tau0;
  return s;
}

ModulusSpec ModulusSpec::triple_log_global(double gamma, int k, int n, double tau0) {
  ModulusSpec s;
  s.family = ModulusFamily::TripleLogGlobal;
  s.gamma = gamma;
  s.k = k;
  s.n = n;
  s.tau0 = tau0;
  return s;
}

ModulusSpec ModulusSpec::with_continuation(Continuation c) const {
  ModulusSpec s = *this;
  s.continuation = c;
  return s;
}

ModulusSpec ModulusSpec::with_tau0(double t0) const {
  ModulusSpec s = *this;
  s.tau0 = t0;
  return s;
}

std::string family_name(ModulusFamily f) {
  switch (f) {
    case ModulusFamily::PowerLaw: return "powerlaw";
    case ModulusFamily::LogOnePlus: return "logoneplus";
    case ModulusFamily::LogPower: return "logpower";
    case ModulusFamily::IteratedLogBlowup: return "iteratedlog";
    case ModulusFamily::DoubleLogGlobal: return "doublelog";
    case ModulusFamily::TripleLogGlobal: return "triplelog";
  }
  return "unknown";
}

std::optional<ModulusFamily> parse_family(const std::string& name) {
  for (auto f : {ModulusFamily::PowerLaw, ModulusFamily::LogOnePlus, ModulusFamily::LogPower,
                 ModulusFamily::IteratedLogBlowup, ModulusFamily::DoubleLogGlobal,
                 ModulusFamily::TripleLogGlobal}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

bool is_global_formula(ModulusFamily f) {
  return f == ModulusFamily::PowerLaw || f == ModulusFamily::LogOnePlus;
}

double iterated_log_domain_edge(int k) {
  double tower = 1.0;
  for (int i = 1; i < k; ++i) tower = std::exp(tower);
  return 1.0 / tower;
}

void validate(const ModulusSpec& s) {
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument(family_name(s.family) + ": " + what);
  };
  if (s.n < 2) fail("dimension n must be >= 2");
  if (!(s.tau0 > 0.0)) fail("tau0 must be positive");
  switch (s.family) {
    case ModulusFamily::PowerLaw:
      if (!(s.gamma >= 0.0 && s.gamma <= 1.0)) fail("gamma must lie in [0, 1]");
      return;
    case ModulusFamily::LogOnePlus:
      if (!(s.gamma > 0.0 && s.gamma <= 1.0)) fail("gamma must lie in (0, 1]");
      return;
    case ModulusFamily::LogPower:
      if (!(s.gamma > 0.0)) fail("gamma must be positive");
      if (!(s.c_l > 0.0)) fail("c_l must be positive");
      if (!(s.tau0 < 1.0)) fail("tau0 must be below 1");
      return;
    case ModulusFamily::IteratedLogBlowup:
      if (!(s.gamma > 0.0)) fail("gamma must be positive");
      if (s.k < 2) fail("k must be >= 2");
      break;
    case ModulusFamily::DoubleLogGlobal:
      if (!(s.gamma < 0.0)) fail("gamma must be negative");
      break;
    case ModulusFamily::TripleLogGlobal:
      if (!(s.gamma < 0.0)) fail("gamma must be negative");
      if (s.k < 3) fail("k must be >= 3");
      break;
  }
  const int depth = std::max(s.k, 2);
  if (!(s.tau0 < iterated_log_domain_edge(depth))) {
    fail("tau0 must lie below 1/tower(k-1) = " +
         std::to_string(iterated_log_domain_edge(depth)));
  }
}

double log_mu(const ModulusSpec& s, double tau) {
  if (!(tau > 0.0)) throw std::domain_error("log_mu: tau must be positive");
  switch (s.family) {
    case ModulusFamily::PowerLaw:
      return s.gamma * std::log(tau);
    case ModulusFamily::LogOnePlus:
      return s.gamma * std::log(std::log1p(tau));
    default:
      break;
  }
  if (tau <= s.tau0) return log_form_eval(log_form(s), tau);
  return std::log(mu_eval(s, tau));
}

double mu_eval(const ModulusSpec& s, double tau) {
  if (tau < 0.0 || std::isnan(tau)) {
    throw std::domain_error("mu_eval: tau must be non-negative");
  }
  if (tau == 0.0) return 0.0;
  switch (s.family) {
    case ModulusFamily::PowerLaw:
      return s.gamma == 0.0 ? 1.0 : std::pow(tau, s.gamma);
    case ModulusFamily::LogOnePlus:
      return std::pow(std::log1p(tau), s.gamma);
    default:
      break;
  }
  if (tau <= s.tau0) return std::exp(log_form_eval(log_form(s), tau));
  if (s.continuation == Continuation::None) {
    throw std::domain_error("mu_eval: tau = " + std::to_string(tau) + " exceeds tau0 = " +
                            std::to_string(s.tau0) + " and continuation is disabled");
  }
  const Bridge b = make_bridge(s);
  if (tau <= kBridgeEnd) return b.hermite(tau);
  return b.right(tau);
}

double mu_slope(const ModulusSpec& s, double tau) {
  if (!(tau > 0.0)) throw std::domain_error("mu_slope: tau must be positive");
  switch (s.family) {
    case ModulusFamily::PowerLaw:
      return s.gamma == 0.0 ? 0.0 : s.gamma * std::pow(tau, s.gamma - 1.0);
    case ModulusFamily::LogOnePlus:
      return s.gamma * std::pow(std::log1p(tau), s.gamma - 1.0) / (1.0 + tau);
    default:
      break;
  }
  const LogForm f = log_form(s);
  return std::exp(log_form_eval(f, tau)) * log_form_dlog(f, tau);
}

double g_eval(const ModulusSpec& s, int n, double tau) {
  if (tau == 0.0) return 0.0;
  const double inv_p = 1.0 / strauss_p(n);
  return tau * std::pow(mu_eval(s, std::abs(tau)), inv_p);
}

WeightReport g_convexity_check(const ModulusSpec& s, int n, const std::vector<double>& grid,
                               double rel_slack) {
  WeightReport rep;
  rep.region = "g midpoint convexity on [0, max grid], odd symmetry on negatives";
  std::vector<double> pos;
  double worst_odd = 0.0;
  for (double x : grid) {
    if (x >= 0.0) {
      pos.push_back(x);
    } else {
      worst_odd = std::max(worst_odd, std::abs(g_eval(s, n, x) + g_eval(s, n, -x)));
    }
  }
  std::sort(pos.begin(), pos.end());
  std::vector<double> gv(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) gv[i] = g_eval(s, n, pos[i]);

  double worst = -std::numeric_limits<double>::infinity();
  Sample worst_pt{};
  std::size_t pairs = 0;
  auto visit = [&](std::size_t i, std::size_t j) {
    const double mid = g_eval(s, n, 0.5 * (pos[i] + pos[j]));
    const double chord = 0.5 * (gv[i] + gv[j]);
    const double scale = std::max({std::abs(gv[i]), std::abs(gv[j]), 1e-300});
    const double viol = (mid - chord) / scale;
    ++pairs;
    if (viol > worst) {
      worst = viol;
      worst_pt = {pos[i], pos[j], mid - chord};
    }
  };
  const std::size_t m = pos.size();
  if (m * (m - 1) / 2 <= 20000) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) visit(i, j);
  } else {
    std::mt19937_64 rng(0x5eed1234ULL);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    for (int trial = 0; trial < 20000; ++trial) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i != j) visit(std::min(i, j), std::max(i, j));
    }
  }
  rep.worst_point = worst_pt;
  rep.fitted_constant = std::max(0.0, worst);
  rep.pass = pairs > 0 && worst <= rel_slack && worst_odd == 0.0;
  rep.diagnostics = {{"pairs", static_cast<double>(pairs)},
                     {"worst_relative_violation", worst},
                     {"odd_symmetry_defect", worst_odd}};
  return rep;
}

std::string cstr_class_name(CStrClass c) {
  switch (c) {
    case CStrClass::Zero: return "Zero";
    case CStrClass::Finite: return "Finite";
    case CStrClass::Infinite: return "Infinite";
  }
  return "?";
}

ThresholdVerdict c_str_classify(const ModulusSpec& s, int n, int decades) {
  if (decades < 10) throw std::invalid_argument("c_str_classify: need >= 10 decades");
  const double inv_p = 1.0 / strauss_p(n);
  ThresholdVerdict v;
  std::vector<double> log_y;
  for (int m = 0; m <= decades; ++m) {
    const double log_tau = std::log(s.tau0) - m * std::numbers::ln10;
    const double tau = std::exp(log_tau);
    const double ly = log_mu(s, tau) + inv_p * std::log(-log_tau);
    log_y.push_back(ly);
    v.samples.push_back({tau, std::exp(ly)});
  }
  const double ratio = std::exp(log_y.back() - log_y[log_y.size() - 11]);
  v.tail_ratio = ratio;
  v.c_str_estimate = v.samples.back().value;
  if (ratio > 1.05) {
    v.c_str_class = CStrClass::Infinite;
  } else if (ratio < 0.95) {
    v.c_str_class = CStrClass::Zero;
  } else {
    v.c_str_class = CStrClass::Finite;
  }
  return v;
}

double kappa_bar_eval(const ModulusSpec& s, int n, double tau) {
  if (!(tau > 0.0) || tau >= 1.0) {
    throw std::domain_error("kappa_bar_eval: tau must lie in (0, 1)");
  }
  const double inv_p = 1.0 / strauss_p(n);
  return std::exp(log_mu(s, tau) + inv_p * std::log(-std::log(tau)));
}

std::vector<double> log_grid(double hi, int decades, int per_decade) {
  std::vector<double> g;
  const int total = decades * per_decade;
  for (int m = 0; m <= total; ++m) {
    g.push_back(hi * std::pow(10.0, -static_cast<double>(m) / per_decade));
  }
  return g;
}

std::vector<double> special_mu_grid(const ModulusSpec& s) {
  return log_grid(std::min(s.tau0, std::exp(-std::numbers::e)), 40, 4);
}

WeightReport special_mu_check(const ModulusSpec& s, const std::vector<double>& grid,
                              double bound) {
  WeightReport rep;
  rep.region = "tau in (0, min(tau0, e^-e)]";
  if (grid.empty()) throw std::invalid_argument("special_mu_check: empty grid");
  const double upper = std::min(s.tau0, std::exp(-std::numbers::e));
  double sup = 0.0;
  double tau_min = grid.front();
  for (double tau : grid) {
    if (!(tau > 0.0) || tau > upper * (1.0 + 1e-12)) {
      throw std::domain_error("special_mu_check: grid point outside (0, min(tau0, e^-e)]");
    }
    const double kb = kappa_bar_eval(s, s.n, tau);
    const double prod = kb * std::log(-std::log(tau));
    rep.samples.push_back({tau, 0.0, prod});
    if (!(prod <= sup)) {
      sup = prod;
      rep.worst_point = rep.samples.back();
    }
    tau_min = std::min(tau_min, tau);
  }
  // Tail trend: compare the smallest tau with the sample ten decades above it.
  const double tau_ref = std::min(upper, tau_min * 1e10);
  const Sample* tail = nullptr;
  const Sample* ref = nullptr;
  for (const auto& smp : rep.samples) {
    if (smp.x == tau_min) tail = &smp;
    if (!ref || std::abs(std::log(smp.x / tau_ref)) < std::abs(std::log(ref->x / tau_ref))) {
      ref = &smp;
    }
  }
  const double growth = (tail && ref && ref->value > 0.0) ? tail->value / ref->value : 1.0;
  rep.fitted_constant = sup;
  rep.pass = std::isfinite(sup) && sup <= bound && growth <= 1.05;
  rep.diagnostics = {{"bound", bound}, {"tail_growth", growth}};
  return rep;
}

WeightReport modulus_axioms_check(const ModulusSpec& s, int grid_points) {
  validate(s);
  WeightReport rep;
  rep.region = "log grid in (0, tau0] plus continuation on [tau0, 100]";
  bool ok = (mu_eval(s, 0.0) == 0.0);

  // Decreasing log grid spanning twelve decades below tau0.
  std::vector<double> taus(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    taus[i] = s.tau0 * std::pow(10.0, -12.0 * i / (grid_points - 1));
  }
  std::vector<double> mus(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) mus[i] = mu_eval(s, taus[i]);

  bool increasing = true;
  for (std::size_t i = 1; i < taus.size(); ++i) increasing &= (mus[i] < mus[i - 1]);

  const double scale = *std::max_element(mus.begin(), mus.end());
  double worst_concave = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t j = i + 1; j < taus.size(); ++j) {
      const double mid = mu_eval(s, 0.5 * (taus[i] + taus[j]));
      const double defect = 0.5 * (mus[i] + mus[j]) - mid;
      if (defect > worst_concave) {
        worst_concave = defect;
        rep.worst_point = {taus[i], taus[j], defect};
      }
    }
  }
  const bool concave = worst_concave <= 1e-12 * scale;

  bool continuation_ok = true;
  double jump = 0.0;
  if (!is_global_formula(s.family) && s.continuation != Continuation::None) {
    for (double x : {s.tau0, kBridgeEnd}) {
      const double left = mu_eval(s, x * (1.0 - 1e-10));
      const double right = mu_eval(s, x * (1.0 + 1e-10));
      jump = std::max(jump, std::abs(right - left) / std::max(std::abs(left), 1e-300));
    }
    continuation_ok = jump < 1e-6;
    double prev = mu_eval(s, s.tau0);
    for (int i = 1; i <= 2000; ++i) {
      const double x = s.tau0 * std::pow(100.0 / s.tau0, i / 2000.0);
      const double y = mu_eval(s, x);
      continuation_ok &= (y >= prev);
      prev = y;
    }
  }
  ok = ok && increasing && concave && continuation_ok;
  rep.fitted_constant = worst_concave;
  rep.pass = ok;
  rep.diagnostics = {{"increasing", increasing ? 1.0 : 0.0},
                     {"concave", concave ? 1.0 : 0.0},
                     {"continuation_ok", continuation_ok ? 1.0 : 0.0},
                     {"continuation_jump", jump}};
  return rep;
}

}  // namespace strauss
