#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strauss/report.hpp"

namespace strauss {

enum class ModulusFamily {
  PowerLaw,           ///< tau^gamma
  LogOnePlus,         ///< [log(1+tau)]^gamma
  LogPower,           ///< c_l (log 1/tau)^(-gamma)
  IteratedLogBlowup,  ///< (log 1/tau)^(-1/p) (log^k 1/tau)^gamma, gamma > 0, k >= 2
  DoubleLogGlobal,    ///< (log 1/tau)^(-1/p) (loglog 1/tau)^gamma, gamma < 0
  TripleLogGlobal,    ///< (log 1/tau)^(-1/p) (loglog 1/tau)^(-1) (log^k 1/tau)^gamma, k >= 3
};

enum class Continuation { None, MonotoneConcaveSpline };

/// A modulus-of-continuity family. Log-type families are only defined on
/// (0, tau0]; beyond it they need the continuation bridge.
struct ModulusSpec {
  ModulusFamily family = ModulusFamily::PowerLaw;
  double gamma = 1.0;
  double c_l = 1.0;
  int k = 2;
  /// Dimension whose critical exponent enters the family formula.
  int n = 3;
  double tau0 = 0.1;
  Continuation continuation = Continuation::MonotoneConcaveSpline;

  static ModulusSpec power_law(double gamma, int n = 3);
  static ModulusSpec log_one_plus(double gamma, int n = 3);
  static ModulusSpec log_power(double gamma, double c_l, int n = 3, double tau0 = 0.1);
  static ModulusSpec iterated_log_blowup(double gamma, int k, int n = 3,
                                         double tau0 = 1e-12);
  static ModulusSpec double_log_global(double gamma, int n = 3, double tau0 = 0.01);
  static ModulusSpec triple_log_global(double gamma, int k, int n = 3,
                                       double tau0 = 1e-6);

  ModulusSpec with_continuation(Continuation c) const;
  ModulusSpec with_tau0(double t0) const;
};

std::string family_name(ModulusFamily f);
/// Accepts the CLI spellings: powerlaw, logoneplus, logpower, iteratedlog,
/// doublelog, triplelog.
std::optional<ModulusFamily> parse_family(const std::string& name);

/// True for families whose closed form holds on all of [0, inf).
bool is_global_formula(ModulusFamily f);

/// 1 / tower(k-1): log^k(1/tau) > 0 iff tau is below this value.
double iterated_log_domain_edge(int k);

/// Throws std::invalid_argument when parameters are outside the family's
/// admissible range or tau0 violates the iterated-log domain guard.
void validate(const ModulusSpec& spec);

/// mu(tau). mu(0) = 0 exactly. Throws std::domain_error for tau < 0, and for
/// tau > tau0 on a log-type family without continuation.
double mu_eval(const ModulusSpec& spec, double tau);

/// log mu(tau) for tau > 0, computed without forming (log 1/tau)^(-gamma)
/// directly so that tau down to ~1e-300 stays finite.
double log_mu(const ModulusSpec& spec, double tau);

/// d mu / d tau on the near-zero regime (analytic).
double mu_slope(const ModulusSpec& spec, double tau);

/// g(tau) = tau [mu(|tau|)]^(1/p_S(n)).
double g_eval(const ModulusSpec& spec, int n, double tau);

/// Midpoint convexity of g over pairs of non-negative grid points plus odd
/// symmetry g(-tau) = -g(tau) on the negative points.
WeightReport g_convexity_check(const ModulusSpec& spec, int n, const std::vector<double>& grid,
                               double rel_slack = 1e-12);

enum class CStrClass { Zero, Finite, Infinite };
std::string cstr_class_name(CStrClass c);

struct ThresholdVerdict {
  CStrClass c_str_class = CStrClass::Finite;
  /// Last tail sample of mu(tau)(log 1/tau)^(1/p).
  double c_str_estimate = 0.0;
  /// Ratio y_M / y_{M-10} driving the classification.
  double tail_ratio = 1.0;
  struct Point {
    double tau;
    double value;
  };
  std::vector<Point> samples;
};

/// Samples y_m = mu(tau_m)(log 1/tau_m)^(1/p_S(n)) on tau_m = tau0 10^-m,
/// m = 0..decades, and classifies the limit by the trend over the last ten
/// decades (>5% growth: Infinite, >5% decay: Zero, else Finite).
ThresholdVerdict c_str_classify(const ModulusSpec& spec, int n, int decades = 40);

/// kappa_bar(tau) = mu(tau)(log 1/tau)^(1/p_S(n)). Throws for tau >= 1 or tau <= 0.
double kappa_bar_eval(const ModulusSpec& spec, int n, double tau);

/// tau0 * 10^(-m/per_decade) for m = 0..decades*per_decade (decreasing).
std::vector<double> log_grid(double hi, int decades, int per_decade);

/// Default grid for special_mu_check: 40 decades below min(tau0, e^-e).
std::vector<double> special_mu_grid(const ModulusSpec& spec);

/// sup over the grid of kappa_bar(tau) loglog(1/tau). Passes iff finite,
/// below `bound`, and not growing by more than 5% over the last ten decades.
WeightReport special_mu_check(const ModulusSpec& spec, const std::vector<double>& grid,
                              double bound = 10.0);

/// mu(0) = 0, strict monotonicity and midpoint concavity on a log grid of
/// (0, tau0], plus continuity at tau0 and 3 and monotonicity of the bridge.
WeightReport modulus_axioms_check(const ModulusSpec& spec, int grid_points = 1000);

}  // namespace strauss
