#pragma once

#include <vector>

#include "strauss/modulus.hpp"
#include "strauss/radial_solver.hpp"
#include "strauss/report.hpp"

namespace strauss {

/// <y> = 3 + |y|.
double bracket(double y);

/// (log tau)^{1/p_S(3)} for tau >= 3; std::domain_error below 3.
double omega_weight(double tau);

/// omega(<t-|r|>) <t+|r|> <t-|r|>^{1/p_S(3)}: the space-time weight of the
/// solution norm and of the pointwise decay profile.
double solution_weight(double t, double r);

/// Per-level sup of solution_weight * |u| over the run's nodes, with four
/// extra interpolated samples per cell within distance R+1 of the light cone.
std::vector<double> weighted_level_sups(const SolutionRun& run);

/// Weighted sup norm of the run over all computed levels.
double x_kappa_norm(const SolutionRun& run);

struct DataNorms {
  /// sup omega(<r>)<r>^kappa |u0| + sup omega(<r>)<r>^{kappa+1} |u0'|.
  double A_kappa = 0.0;
  /// sup omega(<r>)<r>^{kappa+1} |u1|.
  double B_kappa_plus_1 = 0.0;
  double sum() const { return A_kappa + B_kappa_plus_1; }
};

/// Grid sups over [0, support_radius + 1] with amplitude included.
DataNorms data_norms(const RadialData& data, int samples = 20001);

/// Weighted sup of the exact linear solution on t in [0, horizon] divided by
/// the data norms. Passes iff the running sup at the horizon is at most 1.2
/// times the running sup at half the horizon.
WeightReport linear_decay_check(const RadialData& data, double horizon, double dt = 0.25);

struct KeyIntegral {
  double value = 0.0;
  /// <xi> [log <xi>]^{-1/p} (loglog <xi>) kappa_bar(eps0 / <xi>).
  double bound = 0.0;
  double ratio = 0.0;
};

/// I(xi) = int_{-|xi|}^{|xi|} omega(<eta>)^{-p} <xi+eta> <eta>^{-1}
///         mu(eps0 omega(<eta>)^{-1} <xi>^{-1} <eta>^{-1/p}) d eta
/// by adaptive quadrature split at 0 and +-|xi|/2.
KeyIntegral key_integral_I(double xi, double eps0, const ModulusSpec& spec);

/// Sweep of key_integral_I; fitted_constant is max/min of the ratio over the
/// nonzero xi, pass iff it is at most `max_range`.
WeightReport key_integral_sweep(const std::vector<double>& xis, double eps0,
                                const ModulusSpec& spec, double max_range = 50.0);

enum class Zone { I, II, III, Outside };

/// I: t >= 2r >= 0.  II: 0 <= r <= 1, t <= 2r.  III: r >= 1, r <= t <= 2r.
Zone zone_of(double t, double r);

/// J_0(t, r) = [log <t-r>]^{1/p} <t+r> <t-r>^{1/p} / r
///   * int_{|t-r|}^{t+r} <xi>^{1-p} [log <xi>]^{-1/p} (loglog <xi>) kappa_bar(eps0/<xi>) d xi.
double j0_bound(const ModulusSpec& spec, double eps0, double t, double r);

/// Evaluates J_0 on the samples and on their dilations by 2 and 4 (zones I
/// and III). Passes iff every value is finite and, in zones I and III, the
/// dilated values do not exceed the undilated ones by more than 25%.
WeightReport zone_J0_check(const ModulusSpec& spec, double eps0,
                           const std::vector<std::pair<double, double>>& samples);

/// Sup of |u| [log <t-r>]^{1/p} <t+r> <t-r>^{1/p} over the run, divided by the
/// data norms. Passes iff finite and the running sup at the horizon is at most
/// 1.2 times that at half the horizon. std::domain_error for runs that blew up.
WeightReport decay_profile_check(const SolutionRun& run);

}  // namespace strauss
