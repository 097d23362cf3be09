#pragma once

#include <string>
#include <vector>

#include "strauss/report.hpp"

namespace strauss {

/// Parameters of the lambda-integrals defining xi_q and eta_q.
struct TestFunctionConfig {
  int n = 3;
  /// Upper limit of the lambda-integrals.
  double lambda0 = 1.0;
  /// Support radius of the data.
  double R = 1.0;
  /// Number of graded panels in (0, lambda0]; 8 Gauss points each.
  int quad_points = 64;
};

/// Throws std::invalid_argument unless n >= 2, lambda0 > 0, R > 0, quad_points >= 16.
void validate(const TestFunctionConfig& cfg);

/// Surface area of the unit sphere S^{m} in R^{m+1}.
double sphere_area(int m);

/// Phi(r) = integral over S^{n-1} of exp(r x.omega). Closed form for n = 3,
/// power series for n = 2, one-dimensional quadrature otherwise.
double phi_eval(int n, double r);

/// Phi(r) e^{-r}; finite for every r >= 0.
double phi_scaled(int n, double r);

/// Phi(r) r^{(n-1)/2} e^{-r}. Tends to (2 pi)^{(n-1)/2} as r grows.
double phi_asymptotic_ratio(int n, double r);

/// e^{-t} times the integral of zeta^{n-1} Phi(zeta) over [0, R+t]: the ball
/// integral of Psi(t, .) per unit solid angle.
double psi_ball_integral(int n, double R, double t);

/// Sweep of psi_ball_integral(n, R, t) / (R+t)^{(n-1)/2} on t = 0..t_max.
/// fitted_constant is max/min of the ratio; pass iff it is at most `max_range`.
WeightReport psi_ball_bracket(int n, double R, double t_max, int samples = 101,
                              double max_range = 20.0);

/// xi_q(t, r) = int_0^lambda0 e^{-lambda(R+t)} cosh(lambda t) Phi(lambda r) lambda^q d lambda.
/// Throws std::domain_error for q <= -1 or t < 0.
double xi_q_eval(const TestFunctionConfig& cfg, double q, double t, double r);

/// How eta_q evaluates sinh(z)/z with z = lambda (t - s).
enum class SinhcPath {
  Auto,    ///< series below z = 1e-4, closed form above
  Series,  ///< four-term Taylor series everywhere
  Closed,  ///< -expm1(-2z)/(2z) everywhere
};

/// eta_q(t, s, r) = int_0^lambda0 e^{-lambda(R+t)} sinh(lambda(t-s))/(lambda(t-s))
/// Phi(lambda r) lambda^q d lambda. Throws std::domain_error for t < s or q <= -1.
double eta_q_eval(const TestFunctionConfig& cfg, double q, double t, double s, double r,
                  SinhcPath path = SinhcPath::Auto);

struct LemmaFitReport {
  /// xi_q(t, x) >= A0 for |x| <= R.
  double A0 = 0.0;
  /// eta_q(t, 0, x) >= B0 <t>^{-1} for |x| <= R.
  double B0 = 0.0;
  /// eta_q(t, s, x) >= B1 <t>^{-1} <s>^{-q} for |x| <= R+s.
  double B1 = 0.0;
  /// eta_q(t, t, x) <= B2 <t>^{-(n-1)/2} <t-|x|>^{(n-3)/2-q} for |x| <= R+t.
  double B2 = 0.0;
  /// Smallest tail-stability ratio over the four fits; 1 means the fitted
  /// bound is not drifting at the largest sampled times.
  double worst_ratio = 0.0;
  std::string region;
  bool item_i = false;
  bool item_ii = false;
  bool item_iii = false;
  bool pass = false;
  /// (t, s-or-r, normalized ratio) per sample. `sample_item` tags each one:
  /// 0 = A0, 1 = B0, 2 = B1, 3 = B2.
  std::vector<Sample> samples;
  std::vector<int> sample_item;
};

/// Sweeps t in [0, t_max], s in [0, t), |x| in the admissible ranges and fits
/// the four constants. A lower bound passes iff its constant is positive and
/// either the minimum over the last half of the t-range is at least 0.9 times
/// the minimum over the preceding quarter, or the windowed minima over the last
/// three doublings of t shrink geometrically towards a positive limit. Upper
/// bounds are treated symmetrically (1.1, finite limit).
LemmaFitReport xi_eta_bounds_verify(const TestFunctionConfig& cfg, double q,
                                    double t_max = 50.0, int t_samples = 21,
                                    int r_samples = 9);

}  // namespace strauss
