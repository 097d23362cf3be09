#include "strauss/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace strauss {

double StraussValue::value() const {
  if (infinite_) {
    throw std::domain_error("critical exponent is infinite (n = 1)");
  }
  return value_;
}

StraussValue strauss_exponent(int n) {
  if (n <= 0) {
    throw std::domain_error("strauss_exponent: dimension must be positive, got " +
                            std::to_string(n));
  }
  if (n == 1) return StraussValue::infinite();

  // a p^2 + b p + c with a = n-1, b = -(n+1), c = -2. With b < 0 the stable
  // branch is q = -(b - sqrt(disc))/2 > 0 and the positive root is q/a.
  const double a = n - 1.0;
  const double b = -(n + 1.0);
  const double c = -2.0;
  const double disc = b * b - 4.0 * a * c;  // n^2 + 10n - 7
  const double qq = -0.5 * (b - std::sqrt(disc));
  return StraussValue::finite(qq / a);
}

double strauss_p(int n) {
  if (n < 2) {
    throw std::domain_error("finite critical exponent needs n >= 2, got " +
                            std::to_string(n));
  }
  return strauss_exponent(n).value();
}

double strauss_residual(int n, double p) {
  return (n - 1.0) * p * p - (n + 1.0) * p - 2.0;
}

double q_parameter(int n) { return 0.5 * (n - 1.0) - 1.0 / strauss_p(n); }

ExponentSet exponent_set(int n) {
  ExponentSet e;
  e.n = n;
  e.p_strauss = strauss_p(n);
  e.p_conjugate = e.p_strauss / (e.p_strauss - 1.0);
  e.q = q_parameter(n);
  e.kappa = 1.0 + 1.0 / e.p_strauss;
  return e;
}

IdentityResiduals exponent_identity_residuals(int n) {
  const ExponentSet e = exponent_set(n);
  const double p = e.p_strauss;
  const double pc = e.p_conjugate;
  const double m = n - 1.0;
  IdentityResiduals r;
  r.holder_weight = e.q / (p - 1.0) - 0.5 * m * pc + m - pc / p;
  r.psi_power = -e.q - m * (0.5 * p - 1.0) + 1.0;
  return r;
}

WeightReport exponent_identity_report(int n, double tolerance) {
  const IdentityResiduals r = exponent_identity_residuals(n);
  WeightReport rep;
  rep.region = "exponent identities, n=" + std::to_string(n);
  rep.samples = {{1.0, static_cast<double>(n), r.holder_weight},
                 {2.0, static_cast<double>(n), r.psi_power}};
  const double worst = std::max(std::abs(r.holder_weight), std::abs(r.psi_power));
  rep.fitted_constant = worst;
  rep.worst_point = std::abs(r.holder_weight) >= std::abs(r.psi_power) ? rep.samples[0]
                                                                       : rep.samples[1];
  rep.pass = std::isfinite(worst) && worst < tolerance;
  rep.diagnostics = {{"holder_weight_residual", r.holder_weight},
                     {"psi_power_residual", r.psi_power}};
  return rep;
}

}  // namespace strauss
