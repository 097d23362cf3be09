#pragma once

#include "strauss/report.hpp"

namespace strauss {

/// Critical exponent value that may be the distinguished infinity of n = 1.
/// Reading `value()` on the infinite marker throws, so the marker never enters
/// arithmetic as a floating +inf.
class StraussValue {
 public:
  static StraussValue finite(double p) { return StraussValue(false, p); }
  static StraussValue infinite() { return StraussValue(true, 0.0); }

  bool is_infinite() const { return infinite_; }
  double value() const;

 private:
  StraussValue(bool inf, double p) : infinite_(inf), value_(p) {}
  bool infinite_;
  double value_;
};

/// Positive root of (n-1)p^2 - (n+1)p - 2 = 0; the infinite marker for n = 1.
/// Throws std::domain_error for n <= 0.
StraussValue strauss_exponent(int n);

/// Finite critical exponent for n >= 2 (throws std::domain_error otherwise).
double strauss_p(int n);

/// (n-1)p^2 - (n+1)p - 2.
double strauss_residual(int n, double p);

/// (n-1)/2 - 1/p_S(n).
double q_parameter(int n);

struct ExponentSet {
  int n = 0;
  double p_strauss = 0.0;
  double p_conjugate = 0.0;
  double q = 0.0;
  /// 1 + 1/p_S(n); only meaningful for n = 3.
  double kappa = 0.0;
};

ExponentSet exponent_set(int n);

/// Residuals of the two exponent identities used in the iteration-frame
/// derivation:
///   q/(p-1) - (n-1)p'/2 + (n-1) - p'/p = 0
///   -q - (n-1)(p/2 - 1) + 1 = 0
struct IdentityResiduals {
  double holder_weight = 0.0;
  double psi_power = 0.0;
};

IdentityResiduals exponent_identity_residuals(int n);

/// Both identities as a report; fitted_constant is the max absolute residual,
/// pass iff it is below `tolerance`.
WeightReport exponent_identity_report(int n, double tolerance = 1e-10);

}  // namespace strauss
