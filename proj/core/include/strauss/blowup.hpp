#pragma once

#include <optional>
#include <vector>

#include "strauss/modulus.hpp"
#include "strauss/radial_solver.hpp"
#include "strauss/special_functions.hpp"

namespace strauss {

/// ell_j = 2 - 2^{-(j+1)}.
double slicing_ell(int j);

/// Calibration constants of the lower-bound iteration. All must be positive.
struct IterationConstants {
  double C0 = 1.0;
  double C1 = 1.0;
  double C2 = 1.0;
  double C3 = 1.0;
  /// Time scale inside tau(t) for the onset predictor.
  double C6 = 1.0;
  /// Prefactor of the divergence base.
  double C7 = 1.0;
  double M0 = 1.0;
  double c_l = 1.0;
  double t0 = 1.0;
  /// Small exponent loss in the first lower bound (at most 0.1).
  double epsilon_exp = 0.01;
  /// Size of the Cauchy data.
  double data_epsilon = 0.01;
  double R = 1.0;
  double lambda0 = 1.0;
};

void validate(const IterationConstants& c);

struct LedgerRow {
  int j = 0;
  double ell_2j = 0.0;
  double a = 0.0;
  double b = 0.0;
  double sigma = 0.0;
  double log_M = 0.0;
};

struct IterationLedger {
  int n = 0;
  std::vector<LedgerRow> rows;
  IterationConstants constants;
  /// log C4 with C4 = C0 (p-1)/(12p).
  double log_C4 = 0.0;
  /// log C5 = log M0 - p log(4p)/(p-1)^2 + log C4/(p-1).
  double log_C5 = 0.0;
  int j1 = 0;
  /// min over j >= j1 of (log M_j - p^j log C5) / p^j.
  double worst_margin = 0.0;
  bool bound_holds = false;
};

struct ClosedForms {
  double a;
  double b;
  double sigma;
};

/// a_j = p/(p-1) p^j - 1/(p-1), b_j = p^j - 1, sigma_j = p/(p-1) p^j - 1/((p-1)p).
ClosedForms closed_forms(double p, int j);

/// Rows 0..J of a, b, sigma by recursion from a_0 = 1, b_0 = 0,
/// sigma_0 = 1 + 1/p; log_M is left at zero.
std::vector<LedgerRow> exponent_sequences(int n, int J);

/// Largest relative deviation between the recursive rows and closed_forms.
double closed_form_deviation(int n, const std::vector<LedgerRow>& rows);

/// j1 = smallest non-negative integer with j1 >= log C4 / log(4p) - p/(p-1).
int first_bound_index(double p, double log_C4);

/// Full ledger: sequences plus log M_j from
/// log M_{j+1} = p log M_j + log(C0 2^{-(2j+3)} / (3 ell_{2j+2} (a_j p + 1))),
/// with the row-wise check log M_j >= p^j log C5 for j >= j1.
IterationLedger m_sequence(int n, const IterationConstants& constants, int J);

/// U(t) = int u mu(|u|)^{1/p} eta_q(t, t, x) dx over R^3 by the trapezoid
/// rule on the run's radial nodes, linear in time between levels.
/// Throws std::domain_error if t lies beyond the computed levels or cfg.n != 3.
double functional_U(const SolutionRun& run, const TestFunctionConfig& cfg, double q, double t);

/// Left minus right side of the weighted integral identity
///   int u eta_q(t,t,x) = int u0 xi_q(t,x) + t int u1 eta_q(t,0,x)
///                        + int_0^t (t-s) int F(u) eta_q(t,s,x) dx ds
/// by the trapezoid rule on the run's lattice. t must be a lattice time.
double integral_identity_residual(const SolutionRun& run, const TestFunctionConfig& cfg,
                                  double q, double t);

/// C7 [kappa(tau(t))]^{p/(p-1)} with tau(t) = (C6 t)^{-(n-1)/2 - 1/p - eps}.
/// Throws std::domain_error where tau(t) >= 1.
double onset_base(int n, const IterationConstants& c, const ModulusSpec& spec, double t);

/// Smallest t <= t_max at which onset_base exceeds 1, scanning from the time
/// where tau(t) first drops below min(tau0, 1/e). Empty if it never does.
std::optional<double> divergence_onset(int n, const IterationConstants& c,
                                       const ModulusSpec& spec, double t_max);

}  // namespace strauss
