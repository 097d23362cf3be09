#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "strauss/modulus.hpp"

namespace strauss {

using RadialProfile = std::function<double(double)>;

/// Radial Cauchy data u(0) = eps * u0, u_t(0) = eps * u1 in three dimensions.
/// Profiles are evaluated at |r|, so the even extension holds by construction.
struct RadialData {
  RadialProfile u0;
  /// u0'; when empty a centered difference of u0 is used.
  RadialProfile du0;
  RadialProfile u1;
  /// K with K'(rho) = (rho/2) u1(rho). When present the exact linear solution
  /// is available in closed form.
  RadialProfile u1_antiderivative;
  double support_radius = 1.0;
  double epsilon = 1.0;

  /// u0 = (1 - r^2)^3 on |r| <= 1, u1 = 0.
  static RadialData default_bump(double epsilon);
  /// u0 = u1 = (1 - r^2)^3 on |r| <= 1.
  static RadialData bump_pair(double epsilon);
  /// Identically zero data.
  static RadialData zero();

  double initial_value(double r) const;
  double initial_slope(double r) const;
  double initial_velocity(double r) const;
};

/// Throws std::invalid_argument when a profile is missing, does not vanish
/// beyond the support radius, or has u0'(0) != 0.
void validate(const RadialData& data);

/// Uniform lattice t_i = i h, r_j = j h.
struct CharacteristicGrid {
  double h = 0.05;
  int t_levels = 0;
  int r_nodes = 0;

  double t(int i) const { return i * h; }
  double r(int j) const { return j * h; }
  double horizon() const { return (t_levels - 1) * h; }
};

/// Levels up to `horizon` and radial nodes covering the light cone of the
/// support out to the horizon.
CharacteristicGrid make_grid(double h, double horizon, double support_radius);

enum class RunStatus { Completed, BlewUp, Failed };
std::string run_status_name(RunStatus s);

struct MarchOptions {
  double cap = 1e6;
  /// When false the nonlinearity is dropped and the march reproduces the
  /// linear solution.
  bool source_enabled = true;
  int threads = 1;
};

struct SolutionRun {
  CharacteristicGrid grid;
  RadialData data;
  ModulusSpec spec;
  MarchOptions options;
  RunStatus status = RunStatus::Failed;
  /// Horizon for Completed, detection time for BlewUp.
  double status_time = 0.0;
  std::string reason;
  int levels_computed = 0;
  /// Row-major u(t_i, r_j).
  std::vector<double> field;
  /// P_k(m) = int_0^{m h} (rho/2) F(u(s_k, rho)) d rho by the trapezoid rule,
  /// m = 0..r_nodes-1. Constant beyond the last node since u vanishes there.
  std::vector<double> source_prefix;

  double u(int i, int j) const { return field[static_cast<std::size_t>(i) * grid.r_nodes + j]; }
  double& u(int i, int j) { return field[static_cast<std::size_t>(i) * grid.r_nodes + j]; }
  double prefix(int k, int m) const;
  /// u(t_i, r) at arbitrary r by linear interpolation, evaluated at |r|.
  double value_at(int i, double r) const;
};

/// |u|^p mu(|u|) with p = p_S(3).
double nonlinearity(const ModulusSpec& spec, double u);

/// d'Alembert solution of the linear problem at (t, r), r of either sign.
/// With h > 0 the u1 term uses the trapezoid rule of step h on [t-r, t+r];
/// with h = 0 it uses the antiderivative when present, else adaptive
/// quadrature. At r = 0 the limit u0(t) + t u0'(t) + t u1(t) is returned.
double linear_propagator(const RadialData& data, double t, double r, double h = 0.0);

/// int_a^b (rho/2) F(u(s_k, |rho|)) d rho by a fresh trapezoid sum over the
/// lattice nodes between a and b (both must be multiples of h).
double window_integral_direct(const SolutionRun& run, int k, double a, double b);

/// Recomputes the prefix sums of level k from the stored field. march keeps
/// them current; call this after writing a field by hand.
void refresh_source_prefix(SolutionRun& run, int k);

/// Duhamel term Lu(t_i, r) from levels k < t_level, r of either sign.
/// Throws std::logic_error if a required level has not been computed.
double duhamel_apply(const SolutionRun& run, int t_level, double r);

/// Explicit causal march of u = v + Lu. Stops with BlewUp as soon as a level
/// has max |u| above the cap or a non-finite value.
SolutionRun march(const RadialData& data, const ModulusSpec& spec, const CharacteristicGrid& grid,
                  const MarchOptions& options = {});

/// First level time at which the cap was exceeded.
std::optional<double> detect_blowup(const SolutionRun& run);

struct LifespanRow {
  double epsilon = 0.0;
  RunStatus status = RunStatus::Failed;
  /// Detection time, or the horizon when the run completed.
  double time = 0.0;
};

/// One march per amplitude; each run uses the template profiles with their
/// epsilon replaced by the row's amplitude.
std::vector<LifespanRow> lifespan_sweep(const RadialData& data_template, const ModulusSpec& spec,
                                        const std::vector<double>& epsilons,
                                        const CharacteristicGrid& grid,
                                        const MarchOptions& options = {});

struct ConvergenceReport {
  std::vector<double> h;
  /// Max-norm error against the exact linear solution, or successive
  /// differences |u_h - u_{h/2}| when no reference exists.
  std::vector<double> errors;
  std::vector<double> orders;
  double order = 0.0;
  bool uses_reference = false;
  bool conclusive = false;
};

/// Refinement study at time `t_eval` on the nodes of the coarsest grid. Uses
/// the exact linear solution as reference when the source is disabled and the
/// data carry an antiderivative. Requires at least three steps, each half the
/// previous. A non-monotone error sequence is reported as inconclusive.
ConvergenceReport convergence_study(const RadialData& data, const ModulusSpec& spec,
                                    const std::vector<double>& h_list, double t_eval,
                                    const MarchOptions& options = {});

}  // namespace strauss
