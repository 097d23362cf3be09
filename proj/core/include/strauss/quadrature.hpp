#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace strauss::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes by Newton iteration on P_n. Cached.
const GaussRule& gauss_legendre(std::size_t n);

using Integrand = std::function<double(double)>;

/// Composite Gauss-Legendre over the panel breakpoints `edges`.
double composite(const Integrand& f, std::span<const double> edges,
                 std::size_t points_per_panel = 8);

/// Breakpoints a + (b-a)(i/N)^grade, i = 0..N; grade > 1 clusters panels at a.
std::vector<double> graded_edges(double a, double b, std::size_t panels, double grade);

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Stops when the
/// summed error estimate is below max(abs_tol, rel_tol*|I|) or the interval
/// budget is exhausted (converged = false).
AdaptiveResult adaptive(const Integrand& f, double a, double b, double rel_tol = 1e-10,
                        double abs_tol = 0.0, std::size_t max_intervals = 2000);

/// adaptive() over consecutive pieces of `breakpoints` (sorted), summing results.
AdaptiveResult adaptive_split(const Integrand& f, std::span<const double> breakpoints,
                              double rel_tol = 1e-10, double abs_tol = 0.0,
                              std::size_t max_intervals = 2000);

/// Composite trapezoid for samples on a uniform grid of spacing h.
double trapezoid(std::span<const double> values, double h);

}  // namespace strauss::quad
