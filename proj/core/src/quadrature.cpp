#include "strauss/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace strauss::quad {

namespace {

GaussRule build_gauss_legendre(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = (n == 1) ? x : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// QUADPACK qk15 abscissae/weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double gauss = fc * kWg[3];
  double kron = fc * kWgk[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

double composite(const Integrand& f, std::span<const double> edges,
                 std::size_t points_per_panel) {
  const GaussRule& rule = gauss_legendre(points_per_panel);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double panel = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      panel += rule.weights[k] * f(c + h * rule.nodes[k]);
    }
    total += h * panel;
  }
  return total;
}

std::vector<double> graded_edges(double a, double b, std::size_t panels, double grade) {
  std::vector<double> e(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    e[i] = a + (b - a) * std::pow(static_cast<double>(i) / panels, grade);
  }
  e.back() = b;
  return e;
}

AdaptiveResult adaptive(const Integrand& f, double a, double b, double rel_tol,
                        double abs_tol, std::size_t max_intervals) {
  AdaptiveResult res;
  if (a == b) return res;
  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, a, b);
  res.evaluations = 15;
  double value = first.value;
  double error = first.error;
  heap.push(first);
  while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (heap.size() >= max_intervals) {
      res.converged = false;
      break;
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      res.converged = false;
      break;
    }
    Segment left = kronrod15(f, worst.a, mid);
    Segment right = kronrod15(f, mid, worst.b);
    res.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the incremental updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  res.value = value;
  res.error_estimate = error;
  return res;
}

AdaptiveResult adaptive_split(const Integrand& f, std::span<const double> breakpoints,
                              double rel_tol, double abs_tol, std::size_t max_intervals) {
  AdaptiveResult total;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] <= breakpoints[i]) continue;
    const AdaptiveResult part =
        adaptive(f, breakpoints[i], breakpoints[i + 1], rel_tol, abs_tol, max_intervals);
    total.value += part.value;
    total.error_estimate += part.error_estimate;
    total.evaluations += part.evaluations;
    total.converged = total.converged && part.converged;
  }
  return total;
}

double trapezoid(std::span<const double> values, double h) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * h;
}

}  // namespace strauss::quad
