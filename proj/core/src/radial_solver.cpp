#include "strauss/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "strauss/exponents.hpp"
#include "strauss/quadrature.hpp"

namespace strauss {

namespace {

double cubed_bump(double r) {
  const double a = std::abs(r);
  if (a >= 1.0) return 0.0;
  const double w = 1.0 - a * a;
  return w * w * w;
}

double cubed_bump_slope(double r) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double w = 1.0 - r * r;
  return -6.0 * r * w * w;
}

// Antiderivative of (rho/2)(1 - rho^2)^3, vanishing outside the unit ball.
double cubed_bump_moment(double rho) {
  if (std::abs(rho) >= 1.0) return 0.0;
  const double w = 1.0 - rho * rho;
  return -(w * w * w * w) / 16.0;
}

double zero_profile(double) { return 0.0; }

const double kP3 = strauss_p(3);

double level_source(const SolutionRun& run, int k, int m) {
  if (m < 0) m = -m;
  if (m >= run.grid.r_nodes) return 0.0;
  return 0.5 * run.grid.r(m) * nonlinearity(run.spec, run.u(k, m));
}

double node_u(const SolutionRun& run, int k, int m) {
  if (m < 0) m = -m;
  if (m >= run.grid.r_nodes) return 0.0;
  return run.u(k, m);
}

// int_0^x (rho/2) F(u(s_k, rho)) d rho for arbitrary x, piecewise-linear H.
double prefix_at(const SolutionRun& run, int k, double x) {
  x = std::abs(x);
  const double h = run.grid.h;
  const double pos = x / h;
  int m = static_cast<int>(std::floor(pos));
  if (m >= run.grid.r_nodes - 1) return run.prefix(k, run.grid.r_nodes - 1);
  const double d = x - m * h;
  if (d <= 1e-12 * h) return run.prefix(k, m);
  const double h0 = level_source(run, k, m);
  const double h1 = level_source(run, k, m + 1);
  return run.prefix(k, m) + h0 * d + (h1 - h0) * d * d / (2.0 * h);
}

void fill_prefix(SolutionRun& run, int k) {
  const int J = run.grid.r_nodes;
  double* P = run.source_prefix.data() + static_cast<std::size_t>(k) * J;
  P[0] = 0.0;
  if (!run.options.source_enabled) {
    std::fill(P, P + J, 0.0);
    return;
  }
  double prev = level_source(run, k, 0);
  for (int m = 1; m < J; ++m) {
    const double cur = level_source(run, k, m);
    P[m] = P[m - 1] + 0.5 * run.grid.h * (prev + cur);
    prev = cur;
  }
}

// Lu at lattice node (i, j), using the aligned prefix sums.
double duhamel_node(const SolutionRun& run, int i, int j) {
  const double h = run.grid.h;
  const double t = run.grid.t(i);
  double sum = 0.0;
  if (j == 0) {
    // Shrinking-window limit: int_0^t (t-s) F(u(s, t-s)) ds.
    for (int k = 0; k < i; ++k) {
      const double w = (k == 0) ? 0.5 : 1.0;
      sum += w * (t - run.grid.t(k)) * nonlinearity(run.spec, node_u(run, k, i - k));
    }
    return sum * h;
  }
  for (int k = 0; k < i; ++k) {
    const double w = (k == 0) ? 0.5 : 1.0;
    const int hi = std::min(i - k + j, run.grid.r_nodes - 1);
    const int lo = std::min(std::abs(i - k - j), run.grid.r_nodes - 1);
    sum += w * (run.prefix(k, hi) - run.prefix(k, lo));
  }
  return sum * h / run.grid.r(j);
}

template <class F>
void parallel_for(int begin, int end, int threads, F&& f) {
  if (threads <= 1 || end - begin < 64) {
    for (int j = begin; j < end; ++j) f(j);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (end - begin + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const int a = begin + w * chunk;
    const int b = std::min(end, a + chunk);
    if (a >= b) break;
    pool.emplace_back([&, a, b] {
      for (int j = a; j < b; ++j) f(j);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

RadialData RadialData::default_bump(double epsilon) {
  RadialData d;
  d.u0 = cubed_bump;
  d.du0 = cubed_bump_slope;
  d.u1 = zero_profile;
  d.u1_antiderivative = zero_profile;
  d.support_radius = 1.0;
  d.epsilon = epsilon;
  return d;
}

RadialData RadialData::bump_pair(double epsilon) {
  RadialData d = default_bump(epsilon);
  d.u1 = cubed_bump;
  d.u1_antiderivative = cubed_bump_moment;
  return d;
}

RadialData RadialData::zero() {
  RadialData d = default_bump(0.0);
  d.u0 = zero_profile;
  d.du0 = zero_profile;
  return d;
}

double RadialData::initial_value(double r) const { return epsilon * u0(std::abs(r)); }

double RadialData::initial_slope(double r) const {
  if (du0) {
    const double s = du0(std::abs(r));
    return epsilon * (r < 0.0 ? -s : s);
  }
  const double step = 1e-6 * std::max(1.0, std::abs(r));
  return epsilon * (u0(std::abs(r + step)) - u0(std::abs(r - step))) / (2.0 * step);
}

double RadialData::initial_velocity(double r) const { return epsilon * u1(std::abs(r)); }

void validate(const RadialData& d) {
  if (!d.u0 || !d.u1) throw std::invalid_argument("RadialData: u0 and u1 are required");
  if (!(d.support_radius > 0.0)) {
    throw std::invalid_argument("RadialData: support_radius must be positive");
  }
  if (!(d.epsilon >= 0.0)) throw std::invalid_argument("RadialData: epsilon must be >= 0");
  for (int k = 1; k <= 8; ++k) {
    const double r = d.support_radius * (1.0 + 0.25 * k);
    if (d.u0(r) != 0.0 || d.u1(r) != 0.0) {
      throw std::invalid_argument("RadialData: profile does not vanish beyond the support radius");
    }
  }
  if (d.du0) {
    if (std::abs(d.du0(0.0)) > 1e-8) throw std::invalid_argument("RadialData: u0'(0) must vanish");
  } else {
    const double delta = 1e-6 * d.support_radius;
    const double slope0 = (d.u0(delta) - d.u0(0.0)) / delta;
    const double scale = std::max(1.0, std::abs(d.u0(0.0))) / d.support_radius;
    if (std::abs(slope0) > 1e-3 * scale) {
      throw std::invalid_argument("RadialData: u0'(0) must vanish");
    }
  }
}

CharacteristicGrid make_grid(double h, double horizon, double support_radius) {
  if (!(h > 0.0)) throw std::invalid_argument("make_grid: h must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("make_grid: horizon must be >= 0");
  CharacteristicGrid g;
  g.h = h;
  g.t_levels = static_cast<int>(std::llround(horizon / h)) + 1;
  g.r_nodes = static_cast<int>(std::ceil((support_radius + horizon) / h)) + 2;
  return g;
}

std::string run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "Completed";
    case RunStatus::BlewUp: return "BlewUp";
    case RunStatus::Failed: return "Failed";
  }
  return "?";
}

double SolutionRun::prefix(int k, int m) const {
  return source_prefix[static_cast<std::size_t>(k) * grid.r_nodes + m];
}

double SolutionRun::value_at(int i, double r) const {
  r = std::abs(r);
  const double pos = r / grid.h;
  const int m = static_cast<int>(std::floor(pos));
  if (m >= grid.r_nodes - 1) return 0.0;
  const double f = pos - m;
  return (1.0 - f) * u(i, m) + f * u(i, m + 1);
}

double nonlinearity(const ModulusSpec& spec, double u) {
  const double a = std::abs(u);
  if (a == 0.0) return 0.0;
  return std::pow(a, kP3) * mu_eval(spec, a);
}

double linear_propagator(const RadialData& d, double t, double r, double h) {
  if (t < 0.0) throw std::domain_error("linear_propagator: t must be >= 0");
  if (std::abs(r) <= 1e-14 * std::max(1.0, t)) {
    return d.initial_value(t) + t * d.initial_slope(t) + t * d.initial_velocity(t);
  }
  const double shell =
      ((t + r) * d.initial_value(t + r) - (t - r) * d.initial_value(t - r)) / (2.0 * r);
  const double a = t - r;
  const double b = t + r;
  double moment;
  if (h > 0.0) {
    const int n = std::max(1, static_cast<int>(std::llround(std::abs(b - a) / h)));
    const double step = (b - a) / n;
    double s = 0.0;
    for (int m = 0; m <= n; ++m) {
      const double rho = a + m * step;
      const double w = (m == 0 || m == n) ? 0.5 : 1.0;
      s += w * 0.5 * rho * d.initial_velocity(rho);
    }
    moment = s * step;
  } else if (d.u1_antiderivative) {
    moment = d.epsilon * (d.u1_antiderivative(std::abs(b)) - d.u1_antiderivative(std::abs(a)));
  } else {
    const auto f = [&](double rho) { return 0.5 * rho * d.initial_velocity(rho); };
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double bp[] = {lo, std::clamp(-d.support_radius, lo, hi),
                         std::clamp(0.0, lo, hi), std::clamp(d.support_radius, lo, hi), hi};
    moment = quad::adaptive_split(f, bp, 1e-13, 1e-300).value * (b >= a ? 1.0 : -1.0);
  }
  return shell + moment / r;
}

double window_integral_direct(const SolutionRun& run, int k, double a, double b) {
  const double h = run.grid.h;
  const long ma = std::llround(a / h);
  const long mb = std::llround(b / h);
  if (std::abs(a - ma * h) > 1e-9 * h || std::abs(b - mb * h) > 1e-9 * h) {
    throw std::invalid_argument("window_integral_direct: endpoints must be lattice points");
  }
  if (ma == mb) return 0.0;
  const long lo = std::min(ma, mb);
  const long hi = std::max(ma, mb);
  double s = 0.0;
  for (long m = lo; m <= hi; ++m) {
    const double w = (m == lo || m == hi) ? 0.5 : 1.0;
    // H is odd in rho: (rho/2) F(u(s, |rho|)).
    const double rho = m * h;
    s += w * 0.5 * rho * nonlinearity(run.spec, node_u(run, k, static_cast<int>(m)));
  }
  return (mb > ma ? 1.0 : -1.0) * s * h;
}

void refresh_source_prefix(SolutionRun& run, int k) {
  if (k < 0 || k >= run.grid.t_levels) throw std::out_of_range("refresh_source_prefix: bad level");
  run.source_prefix.resize(run.field.size(), 0.0);
  fill_prefix(run, k);
}

double duhamel_apply(const SolutionRun& run, int t_level, double r) {
  if (t_level < 0 || t_level >= run.grid.t_levels) {
    throw std::out_of_range("duhamel_apply: level outside the grid");
  }
  if (run.levels_computed < t_level) {
    throw std::logic_error("duhamel_apply: level " + std::to_string(t_level - 1) +
                           " has not been computed");
  }
  if (!run.options.source_enabled) return 0.0;
  const double h = run.grid.h;
  const double t = run.grid.t(t_level);
  if (std::abs(r) <= 1e-14 * std::max(1.0, t)) return duhamel_node(run, t_level, 0);
  const double pos = std::abs(r) / h;
  const long j = std::llround(pos);
  if (std::abs(pos - j) < 1e-12 && j < run.grid.r_nodes) {
    return duhamel_node(run, t_level, static_cast<int>(j));
  }
  double sum = 0.0;
  for (int k = 0; k < t_level; ++k) {
    const double w = (k == 0) ? 0.5 : 1.0;
    const double c = t - run.grid.t(k);
    sum += w * (prefix_at(run, k, c + r) - prefix_at(run, k, c - r));
  }
  return sum * h / r;
}

SolutionRun march(const RadialData& data, const ModulusSpec& spec, const CharacteristicGrid& grid,
                  const MarchOptions& options) {
  validate(data);
  validate(spec);
  if (grid.t_levels < 1 || grid.r_nodes < 2 || !(grid.h > 0.0)) {
    throw std::invalid_argument("march: empty grid");
  }
  if (!(options.cap > 0.0)) throw std::invalid_argument("march: cap must be positive");
  SolutionRun run;
  run.grid = grid;
  run.data = data;
  run.spec = spec;
  run.options = options;
  const std::size_t cells = static_cast<std::size_t>(grid.t_levels) * grid.r_nodes;
  run.field.assign(cells, 0.0);
  run.source_prefix.assign(cells, 0.0);

  try {
    for (int j = 0; j < grid.r_nodes; ++j) run.u(0, j) = data.initial_value(grid.r(j));
    fill_prefix(run, 0);
    run.levels_computed = 1;
    for (int i = 1; i < grid.t_levels; ++i) {
      const double t = grid.t(i);
      parallel_for(0, grid.r_nodes, options.threads, [&](int j) {
        const double v = linear_propagator(data, t, grid.r(j), grid.h);
        run.u(i, j) = options.source_enabled ? v + duhamel_node(run, i, j) : v;
      });
      run.levels_computed = i + 1;
      double peak = 0.0;
      bool finite = true;
      for (int j = 0; j < grid.r_nodes; ++j) {
        const double a = std::abs(run.u(i, j));
        finite &= std::isfinite(a);
        peak = std::max(peak, a);
      }
      if (!finite || peak > options.cap) {
        run.status = RunStatus::BlewUp;
        run.status_time = t;
        run.reason = finite ? "cap exceeded" : "non-finite value";
        return run;
      }
      fill_prefix(run, i);
    }
    run.status = RunStatus::Completed;
    run.status_time = grid.horizon();
  } catch (const std::exception& e) {
    run.status = RunStatus::Failed;
    run.reason = e.what();
    run.status_time = grid.t(std::max(0, run.levels_computed - 1));
  }
  return run;
}

std::optional<double> detect_blowup(const SolutionRun& run) {
  if (run.status == RunStatus::BlewUp) return run.status_time;
  return std::nullopt;
}

std::vector<LifespanRow> lifespan_sweep(const RadialData& data_template, const ModulusSpec& spec,
                                        const std::vector<double>& epsilons,
                                        const CharacteristicGrid& grid,
                                        const MarchOptions& options) {
  std::vector<LifespanRow> rows;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw std::invalid_argument("lifespan_sweep: epsilons must be positive");
    RadialData d = data_template;
    d.epsilon = eps;
    const SolutionRun run = march(d, spec, grid, options);
    rows.push_back({eps, run.status, run.status_time});
  }
  return rows;
}

ConvergenceReport convergence_study(const RadialData& data, const ModulusSpec& spec,
                                    const std::vector<double>& h_list, double t_eval,
                                    const MarchOptions& options) {
  if (h_list.size() < 3) throw std::invalid_argument("convergence_study: need >= 3 grid steps");
  for (std::size_t k = 1; k < h_list.size(); ++k) {
    if (std::abs(h_list[k] * 2.0 - h_list[k - 1]) > 1e-12 * h_list[k - 1]) {
      throw std::invalid_argument("convergence_study: each step must halve the previous");
    }
  }
  ConvergenceReport rep;
  rep.h = h_list;
  rep.uses_reference = !options.source_enabled && static_cast<bool>(data.u1_antiderivative);

  const CharacteristicGrid coarse = make_grid(h_list.front(), t_eval, data.support_radius);
  std::vector<std::vector<double>> samples;
  for (double h : h_list) {
    const CharacteristicGrid g = make_grid(h, t_eval, data.support_radius);
    const SolutionRun run = march(data, spec, g, options);
    if (run.status != RunStatus::Completed) return rep;
    const int stride = static_cast<int>(std::llround(h_list.front() / h));
    std::vector<double> row;
    for (int j = 0; j < coarse.r_nodes; ++j) {
      const int jj = j * stride;
      row.push_back(jj < g.r_nodes ? run.u(g.t_levels - 1, jj) : 0.0);
    }
    samples.push_back(std::move(row));
  }

  auto max_diff = [](const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
  };
  if (rep.uses_reference) {
    std::vector<double> exact;
    for (int j = 0; j < coarse.r_nodes; ++j) {
      exact.push_back(linear_propagator(data, t_eval, coarse.r(j), 0.0));
    }
    for (const auto& s : samples) rep.errors.push_back(max_diff(s, exact));
  } else {
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
      rep.errors.push_back(max_diff(samples[k], samples[k + 1]));
    }
  }

  bool monotone = true;
  for (std::size_t k = 0; k + 1 < rep.errors.size(); ++k) {
    const double e0 = rep.errors[k];
    const double e1 = rep.errors[k + 1];
    monotone &= (e1 < e0) && e1 > 0.0 && std::isfinite(e0);
    rep.orders.push_back((e0 > 0.0 && e1 > 0.0) ? std::log2(e0 / e1) : 0.0);
  }
  rep.order = rep.orders.empty() ? 0.0 : rep.orders.back();
  rep.conclusive = monotone && !rep.orders.empty();
  return rep;
}

}  // namespace strauss
