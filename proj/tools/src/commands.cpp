#include "strausslab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "strauss/blowup.hpp"
#include "strauss/exponents.hpp"
#include "strauss/radial_solver.hpp"
#include "strauss/special_functions.hpp"
#include "strauss/weighted_norms.hpp"
#include "strausslab/output.hpp"

#ifndef STRAUSSLAB_VERSION
#define STRAUSSLAB_VERSION "0.0.0"
#endif

namespace strausslab {

using json = nlohmann::ordered_json;
using strauss::ModulusFamily;
using strauss::ModulusSpec;

std::map<std::string, double> parse_params(const std::vector<std::string>& tokens) {
  std::map<std::string, double> out;
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size()) {
      throw std::invalid_argument("malformed parameter '" + tok + "' (expected key=value)");
    }
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != val.size()) {
      throw std::invalid_argument("parameter '" + key + "' has non-numeric value '" + val + "'");
    }
    if (!out.emplace(key, v).second) {
      throw std::invalid_argument("parameter '" + key + "' given twice");
    }
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw std::invalid_argument("bad list entry '" + item + "' in '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

ModulusSpec build_modulus(const std::string& family,
                          const std::map<std::string, double>& params) {
  const auto fam = strauss::parse_family(family);
  if (!fam) throw std::invalid_argument("unknown family '" + family + "'");
  std::vector<std::string> allowed = {"gamma", "n"};
  switch (*fam) {
    case ModulusFamily::LogPower: allowed.insert(allowed.end(), {"cl", "tau0"}); break;
    case ModulusFamily::IteratedLogBlowup:
    case ModulusFamily::TripleLogGlobal: allowed.insert(allowed.end(), {"k", "tau0"}); break;
    case ModulusFamily::DoubleLogGlobal: allowed.push_back("tau0"); break;
    default: break;
  }
  for (const auto& [key, value] : params) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument("unknown modulus parameter '" + key + "' for family " + family);
    }
  }
  auto get = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  auto get_int = [&](const char* key, int fallback) {
    const double v = get(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e6) {
      throw std::invalid_argument(std::string("parameter '") + key + "' must be an integer");
    }
    return static_cast<int>(v);
  };
  const int n = get_int("n", 3);
  if (n < 2) throw std::invalid_argument("parameter 'n' must be at least 2");
  ModulusSpec spec;
  switch (*fam) {
    case ModulusFamily::PowerLaw: spec = ModulusSpec::power_law(get("gamma", 1.0), n); break;
    case ModulusFamily::LogOnePlus: spec = ModulusSpec::log_one_plus(get("gamma", 1.0), n); break;
    case ModulusFamily::LogPower:
      spec = ModulusSpec::log_power(get("gamma", 1.0 / strauss::strauss_p(n)), get("cl", 1.0), n);
      break;
    case ModulusFamily::IteratedLogBlowup:
      spec = ModulusSpec::iterated_log_blowup(get("gamma", 1.0), get_int("k", 2), n);
      break;
    case ModulusFamily::DoubleLogGlobal:
      spec = ModulusSpec::double_log_global(get("gamma", -1.0), n);
      break;
    case ModulusFamily::TripleLogGlobal:
      spec = ModulusSpec::triple_log_global(get("gamma", -1.0), get_int("k", 3), n);
      break;
  }
  if (params.count("tau0")) spec = spec.with_tau0(params.at("tau0"));
  strauss::validate(spec);
  return spec;
}

namespace {

json spec_json(const ModulusSpec& s) {
  json j;
  j["family"] = strauss::family_name(s.family);
  j["gamma"] = s.gamma;
  j["c_l"] = s.c_l;
  j["k"] = s.k;
  j["n"] = s.n;
  j["tau0"] = s.tau0;
  return j;
}

json report_json(const strauss::WeightReport& r) {
  json j;
  j["region"] = r.region;
  j["fitted_constant"] = r.fitted_constant;
  j["worst_point"] = {{"x", r.worst_point.x}, {"y", r.worst_point.y}, {"value", r.worst_point.value}};
  j["pass"] = r.pass;
  json d = json::object();
  for (const auto& [k, v] : r.diagnostics) d[k] = v;
  j["diagnostics"] = d;
  j["sample_count"] = r.samples.size();
  return j;
}

std::string samples_csv(const strauss::WeightReport& r, const std::string& x,
                        const std::string& y, const std::string& v) {
  CsvTable t({x, y, v});
  for (const auto& s : r.samples) t.add_row(std::vector<double>{s.x, s.y, s.value});
  return t.str();
}

std::string status_name(strauss::RunStatus s) { return strauss::run_status_name(s); }

struct Globals {
  std::string out_dir;
  int threads = 1;
  bool quiet = false;
  std::string config;
};

struct ModulusArgs {
  std::string family;
  std::vector<std::string> params;
  double gamma = 0.0;
  double cl = 0.0;
  double tau0 = 0.0;
  int k = 0;
};

void add_modulus_options(CLI::App* app, ModulusArgs& m) {
  app->add_option("--family", m.family, "Modulus family")
      ->required()
      ->check(CLI::IsMember(
          {"powerlaw", "logoneplus", "logpower", "iteratedlog", "doublelog", "triplelog"}));
  app->add_option("--params", m.params, "Family parameters as key=value (gamma, cl, k, tau0, n)");
  app->add_option("--gamma", m.gamma, "Family exponent gamma");
  app->add_option("--cl", m.cl, "Prefactor c_l (logpower)")->check(CLI::PositiveNumber);
  app->add_option("--k", m.k, "Iterated-log depth (iteratedlog, triplelog)");
  app->add_option("--tau0", m.tau0, "End of the near-zero regime")->check(CLI::PositiveNumber);
}

ModulusSpec resolve_modulus(const CLI::App* app, const ModulusArgs& m, int n) {
  auto p = parse_params(m.params);
  if (app->count("--gamma")) p["gamma"] = m.gamma;
  if (app->count("--cl")) p["cl"] = m.cl;
  if (app->count("--k")) p["k"] = m.k;
  if (app->count("--tau0")) p["tau0"] = m.tau0;
  if (n > 0) p["n"] = n;
  return build_modulus(m.family, p);
}

std::filesystem::path output_root(const Globals& g) {
  if (!g.out_dir.empty()) return g.out_dir;
  if (const char* env = std::getenv("STRAUSSLAB_OUT"); env && *env) return env;
  return "results";
}

struct Context {
  const Globals& globals;
  std::ostream& out;
};

int finish(const Context& ctx, ResultsDir& dir, const json& summary, int code) {
  dir.write_file("report.json", summary.dump(2) + "\n");
  dir.finish(code);
  if (!ctx.globals.quiet) {
    ctx.out << summary.dump(2) << "\n";
    ctx.out << "results: " << dir.path().string() << "\n";
  }
  return code;
}

// ---------------------------------------------------------------- exponents

struct ExponentsArgs {
  int n = 3;
};

int run_exponents(const Context& ctx, const ExponentsArgs& a) {
  json params = {{"n", a.n}};
  ResultsDir dir(output_root(ctx.globals), "exponents", params, STRAUSSLAB_VERSION);
  json summary;
  summary["n"] = a.n;
  const auto v = strauss::strauss_exponent(a.n);
  if (v.is_infinite()) {
    summary["p_strauss"] = "infinity";
    dir.set("status", "Completed");
    return finish(ctx, dir, summary, kExitOk);
  }
  const auto es = strauss::exponent_set(a.n);
  const auto rep = strauss::exponent_identity_report(a.n);
  const auto id = strauss::exponent_identity_residuals(a.n);
  summary["p_strauss"] = es.p_strauss;
  summary["p_conjugate"] = es.p_conjugate;
  summary["q"] = es.q;
  if (a.n == 3) summary["kappa"] = es.kappa;
  summary["residual"] = strauss::strauss_residual(a.n, es.p_strauss);
  summary["identity_holder_weight"] = id.holder_weight;
  summary["identity_psi_power"] = id.psi_power;
  summary["identities_pass"] = rep.pass;
  CsvTable t({"n", "p_strauss", "p_conjugate", "q", "residual", "identity_holder_weight",
              "identity_psi_power"});
  t.add_row(std::vector<double>{double(a.n), es.p_strauss, es.p_conjugate, es.q,
                                strauss::strauss_residual(a.n, es.p_strauss), id.holder_weight,
                                id.psi_power});
  dir.write_file("exponents.csv", t.str());
  dir.set("status", rep.pass ? "Completed" : "VerificationFailed");
  return finish(ctx, dir, summary, rep.pass ? kExitOk : kExitVerificationFailed);
}

// ---------------------------------------------------------------- mu check

struct MuArgs {
  ModulusArgs m;
  int n = 3;
  int grid_points = 1000;
  int decades = 40;
};

int run_mu_check(const Context& ctx, const CLI::App* app, const MuArgs& a) {
  const ModulusSpec spec = resolve_modulus(app, a.m, a.n);
  json params = {{"modulus", spec_json(spec)},
                 {"grid_points", a.grid_points},
                 {"decades", a.decades}};
  ResultsDir dir(output_root(ctx.globals), "mu", params, STRAUSSLAB_VERSION);

  const auto axioms = strauss::modulus_axioms_check(spec, a.grid_points);
  const auto symmetric_grid = [](double hi) {
    std::vector<double> g{0.0};
    for (double t : strauss::log_grid(hi, 14, 4)) {
      g.push_back(t);
      g.push_back(-t);
    }
    return g;
  };
  // Log-type closed forms only hold on (0, tau0]; the bridge beyond it is reported separately.
  const bool global_formula = strauss::is_global_formula(spec.family);
  const auto gconv =
      strauss::g_convexity_check(spec, a.n, symmetric_grid(global_formula ? 2.0 : spec.tau0));
  const auto verdict = strauss::c_str_classify(spec, a.n, a.decades);
  const auto special = strauss::special_mu_check(spec, strauss::special_mu_grid(spec));

  json summary;
  summary["modulus"] = spec_json(spec);
  summary["axioms_pass"] = axioms.pass;
  summary["axioms"] = report_json(axioms);
  summary["g_convex"] = gconv.pass;
  if (!global_formula) {
    summary["g_convex_continued"] =
        strauss::g_convexity_check(spec, a.n, symmetric_grid(2.0)).pass;
  }
  summary["c_str_class"] = strauss::cstr_class_name(verdict.c_str_class);
  summary["c_str_estimate"] = verdict.c_str_estimate;
  summary["c_str_tail_ratio"] = verdict.tail_ratio;
  summary["speical_mu_pass"] = special.pass;
  summary["special_mu"] = report_json(special);

  CsvTable cs({"tau", "kappa_bar"});
  Series s{"kappa_bar", {}, {}};
  for (const auto& p : verdict.samples) {
    cs.add_row(std::vector<double>{p.tau, p.value});
    s.x.push_back(p.tau);
    s.y.push_back(p.value);
  }
  dir.write_file("cstr_samples.csv", cs.str());
  CsvTable prof({"tau", "mu"});
  Series ms{"mu", {}, {}};
  for (double t : strauss::log_grid(std::min(spec.tau0, 1.0), 20, 5)) {
    const double v = strauss::mu_eval(spec, t);
    prof.add_row(std::vector<double>{t, v});
    ms.x.push_back(t);
    ms.y.push_back(v);
  }
  dir.write_file("mu_profile.csv", prof.str());
  dir.write_file("cstr.svg", svg_lines("mu(tau)(log 1/tau)^(1/p)", "tau", "kappa_bar", {s}, true,
                                       true));
  dir.write_file("mu.svg", svg_lines("modulus near zero", "tau", "mu", {ms}, true, true));
  const bool ok = axioms.pass && gconv.pass;
  dir.set("status", ok ? "Completed" : "VerificationFailed");
  return finish(ctx, dir, summary, ok ? kExitOk : kExitVerificationFailed);
}

// ---------------------------------------------------------------- lemmas

struct LemmaArgs {
  std::string which = "psi";
  int n = 3;
  double lambda0 = 1.0;
  double R = 1.0;
  double t_max = -1.0;
  double q = std::numeric_limits<double>::quiet_NaN();
  int quad_points = 64;
  int samples = 101;
};

int run_lemmas(const Context& ctx, const CLI::App* app, LemmaArgs a) {
  const bool psi = a.which == "psi";
  if (a.t_max < 0.0) a.t_max = psi ? 100.0 : 50.0;
  if (!app->count("--q")) a.q = strauss::q_parameter(a.n);
  json params = {{"which", a.which}, {"n", a.n}, {"R", a.R}, {"t_max", a.t_max}};
  if (!psi) {
    params["lambda0"] = a.lambda0;
    params["q"] = a.q;
    params["quad_points"] = a.quad_points;
  } else {
    params["samples"] = a.samples;
  }
  ResultsDir dir(output_root(ctx.globals), "lemmas", params, STRAUSSLAB_VERSION);
  json summary;
  summary["which"] = a.which;
  summary["n"] = a.n;
  bool ok = false;
  if (psi) {
    const auto rep = strauss::psi_ball_bracket(a.n, a.R, a.t_max, a.samples);
    summary["report"] = report_json(rep);
    ok = rep.pass;
    dir.write_file("psi_ratio.csv", samples_csv(rep, "t", "ball_integral", "ratio"));
    Series s{"ratio", {}, {}};
    for (const auto& p : rep.samples) {
      s.x.push_back(p.x);
      s.y.push_back(p.value);
    }
    dir.write_file("psi_ratio.svg",
                   svg_lines("ball integral / (R+t)^((n-1)/2)", "t", "ratio", {s}));
  } else {
    strauss::TestFunctionConfig cfg{a.n, a.lambda0, a.R, a.quad_points};
    strauss::validate(cfg);
    const auto rep = strauss::xi_eta_bounds_verify(cfg, a.q, a.t_max);
    summary["A0"] = rep.A0;
    summary["B0"] = rep.B0;
    summary["B1"] = rep.B1;
    summary["B2"] = rep.B2;
    summary["worst_ratio"] = rep.worst_ratio;
    summary["item_i"] = rep.item_i;
    summary["item_ii"] = rep.item_ii;
    summary["item_iii"] = rep.item_iii;
    summary["pass"] = rep.pass;
    summary["region"] = rep.region;
    ok = rep.pass;
    CsvTable t({"item", "t", "s_or_r", "ratio"});
    static const char* names[] = {"A0", "B0", "B1", "B2"};
    std::vector<Series> series = {{"A0", {}, {}}, {"B0", {}, {}}, {"B1", {}, {}}, {"B2", {}, {}}};
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
      const int it = rep.sample_item[i];
      const auto& s = rep.samples[i];
      t.add_row(std::vector<std::string>{names[it], format_real(s.x), format_real(s.y),
                                         format_real(s.value)});
      series[it].x.push_back(s.x);
      series[it].y.push_back(s.value);
    }
    dir.write_file("xi_eta_samples.csv", t.str());
    dir.write_file("xi_eta.svg",
                   svg_lines("normalized xi/eta samples", "t", "ratio", series, false, true));
  }
  dir.set("status", ok ? "Completed" : "VerificationFailed");
  return finish(ctx, dir, summary, ok ? kExitOk : kExitVerificationFailed);
}

// ---------------------------------------------------------------- sequences

struct SequenceArgs {
  int n = 3;
  int J = 30;
  double C0 = 1.0;
  double M0 = 1.0;
};

int run_sequences(const Context& ctx, const SequenceArgs& a) {
  strauss::IterationConstants c;
  c.C0 = a.C0;
  c.M0 = a.M0;
  json params = {{"n", a.n}, {"J", a.J}, {"C0", a.C0}, {"M0", a.M0}};
  ResultsDir dir(output_root(ctx.globals), "sequences", params, STRAUSSLAB_VERSION);
  const auto led = strauss::m_sequence(a.n, c, a.J);
  const double dev = strauss::closed_form_deviation(a.n, led.rows);
  const double p = strauss::strauss_p(a.n);
  CsvTable t({"j", "ell_2j", "a", "b", "sigma", "log_M", "a_closed", "b_closed", "sigma_closed",
              "log_M_over_pj"});
  Series s{"log M_j / p^j", {}, {}}, floor{"log C5", {}, {}};
  for (const auto& r : led.rows) {
    const auto cf = strauss::closed_forms(p, r.j);
    const double pj = std::pow(p, r.j);
    t.add_row(std::vector<double>{double(r.j), r.ell_2j, r.a, r.b, r.sigma, r.log_M, cf.a, cf.b,
                                  cf.sigma, r.log_M / pj});
    s.x.push_back(r.j);
    s.y.push_back(r.log_M / pj);
    floor.x.push_back(r.j);
    floor.y.push_back(led.log_C5);
  }
  dir.write_file("ledger.csv", t.str());
  dir.write_file("ledger.svg", svg_lines("iteration ledger", "j", "log M_j / p^j", {s, floor}));
  json summary;
  summary["n"] = a.n;
  summary["rows"] = led.rows.size();
  summary["closed_form_deviation"] = dev;
  summary["log_C4"] = led.log_C4;
  summary["log_C5"] = led.log_C5;
  summary["j1"] = led.j1;
  summary["worst_margin"] = led.worst_margin;
  summary["bound_holds"] = led.bound_holds;
  const bool ok = dev <= 1e-9 && led.bound_holds;
  dir.set("status", ok ? "Completed" : "VerificationFailed");
  return finish(ctx, dir, summary, ok ? kExitOk : kExitVerificationFailed);
}

// ---------------------------------------------------------------- onset

struct OnsetArgs {
  ModulusArgs m;
  int n = 3;
  double t_max = 1e8;
  double C6 = 1.0;
  double C7 = 1.0;
  double eps_exp = 0.01;
};

int run_onset(const Context& ctx, const CLI::App* app, const OnsetArgs& a) {
  const ModulusSpec spec = resolve_modulus(app, a.m, a.n);
  strauss::IterationConstants c;
  c.C6 = a.C6;
  c.C7 = a.C7;
  c.epsilon_exp = a.eps_exp;
  json params = {{"modulus", spec_json(spec)}, {"n", a.n},       {"t_max", a.t_max},
                 {"C6", a.C6},                 {"C7", a.C7},     {"eps_exp", a.eps_exp}};
  ResultsDir dir(output_root(ctx.globals), "onset", params, STRAUSSLAB_VERSION);
  const auto onset = strauss::divergence_onset(a.n, c, spec, a.t_max);
  const double p = strauss::strauss_p(a.n);
  const double expo = 0.5 * (a.n - 1) + 1.0 / p + a.eps_exp;
  const double t_start = std::pow(std::min(spec.tau0, std::exp(-1.0)), -1.0 / expo) / a.C6;
  CsvTable t({"t", "base"});
  Series s{"base", {}, {}};
  if (t_start < a.t_max) {
    for (int i = 0; i <= 200; ++i) {
      const double ti = t_start * (1.0 + 1e-9) * std::pow(a.t_max / t_start, i / 200.0);
      const double b = strauss::onset_base(a.n, c, spec, ti);
      t.add_row(std::vector<double>{ti, b});
      s.x.push_back(ti);
      s.y.push_back(b);
    }
  }
  dir.write_file("onset_base.csv", t.str());
  dir.write_file("onset.svg", svg_lines("divergence base", "t", "base", {s}, true, true));
  json summary;
  summary["modulus"] = spec_json(spec);
  summary["onset"] = onset ? json(*onset) : json(nullptr);
  dir.set("status", "Completed");
  return finish(ctx, dir, summary, kExitOk);
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  ModulusArgs m;
  double eps = 1.0;
  double h = 0.02;
  double horizon = 10.0;
  double cap = 1e6;
  std::string data = "bump";
};

strauss::RadialData make_data(const std::string& kind, double eps) {
  return kind == "pair" ? strauss::RadialData::bump_pair(eps)
                        : strauss::RadialData::default_bump(eps);
}

json solve_params(const ModulusSpec& spec, const SolveArgs& a) {
  return {{"modulus", spec_json(spec)}, {"data", a.data}, {"eps", a.eps},
          {"h", a.h},                   {"horizon", a.horizon}, {"cap", a.cap}};
}

int run_solve(const Context& ctx, const CLI::App* app, const SolveArgs& a) {
  const ModulusSpec spec = resolve_modulus(app, a.m, 0);
  const auto data = make_data(a.data, a.eps);
  ResultsDir dir(output_root(ctx.globals), "solve", solve_params(spec, a), STRAUSSLAB_VERSION);
  strauss::MarchOptions opt;
  opt.cap = a.cap;
  opt.threads = ctx.globals.threads;
  const auto grid = strauss::make_grid(a.h, a.horizon, data.support_radius);
  const auto run = strauss::march(data, spec, grid, opt);

  const int st = std::max(1, (run.levels_computed + 199) / 200);
  const int sr = std::max(1, (grid.r_nodes + 199) / 200);
  CsvTable field({"t", "r", "u"});
  std::vector<double> heat;
  int rows = 0, cols = 0;
  for (int i = 0; i < run.levels_computed; i += st) {
    ++rows;
    cols = 0;
    for (int j = 0; j < grid.r_nodes; j += sr) {
      ++cols;
      field.add_row(std::vector<double>{grid.t(i), grid.r(j), run.u(i, j)});
      heat.push_back(run.u(i, j));
    }
  }
  CsvTable levels({"t", "max_abs_u"});
  Series s{"max |u|", {}, {}};
  for (int i = 0; i < run.levels_computed; ++i) {
    double m = 0.0;
    for (int j = 0; j < grid.r_nodes; ++j) m = std::max(m, std::abs(run.u(i, j)));
    levels.add_row(std::vector<double>{grid.t(i), m});
    s.x.push_back(grid.t(i));
    s.y.push_back(m);
  }
  dir.write_file("field.csv", field.str());
  dir.write_file("levels.csv", levels.str());
  dir.write_file("field.svg", svg_heatmap("u(t, r)", heat, rows, cols, "r", "t"));
  dir.write_file("levels.svg", svg_lines("max |u| per level", "t", "max |u|", {s}, false, true));

  json summary;
  summary["status"] = status_name(run.status);
  summary["status_time"] = run.status_time;
  if (run.status == strauss::RunStatus::BlewUp) summary["T_detect"] = run.status_time;
  summary["levels_computed"] = run.levels_computed;
  summary["reason"] = run.reason;
  dir.set("status", status_name(run.status));
  if (run.status == strauss::RunStatus::BlewUp) dir.set("T_detect", run.status_time);
  const int code = run.status == strauss::RunStatus::Failed ? kExitError : kExitOk;
  return finish(ctx, dir, summary, code);
}

// ---------------------------------------------------------------- lifespan

struct LifespanArgs {
  ModulusArgs m;
  std::string eps_list = "2,3,5,8";
  double h = 0.01;
  double horizon = 5.0;
  double cap = 1e6;
  std::string data = "bump";
};

int run_lifespan(const Context& ctx, const CLI::App* app, const LifespanArgs& a) {
  const ModulusSpec spec = resolve_modulus(app, a.m, 0);
  const auto eps = parse_real_list(a.eps_list);
  for (double e : eps) {
    if (!(e > 0.0)) throw std::invalid_argument("--eps-list: amplitudes must be positive");
  }
  json params = {{"modulus", spec_json(spec)}, {"data", a.data}, {"eps_list", eps},
                 {"h", a.h}, {"horizon", a.horizon}, {"cap", a.cap}};
  ResultsDir dir(output_root(ctx.globals), "lifespan", params, STRAUSSLAB_VERSION);
  const auto data = make_data(a.data, 1.0);
  strauss::MarchOptions opt;
  opt.cap = a.cap;
  opt.threads = ctx.globals.threads;
  const auto grid = strauss::make_grid(a.h, a.horizon, data.support_radius);
  const auto rows = strauss::lifespan_sweep(data, spec, eps, grid, opt);
  CsvTable t({"epsilon", "status", "time"});
  Series s{"T_detect", {}, {}};
  json jr = json::array();
  bool failed = false;
  for (const auto& r : rows) {
    t.add_row(std::vector<std::string>{format_real(r.epsilon), status_name(r.status),
                                       format_real(r.time)});
    jr.push_back({{"epsilon", r.epsilon}, {"status", status_name(r.status)}, {"time", r.time}});
    if (r.status == strauss::RunStatus::BlewUp) {
      s.x.push_back(r.epsilon);
      s.y.push_back(r.time);
    }
    failed |= r.status == strauss::RunStatus::Failed;
  }
  dir.write_file("lifespan.csv", t.str());
  dir.write_file("lifespan.svg", svg_lines("detected lifespan", "epsilon", "T", {s}, true, true));
  json summary;
  summary["rows"] = jr;
  dir.set("status", failed ? "Failed" : "Completed");
  return finish(ctx, dir, summary, failed ? kExitError : kExitOk);
}

// ---------------------------------------------------------------- verify-global

struct GlobalArgs {
  ModulusArgs m;
  double eps = 0.01;
  double h = 0.0625;
  double horizon = 100.0;
  double cap = 1e6;
  std::string data = "bump";
};

int run_verify_global(const Context& ctx, const CLI::App* app, const GlobalArgs& a) {
  const ModulusSpec spec = resolve_modulus(app, a.m, 0);
  json params = {{"modulus", spec_json(spec)}, {"data", a.data}, {"eps", a.eps},
                 {"h", a.h}, {"horizon", a.horizon}, {"cap", a.cap}};
  ResultsDir dir(output_root(ctx.globals), "verify-global", params, STRAUSSLAB_VERSION);
  const auto special = strauss::special_mu_check(spec, strauss::special_mu_grid(spec));
  const auto data = make_data(a.data, a.eps);
  strauss::MarchOptions opt;
  opt.cap = a.cap;
  opt.threads = ctx.globals.threads;
  const auto run = strauss::march(data, spec, strauss::make_grid(a.h, a.horizon,
                                                                 data.support_radius), opt);
  json summary;
  summary["modulus"] = spec_json(spec);
  summary["special_mu"] = report_json(special);
  summary["run_status"] = status_name(run.status);
  summary["run_status_time"] = run.status_time;
  dir.write_file("special_mu_samples.csv", samples_csv(special, "tau", "unused", "value"));
  bool ok = special.pass && run.status == strauss::RunStatus::Completed;
  if (run.status != strauss::RunStatus::BlewUp) {
    const auto decay = strauss::decay_profile_check(run);
    summary["decay_profile"] = report_json(decay);
    summary["x_kappa_norm"] = strauss::x_kappa_norm(run);
    ok = ok && decay.pass;
    dir.write_file("decay_samples.csv", samples_csv(decay, "t", "unused", "ratio"));
    Series s{"weighted sup / data norms", {}, {}};
    for (const auto& p : decay.samples) {
      s.x.push_back(p.x);
      s.y.push_back(p.value);
    }
    dir.write_file("decay.svg", svg_lines("decay profile", "t", "ratio", {s}));
  }
  summary["pass"] = ok;
  dir.set("status", ok ? "Completed" : "VerificationFailed");
  return finish(ctx, dir, summary, ok ? kExitOk : kExitVerificationFailed);
}

// ---------------------------------------------------------------- key-integral

struct KeyArgs {
  ModulusArgs m;
  std::string xi_list = "10,100,1000,10000";
  double eps0 = 0.5;
  double max_range = 50.0;
};

int run_key_integral(const Context& ctx, const CLI::App* app, const KeyArgs& a) {
  const ModulusSpec spec = resolve_modulus(app, a.m, 0);
  const auto xis = parse_real_list(a.xi_list);
  json params = {{"modulus", spec_json(spec)}, {"xi_list", xis}, {"eps0", a.eps0},
                 {"max_range", a.max_range}};
  ResultsDir dir(output_root(ctx.globals), "key-integral", params, STRAUSSLAB_VERSION);
  const auto rep = strauss::key_integral_sweep(xis, a.eps0, spec, a.max_range);
  CsvTable t({"xi", "I", "bound", "ratio"});
  Series s{"ratio", {}, {}};
  for (double xi : xis) {
    const auto k = strauss::key_integral_I(xi, a.eps0, spec);
    t.add_row(std::vector<double>{xi, k.value, k.bound, k.ratio});
    if (xi != 0.0) {
      s.x.push_back(std::abs(xi));
      s.y.push_back(k.ratio);
    }
  }
  dir.write_file("key_integral.csv", t.str());
  dir.write_file("key_integral.svg", svg_lines("I(xi) / bound", "|xi|", "ratio", {s}, true));
  json summary;
  summary["modulus"] = spec_json(spec);
  summary["report"] = report_json(rep);
  dir.set("status", rep.pass ? "Completed" : "VerificationFailed");
  return finish(ctx, dir, summary, rep.pass ? kExitOk : kExitVerificationFailed);
}

// ---------------------------------------------------------------- config files

bool takes_value(const CLI::Option* opt) { return opt && opt->get_expected_min() > 0; }

std::string json_scalar(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_real(v.get<double>());
  throw std::invalid_argument("config key '" + key + "' has an unsupported value");
}

std::vector<std::string> expand_config(CLI::App& root, const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw std::invalid_argument("--config requires a path");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  // Locate the innermost subcommand named on the command line.
  CLI::App* leaf = &root;
  std::size_t insert_at = 0;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const std::string& tok = rest[i];
    if (tok.rfind("-", 0) == 0) {
      if (tok.find('=') == std::string::npos && takes_value(leaf->get_option_no_throw(tok))) ++i;
      continue;
    }
    if (CLI::App* sub = leaf->get_subcommand_no_throw(tok)) {
      leaf = sub;
      insert_at = i + 1;
    }
  }

  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config file '" + path + "'");
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");

  std::vector<std::string> leaf_tokens, root_tokens;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    CLI::App* owner = nullptr;
    if (leaf != &root && leaf->get_option_no_throw(flag)) {
      owner = leaf;
    } else if (key != "config" && root.get_option_no_throw(flag)) {
      owner = &root;
    }
    if (!owner) throw std::invalid_argument("unknown config key '" + key + "'");
    const bool given = std::any_of(rest.begin(), rest.end(), [&](const std::string& t) {
      return t == flag || t.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    auto& out = owner == &root ? root_tokens : leaf_tokens;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + json_scalar(v, key);
      out.push_back(flag);
      out.push_back(joined);
    } else if (value.is_object()) {
      out.push_back(flag);
      for (const auto& [k, v] : value.items()) out.push_back(k + "=" + json_scalar(v, key));
    } else {
      out.push_back(flag);
      out.push_back(json_scalar(value, key));
    }
  }
  rest.insert(rest.begin() + static_cast<long>(insert_at), leaf_tokens.begin(), leaf_tokens.end());
  rest.insert(rest.begin(), root_tokens.begin(), root_tokens.end());
  return rest;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical lab for u_tt - Laplace u = |u|^p mu(|u|) at the critical power",
               "strausslab"};
  app.set_version_flag("--version", STRAUSSLAB_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out-dir", g.out_dir, "Results root (default $STRAUSSLAB_OUT or ./results)");
  app.add_option("--threads", g.threads, "Worker threads for the solver")
      ->check(CLI::Range(1, 256));
  app.add_flag("--quiet", g.quiet, "Suppress the summary on stdout");
  app.add_option("--config", g.config, "JSON file of option values for the subcommand");

  ExponentsArgs ea;
  auto* exponents = app.add_subcommand("exponents", "Critical exponent and derived exponents");
  exponents->add_option("--n", ea.n, "Space dimension")->check(CLI::Range(1, 4096));

  MuArgs ma;
  auto* mu = app.add_subcommand("mu", "Modulus-of-continuity tools");
  mu->require_subcommand(1);
  auto* mu_check = mu->add_subcommand("check", "Axioms, g convexity and threshold class");
  add_modulus_options(mu_check, ma.m);
  mu_check->add_option("--n", ma.n, "Dimension of the critical exponent")
      ->check(CLI::Range(2, 64));
  mu_check->add_option("--grid-points", ma.grid_points, "Axiom grid size")
      ->check(CLI::Range(10, 1000000));
  mu_check->add_option("--decades", ma.decades, "Decades sampled by the classifier")
      ->check(CLI::Range(12, 300));

  LemmaArgs la;
  auto* lemmas = app.add_subcommand("lemmas", "Test-function bounds");
  lemmas->require_subcommand(1);
  auto* lemmas_verify = lemmas->add_subcommand("verify", "Fit the test-function bounds");
  lemmas_verify->add_option("--which", la.which, "psi or xi-eta")
      ->check(CLI::IsMember({"psi", "xi-eta"}));
  lemmas_verify->add_option("--n", la.n, "Space dimension (at least 2)")
      ->check(CLI::Range(2, 64));
  lemmas_verify->add_option("--lambda0", la.lambda0, "Upper lambda limit")
      ->check(CLI::PositiveNumber);
  lemmas_verify->add_option("--R", la.R, "Data support radius")->check(CLI::PositiveNumber);
  lemmas_verify->add_option("--t-max", la.t_max, "Largest sampled time")
      ->check(CLI::PositiveNumber);
  lemmas_verify->add_option("--q", la.q, "Exponent q (default (n-1)/2 - 1/p)");
  lemmas_verify->add_option("--quad-points", la.quad_points, "Lambda panels")
      ->check(CLI::Range(16, 100000));
  lemmas_verify->add_option("--samples", la.samples, "Time samples for psi")
      ->check(CLI::Range(2, 100000));

  SequenceArgs sa;
  auto* sequences = app.add_subcommand("sequences", "Iteration exponent ledger");
  sequences->add_option("--n", sa.n, "Space dimension")->check(CLI::Range(2, 64));
  sequences->add_option("--J", sa.J, "Last row index")->check(CLI::Range(0, 200));
  sequences->add_option("--C0", sa.C0, "Iteration constant C0")->check(CLI::PositiveNumber);
  sequences->add_option("--M0", sa.M0, "Initial lower-bound constant")
      ->check(CLI::PositiveNumber);

  OnsetArgs oa;
  auto* onset = app.add_subcommand("onset", "Predicted divergence onset time");
  add_modulus_options(onset, oa.m);
  onset->add_option("--n", oa.n, "Space dimension")->check(CLI::Range(2, 64));
  onset->add_option("--t-max", oa.t_max, "Scan limit")->check(CLI::PositiveNumber);
  onset->add_option("--C6", oa.C6, "Time scale constant")->check(CLI::PositiveNumber);
  onset->add_option("--C7", oa.C7, "Base prefactor")->check(CLI::PositiveNumber);
  onset->add_option("--eps-exp", oa.eps_exp, "Exponent loss")->check(CLI::Range(1e-12, 0.1));

  SolveArgs so;
  auto* solve = app.add_subcommand("solve", "March the radial problem in three dimensions");
  add_modulus_options(solve, so.m);
  solve->add_option("--eps", so.eps, "Data amplitude")->check(CLI::NonNegativeNumber);
  solve->set_help_flag("--help", "Print this help message and exit");
  solve->add_option("--h", so.h, "Lattice step")->check(CLI::PositiveNumber);
  solve->add_option("--horizon", so.horizon, "Final time")->check(CLI::NonNegativeNumber);
  solve->add_option("--cap", so.cap, "Blow-up cap on max |u|")->check(CLI::PositiveNumber);
  solve->add_option("--data", so.data, "bump or pair")->check(CLI::IsMember({"bump", "pair"}));

  LifespanArgs lsa;
  auto* lifespan = app.add_subcommand("lifespan", "Blow-up time per data amplitude");
  add_modulus_options(lifespan, lsa.m);
  lifespan->add_option("--eps-list", lsa.eps_list, "Comma-separated amplitudes");
  lifespan->set_help_flag("--help", "Print this help message and exit");
  lifespan->add_option("--h", lsa.h, "Lattice step")->check(CLI::PositiveNumber);
  lifespan->add_option("--horizon", lsa.horizon, "Final time")->check(CLI::NonNegativeNumber);
  lifespan->add_option("--cap", lsa.cap, "Blow-up cap")->check(CLI::PositiveNumber);
  lifespan->add_option("--data", lsa.data, "bump or pair")->check(CLI::IsMember({"bump", "pair"}));

  GlobalArgs ga;
  auto* verify_global = app.add_subcommand("verify-global", "Small-data run and decay checks");
  add_modulus_options(verify_global, ga.m);
  verify_global->add_option("--eps", ga.eps, "Data amplitude")->check(CLI::NonNegativeNumber);
  verify_global->set_help_flag("--help", "Print this help message and exit");
  verify_global->add_option("--h", ga.h, "Lattice step")->check(CLI::PositiveNumber);
  verify_global->add_option("--horizon", ga.horizon, "Final time")->check(CLI::PositiveNumber);
  verify_global->add_option("--cap", ga.cap, "Blow-up cap")->check(CLI::PositiveNumber);
  verify_global->add_option("--data", ga.data, "bump or pair")
      ->check(CLI::IsMember({"bump", "pair"}));

  KeyArgs ka;
  auto* key = app.add_subcommand("key-integral", "Key integral ratio sweep");
  add_modulus_options(key, ka.m);
  key->add_option("--xi-list", ka.xi_list, "Comma-separated xi values");
  key->add_option("--eps0", ka.eps0, "Small parameter in (0, 1)")
      ->check(CLI::Range(1e-300, 1.0 - 1e-15));
  key->add_option("--max-range", ka.max_range, "Allowed max/min of the ratio")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> argv = expand_config(app, args);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << STRAUSSLAB_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitError;
  }

  const Context ctx{g, out};
  try {
    if (exponents->parsed()) return run_exponents(ctx, ea);
    if (mu_check->parsed()) return run_mu_check(ctx, mu_check, ma);
    if (lemmas_verify->parsed()) return run_lemmas(ctx, lemmas_verify, la);
    if (sequences->parsed()) return run_sequences(ctx, sa);
    if (onset->parsed()) return run_onset(ctx, onset, oa);
    if (solve->parsed()) return run_solve(ctx, solve, so);
    if (lifespan->parsed()) return run_lifespan(ctx, lifespan, lsa);
    if (verify_global->parsed()) return run_verify_global(ctx, verify_global, ga);
    if (key->parsed()) return run_key_integral(ctx, key, ka);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << "usage error: no command given\n";
  return kExitError;
}

}  // namespace strausslab
