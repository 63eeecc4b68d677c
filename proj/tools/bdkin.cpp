// Command-line front end: model setup, equilibrium queries, constant
// certification, simulation runs, and counterexample studies.
#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <json.hpp>

#include "bdkin/counterexample.hpp"
#include "bdkin/dynamics.hpp"
#include "bdkin/io.hpp"
#include "bdkin/logsob.hpp"
#include "bdkin/model.hpp"

using namespace bdkin;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCertification = 4;

struct CliFlags {
  std::string config_path, family, a_table, b_table, out, format, init, state_csv, eps_grid;
  std::optional<double> gamma, zs, q, mu, sigma, rho, delta, beta, t_end, cadence, c1, eta, m_beta,
      exp_mu, m_exp, positivity_floor, s_power;
  std::optional<long> n, seed, k;
  bool certify = false;
};

Config merge_config(const CliFlags& f) {
  Config cfg = f.config_path.empty() ? Config() : Config::from_file(f.config_path);
  auto setd = [&](const char* key, const std::optional<double>& v) {
    if (v) cfg.set(key, format_double(*v));
  };
  auto setl = [&](const char* key, const std::optional<long>& v) {
    if (v) cfg.set(key, std::to_string(*v));
  };
  if (!f.family.empty()) cfg.set("family", f.family);
  if (!f.a_table.empty()) cfg.set("a_table", f.a_table);
  if (!f.b_table.empty()) cfg.set("b_table", f.b_table);
  if (!f.eps_grid.empty()) cfg.set("eps_grid", f.eps_grid);
  if (!f.state_csv.empty()) cfg.set("state_csv", f.state_csv);
  if (!f.init.empty()) cfg.set("init", f.init);
  if (!f.out.empty()) cfg.set("out", f.out);
  if (!f.format.empty()) cfg.set("format", f.format);
  setd("gamma", f.gamma);
  setd("zs", f.zs);
  setd("q", f.q);
  setd("mu", f.mu);
  setd("sigma", f.sigma);
  setd("rho", f.rho);
  setd("delta", f.delta);
  setd("beta", f.beta);
  setd("t_end", f.t_end);
  setd("cadence", f.cadence);
  setd("c1", f.c1);
  setd("eta", f.eta);
  setd("m_beta", f.m_beta);
  setd("exp_mu", f.exp_mu);
  setd("m_exp", f.m_exp);
  setd("positivity_floor", f.positivity_floor);
  setd("lambda", f.s_power);  // counterexample decay parameter (see flag help)
  setl("N", f.n);
  setl("seed", f.seed);
  setl("k", f.k);
  if (f.certify) cfg.set("certify", "1");
  return cfg;
}

const std::vector<std::string> kAllowedKeys = {
    "family", "gamma", "zs", "q", "mu", "sigma", "a_table", "b_table",
    "rho", "delta", "beta", "N", "t_end", "cadence", "eps_grid", "certify",
    "out", "format", "seed", "positivity_floor", "c1", "eta", "m_beta",
    "exp_mu", "m_exp", "k", "lambda", "init", "state_csv"};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << text << "\n";
}

std::string out_base(const Config& cfg, const std::string& fallback) {
  return cfg.get_string("out", fallback);
}

// Output paths are validated before any computation starts.
void probe_writable(const std::string& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw ValidationError("output path not writable: " + path);
}

json flags_json(const std::vector<std::string>& flags) {
  json j = json::array();
  for (const auto& f : flags) j.push_back(f);
  return j;
}

const char* mass_kind_name(MassKind k) {
  switch (k) {
    case MassKind::Finite:
      return "finite";
    case MassKind::Infinite:
      return "infinite";
    case MassKind::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

int cmd_equilibrium(const Config& cfg) {
  auto model = model_from_config(cfg);
  const double rho = cfg.require_double("rho");
  auto eq = equilibrium_monomer_density(model, rho);
  json j;
  j["z_bar"] = eq.z_bar;
  j["z_s"] = eq.zs;
  j["rho"] = eq.rho;
  j["rho_s"] = mass_kind_name(eq.rho_s_kind);
  if (eq.rho_s_kind == MassKind::Finite) j["rho_s_value"] = eq.rho_s;
  j["flags"] = flags_json(eq.flags);
  write_text(out_base(cfg, "-"), j.dump(2));
  return kExitOk;
}

CercignaniReport constants_for(const Config& cfg, const CoefficientModel& model) {
  const double rho = cfg.require_double("rho");
  const double delta = cfg.get_double("delta", 0.05);
  const bool has_beta = cfg.has("beta");
  const bool has_exp = cfg.has("exp_mu");
  if (has_beta && has_exp)
    throw ValidationError("constants: --beta and --exp-mu are mutually exclusive");
  if (has_beta) {
    if (model.gamma() >= 1.0)
      throw ValidationError("constants: --beta requires a model with gamma < 1");
    const double beta = cfg.require_double("beta");
    const double mb = cfg.has("m_beta")
                          ? cfg.require_double("m_beta")
                          : 2.0 * equilibrium_series(model, beta,
                                                     equilibrium_monomer_density(model, rho).z_bar);
    return cercignani_gamma_lt1(model, rho, delta, beta, mb);
  }
  if (has_exp) {
    const double mu = cfg.require_double("exp_mu");
    const double me = cfg.has("m_exp") ? cfg.require_double("m_exp") : 4.0 * rho;
    return exp_regime(model, rho, mu, me, model.gamma(), delta);
  }
  const double c1 = cfg.has("c1") ? cfg.require_double("c1")
                                  : equilibrium_monomer_density(model, rho).z_bar;
  return cercignani_gamma1(model, rho, delta, c1);
}

int cmd_constants(const Config& cfg) {
  auto model = model_from_config(cfg);
  auto rep = constants_for(cfg, model);
  write_text(out_base(cfg, "-"), cercignani_report_json(rep));
  return kExitOk;
}

int cmd_logsob(const Config& cfg) {
  auto model = model_from_config(cfg);
  double c1;
  if (cfg.has("c1")) {
    c1 = cfg.require_double("c1");
  } else {
    c1 = equilibrium_monomer_density(model, cfg.require_double("rho")).z_bar;
  }
  auto w = measures_from_state(model, c1);
  auto rep = logsob_constants(w);
  auto h = hardy_constants(w, rep.m);
  json j = json::parse(logsob_report_json(rep));
  j["hardy"] = {{"b1m", h.b1m}, {"b1sup", h.b1sup}, {"b2m", h.b2m}};
  write_text(out_base(cfg, "-"), j.dump(2));
  return kExitOk;
}

Vector initial_state(const Config& cfg, const CoefficientModel& model, double rho, Index n) {
  if (cfg.has("state_csv")) return read_state_csv(cfg.get_string("state_csv"));
  const std::string init = cfg.get_string("init", "geometric:0.35");
  if (init.rfind("geometric:", 0) == 0) {
    const double x = std::stod(init.substr(10));
    if (!(x > 0 && x < 1)) throw ValidationError("init geometric:<x> needs x in (0,1)");
    Vector c(n);
    double m = 0;
    for (Index i = 1; i <= n; ++i) {
      c[i - 1] = std::pow(x, static_cast<double>(i));
      m += static_cast<double>(i) * c[i - 1];
    }
    c *= rho / m;
    return c;
  }
  if (init == "monomer") {
    Vector c = Vector::Zero(n);
    c[0] = rho;
    return c;
  }
  if (init == "equilibrium") {
    const double zb = equilibrium_monomer_density(model, rho).z_bar;
    Vector c = equilibrium_profile(model, zb, n);
    return c;
  }
  if (init == "random") {
    std::mt19937_64 gen(static_cast<unsigned long>(cfg.get_long("seed", 0)));
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Vector c(n);
    double m = 0;
    for (Index i = 1; i <= n; ++i) {
      c[i - 1] = u(gen) * std::pow(0.6, static_cast<double>(i));
      m += static_cast<double>(i) * c[i - 1];
    }
    c *= rho / m;
    return c;
  }
  throw ValidationError("unknown init '" + init + "'");
}

int cmd_simulate(const Config& cfg) {
  probe_writable(out_base(cfg, "trajectory") + ".csv");
  auto model = model_from_config(cfg);
  const double rho = cfg.require_double("rho");
  const Index n = cfg.get_long("N", 400);
  IntegrateOptions opts;
  opts.t_end = cfg.get_double("t_end", 10.0);
  opts.cadence = cfg.get_double("cadence", 0.01);
  opts.positivity_floor = cfg.get_double("positivity_floor", 0.0);
  if (cfg.has("beta")) opts.moment_beta = cfg.require_double("beta");
  if (cfg.has("exp_mu")) opts.exp_mu = cfg.require_double("exp_mu");

  Vector c0 = initial_state(cfg, model, rho, n);
  Trajectory tr = integrate_bd(model, c0, opts);

  json cert;
  int status = tr.completed ? kExitOk : kExitNumeric;
  const bool certify = cfg.get_bool("certify", false);
  if (certify && tr.completed && !std::isnan(tr.samples.front().H_rel)) {
    const double delta = cfg.get_double("delta", 0.05);
    CercignaniReport rep;
    DecayEnvelope::Kind kind = DecayEnvelope::Kind::Exponential;
    if (cfg.has("exp_mu")) {
      double msup = 0;
      for (auto& s : tr.samples)
        if (!std::isnan(s.M_beta)) msup = std::max(msup, s.M_beta);
      rep = exp_regime(model, rho, cfg.require_double("exp_mu"), msup, model.gamma(), delta);
      kind = DecayEnvelope::Kind::StretchedExp;
    } else if (cfg.has("beta")) {
      double msup = 0;
      for (auto& s : tr.samples)
        if (!std::isnan(s.M_beta)) msup = std::max(msup, s.M_beta);
      rep = cercignani_gamma_lt1(model, rho, delta, cfg.require_double("beta"), msup);
      kind = DecayEnvelope::Kind::Algebraic;
    } else {
      if (model.gamma() != 1.0)
        throw ValidationError("simulate --certify: gamma < 1 needs --beta or --exp-mu");
      rep = cercignani_gamma1(model, rho, delta,
                              std::min(std::max(tr.z_bar, delta * 1.5), tr.zs - delta * 1.5));
      rep.K = window_linear_constant(model, rho, delta);
    }
    auto env = decay_envelope(kind, tr.samples.front().H_rel, rep);
    attach_envelope(tr, env);

    long window_violations = 0, envelope_violations = 0, window_samples = 0;
    for (const auto& s : tr.samples) {
      if (std::isnan(s.H_rel)) continue;
      if (s.c1 > delta && s.c1 < tr.zs - delta) {
        ++window_samples;
        // allow the ~1e-13 absolute evaluation noise of H_rel
        if (s.D_lower < rep.bound(std::max(s.H_rel - 1e-13, 0.0)) * (1 - 1e-9))
          ++window_violations;
      }
      if (s.H_rel > s.envelope * (1 + 1e-6) + 1e-12) ++envelope_violations;
    }
    cert["K"] = rep.K;
    cert["epsilon"] = rep.epsilon;
    cert["lambda"] = rep.lambda;
    cert["window_samples"] = window_samples;
    cert["window_violations"] = window_violations;
    cert["envelope_violations"] = envelope_violations;
    cert["envelope_C"] = env.C;
    cert["envelope_t0"] = env.t0;
    if (window_violations + envelope_violations > 0) status = kExitCertification;
  }

  const std::string base = out_base(cfg, "trajectory");
  write_trajectory_csv(base + ".csv", tr);
  json meta;
  meta["command"] = "simulate";
  meta["rho"] = rho;
  meta["N"] = n;
  meta["t_end"] = opts.t_end;
  meta["cadence"] = opts.cadence;
  meta["seed"] = cfg.get_long("seed", 0);
  meta["steps"] = tr.steps;
  meta["rejected_steps"] = tr.rejected;
  meta["mass_drift"] = tr.mass_drift;
  meta["z_bar"] = tr.z_bar;
  if (!tr.samples.empty() && !std::isnan(tr.samples.front().H_rel))
    meta["functionals"] = json::array({
        json::parse(functional_json("H_rel_initial", tr.samples.front().H_rel, 1e-13)),
        json::parse(functional_json("H_rel_final", tr.samples.back().H_rel, 1e-13)),
        json::parse(functional_json("D_lower_final", tr.samples.back().D_lower, 1e-15)),
    });
  meta["flags"] = flags_json(tr.flags);
  if (!cert.is_null()) meta["certification"] = cert;
  meta["exit_status"] = status;
  write_text(base + ".json", meta.dump(2));
  return status;
}

int cmd_cf(const Config& cfg) {
  probe_writable(out_base(cfg, "cf_trajectory") + ".csv");
  auto model = model_from_config(cfg);
  const double rho = cfg.require_double("rho");
  const Index n = cfg.get_long("N", 300);
  const double gamma = cfg.require_double("gamma");
  const double eta = cfg.get_double("eta", 0.0);
  auto kernel = CFKernel::power(model, gamma, eta);
  CFOptions opts;
  opts.t_end = cfg.get_double("t_end", 5.0);
  opts.cadence = cfg.get_double("cadence", 0.05);
  opts.moment_k = static_cast<double>(cfg.get_long("k", 2));

  Vector c0 = initial_state(cfg, model, rho, n);
  CFTrajectory tr = integrate_cf(kernel, c0, opts);
  int status = tr.completed ? kExitOk : kExitNumeric;
  if (tr.bound_violated) status = kExitCertification;

  const std::string base = out_base(cfg, "cf_trajectory");
  write_cf_trajectory_csv(base + ".csv", tr);
  json meta;
  meta["command"] = "cf";
  meta["rho"] = rho;
  meta["N"] = n;
  meta["gamma"] = gamma;
  meta["eta"] = eta;
  meta["moment_k"] = opts.moment_k;
  meta["lambda"] = tr.lambda;
  meta["steps"] = tr.steps;
  meta["rejected_steps"] = tr.rejected;
  meta["mass_drift"] = tr.mass_drift;
  meta["moment_bound_violated"] = tr.bound_violated;
  meta["flags"] = flags_json(tr.flags);
  meta["exit_status"] = status;
  write_text(base + ".json", meta.dump(2));
  return status;
}

int cmd_counterexample(const Config& cfg) {
  probe_writable(out_base(cfg, "counterexample") + ".csv");
  const double lambda = cfg.get_double("lambda", 0.0);
  const double rho = cfg.require_double("rho");
  const double gamma = cfg.require_double("gamma");
  std::vector<double> grid = cfg.get_array("eps_grid");
  if (grid.empty()) grid = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  auto fam = make_family(lambda, rho, gamma);
  auto rows = ratio_study(fam, grid);

  const std::string base = out_base(cfg, "counterexample");
  write_ratio_csv(base + ".csv", rows);
  json meta;
  meta["command"] = "counterexample";
  meta["lambda"] = lambda;
  meta["rho"] = rho;
  meta["gamma"] = gamma;
  meta["xi"] = fam.xi;
  meta["limit_H"] = limit_state_free_energy(fam);
  json jrows = json::array();
  for (const auto& r : rows) {
    json jr;
    jr["eps"] = r.eps;
    jr["A"] = r.A;
    jr["N"] = r.n;
    jr["flux_positive"] = r.flux_positive;
    jrows.push_back(jr);
  }
  meta["rows"] = jrows;
  meta["exit_status"] = kExitOk;
  write_text(base + ".json", meta.dump(2));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subcritical cluster kinetics: equilibria, entropy-method constants, simulations"};
  app.require_subcommand(1);

  CliFlags f;
  std::string command;
  for (const char* name : {"equilibrium", "constants", "logsob", "simulate", "cf",
                           "counterexample"}) {
    auto* sub = app.add_subcommand(name);
    sub->callback([&command, name] { command = name; });
    sub->add_option("--config", f.config_path, "flat key=value config file");
    sub->add_option("--family", f.family, "pt|cf|custom");
    sub->add_option("--gamma", f.gamma);
    sub->add_option("--zs", f.zs);
    sub->add_option("--q", f.q);
    sub->add_option("--mu", f.mu);
    sub->add_option("--sigma", f.sigma);
    sub->add_option("--a-table", f.a_table, "comma list or @file");
    sub->add_option("--b-table", f.b_table, "comma list or @file");
    sub->add_option("--rho", f.rho);
    sub->add_option("--delta", f.delta);
    sub->add_option("--beta", f.beta);
    sub->add_option("--N", f.n);
    sub->add_option("--t-end", f.t_end);
    sub->add_option("--cadence", f.cadence);
    sub->add_option("--eps-grid", f.eps_grid, "comma list of eps values, decreasing");
    sub->add_flag("--certify", f.certify);
    sub->add_option("--out", f.out, "output base path ('-' = stdout for reports)");
    sub->add_option("--format", f.format, "csv|json (trajectories are csv + json sidecar)");
    sub->add_option("--seed", f.seed);
    sub->add_option("--positivity-floor", f.positivity_floor);
    sub->add_option("--c1", f.c1, "monomer density for constants/logsob (default z_bar)");
    sub->add_option("--eta", f.eta, "second kernel exponent for cf");
    sub->add_option("--m-beta", f.m_beta, "prescribed moment bound M_beta");
    sub->add_option("--exp-mu", f.exp_mu, "exponential moment rate mu");
    sub->add_option("--m-exp", f.m_exp, "prescribed exponential moment bound");
    sub->add_option("--k", f.k, "tracked integer moment for cf");
    sub->add_option("--lambda", f.s_power, "counterexample detailed-balance decay");
    sub->add_option("--init", f.init, "geometric:<x>|monomer|equilibrium|random");
    sub->add_option("--state-csv", f.state_csv, "initial state csv (i,c)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    Config cfg = merge_config(f);
    cfg.validate_keys(kAllowedKeys);
    if (cfg.get_string("format", "csv") != "csv" && cfg.get_string("format", "csv") != "json")
      throw ValidationError("format must be csv or json");
    if (command == "equilibrium") return cmd_equilibrium(cfg);
    if (command == "constants") return cmd_constants(cfg);
    if (command == "logsob") return cmd_logsob(cfg);
    if (command == "simulate") return cmd_simulate(cfg);
    if (command == "cf") return cmd_cf(cfg);
    if (command == "counterexample") return cmd_counterexample(cfg);
    throw ValidationError("unknown command");
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
