// Experiments front end: figure presets, classification, Lyapunov checks,
// basin sweeps, and the oscillator-vs-reduced cross-check.
//
// Exit codes: 0 success, 1 usage error, 2 model/domain error, 3 numerical
// failure.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "autores/asymptotics.hpp"
#include "autores/integrate.hpp"
#include "autores/lyapunov.hpp"
#include "autores/model.hpp"
#include "autores/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace autores;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct Global {
  std::string out_dir;
  std::uint64_t seed = 0;
  int workers = 1;
  double tol = 1e-9;
  std::vector<std::string> argv;  // post config expansion, sans argv[0]
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_manifest(const Global& g, const std::string& command,
                    const json& params, const std::vector<std::string>& outs,
                    const std::string& base) {
  json m;
  m["command"] = command;
  m["argv"] = g.argv;
  m["params"] = params;
  m["seed"] = g.seed;
  m["tool_version"] = kToolVersion;
  m["outputs"] = outs;
  write_text(fs::path(g.out_dir) / (base + "_manifest.json"),
             m.dump(2) + "\n");
}

IntegratorConfig make_config(double tol, double sample_dt) {
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = tol;
  cfg.initial_step = std::min(1e-3, sample_dt);
  cfg.max_step = 1.0;
  cfg.sample_interval = sample_dt;
  return cfg;
}

[[noreturn]] void numerical_failure(const std::string& what) {
  json err{{"error", "NumericalFailure"}, {"message", what}};
  std::cerr << err.dump() << "\n";
  std::exit(3);
}

// ---------------------------------------------------------------- simulate

struct SimSpec {
  std::string system = "reduced";  // reduced0 | reduced | oscillator
  ReducedParams rp;
  OscillatorParams op;
  double y0_a = 0.0, y0_b = 0.0;  // (rho0, psi0) or (u0, v0)
  double t0 = 0.0, t1 = 50.0;
  double sample_dt = 0.0;  // 0 = auto
  std::string base = "sim";
};

Trajectory run_reduced(const SimSpec& s, double tol, bool parametric,
                       const GuardFn& guard = nullptr) {
  VectorField field = [&](double tau, const StateVec& y) {
    auto d = reduced_rhs({y[0], y[1], tau}, s.rp, parametric);
    return StateVec{d.drho_dtau, d.dpsi_dtau};
  };
  double dt = s.sample_dt > 0.0 ? s.sample_dt : (s.t1 - s.t0) / 1000.0;
  return integrate(field, {s.y0_a, s.y0_b}, s.t0, s.t1,
                   make_config(tol, dt), guard);
}

Trajectory run_oscillator(const SimSpec& s, double tol) {
  VectorField field = [&](double t, const StateVec& y) {
    auto d = oscillator_rhs({y[0], y[1], t}, s.op);
    return StateVec{d.du_dt, d.dv_dt};
  };
  double dt = s.sample_dt > 0.0 ? s.sample_dt : (s.t1 - s.t0) / 5000.0;
  return integrate(field, {s.y0_a, s.y0_b}, s.t0, s.t1, make_config(tol, dt));
}

json sim_params_json(const SimSpec& s) {
  json p{{"system", s.system},
         {"t0", s.t0},
         {"t1", s.t1},
         {"sample_dt", s.sample_dt}};
  if (s.system == "oscillator") {
    p["eps"] = s.op.eps;
    p["alpha"] = s.op.alpha;
    p["gamma"] = s.op.gamma;
    p["f0"] = s.op.f0;
    p["h0"] = s.op.h0;
    p["u0"] = s.y0_a;
    p["v0"] = s.y0_b;
  } else {
    p["lambda"] = s.rp.lambda;
    p["f"] = s.rp.f;
    p["m"] = s.rp.m;
    p["rho0"] = s.y0_a;
    p["psi0"] = s.y0_b;
  }
  return p;
}

void cmd_simulate(const Global& g, const SimSpec& s,
                  const std::string& command) {
  std::string csv_name = s.base + ".csv";
  std::string out;
  if (s.system == "oscillator") {
    auto traj = run_oscillator(s, g.tol);
    if (traj.terminated_by == Termination::StepUnderflow)
      numerical_failure("step underflow at t = " + fmt(traj.back().t));
    std::vector<double> delta(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      const auto& smp = traj.samples[i];
      delta[i] = phase_mismatch({smp.y[0], smp.y[1], smp.t}, s.op);
    }
    unwrap_inplace(delta);
    out = "t,u,v,E,Delta\n";
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      const auto& smp = traj.samples[i];
      out += fmt(smp.t) + "," + fmt(smp.y[0]) + "," + fmt(smp.y[1]) + "," +
             fmt(energy({smp.y[0], smp.y[1], smp.t}, s.op)) + "," +
             fmt(delta[i]) + "\n";
    }
  } else {
    auto traj = run_reduced(s, g.tol, s.system == "reduced");
    if (traj.terminated_by == Termination::StepUnderflow)
      numerical_failure("step underflow at tau = " + fmt(traj.back().t));
    out = "tau,rho,psi\n";
    for (const auto& smp : traj.samples)
      out += fmt(smp.t) + "," + fmt(smp.y[0]) + "," + fmt(smp.y[1]) + "\n";
  }
  write_text(fs::path(g.out_dir) / csv_name, out);
  write_manifest(g, command, sim_params_json(s), {csv_name}, s.base);
}

SimSpec preset_spec(const std::string& name) {
  SimSpec s;
  s.base = name;
  if (name.rfind("fig2", 0) == 0) {
    s.system = "reduced";
    s.rp = ReducedParams{1.0, 1.0, 4.0};
    s.t1 = 50.0;
    s.sample_dt = 0.05;
    if (name == "fig2a") s.y0_a = 0.27, s.y0_b = 0.01;
    else if (name == "fig2b") s.y0_a = 0.32, s.y0_b = 0.31;
    else if (name == "fig2c") s.y0_a = 2.04, s.y0_b = 1.78;
    else throw CLI::ValidationError("unknown preset: " + name);
    return s;
  }
  if (name.rfind("fig1", 0) == 0) {
    s.system = "oscillator";
    s.op.eps = 1e-3;
    s.op.alpha = 0.5e-4;
    s.op.gamma = 1.0 / 6.0;
    const bool parametric = (name == "fig1c" || name == "fig1d");
    s.op.f0 = parametric ? 1.0 : 4.0;
    s.op.h0 = parametric ? 5.0 : 0.0;
    // small start of amplitude O(eps^{1/3}); in-phase or anti-phase
    const double amp =
        0.3 * std::cbrt(s.op.eps) * std::sqrt(8.0 / (3.0 * s.op.gamma));
    const bool anti = (name == "fig1a" || name == "fig1d");
    if (name != "fig1a" && name != "fig1b" && name != "fig1c" &&
        name != "fig1d")
      throw CLI::ValidationError("unknown preset: " + name);
    s.y0_a = anti ? -amp : amp;
    s.y0_b = 0.0;
    s.t0 = 0.0;
    s.t1 = 5000.0;  // slow time 0..50
    s.sample_dt = 1.0;
    return s;
  }
  throw CLI::ValidationError("unknown preset: " + name);
}

// -------------------------------------------------------------- asymptotics

void cmd_asymptotics(const Global& g, const ReducedParams& rp, int branch,
                     int K, double tau_min, double tau_max, int tau_points,
                     const std::string& base) {
  auto sol = build_series(rp, branch, K);
  json coeffs = sol;
  std::string coeff_name = base + "_coefficients.json";
  write_text(fs::path(g.out_dir) / coeff_name, coeffs.dump(2) + "\n");

  std::string csv = "tau,res_rho,res_psi,norm\n";
  for (int i = 0; i < tau_points; ++i) {
    const double frac = tau_points == 1 ? 0.0 : double(i) / (tau_points - 1);
    const double tau =
        tau_min * std::pow(tau_max / tau_min, frac);
    auto [rr, rp_] = residual(sol, tau);
    csv += fmt(tau) + "," + fmt(rr) + "," + fmt(rp_) + "," +
           fmt(std::hypot(rr, rp_)) + "\n";
  }
  std::string res_name = base + "_residual.csv";
  write_text(fs::path(g.out_dir) / res_name, csv);

  json params{{"lambda", rp.lambda}, {"f", rp.f},     {"m", rp.m},
              {"branch", branch},    {"K", K},        {"tau_min", tau_min},
              {"tau_max", tau_max},  {"tau_points", tau_points}};
  write_manifest(g, "asymptotics", params, {coeff_name, res_name}, base);
}

// ----------------------------------------------------------------- classify

void cmd_classify(const Global& g, bool oscillator, const ReducedParams& rp,
                  const OscillatorParams& op, const std::string& base) {
  json out;
  if (oscillator) {
    auto reg = oscillator_regime(op);
    out["oscillator_regime"] = reg;
    auto reduced = reduce_params(op);
    out["reduced_params"] = {
        {"lambda", reduced.lambda}, {"f", reduced.f}, {"m", reduced.m}};
    std::cout << "regime: " << to_string(reg.kind) << " (mu = " << reg.mu
              << ", mu0 = " << reg.mu0 << ")\n";
    for (double psi0 : reg.stable_psi0)
      std::cout << "  stable mode psi0 = " << psi0 << "\n";
  } else {
    auto verdicts = classify(rp);
    out["verdicts"] = verdicts;
    out["m_star"] = rp.m_star();
    std::cout << "m_* = " << rp.m_star() << "\n";
    for (const auto& v : verdicts)
      std::cout << "branch " << v.branch << ": " << to_string(v.regime)
                << " (" << to_string(v.justification) << ", D_0 = " << v.d0
                << ")\n";
  }
  std::string name = base + ".json";
  write_text(fs::path(g.out_dir) / name, out.dump(2) + "\n");
  json params = oscillator
                    ? json{{"eps", op.eps},
                           {"alpha", op.alpha},
                           {"gamma", op.gamma},
                           {"f0", op.f0},
                           {"h0", op.h0}}
                    : json{{"lambda", rp.lambda}, {"f", rp.f}, {"m", rp.m}};
  write_manifest(g, "classify", params, {name}, base);
}

// ----------------------------------------------------------------- lyapunov

void cmd_lyapunov(const Global& g, const ReducedParams& rp, int branch, int K,
                  std::uint64_t n, const LyapunovDomain& dom, bool search,
                  const std::string& fixtures, const std::string& base) {
  if (!lyapunov_applicable(rp, branch)) {
    json out{{"branch", branch}, {"applicable", false}};
    std::string name = base + ".json";
    write_text(fs::path(g.out_dir) / name, out.dump(2) + "\n");
    json params{{"lambda", rp.lambda}, {"f", rp.f}, {"m", rp.m},
                {"branch", branch},    {"K", K}};
    write_manifest(g, "lyapunov", params, {name}, base);
    std::cout << "branch " << branch
              << ": stability theorem condition fails; not applicable\n";
    return;
  }
  auto sol = build_series(rp, branch, K);
  LyapunovDomain use = dom;
  if (search) {
    auto found = search_domain(sol, n, g.seed);
    if (!found) numerical_failure("no passing Lyapunov domain found");
    use = *found;
    if (!fixtures.empty()) {
      json all = json::array();
      if (std::ifstream in(fixtures); in.good()) all = json::parse(in);
      json entry{{"branch", branch},
                 {"params",
                  {{"lambda", rp.lambda}, {"f", rp.f}, {"m", rp.m}}},
                 {"K", K},
                 {"domain", use},
                 {"seed", g.seed},
                 {"n_samples", n}};
      all.push_back(entry);
      write_text(fixtures, all.dump(2) + "\n");
    }
  }
  auto report = check_bounds(sol, use, n, g.seed);
  json out = report;
  std::string name = base + ".json";
  write_text(fs::path(g.out_dir) / name, out.dump(2) + "\n");
  json params{{"lambda", rp.lambda}, {"f", rp.f}, {"m", rp.m},
              {"branch", branch},    {"K", K},    {"n", n}};
  write_manifest(g, "lyapunov", params, {name}, base);
  std::cout << "branch " << branch << ": " << report.bound_violations
            << " bound violations, " << report.derivative_violations
            << " derivative violations over " << report.samples
            << " samples (min margin " << report.min_margin << ")\n";
}

// -------------------------------------------------------------------- basin

struct BasinCell {
  double rho0, psi0;
  std::string status;  // captured | escaped | failed
  double rho_end = 0.0, psi_end = 0.0;
};

void cmd_basin(const Global& g, const ReducedParams& rp, double rho_min,
               double rho_max, int rho_n, double psi_min, double psi_max,
               int psi_n, double horizon, double threshold,
               const std::string& base) {
  const int total = rho_n * psi_n;
  std::vector<BasinCell> cells(total);
  std::atomic<int> next{0};
  const double tol = g.tol;

  auto worker = [&] {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= total) return;
      const int i = idx / psi_n, j = idx % psi_n;
      BasinCell& c = cells[idx];
      c.rho0 = rho_n == 1
                   ? rho_min
                   : rho_min + (rho_max - rho_min) * i / (rho_n - 1);
      c.psi0 = psi_n == 1
                   ? psi_min
                   : psi_min + (psi_max - psi_min) * j / (psi_n - 1);
      try {
        VectorField field = [&](double tau, const StateVec& y) {
          auto d = reduced_rhs({y[0], y[1], tau}, rp, true);
          return StateVec{d.drho_dtau, d.dpsi_dtau};
        };
        GuardFn guard = [](double, const StateVec& y) {
          return std::abs(y[1]) > 4.0 * M_PI;
        };
        auto traj = integrate(field, {c.rho0, c.psi0}, 0.0, horizon,
                              make_config(tol, horizon / 500.0), guard);
        c.rho_end = traj.back().y[0];
        c.psi_end = traj.back().y[1];
        if (traj.terminated_by == Termination::StepUnderflow) {
          c.status = "failed";
        } else if (traj.terminated_by == Termination::Guard) {
          c.status = "escaped";
        } else {
          const bool captured =
              c.rho_end / std::sqrt(rp.lambda * horizon) >= threshold;
          c.status = captured ? "captured" : "escaped";
        }
      } catch (const ModelError&) {
        c.status = "failed";
      }
    }
  };
  const int nthreads = std::max(1, g.workers);
  std::vector<std::thread> pool;
  for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::string csv = "index,rho0,psi0,status,rho_end,psi_end\n";
  for (int idx = 0; idx < total; ++idx) {
    const auto& c = cells[idx];
    csv += std::to_string(idx) + "," + fmt(c.rho0) + "," + fmt(c.psi0) + "," +
           c.status + "," + fmt(c.rho_end) + "," + fmt(c.psi_end) + "\n";
  }
  std::string name = base + ".csv";
  write_text(fs::path(g.out_dir) / name, csv);
  json params{{"lambda", rp.lambda}, {"f", rp.f},
              {"m", rp.m},           {"rho_min", rho_min},
              {"rho_max", rho_max},  {"rho_n", rho_n},
              {"psi_min", psi_min},  {"psi_max", psi_max},
              {"psi_n", psi_n},      {"horizon", horizon},
              {"threshold", threshold}};
  write_manifest(g, "basin", params, {name}, base);
}

// --------------------------------------------------------------- crosscheck

void cmd_crosscheck(const Global& g, const OscillatorParams& op, double rho0,
                    double psi0, double t1, const std::string& base) {
  if (op.alpha <= 0.0) throw NonPositiveLambda(op.alpha);
  const double scale =
      std::cbrt(op.eps) * std::sqrt(8.0 / (3.0 * op.gamma));
  SimSpec osc;
  osc.system = "oscillator";
  osc.op = op;
  osc.y0_a = scale * rho0 * std::cos(psi0);
  osc.y0_b = scale * rho0 * std::sin(psi0);
  osc.t1 = t1;
  osc.sample_dt = 0.1;
  auto traj = run_oscillator(osc, g.tol);
  if (traj.terminated_by == Termination::StepUnderflow)
    numerical_failure("oscillator step underflow");

  const ReducedParams rp = reduce_params(op);
  const double eps23 = std::cbrt(op.eps * op.eps);
  VectorField field = [&](double tau, const StateVec& y) {
    auto d = reduced_rhs({y[0], y[1], tau}, rp, op.h0 != 0.0);
    return StateVec{d.drho_dtau, d.dpsi_dtau};
  };
  IntegratorConfig rcfg = make_config(g.tol, eps23 * t1 / 2000.0);
  auto red = integrate(field, {rho0, psi0}, 0.0, eps23 * t1, rcfg);
  if (red.terminated_by == Termination::StepUnderflow)
    numerical_failure("reduced step underflow");

  auto rho_at = [&](double tau) {
    const auto& s = red.samples;
    if (tau <= s.front().t) return s.front().y[0];
    if (tau >= s.back().t) return s.back().y[0];
    std::size_t lo = 0, hi = s.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (s[mid].t <= tau ? lo : hi) = mid;
    }
    const double w = (tau - s[lo].t) / (s[hi].t - s[lo].t);
    return (1.0 - w) * s[lo].y[0] + w * s[hi].y[0];
  };

  // per-period envelope of |u| against the predicted amplitude
  std::string csv = "t,envelope,predicted,rel_err\n";
  const double period = 2.0 * M_PI;
  double win_end = period, peak = 0.0, tmid = 0.5 * period;
  for (const auto& smp : traj.samples) {
    if (smp.t > win_end) {
      const double pred = scale * rho_at(eps23 * tmid);
      csv += fmt(tmid) + "," + fmt(peak) + "," + fmt(pred) + "," +
             fmt(pred != 0.0 ? (peak - pred) / pred : 0.0) + "\n";
      win_end += period;
      tmid = win_end - 0.5 * period;
      peak = 0.0;
    }
    peak = std::max(peak, std::abs(smp.y[0]));
  }
  std::string name = base + ".csv";
  write_text(fs::path(g.out_dir) / name, csv);
  json params{{"eps", op.eps}, {"alpha", op.alpha}, {"gamma", op.gamma},
              {"f0", op.f0},   {"h0", op.h0},       {"rho0", rho0},
              {"psi0", psi0},  {"t1", t1}};
  write_manifest(g, "crosscheck", params, {name}, base);
}

// ------------------------------------------------------------------- config

// Splices `--key value` tokens from a flat JSON object wherever
// `--config FILE` appears.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      std::ifstream in(args[i + 1]);
      if (!in.good())
        throw CLI::ValidationError("cannot read config " + args[i + 1]);
      json cfg = json::parse(in);
      for (const auto& [key, value] : cfg.items()) {
        out.push_back("--" + key);
        if (value.is_boolean()) {
          if (!value.get<bool>()) out.pop_back();
        } else if (value.is_string()) {
          out.push_back(value.get<std::string>());
        } else {
          out.push_back(value.dump());
        }
      }
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"autoresonance capture laboratory"};
  app.require_subcommand(1);

  Global g;
  const char* env_dir = std::getenv("AUTORES_OUT_DIR");
  g.out_dir = env_dir ? env_dir : ".";
  app.add_option("--out-dir", g.out_dir, "output directory");
  app.add_option("--seed", g.seed, "sampling seed");
  app.add_option("--workers", g.workers, "worker threads for sweeps");
  app.add_option("--tol", g.tol, "integrator tolerance");

  ReducedParams rp{1.0, 1.0, 0.0};
  OscillatorParams op{1e-3, 0.5e-4, 1.0 / 6.0, 4.0, 0.0};
  auto add_reduced = [&](CLI::App* c) {
    c->add_option("--lambda", rp.lambda);
    c->add_option("--f", rp.f);
    c->add_option("--m", rp.m);
  };
  auto add_oscillator = [&](CLI::App* c) {
    c->add_option("--eps", op.eps);
    c->add_option("--alpha", op.alpha);
    c->add_option("--gamma", op.gamma);
    c->add_option("--f0", op.f0);
    c->add_option("--h0", op.h0);
  };

  // simulate
  SimSpec sim;
  auto* c_sim = app.add_subcommand("simulate", "integrate one trajectory");
  c_sim->add_option("--system", sim.system)
      ->check(CLI::IsMember({"reduced0", "reduced", "oscillator"}));
  add_reduced(c_sim);
  add_oscillator(c_sim);
  c_sim->add_option("--rho0", sim.y0_a);
  c_sim->add_option("--psi0", sim.y0_b);
  double u0 = 0.0, v0 = 0.0;
  c_sim->add_option("--u0", u0);
  c_sim->add_option("--v0", v0);
  c_sim->add_option("--t0", sim.t0);
  c_sim->add_option("--t1", sim.t1);
  c_sim->add_option("--sample-dt", sim.sample_dt);
  c_sim->add_option("--name", sim.base);

  // preset
  std::string preset_name;
  auto* c_pre = app.add_subcommand("preset", "run a named figure preset");
  c_pre->add_option("name", preset_name, "fig1a..fig1d, fig2a..fig2c")
      ->required();

  // asymptotics
  int branch = 1, K = 4, tau_points = 40;
  double tau_min = 10.0, tau_max = 1e4;
  std::string base = "asym";
  auto* c_asy =
      app.add_subcommand("asymptotics", "series coefficients and residuals");
  add_reduced(c_asy);
  c_asy->add_option("--branch", branch)->check(CLI::Range(1, 4));
  c_asy->add_option("--K", K);
  c_asy->add_option("--tau-min", tau_min);
  c_asy->add_option("--tau-max", tau_max);
  c_asy->add_option("--tau-points", tau_points);
  c_asy->add_option("--name", base);

  // classify
  bool osc_mode = false;
  std::string cls_base = "classify";
  auto* c_cls = app.add_subcommand("classify", "per-branch verdicts");
  add_reduced(c_cls);
  add_oscillator(c_cls);
  c_cls->add_flag("--oscillator", osc_mode,
                  "classify from oscillator parameters");
  c_cls->add_option("--name", cls_base);

  // lyapunov
  int ly_branch = 1, ly_K = 6;
  std::uint64_t ly_n = 10000;
  LyapunovDomain dom;
  bool search = false;
  std::string fixtures, ly_base = "lyapunov";
  auto* c_ly = app.add_subcommand("lyapunov", "sampled bound verification");
  add_reduced(c_ly);
  c_ly->add_option("--branch", ly_branch)->check(CLI::Range(1, 4));
  c_ly->add_option("--K", ly_K);
  c_ly->add_option("--n", ly_n);
  c_ly->add_option("--d-star", dom.d_star);
  c_ly->add_option("--eta-star", dom.eta_star);
  c_ly->add_option("--eps1", dom.eps1);
  c_ly->add_option("--eps2", dom.eps2);
  c_ly->add_flag("--search", search, "grid-search a passing domain");
  c_ly->add_option("--fixtures", fixtures,
                   "append the found domain to this fixtures file");
  c_ly->add_option("--name", ly_base);

  // basin
  double rho_lo = 0.05, rho_hi = 2.5, psi_lo = -M_PI, psi_hi = M_PI;
  int rho_n = 20, psi_n = 20;
  double horizon = 50.0, threshold = 0.8;
  std::string bas_base = "basin";
  auto* c_bas = app.add_subcommand("basin", "capture map over initial data");
  add_reduced(c_bas);
  c_bas->add_option("--rho-min", rho_lo);
  c_bas->add_option("--rho-max", rho_hi);
  c_bas->add_option("--rho-n", rho_n)->check(CLI::PositiveNumber);
  c_bas->add_option("--psi-min", psi_lo);
  c_bas->add_option("--psi-max", psi_hi);
  c_bas->add_option("--psi-n", psi_n)->check(CLI::PositiveNumber);
  c_bas->add_option("--horizon", horizon);
  c_bas->add_option("--threshold", threshold);
  c_bas->add_option("--name", bas_base);

  // crosscheck
  double cc_rho0 = 0.3, cc_psi0 = M_PI, cc_t1 = 500.0;
  std::string cc_base = "crosscheck";
  auto* c_cc =
      app.add_subcommand("crosscheck", "oscillator vs reduced envelope");
  add_oscillator(c_cc);
  c_cc->add_option("--rho0", cc_rho0);
  c_cc->add_option("--psi0", cc_psi0);
  c_cc->add_option("--t1", cc_t1);
  c_cc->add_option("--name", cc_base);

  std::vector<std::string> raw(argv + 1, argv + argc);
  try {
    raw = expand_config(std::move(raw));
    g.argv = raw;
    // CLI11 parses token vectors in reverse order
    std::vector<std::string> rev(raw.rbegin(), raw.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    fs::create_directories(g.out_dir);
    if (*c_sim) {
      if (sim.system == "oscillator" &&
          (c_sim->count("--u0") || c_sim->count("--v0"))) {
        sim.y0_a = u0;
        sim.y0_b = v0;
      }
      sim.rp = rp;
      sim.op = op;
      cmd_simulate(g, sim, "simulate");
    } else if (*c_pre) {
      SimSpec s = preset_spec(preset_name);
      cmd_simulate(g, s, "preset");
    } else if (*c_asy) {
      cmd_asymptotics(g, rp, branch, K, tau_min, tau_max, tau_points, base);
    } else if (*c_cls) {
      cmd_classify(g, osc_mode, rp, op, cls_base);
    } else if (*c_ly) {
      cmd_lyapunov(g, rp, ly_branch, ly_K, ly_n, dom, search, fixtures,
                   ly_base);
    } else if (*c_bas) {
      cmd_basin(g, rp, rho_lo, rho_hi, rho_n, psi_lo, psi_hi, psi_n, horizon,
                threshold, bas_base);
    } else if (*c_cc) {
      cmd_crosscheck(g, op, cc_rho0, cc_psi0, cc_t1, cc_base);
    }
  } catch (const ModelError& e) {
    json err{{"error", "ModelError"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json err{{"error", "Internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 3;
  }
  return 0;
}
