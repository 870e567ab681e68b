#include "bsq/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bsq/acceptance.hpp"
#include "bsq/mollified.hpp"
#include "bsq/norms.hpp"
#include "bsq/transforms.hpp"
#include "json.hpp"

namespace bsq {

namespace {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> k = {
      "case.id",
      "case.a",
      "case.b",
      "case.c",
      "case.d",
      "case.tau",
      "eps",
      "grid.dim",
      "grid.n",
      "grid.length",
      "system",
      "init.family",
      "init.amplitude",
      "init.u_amplitude",
      "init.width",
      "init.x0",
      "init.y0",
      "init.modes",
      "init.phases",
      "init.kmax",
      "init.envelope_p",
      "init.seed",
      "init.curl_free",
      "integrator.scheme",
      "integrator.dt",
      "integrator.t_end",
      "integrator.report_every",
      "monitor.energy_factor",
      "monitor.H",
      "sobolev.s",
      "output.dir",
      "output.save_final",
      "output.snapshot_every",
      "delta",
      "bathy.amplitude",
      "bathy.mode",
      "tilde.drop_remainder",
      "sweep.horizon",
      "fifth.a1",
      "fifth.b1",
      "fifth.c1",
      "fifth.d1",
      "fd.with_p_eps",
      "fd.beta",
      "kaup.allow_unstable_grid",
  };
  return k;
}

bool is_pow2(long x) { return x > 0 && (x & (x - 1)) == 0; }

bool near(double x, double y) { return std::abs(x - y) <= 1e-14; }

double min_depth(const Field& eta, double eps) {
  double m = 1.0 + eps * eta[0];
  for (std::size_t i = 1; i < eta.size(); ++i)
    m = std::min(m, 1.0 + eps * eta[i]);
  return m;
}

std::string short_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

System build_system(const RunSetup& su, GridPtr g) {
  if (su.system == "abcd") return make_system_abcd(g, su.cp);
  if (su.system == "bathymetry") {
    Field beta = make_field(g);
    const double kt = 2.0 * pi * su.bathy_mode / g->length;
    if (g->dim == 1) {
      for (int i = 0; i < g->n; ++i)
        beta[i] = su.bathy_amplitude * std::cos(kt * g->node(i));
    } else {
      for (int iy = 0; iy < g->n; ++iy)
        for (int ix = 0; ix < g->n; ++ix)
          beta[std::size_t(iy) * g->n + ix] = su.bathy_amplitude *
                                              std::cos(kt * g->node(ix)) *
                                              std::cos(kt * g->node(iy));
    }
    return make_system_bathymetry(g, su.cp, beta);
  }
  if (su.system == "fifth_order") return make_system_fifth(g, su.fifth);
  if (su.system == "full_dispersion") return make_system_fd(g, su.fd);
  if (su.system == "kaup") return make_system_kaup(g, su.kaup);
  if (su.system == "eta_v") return make_system_eta_v(g, su.eps);
  if (su.system == "mollified")
    return make_system_mollified(g, su.eps, su.delta);
  if (su.system == "tilde")
    return make_system_tilde(g, su.eps, su.tilde_drop_remainder);
  throw ValidationError("unknown system '" + su.system + "'");
}

EnergyReport make_report(const RunSetup& su, const State& s, double t) {
  EnergyReport r;
  r.t = t;
  r.finite = finite(s);
  r.mass = mean(s.eta);
  r.margin = min_depth(s.eta, su.eps) - su.monitor.H;
  const CaseParams& cp = su.cp;
  try {
    if ((su.system == "abcd" || su.system == "bathymetry") &&
        near(cp.b, cp.d))
      r.hamiltonian = hamiltonian(cp, s);
    if (su.system == "full_dispersion") r.hamiltonian = hamiltonian_fd(su.fd, s);
    if (su.system == "abcd" && energy_symmetrized_supported(cp))
      r.energy_s = energy_symmetrized(cp, s, su.sobolev_s);
    if (su.system == "fifth_order")
      r.energy_s = energy_symmetrized_fifth(su.fifth, s, su.sobolev_s);
    if (su.system == "eta_v" || su.system == "mollified") {
      const QuasiEnergy q = s.eta.grid->dim == 1
                                ? energy_quasilinear_1d(make_bundle_1d(s, su.eps))
                                : energy_quasilinear_2d(make_bundle_2d(s, su.eps));
      r.energy_quasi = q.total;
      r.energy_script = q.script;
    } else if (su.system == "abcd" && near(cp.a, 0) && near(cp.b, 0) &&
               near(cp.d, 0) && near(cp.c, -1)) {
      const State vs = to_v_variables(s, su.eps);
      const QuasiEnergy q =
          s.eta.grid->dim == 1 ? energy_quasilinear_1d(make_bundle_1d(vs, su.eps))
                               : energy_quasilinear_2d(make_bundle_2d(vs, su.eps));
      r.energy_quasi = q.total;
      r.energy_script = q.script;
    }
  } catch (const Error&) {
    // near blow-up the cascades can cavitate; leave the cells empty
  }
  if (s.eta.grid->dim == 2) r.curl = curl_norm(s);
  r.eta_sobolev = sobolev_norm(s.eta, su.sobolev_s);
  double vs2 = 0, vx2 = 0;
  for (const auto& u : s.vel) {
    const double sn = sobolev_norm(u, su.sobolev_s);
    const double xn = xsk_norm(u, su.sobolev_s, 1, su.eps);
    vs2 += sn * sn;
    vx2 += xn * xn;
  }
  r.vel_sobolev = std::sqrt(vs2);
  r.eta_xnorm = xsk_norm(s.eta, su.sobolev_s, 1, su.eps);
  r.vel_xnorm = std::sqrt(vx2);
  return r;
}

struct EnergyFit {
  double slope = 0;  // of E^{-1/2} against t
  double c1 = 0;
  int npts = 0;
  double e0 = 0, growth_max = 0;
};

EnergyFit fit_inverse_sqrt(const std::vector<EnergyReport>& reps, double eps) {
  EnergyFit f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  bool have0 = false;
  for (const auto& r : reps) {
    const double e = monitored_energy(r);
    if (!std::isfinite(e) || e <= 0) continue;
    if (!have0) {
      f.e0 = e;
      have0 = true;
    }
    if (f.e0 > 0) f.growth_max = std::max(f.growth_max, e / f.e0);
    const double y = 1.0 / std::sqrt(e);
    sx += r.t;
    sy += y;
    sxx += r.t * r.t;
    sxy += r.t * y;
    ++f.npts;
  }
  if (f.npts >= 2) {
    const double den = f.npts * sxx - sx * sx;
    if (std::abs(den) > 1e-30) f.slope = (f.npts * sxy - sx * sy) / den;
  }
  f.c1 = eps > 0 ? -f.slope / eps : 0;
  return f;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const ValidationError*>(&e)) return 3;
  if (dynamic_cast<const ResolutionError*>(&e)) return 3;
  return 1;
}

int report_failure(const std::exception& e) {
  const int code = exit_code_for(e);
  const char* kind = code == 2 ? "config error" : code == 3 ? "invalid setup" : "error";
  std::cerr << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

RunSetup build_run_setup(const Config& cfg) {
  cfg.check_known_keys(known_keys());
  RunSetup s;
  s.raw = cfg;
  s.dim = int(cfg.get_int("grid.dim", 1));
  if (s.dim != 1 && s.dim != 2)
    throw ValidationError("grid.dim must be 1 or 2");
  s.n = int(cfg.get_int("grid.n", 256));
  if (s.n < 8 || !is_pow2(s.n))
    throw ValidationError("grid.n must be a power of two >= 8");
  s.length = cfg.get_double("grid.length", 2.0 * pi);
  if (!(s.length > 0)) throw ValidationError("grid.length must be > 0");
  s.system = cfg.get_str("system", "abcd");
  static const char* systems[] = {"abcd",  "bathymetry", "fifth_order",
                                  "full_dispersion", "kaup", "eta_v",
                                  "mollified", "tilde"};
  if (std::find_if(std::begin(systems), std::end(systems), [&](const char* t) {
        return s.system == t;
      }) == std::end(systems))
    throw ValidationError("unknown system '" + s.system + "'");
  s.eps = cfg.get_double("eps", 0.1);
  if (!(s.eps > 0) || s.eps > 1.0)
    throw ValidationError("eps must lie in (0, 1]");
  if (s.dim == 2 && (s.system == "fifth_order" || s.system == "kaup" ||
                     s.system == "mollified"))
    throw ValidationError("system '" + s.system + "' is 1D only");

  const bool has_id = cfg.has("case.id");
  const bool has_coef = cfg.has("case.a") || cfg.has("case.b") ||
                        cfg.has("case.c") || cfg.has("case.d") ||
                        cfg.has("case.tau");
  if (has_id && has_coef)
    throw ValidationError("case.id excludes explicit case coefficients");
  if (has_id) {
    s.cp = case_by_id(int(cfg.get_int("case.id")), s.eps);
  } else {
    const double a = cfg.get_double("case.a", 0.0);
    const double b = cfg.get_double("case.b", 0.0);
    const double c = cfg.get_double("case.c", 0.0);
    const double d = cfg.get_double("case.d", 0.0);
    s.cp = cfg.has("case.tau")
               ? make_case_tau(a, b, c, d, cfg.get_double("case.tau"), s.eps)
               : make_case(a, b, c, d, s.eps);
  }

  s.fifth.base = s.cp;
  s.fifth.a1 = cfg.get_double("fifth.a1", 0.0);
  s.fifth.b1 = cfg.get_double("fifth.b1", 0.0);
  s.fifth.c1 = cfg.get_double("fifth.c1", 0.0);
  s.fifth.d1 = cfg.get_double("fifth.d1", 0.0);
  if (s.system == "fifth_order") s.fifth = validate_fifth(s.fifth);
  s.fd.eps = s.eps;
  s.fd.with_p_eps = cfg.get_bool("fd.with_p_eps", false);
  s.fd.beta = cfg.get_double("fd.beta", 0.0);
  if (s.system == "full_dispersion") s.fd = validate_fd(s.fd);
  s.kaup.eps = s.eps;
  s.kaup.allow_unstable_grid = cfg.get_bool("kaup.allow_unstable_grid", false);
  if (s.system == "kaup") s.kaup = validate_kaup(s.kaup);

  s.delta = cfg.get_double("delta", 0.1);
  if (s.system == "mollified" && !(s.delta > 0))
    throw ValidationError("delta must be > 0");
  s.bathy_amplitude = cfg.get_double("bathy.amplitude", 0.0);
  s.bathy_mode = int(cfg.get_int("bathy.mode", 1));
  if (s.system == "bathymetry" &&
      (s.bathy_mode < 0 || s.bathy_mode > s.n / 2 - 1))
    throw ValidationError("bathy.mode out of range for grid");
  s.tilde_drop_remainder = cfg.get_bool("tilde.drop_remainder", false);

  s.init.family = cfg.get_str("init.family", "gaussian_hump");
  s.init.amplitude = cfg.get_double("init.amplitude", 0.1);
  s.init.u_amplitude = cfg.get_double("init.u_amplitude", 0.0);
  s.init.width = cfg.get_double("init.width", 0.5);
  s.init.x0 = cfg.get_double("init.x0", -1.0);
  s.init.y0 = cfg.get_double("init.y0", -1.0);
  if (cfg.has("init.modes")) {
    s.init.modes.clear();
    for (double m : cfg.get_list("init.modes")) {
      const long k = std::lround(m);
      if (std::abs(m - k) > 1e-9)
        throw ValidationError("init.modes entries must be integers");
      s.init.modes.push_back(int(k));
    }
  }
  if (cfg.has("init.phases")) s.init.phases = cfg.get_list("init.phases");
  s.init.kmax = int(cfg.get_int("init.kmax", 8));
  s.init.envelope_p = cfg.get_double("init.envelope_p", 0.0);
  s.init.seed = std::uint64_t(cfg.get_int("init.seed", 1));
  s.init.curl_free = cfg.get_bool("init.curl_free", false);

  s.integ.scheme = scheme_from_name(cfg.get_str("integrator.scheme", "rk4_if"));
  s.integ.dt = cfg.get_double("integrator.dt", 1e-3);
  if (!(s.integ.dt > 0)) throw ValidationError("integrator.dt must be > 0");
  s.integ.t_end = cfg.get_double("integrator.t_end", 1.0);
  if (!(s.integ.t_end >= 0))
    throw ValidationError("integrator.t_end must be >= 0");
  s.integ.report_every = int(cfg.get_int("integrator.report_every", 10));
  if (s.integ.report_every < 0)
    throw ValidationError("integrator.report_every must be >= 0");

  s.monitor.factor = cfg.get_double("monitor.energy_factor", 16.0);
  if (!(s.monitor.factor > 0))
    throw ValidationError("monitor.energy_factor must be > 0");
  s.monitor.H = cfg.get_double("monitor.H", 0.5);
  if (!(s.monitor.H >= 0)) throw ValidationError("monitor.H must be >= 0");

  s.sobolev_s = cfg.get_double("sobolev.s", 1.6);
  s.outdir = cfg.get_str("output.dir", "out");
  s.save_final = cfg.get_bool("output.save_final", true);
  s.snapshot_every = int(cfg.get_int("output.snapshot_every", 0));
  if (s.snapshot_every < 0)
    throw ValidationError("output.snapshot_every must be >= 0");
  return s;
}

RunResult run_single(const RunSetup& setup) {
  GridPtr g = make_grid(setup.dim, setup.n, setup.length);
  State st = make_initial_data(g, setup.init);
  if (min_depth(st.eta, setup.eps) <= 0)
    throw ValidationError("initial data: 1 + eps eta must stay positive");
  System sys = build_system(setup, g);

  const std::string dir = resolve_output_dir(setup.outdir);
  ensure_dir(dir);
  const std::string csv_path = dir + "/diagnostics.csv";
  CsvWriter csv(csv_path);
  BlowupMonitor monitor(setup.monitor);

  RunResult res;
  res.csv_path = csv_path;
  res.manifest_path = dir + "/manifest.json";

  long steps = 0;
  double tlast = 0;
  long report_idx = 0;
  auto on_report = [&](int k, double t, const SpecVec& u) {
    const State cur = unpack_spectral(g, u, t, -1.0);
    EnergyReport r = make_report(setup, cur, t);
    const auto v = monitor.feed(r);
    csv.write_report(r, v ? v->reason : "");
    res.reports.push_back(r);
    steps = k;
    tlast = t;
    if (setup.snapshot_every > 0 && report_idx % setup.snapshot_every == 0)
      write_bsq1(dir + "/snap_" + std::to_string(k) + ".bsq1", cur, setup.eps);
    ++report_idx;
    return !v.has_value();
  };
  SpecVec u = evolve_spec(sys, setup.integ, pack_spectral(st), on_report);
  csv.close();

  res.steps = steps;
  res.final_state = unpack_spectral(g, u, tlast, -1.0);
  if (monitor.verdict()) {
    res.verdict = *monitor.verdict();
  } else {
    res.verdict.blowup = false;
    res.verdict.t = tlast;
  }
  if (setup.save_final)
    write_bsq1(dir + "/final.bsq1", res.final_state, setup.eps);

  nlohmann::json j;
  j["format"] = "bsq-manifest-1";
  j["command"] = "run";
  j["config_text"] = setup.raw.serialize();
  j["outputs"]["diagnostics"] = "diagnostics.csv";
  if (setup.save_final) j["outputs"]["final"] = "final.bsq1";
  j["result"]["steps"] = steps;
  j["result"]["t_last"] = tlast;
  j["result"]["blowup"] = res.verdict.blowup;
  j["result"]["verdict"] = res.verdict.reason;
  std::ofstream mf(res.manifest_path);
  if (!mf) throw Error("cannot write manifest '" + res.manifest_path + "'");
  mf << j.dump(2) << "\n";
  return res;
}

int cmd_run(const std::string& config_path) {
  try {
    Config cfg;
    if (config_path.size() > 5 &&
        config_path.substr(config_path.size() - 5) == ".json") {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open manifest '" + config_path + "'");
      nlohmann::json j;
      try {
        in >> j;
        cfg = Config::parse_text(j.at("config_text").get<std::string>());
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest '" + config_path + "': " +
                          std::string(e.what()));
      }
    } else {
      cfg = Config::parse_file(config_path);
    }
    const RunSetup su = build_run_setup(cfg);
    const RunResult res = run_single(su);
    std::cout << "run: steps=" << res.steps
              << " t=" << short_label(res.final_state.time);
    if (res.verdict.blowup)
      std::cout << " verdict=\"" << res.verdict.reason << "\" at t="
                << short_label(res.verdict.t);
    std::cout << "\n  diagnostics: " << res.csv_path
              << "\n  manifest:    " << res.manifest_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    return report_failure(e);
  }
}

int cmd_sweep_lifespan(const std::string& config_path,
                       const std::vector<double>& eps_list) {
  try {
    if (eps_list.empty())
      throw ValidationError("sweep-lifespan: need at least one eps value");
    Config base = Config::parse_file(config_path);
    (void)build_run_setup(base);  // key and semantics check before sweeping
    const double horizon = base.get_double("sweep.horizon", 1.0);
    if (!(horizon > 0)) throw ValidationError("sweep.horizon must be > 0");
    const std::string outdir = base.get_str("output.dir", "out");
    const std::string root = resolve_output_dir(outdir);
    ensure_dir(root);
    std::ofstream sum(root + "/lifespan.csv");
    if (!sum) throw Error("cannot write lifespan summary");
    sum << "eps,t_end,steps,verdict,e0,growth_max,c1\n";
    for (double eps : eps_list) {
      Config cfg = base;
      cfg.set("eps", format_double(eps));
      cfg.set("integrator.t_end", format_double(horizon / eps));
      cfg.set("output.dir", outdir + "/eps_" + short_label(eps));
      const RunSetup su = build_run_setup(cfg);
      const RunResult res = run_single(su);
      const EnergyFit f = fit_inverse_sqrt(res.reports, eps);
      sum << format_double(eps) << ',' << format_double(horizon / eps) << ','
          << res.steps << ','
          << (res.verdict.blowup ? res.verdict.reason : "") << ','
          << format_double(f.e0) << ',' << format_double(f.growth_max) << ','
          << format_double(f.c1) << '\n';
      std::cout << "eps=" << short_label(eps) << " t_end="
                << short_label(horizon / eps) << " growth="
                << short_label(f.growth_max) << " c1=" << short_label(f.c1);
      if (res.verdict.blowup)
        std::cout << " verdict=\"" << res.verdict.reason << "\"";
      std::cout << "\n";
    }
    std::cout << "summary: " << root << "/lifespan.csv\n";
    return 0;
  } catch (const std::exception& e) {
    return report_failure(e);
  }
}

int cmd_sweep_cauchy(const std::string& config_path,
                     const std::vector<double>& deltas) {
  try {
    if (deltas.size() < 2)
      throw ValidationError("sweep-cauchy: need at least two delta values");
    Config base = Config::parse_file(config_path);
    const RunSetup su = build_run_setup(base);
    if (su.dim != 1)
      throw ValidationError("sweep-cauchy: 1D configurations only");
    GridPtr g = make_grid(su.dim, su.n, su.length);
    const State s0 = make_initial_data(g, su.init);
    CauchyConfig cc;
    cc.deltas = deltas;
    cc.eps = su.eps;
    cc.dt = su.integ.dt;
    cc.t_end = su.integ.t_end;
    cc.report_every = su.integ.report_every;
    const CauchyResult cr = cauchy_study(s0, cc);

    const std::string root = resolve_output_dir(su.outdir);
    ensure_dir(root);
    std::ofstream out(root + "/cauchy.csv");
    if (!out) throw Error("cannot write cauchy summary");
    out << "delta_lo,delta_hi,dist\n";
    for (const auto& p : cr.pairs)
      out << format_double(p.delta_lo) << ',' << format_double(p.delta_hi)
          << ',' << format_double(p.dist) << '\n';

    nlohmann::json j;
    j["slope"] = cr.slope;
    j["intercept"] = cr.intercept;
    j["degenerate"] = cr.degenerate;
    std::vector<double> sorted = deltas;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    if (sorted.size() >= 3) {
      CauchyConfig lc = cc;
      lc.deltas = sorted;
      const LimitResult lr = limit_extract(s0, lc);
      j["limit"]["rate"] = lr.rate;
      j["limit"]["bar"] = lr.bar;
      j["limit"]["residual"] = lr.residual;
      j["limit"]["degenerate"] = lr.degenerate;
      j["limit"]["within_bar"] = lr.degenerate || lr.residual <= lr.bar;
    }
    std::ofstream js(root + "/cauchy_summary.json");
    js << j.dump(2) << "\n";
    std::cout << "cauchy: slope=" << short_label(cr.slope)
              << (cr.degenerate ? " (degenerate)" : "") << "\n  table: "
              << root << "/cauchy.csv\n";
    return 0;
  } catch (const std::exception& e) {
    return report_failure(e);
  }
}

int cmd_acceptance(const std::string& suite) {
  try {
    bool fast = false;
    const std::vector<int> ids = suite_criteria(suite, fast);
    bool all = true;
    for (int id : ids) {
      const CriterionResult r = run_criterion(id, fast);
      std::printf("%s  criterion %02d  %-34s %s [%.1fs]\n",
                  r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.detail.c_str(), r.seconds);
      std::fflush(stdout);
      all = all && r.pass;
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    return report_failure(e);
  }
}

}  // namespace bsq
