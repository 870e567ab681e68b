#include "bsq/integrator.hpp"

#include <cmath>
#include <string>

namespace bsq {

namespace {

// sinh(z)/z with a series fallback near the origin
cplx sinc_h(cplx z) {
  if (std::abs(z) < 1e-8) {
    const cplx z2 = z * z;
    return cplx(1, 0) + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

SpecVec zeros_like(const SpecVec& u) {
  SpecVec z(u.size());
  for (std::size_t k = 0; k < u.size(); ++k)
    z[k].assign(u[k].size(), cplx(0, 0));
  return z;
}

void axpy_spec(SpecVec& y, double a, const SpecVec& x) {
  for (std::size_t k = 0; k < y.size(); ++k)
    for (std::size_t i = 0; i < y[k].size(); ++i) y[k][i] += a * x[k][i];
}

SpecVec eval_nonlinear(const System& sys, const SpecVec& u) {
  if (!sys.nonlinear) return zeros_like(u);
  SpecVec out(u.size());
  sys.nonlinear(u, out);
  return out;
}

void fill_exponential(const System& sys, double dt, std::vector<cplx>& c,
                      std::vector<cplx>& sa, std::vector<cplx>& sb,
                      std::vector<std::vector<cplx>>& l) {
  if (sys.lin.form == LinearPart::Form::diagonal) {
    l.resize(sys.lin.lam.size());
    for (std::size_t k = 0; k < sys.lin.lam.size(); ++k) {
      l[k].resize(sys.lin.lam[k].size());
      for (std::size_t i = 0; i < l[k].size(); ++i)
        l[k][i] = std::exp(sys.lin.lam[k][i] * dt);
    }
    return;
  }
  const std::size_t m = sys.lin.alpha.size();
  c.resize(m);
  sa.resize(m);
  sb.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const cplx a = sys.lin.alpha[i], b = sys.lin.beta[i];
    const cplx z = std::sqrt(a * b) * dt;
    const cplx s = sinc_h(z) * dt;
    c[i] = std::cosh(z);
    sa[i] = a * s;
    sb[i] = b * s;
  }
}

}  // namespace

Scheme scheme_from_name(const std::string& name) {
  if (name == "rk4_if") return Scheme::rk4_if;
  if (name == "rk4_plain") return Scheme::rk4_plain;
  throw ValidationError("unknown integrator scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
  return s == Scheme::rk4_if ? "rk4_if" : "rk4_plain";
}

StepPlan make_step_plan(const System& sys, Scheme scheme, double dt) {
  if (!(dt > 0)) throw ParamError("step plan: dt must be > 0");
  StepPlan p;
  p.scheme = scheme;
  p.dt = dt;
  if (scheme == Scheme::rk4_plain) {
    if (dt * sys.omega_max > rk4_budget)
      throw StabilityError(
          "rk4_plain: dt * omega_max = " + std::to_string(dt * sys.omega_max) +
          " exceeds the stability budget " + std::to_string(rk4_budget));
    return p;
  }
  fill_exponential(sys, dt, p.full_c, p.full_sa, p.full_sb, p.full_l);
  fill_exponential(sys, 0.5 * dt, p.half_c, p.half_sa, p.half_sb, p.half_l);
  return p;
}

void apply_exponential(const System& sys, const StepPlan& p, bool half,
                       SpecVec& u) {
  const auto& c = half ? p.half_c : p.full_c;
  const auto& sa = half ? p.half_sa : p.full_sa;
  const auto& sb = half ? p.half_sb : p.full_sb;
  const auto& l = half ? p.half_l : p.full_l;
  switch (sys.lin.form) {
    case LinearPart::Form::wave2:
      for (std::size_t i = 0; i < u[0].size(); ++i) {
        const cplx e = u[0][i], v = u[1][i];
        u[0][i] = c[i] * e + sa[i] * v;
        u[1][i] = sb[i] * e + c[i] * v;
      }
      break;
    case LinearPart::Form::wave3: {
      const Grid& g = *sys.grid;
      for (int jy = 0; jy < g.n; ++jy)
        for (int jx = 0; jx < g.n; ++jx) {
          const std::size_t i = std::size_t(jy) * g.n + jx;
          const double x = g.xi[jx], y = g.xi[jy];
          const double r = std::sqrt(x * x + y * y);
          if (r == 0) continue;
          const double ex = x / r, ey = y / r;
          const cplx ppar = ex * u[1][i] + ey * u[2][i];
          const cplx q1 = u[1][i] - ex * ppar, q2 = u[2][i] - ey * ppar;
          const cplx e = u[0][i];
          const cplx en = c[i] * e + sa[i] * ppar;
          const cplx pn = sb[i] * e + c[i] * ppar;
          u[0][i] = en;
          u[1][i] = ex * pn + q1;
          u[2][i] = ey * pn + q2;
        }
      break;
    }
    case LinearPart::Form::diagonal:
      for (std::size_t k = 0; k < u.size(); ++k)
        for (std::size_t i = 0; i < u[k].size(); ++i) u[k][i] *= l[k][i];
      break;
  }
}

void step(const System& sys, const StepPlan& p, SpecVec& u) {
  const double dt = p.dt;
  if (p.scheme == Scheme::rk4_plain) {
    SpecVec k1 = rhs_spec(sys, u);
    SpecVec a = u;
    axpy_spec(a, 0.5 * dt, k1);
    SpecVec k2 = rhs_spec(sys, a);
    SpecVec b = u;
    axpy_spec(b, 0.5 * dt, k2);
    SpecVec k3 = rhs_spec(sys, b);
    SpecVec c = u;
    axpy_spec(c, dt, k3);
    SpecVec k4 = rhs_spec(sys, c);
    axpy_spec(u, dt / 6.0, k1);
    axpy_spec(u, dt / 3.0, k2);
    axpy_spec(u, dt / 3.0, k3);
    axpy_spec(u, dt / 6.0, k4);
    return;
  }
  // integrating-factor RK4: exact linear flow, RK4 on the nonlinearity
  SpecVec k1 = eval_nonlinear(sys, u);
  SpecVec uh = u;
  apply_exponential(sys, p, true, uh);  // exp(L dt/2) u
  SpecVec k1h = k1;
  apply_exponential(sys, p, true, k1h);
  SpecVec a = uh;
  axpy_spec(a, 0.5 * dt, k1h);
  SpecVec k2 = eval_nonlinear(sys, a);
  SpecVec b = uh;
  axpy_spec(b, 0.5 * dt, k2);
  SpecVec k3 = eval_nonlinear(sys, b);
  SpecVec uf = u;
  apply_exponential(sys, p, false, uf);  // exp(L dt) u
  SpecVec k3h = k3;
  apply_exponential(sys, p, true, k3h);
  SpecVec c = uf;
  axpy_spec(c, dt, k3h);
  SpecVec k4 = eval_nonlinear(sys, c);
  SpecVec k1f = k1;
  apply_exponential(sys, p, false, k1f);
  SpecVec k2h = k2;
  apply_exponential(sys, p, true, k2h);
  u = uf;
  axpy_spec(u, dt / 6.0, k1f);
  axpy_spec(u, dt / 3.0, k2h);
  axpy_spec(u, dt / 3.0, k3h);
  axpy_spec(u, dt / 6.0, k4);
}

SpecVec evolve_spec(
    const System& sys, const IntegratorConfig& cfg, SpecVec u0,
    const std::function<bool(int step, double t, const SpecVec&)>& on_report) {
  if (!(cfg.dt > 0)) throw ParamError("evolve: dt must be > 0");
  if (!(cfg.t_end >= 0)) throw ParamError("evolve: t_end must be >= 0");
  if (int(u0.size()) != sys.ncomp)
    throw FieldError("evolve: component count mismatch");
  const StepPlan plan = make_step_plan(sys, cfg.scheme, cfg.dt);
  int nfull = int(std::floor(cfg.t_end / cfg.dt + 1e-12));
  double rem = cfg.t_end - nfull * cfg.dt;
  if (rem < 1e-12 * cfg.dt) rem = 0;
  auto report = [&](int k, double t) {
    return !on_report || on_report(k, t, u0);
  };
  if (!report(0, 0.0)) return u0;
  for (int k = 1; k <= nfull; ++k) {
    step(sys, plan, u0);
    const bool due = cfg.report_every > 0 && k % cfg.report_every == 0;
    const bool at_end = k == nfull && rem == 0;
    if (due || at_end)
      if (!report(k, k * cfg.dt)) return u0;
  }
  if (rem > 0) {
    const StepPlan tail = make_step_plan(sys, cfg.scheme, rem);
    step(sys, tail, u0);
    report(nfull + 1, cfg.t_end);
  }
  return u0;
}

}  // namespace bsq
