#include "bsq/systems.hpp"

#include <cmath>
#include <memory>

#include "bsq/fft.hpp"

namespace bsq {

namespace {

using CVec = std::vector<cplx>;

CVec phys(const Grid& g, const CVec& hat) { return fft::inverse_c(g, hat); }
CVec hatof(const Grid& g, const CVec& vals) { return fft::forward_c(g, vals); }

// real-even symbol tables
CVec table(const Grid& g, const std::function<cplx(double, double)>& f) {
  CVec t(g.size());
  if (g.dim == 1) {
    for (int j = 0; j < g.n; ++j) t[j] = f(g.xi[j], 0.0);
  } else {
    for (int jy = 0; jy < g.n; ++jy)
      for (int jx = 0; jx < g.n; ++jx)
        t[std::size_t(jy) * g.n + jx] = f(g.xi[jx], g.xi[jy]);
  }
  return t;
}

CVec mul_tab(const CVec& t, const CVec& a) {
  CVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = t[i] * a[i];
  return out;
}

void add_scaled(CVec& acc, const cplx& w, const CVec& x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * x[i];
}

// dealiased pointwise product of two spectra
CVec pmul(const Grid& g, const CVec& ahat, const CVec& bhat, bool deal) {
  CVec a = phys(g, ahat), b = phys(g, bhat);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  CVec out = hatof(g, a);
  if (deal) dealias_spec(g, out);
  return out;
}

double mu_max(const CVec& alpha, const CVec& beta) {
  double m = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    m = std::max(m, std::abs(std::sqrt(alpha[i] * beta[i])));
  return m;
}

struct AbcdTables {
  CVec ik_x, ik_y;        // i xi_j per axis (ik_y empty in 1D)
  CVec inv_mb, inv_md;    // 1/(1 + b eps |xi|^2), 1/(1 + d eps |xi|^2)
};

AbcdTables make_abcd_tables(const Grid& g, double b, double d, double eps) {
  AbcdTables t;
  t.ik_x = table(g, [](double x, double) { return cplx(0, x); });
  if (g.dim == 2) t.ik_y = table(g, [](double, double y) { return cplx(0, y); });
  t.inv_mb = table(g, [b, eps](double x, double y) {
    return cplx(1.0 / (1.0 + b * eps * (x * x + y * y)), 0);
  });
  t.inv_md = table(g, [d, eps](double x, double y) {
    return cplx(1.0 / (1.0 + d * eps * (x * x + y * y)), 0);
  });
  return t;
}

void fill_wave_linear(System& sys, const Grid& g, double a, double b, double c,
                      double d, double eps) {
  // per-mode pair coupling: eta' = alpha u_par, u_par' = beta eta with
  // alpha = -i|xi| (1 - a eps |xi|^2)/(1 + b eps |xi|^2), beta likewise c/d.
  auto ga = [&](double r2) { return 1.0 - a * eps * r2; };
  auto gc = [&](double r2) { return 1.0 - c * eps * r2; };
  auto mb = [&](double r2) { return 1.0 + b * eps * r2; };
  auto md = [&](double r2) { return 1.0 + d * eps * r2; };
  if (g.dim == 1) {
    sys.lin.form = LinearPart::Form::wave2;
    sys.lin.alpha = table(g, [&](double x, double) {
      return cplx(0, -x * ga(x * x) / mb(x * x));
    });
    sys.lin.beta = table(g, [&](double x, double) {
      return cplx(0, -x * gc(x * x) / md(x * x));
    });
  } else {
    sys.lin.form = LinearPart::Form::wave3;
    sys.lin.alpha = table(g, [&](double x, double y) {
      const double r2 = x * x + y * y;
      return cplx(0, -std::sqrt(r2) * ga(r2) / mb(r2));
    });
    sys.lin.beta = table(g, [&](double x, double y) {
      const double r2 = x * x + y * y;
      return cplx(0, -std::sqrt(r2) * gc(r2) / md(r2));
    });
  }
  sys.omega_max = mu_max(sys.lin.alpha, sys.lin.beta);
}

void check_grid(const GridPtr& g) {
  if (!g) throw ParamError("system: null grid");
}

CVec real_to_cvec(const Field& f) {
  CVec out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

// shared quadratic transport + gradient nonlinearity of the plain families:
//   N_eta = -eps M_b^{-1} div(flux_eta * u),  N_u = -eps M_d^{-1} grad(|u|^2/2)
// with optional elevation offset (bottom profile) in the flux.
struct TransportNl {
  GridPtr g;
  double eps;
  bool deal;
  AbcdTables t;
  std::shared_ptr<CVec> beta_phys;  // optional bottom values

  void operator()(const SpecVec& in, SpecVec& out) const {
    const Grid& gr = *g;
    CVec eta = phys(gr, in[0]);
    if (beta_phys)
      for (std::size_t i = 0; i < eta.size(); ++i) eta[i] -= (*beta_phys)[i];
    const CVec etah = hatof(gr, eta);
    if (gr.dim == 1) {
      CVec flux = pmul(gr, etah, in[1], deal);
      out[0] = mul_tab(t.inv_mb, mul_tab(t.ik_x, flux));
      for (auto& c : out[0]) c *= -eps;
      CVec q = pmul(gr, in[1], in[1], deal);
      out[1] = mul_tab(t.inv_md, mul_tab(t.ik_x, q));
      for (auto& c : out[1]) c *= -0.5 * eps;
    } else {
      CVec f1 = pmul(gr, etah, in[1], deal);
      CVec f2 = pmul(gr, etah, in[2], deal);
      out[0] = mul_tab(t.ik_x, f1);
      add_scaled(out[0], 1.0, mul_tab(t.ik_y, f2));
      out[0] = mul_tab(t.inv_mb, out[0]);
      for (auto& c : out[0]) c *= -eps;
      // |u|^2/2 is one quadratic product: dealias once after the sum
      CVec u1 = phys(gr, in[1]), u2 = phys(gr, in[2]);
      CVec q(u1.size());
      for (std::size_t i = 0; i < q.size(); ++i)
        q[i] = 0.5 * (u1[i] * u1[i] + u2[i] * u2[i]);
      CVec qh = hatof(gr, q);
      if (deal) dealias_spec(gr, qh);
      out[1] = mul_tab(t.inv_md, mul_tab(t.ik_x, qh));
      out[2] = mul_tab(t.inv_md, mul_tab(t.ik_y, qh));
      for (auto& c : out[1]) c *= -eps;
      for (auto& c : out[2]) c *= -eps;
    }
  }
};

void zero_like(const SpecVec& in, SpecVec& out) {
  out.assign(in.size(), CVec(in.empty() ? 0 : in[0].size(), cplx(0, 0)));
}

}  // namespace

SpecVec apply_linear(const System& sys, const SpecVec& u) {
  const Grid& g = *sys.grid;
  SpecVec out;
  zero_like(u, out);
  switch (sys.lin.form) {
    case LinearPart::Form::wave2:
      out[0] = mul_tab(sys.lin.alpha, u[1]);
      out[1] = mul_tab(sys.lin.beta, u[0]);
      break;
    case LinearPart::Form::wave3: {
      for (int jy = 0; jy < g.n; ++jy)
        for (int jx = 0; jx < g.n; ++jx) {
          const std::size_t i = std::size_t(jy) * g.n + jx;
          const double xx = g.xi[jx], yy = g.xi[jy];
          const double r = std::sqrt(xx * xx + yy * yy);
          if (r == 0.0) continue;
          const double ex = xx / r, ey = yy / r;
          const cplx par = ex * u[1][i] + ey * u[2][i];
          out[0][i] = sys.lin.alpha[i] * par;
          const cplx du = sys.lin.beta[i] * u[0][i];
          out[1][i] = ex * du;
          out[2][i] = ey * du;
        }
      break;
    }
    case LinearPart::Form::diagonal:
      for (std::size_t c = 0; c < u.size(); ++c)
        out[c] = mul_tab(sys.lin.lam[c], u[c]);
      break;
  }
  return out;
}

SpecVec rhs_spec(const System& sys, const SpecVec& u) {
  if (int(u.size()) != sys.ncomp)
    throw FieldError(sys.name + ": component count mismatch");
  SpecVec out = apply_linear(sys, u);
  if (sys.nonlinear) {
    SpecVec nl;
    zero_like(u, nl);
    sys.nonlinear(u, nl);
    for (int c = 0; c < sys.ncomp; ++c) add_scaled(out[c], 1.0, nl[c]);
  }
  return out;
}

System make_system_abcd(GridPtr g, const CaseParams& p, SystemOptions opt) {
  check_grid(g);
  const CaseParams q = validate_params(p);
  System sys;
  sys.name = "abcd";
  sys.grid = g;
  sys.ncomp = g->dim + 1;
  fill_wave_linear(sys, *g, q.a, q.b, q.c, q.d, q.eps);
  if (!opt.linear_only) {
    TransportNl nl{g, q.eps, opt.dealias, make_abcd_tables(*g, q.b, q.d, q.eps),
                   nullptr};
    sys.nonlinear = nl;
  }
  return sys;
}

System make_system_bathymetry(GridPtr g, const CaseParams& p,
                              const Field& beta, SystemOptions opt) {
  check_grid(g);
  const CaseParams q = validate_params(p);
  if (!beta.grid || !same_grid(*beta.grid, *g))
    throw FieldError("bathymetry: bottom profile grid mismatch");
  require_finite(beta, "bathymetry bottom");
  System sys = make_system_abcd(g, q, SystemOptions{opt.dealias, true});
  sys.name = "bathymetry";
  if (!opt.linear_only) {
    TransportNl nl{g, q.eps, opt.dealias, make_abcd_tables(*g, q.b, q.d, q.eps),
                   std::make_shared<CVec>(real_to_cvec(beta))};
    sys.nonlinear = nl;
  }
  return sys;
}

System make_system_fifth(GridPtr g, const FifthParams& pf, SystemOptions opt) {
  check_grid(g);
  if (g->dim != 1) throw CaseError("fifth: 1D only");
  const FifthParams q = validate_fifth(pf);
  const double a = q.base.a, b = q.base.b, c = q.base.c, d = q.base.d;
  const double eps = q.base.eps;
  System sys;
  sys.name = "fifth";
  sys.grid = g;
  sys.ncomp = 2;
  sys.lin.form = LinearPart::Form::wave2;
  auto Mb = [&](double r2) { return 1.0 + b * eps * r2 + q.b1 * eps * eps * r2 * r2; };
  auto Md = [&](double r2) { return 1.0 + d * eps * r2 + q.d1 * eps * eps * r2 * r2; };
  auto Ga = [&](double r2) { return 1.0 - a * eps * r2 + q.a1 * eps * eps * r2 * r2; };
  auto Gc = [&](double r2) { return 1.0 - c * eps * r2 + q.c1 * eps * eps * r2 * r2; };
  sys.lin.alpha = table(*g, [&](double x, double) {
    return cplx(0, -x * Ga(x * x) / Mb(x * x));
  });
  sys.lin.beta = table(*g, [&](double x, double) {
    return cplx(0, -x * Gc(x * x) / Md(x * x));
  });
  sys.omega_max = mu_max(sys.lin.alpha, sys.lin.beta);
  if (!opt.linear_only) {
    const bool deal = opt.dealias;
    CVec ik = table(*g, [](double x, double) { return cplx(0, x); });
    CVec r2t = table(*g, [](double x, double) { return cplx(x * x, 0); });
    CVec inv_Mb = table(*g, [&](double x, double) { return cplx(1.0 / Mb(x * x), 0); });
    CVec inv_Md = table(*g, [&](double x, double) { return cplx(1.0 / Md(x * x), 0); });
    CVec one_b = table(*g, [&](double x, double) { return cplx(1.0 + b * eps * x * x, 0); });
    CVec one_c = table(*g, [&](double x, double) { return cplx(1.0 - c * eps * x * x, 0); });
    GridPtr gp = g;
    sys.nonlinear = [=](const SpecVec& in, SpecVec& out) {
      const Grid& gr = *gp;
      const CVec& etah = in[0];
      const CVec& uh = in[1];
      CVec uxh = mul_tab(ik, uh);
      CVec uxxh(uh.size()), uxxxh(uh.size()), etaxxh(uh.size());
      for (std::size_t i = 0; i < uh.size(); ++i) {
        uxxh[i] = -r2t[i].real() * uh[i];
        uxxxh[i] = -r2t[i].real() * uxh[i];
        etaxxh[i] = -r2t[i].real() * etah[i];
      }
      // first equation: eps (1 - b eps dxx)(eta u)_x + (a+b-1/3) eps^2 (eta u_xx)_x
      CVec t1 = mul_tab(ik, pmul(gr, etah, uh, deal));
      CVec t2 = mul_tab(ik, pmul(gr, etah, uxxh, deal));
      out[0] = mul_tab(one_b, t1);
      for (auto& x : out[0]) x *= eps;
      add_scaled(out[0], (a + b - 1.0 / 3.0) * eps * eps, t2);
      out[0] = mul_tab(inv_Mb, out[0]);
      for (auto& x : out[0]) x = -x;
      // second: eps (1 + c eps dxx)(u u_x) + eps^2 (eta eta_xx)_x
      //         - (c+d-1) eps^2 u_x u_xx - (c+d) eps^2 u u_xxx
      CVec s1 = pmul(gr, uh, uxh, deal);
      CVec s2 = mul_tab(ik, pmul(gr, etah, etaxxh, deal));
      CVec s3 = pmul(gr, uxh, uxxh, deal);
      CVec s4 = pmul(gr, uh, uxxxh, deal);
      out[1] = mul_tab(one_c, s1);
      for (auto& x : out[1]) x *= eps;
      add_scaled(out[1], eps * eps, s2);
      add_scaled(out[1], -(c + d - 1.0) * eps * eps, s3);
      add_scaled(out[1], -(c + d) * eps * eps, s4);
      out[1] = mul_tab(inv_Md, out[1]);
      for (auto& x : out[1]) x = -x;
    };
  }
  return sys;
}

System make_system_fd(GridPtr g, const FdParams& pf, SystemOptions opt) {
  check_grid(g);
  const FdParams q = validate_fd(pf);
  System sys;
  sys.name = "full_dispersion";
  sys.grid = g;
  sys.ncomp = g->dim + 1;
  const double eps = q.eps;
  const double se = std::sqrt(eps);
  auto sym = [se, q, eps](double r) {
    const double z = se * r;
    const double t = z == 0.0 ? 1.0 : std::tanh(z) / z;
    return q.with_p_eps ? std::sqrt(1.0 + q.beta * eps * r * r) * t : t;
  };
  if (g->dim == 1) {
    sys.lin.form = LinearPart::Form::wave2;
    sys.lin.alpha = table(*g, [&](double x, double) {
      return cplx(0, -x * sym(std::abs(x)));
    });
    sys.lin.beta = table(*g, [](double x, double) { return cplx(0, -x); });
  } else {
    sys.lin.form = LinearPart::Form::wave3;
    sys.lin.alpha = table(*g, [&](double x, double y) {
      const double r = std::sqrt(x * x + y * y);
      return cplx(0, -r * sym(r));
    });
    sys.lin.beta = table(*g, [](double x, double y) {
      return cplx(0, -std::sqrt(x * x + y * y));
    });
  }
  sys.omega_max = mu_max(sys.lin.alpha, sys.lin.beta);
  if (!opt.linear_only) {
    TransportNl nl{g, eps, opt.dealias, make_abcd_tables(*g, 0, 0, eps),
                   nullptr};
    sys.nonlinear = nl;
  }
  return sys;
}

System make_system_kaup(GridPtr g, const KaupParams& pk, SystemOptions opt) {
  check_grid(g);
  if (g->dim != 1) throw CaseError("kaup: 1D only");
  const KaupParams q = validate_kaup(pk);
  const double nyq2 = g->nyquist() * g->nyquist();
  if (nyq2 > 3.0 / q.eps * (1.0 + 1e-12) && !q.allow_unstable_grid)
    throw ResolutionError(
        "kaup: grid resolves linearly unstable modes (Nyquist^2 > 3/eps); "
        "coarsen the grid, shrink eps, or set the override flag");
  System sys;
  sys.name = "kaup";
  sys.grid = g;
  sys.ncomp = 2;
  sys.lin.form = LinearPart::Form::wave2;
  const double eps = q.eps;
  sys.lin.alpha = table(*g, [eps](double x, double) {
    return cplx(0, -x * (1.0 - eps * x * x / 3.0));
  });
  sys.lin.beta = table(*g, [](double x, double) { return cplx(0, -x); });
  sys.omega_max = mu_max(sys.lin.alpha, sys.lin.beta);
  if (!opt.linear_only) {
    TransportNl nl{g, eps, opt.dealias, make_abcd_tables(*g, 0, 0, eps),
                   nullptr};
    sys.nonlinear = nl;
  }
  return sys;
}

namespace {

void check_h_positive(const CVec& h) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i].real() <= 1e-12)
      throw CavitationError("eta_v: 1 + eps eta vanished at node " +
                            std::to_string(i));
}

// velocity-flux nonlinearity, optionally mollified (phi empty = plain)
struct EtaVNl {
  GridPtr g;
  double eps;
  bool deal;
  CVec phi;      // smoothing table (may be empty)
  CVec jsq_ikx;  // (1+eps|xi|^2) i xi_x
  CVec jsq_iky;
  CVec ik_x, ik_y;

  CVec smooth(const CVec& a, int pow) const {
    if (phi.empty()) return a;
    CVec out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (int k = 0; k < pow; ++k) out[i] *= phi[i];
    return out;
  }

  void operator()(const SpecVec& in, SpecVec& out) const {
    const Grid& gr = *g;
    if (gr.dim == 1) {
      const CVec etaJh = smooth(in[0], 1);
      CVec etaJ = phys(gr, etaJh);
      CVec h = etaJ;
      for (auto& x : h) x = 1.0 + eps * x;
      check_h_positive(h);
      // quadratic part of -(1+eps J eta)(1-eps dxx)(J eta)_x
      CVec P = phys(gr, mul_tab(jsq_ikx, etaJh));
      CVec w1(P.size());
      for (std::size_t i = 0; i < P.size(); ++i) w1[i] = etaJ[i] * P[i];
      CVec w1h = hatof(gr, w1);
      if (deal) dealias_spec(gr, w1h);
      // J^2 ( (J^2 v)^2 / h )_x
      const CVec vJh = smooth(in[1], 2);
      CVec q = pmul(gr, vJh, vJh, deal);
      CVec qp = phys(gr, q);
      for (std::size_t i = 0; i < qp.size(); ++i) qp[i] /= h[i];
      CVec qh = hatof(gr, qp);
      if (deal) dealias_spec(gr, qh);
      qh = smooth(mul_tab(ik_x, qh), 2);
      out[0].assign(in[0].size(), cplx(0, 0));
      out[1] = w1h;
      for (std::size_t i = 0; i < out[1].size(); ++i)
        out[1][i] = -eps * (w1h[i] + qh[i]);
    } else {
      // plain 2D form (no smoothing ladder in 2D)
      CVec eta = phys(gr, in[0]);
      CVec h = eta;
      for (auto& x : h) x = 1.0 + eps * x;
      check_h_positive(h);
      CVec P1 = phys(gr, mul_tab(jsq_ikx, in[0]));
      CVec P2 = phys(gr, mul_tab(jsq_iky, in[0]));
      CVec v1 = phys(gr, in[1]), v2 = phys(gr, in[2]);
      CVec W1(v1.size()), W2(v2.size());
      for (std::size_t i = 0; i < v1.size(); ++i) {
        W1[i] = v1[i] / h[i];
        W2[i] = v2[i] / h[i];
      }
      CVec W1h = hatof(gr, W1), W2h = hatof(gr, W2);
      if (deal) {
        dealias_spec(gr, W1h);
        dealias_spec(gr, W2h);
      }
      // B_i = d1(W_i v1) + d2(W_i v2)
      CVec B1 = mul_tab(ik_x, pmul(gr, W1h, in[1], deal));
      add_scaled(B1, 1.0, mul_tab(ik_y, pmul(gr, W1h, in[2], deal)));
      CVec B2 = mul_tab(ik_x, pmul(gr, W2h, in[1], deal));
      add_scaled(B2, 1.0, mul_tab(ik_y, pmul(gr, W2h, in[2], deal)));
      CVec w11(P1.size()), w12(P2.size());
      for (std::size_t i = 0; i < P1.size(); ++i) {
        w11[i] = eta[i] * P1[i];
        w12[i] = eta[i] * P2[i];
      }
      CVec w11h = hatof(gr, w11), w12h = hatof(gr, w12);
      if (deal) {
        dealias_spec(gr, w11h);
        dealias_spec(gr, w12h);
      }
      out[0].assign(in[0].size(), cplx(0, 0));
      out[1].resize(in[1].size());
      out[2].resize(in[2].size());
      for (std::size_t i = 0; i < in[1].size(); ++i) {
        out[1][i] = -eps * (w11h[i] + B1[i]);
        out[2][i] = -eps * (w12h[i] + B2[i]);
      }
    }
  }
};

}  // namespace

System make_system_eta_v(GridPtr g, double eps, SystemOptions opt) {
  check_grid(g);
  if (!(eps > 0) || eps > 1.0)
    throw ValidationError("eta_v: eps must lie in (0, 1]");
  System sys;
  sys.name = "eta_v";
  sys.grid = g;
  sys.ncomp = g->dim + 1;
  // linearization about rest: eta' = -div v, v' = -(1 - eps Lap) grad eta
  if (g->dim == 1) {
    sys.lin.form = LinearPart::Form::wave2;
    sys.lin.alpha = table(*g, [](double x, double) { return cplx(0, -x); });
    sys.lin.beta = table(*g, [eps](double x, double) {
      return cplx(0, -x * (1.0 + eps * x * x));
    });
  } else {
    sys.lin.form = LinearPart::Form::wave3;
    sys.lin.alpha = table(*g, [](double x, double y) {
      return cplx(0, -std::sqrt(x * x + y * y));
    });
    sys.lin.beta = table(*g, [eps](double x, double y) {
      const double r2 = x * x + y * y;
      return cplx(0, -std::sqrt(r2) * (1.0 + eps * r2));
    });
  }
  sys.omega_max = mu_max(sys.lin.alpha, sys.lin.beta);
  if (!opt.linear_only) {
    EtaVNl nl;
    nl.g = g;
    nl.eps = eps;
    nl.deal = opt.dealias;
    nl.jsq_ikx = table(*g, [eps](double x, double y) {
      return cplx(0, x * (1.0 + eps * (x * x + y * y)));
    });
    if (g->dim == 2)
      nl.jsq_iky = table(*g, [eps](double x, double y) {
        return cplx(0, y * (1.0 + eps * (x * x + y * y)));
      });
    nl.ik_x = table(*g, [](double x, double) { return cplx(0, x); });
    if (g->dim == 2)
      nl.ik_y = table(*g, [](double, double y) { return cplx(0, y); });
    sys.nonlinear = nl;
  }
  return sys;
}

System make_system_mollified(GridPtr g, double eps, double delta,
                             SystemOptions opt) {
  check_grid(g);
  if (g->dim != 1) throw CaseError("mollified: 1D only");
  if (!(eps > 0) || eps > 1.0)
    throw ValidationError("mollified: eps must lie in (0, 1]");
  if (!(delta >= 0))
    throw ValidationError("mollified: delta must be nonnegative");
  System sys;
  sys.name = "mollified";
  sys.grid = g;
  sys.ncomp = 2;
  CVec phi = table(*g, [delta](double x, double y) {
    return cplx(bump_phi(delta * std::sqrt(x * x + y * y)), 0);
  });
  sys.lin.form = LinearPart::Form::wave2;
  sys.lin.alpha = table(*g, [](double x, double) { return cplx(0, -x); });
  sys.lin.beta = table(*g, [eps](double x, double) {
    return cplx(0, -x * (1.0 + eps * x * x));
  });
  for (std::size_t i = 0; i < phi.size(); ++i) {
    sys.lin.alpha[i] *= phi[i];
    sys.lin.beta[i] *= phi[i];
  }
  sys.omega_max = mu_max(sys.lin.alpha, sys.lin.beta);
  if (!opt.linear_only) {
    EtaVNl nl;
    nl.g = g;
    nl.eps = eps;
    nl.deal = opt.dealias;
    nl.phi = phi;
    nl.jsq_ikx = table(*g, [eps](double x, double) {
      return cplx(0, x * (1.0 + eps * x * x));
    });
    nl.ik_x = table(*g, [](double x, double) { return cplx(0, x); });
    sys.nonlinear = nl;
  }
  return sys;
}

System make_system_tilde(GridPtr g, double eps, bool drop_remainder,
                         SystemOptions opt) {
  check_grid(g);
  if (!(eps > 0) || eps > 1.0)
    throw ValidationError("tilde: eps must lie in (0, 1]");
  System sys;
  sys.name = "tilde";
  sys.grid = g;
  sys.ncomp = g->dim + 1;
  // same dispersion as the a=-1, b=c=d=0 family
  fill_wave_linear(sys, *g, -1.0, 0.0, 0.0, 0.0, eps);
  if (!opt.linear_only) {
    const bool deal = opt.dealias;
    GridPtr gp = g;
    CVec ikx = table(*g, [](double x, double) { return cplx(0, x); });
    CVec iky = g->dim == 2
                   ? table(*g, [](double, double y) { return cplx(0, y); })
                   : CVec();
    CVec jinv2 = table(*g, [eps](double x, double y) {
      return cplx(1.0 / (1.0 + eps * (x * x + y * y)), 0);
    });
    CVec neglap = table(*g, [](double x, double y) {
      return cplx(-(x * x + y * y), 0);
    });
    sys.nonlinear = [=](const SpecVec& in, SpecVec& out) {
      const Grid& gr = *gp;
      if (gr.dim == 1) {
        // -eps (tilde-eta u)_x  [+ eps^2 (2 eta_xx u_x + 3 eta_x u_xx + eta u_xxx)]
        out[0] = mul_tab(ikx, pmul(gr, in[0], in[1], deal));
        for (auto& x : out[0]) x *= -eps;
        if (!drop_remainder) {
          CVec etah = mul_tab(jinv2, in[0]);
          CVec etaxh = mul_tab(ikx, etah);
          CVec etaxxh = mul_tab(neglap, etah);
          CVec uxh = mul_tab(ikx, in[1]);
          CVec uxxh = mul_tab(neglap, in[1]);
          CVec uxxxh = mul_tab(neglap, uxh);
          add_scaled(out[0], 2.0 * eps * eps, pmul(gr, etaxxh, uxh, deal));
          add_scaled(out[0], 3.0 * eps * eps, pmul(gr, etaxh, uxxh, deal));
          add_scaled(out[0], eps * eps, pmul(gr, etah, uxxxh, deal));
        }
        CVec q = pmul(gr, in[1], in[1], deal);
        out[1] = mul_tab(ikx, q);
        for (auto& x : out[1]) x *= -0.5 * eps;
      } else {
        CVec f1 = pmul(gr, in[0], in[1], deal);
        CVec f2 = pmul(gr, in[0], in[2], deal);
        out[0] = mul_tab(ikx, f1);
        add_scaled(out[0], 1.0, mul_tab(iky, f2));
        for (auto& x : out[0]) x *= -eps;
        if (!drop_remainder) {
          // -eps^2 div(u Lap eta) + eps^2 Lap div(eta u),  eta = J^{-2} tilde
          CVec etah = mul_tab(jinv2, in[0]);
          CVec lap_eta = mul_tab(neglap, etah);
          CVec r1 = mul_tab(ikx, pmul(gr, in[1], lap_eta, deal));
          add_scaled(r1, 1.0, mul_tab(iky, pmul(gr, in[2], lap_eta, deal)));
          CVec r2 = mul_tab(ikx, pmul(gr, etah, in[1], deal));
          add_scaled(r2, 1.0, mul_tab(iky, pmul(gr, etah, in[2], deal)));
          r2 = mul_tab(neglap, r2);
          add_scaled(out[0], -eps * eps, r1);
          add_scaled(out[0], eps * eps, r2);
        }
        CVec u1 = phys(gr, in[1]), u2 = phys(gr, in[2]);
        CVec q(u1.size());
        for (std::size_t i = 0; i < q.size(); ++i)
          q[i] = 0.5 * (u1[i] * u1[i] + u2[i] * u2[i]);
        CVec qh = hatof(gr, q);
        if (deal) dealias_spec(gr, qh);
        out[1] = mul_tab(ikx, qh);
        out[2] = mul_tab(iky, qh);
        for (auto& x : out[1]) x *= -eps;
        for (auto& x : out[2]) x *= -eps;
      }
    };
  }
  return sys;
}

namespace {

struct Diag1Tables {
  CVec ik, jt, jti;  // i xi, (1+eps xi^2)^{1/2}, inverse
};

Diag1Tables diag1_tables(const Grid& g, double eps) {
  Diag1Tables t;
  t.ik = table(g, [](double x, double) { return cplx(0, x); });
  t.jt = table(g, [eps](double x, double) {
    return cplx(std::sqrt(1.0 + eps * x * x), 0);
  });
  t.jti = table(g, [eps](double x, double) {
    return cplx(1.0 / std::sqrt(1.0 + eps * x * x), 0);
  });
  return t;
}

}  // namespace

System make_system_diag1(GridPtr g, double eps, DiagRoute r,
                         SystemOptions opt) {
  check_grid(g);
  if (g->dim != 1) throw CaseError("diag1: 1D only");
  if (!(eps > 0) || eps > 1.0)
    throw ValidationError("diag1: eps must lie in (0, 1]");
  System sys;
  sys.name = r == DiagRoute::a_neg ? "diag1_a" : "diag1_c";
  sys.grid = g;
  sys.ncomp = 2;
  sys.lin.form = LinearPart::Form::diagonal;
  sys.lin.lam.resize(2);
  sys.lin.lam[0] = table(*g, [eps](double x, double) {
    return cplx(0, -x * std::sqrt(1.0 + eps * x * x));
  });
  sys.lin.lam[1] = table(*g, [eps](double x, double) {
    return cplx(0, x * std::sqrt(1.0 + eps * x * x));
  });
  double m = 0;
  for (const auto& l : sys.lin.lam[0]) m = std::max(m, std::abs(l));
  sys.omega_max = m;
  if (!opt.linear_only) {
    const bool deal = opt.dealias;
    GridPtr gp = g;
    Diag1Tables t = diag1_tables(*g, eps);
    const bool aneg = r == DiagRoute::a_neg;
    sys.nonlinear = [=](const SpecVec& in, SpecVec& out) {
      const Grid& gr = *gp;
      CVec sumh = in[0];  // zeta + v
      add_scaled(sumh, 1.0, in[1]);
      CVec diffh = in[0];
      add_scaled(diffh, -1.0, in[1]);
      CVec bh = mul_tab(t.jti, diffh);  // J^{-1}(zeta - v)
      if (aneg) {
        // N1/N2 = d_x[(z+v) J^{-1}(z-v)] +/- J[ J^{-1}(z-v) d_x J^{-1}(z-v) ]
        CVec term1 = mul_tab(t.ik, pmul(gr, sumh, bh, deal));
        CVec bxh = mul_tab(t.ik, bh);
        CVec term2 = mul_tab(t.jt, pmul(gr, bh, bxh, deal));
        out[0].resize(term1.size());
        out[1].resize(term1.size());
        for (std::size_t i = 0; i < term1.size(); ++i) {
          out[0][i] = -0.5 * eps * (term1[i] + term2[i]);
          out[1][i] = -0.5 * eps * (term1[i] - term2[i]);
        }
      } else {
        // N1/N2 = +/- d_x J[(z+v) J^{-1}(z-v)] + (z+v)(z+v)_x
        CVec term1 = mul_tab(t.ik, mul_tab(t.jt, pmul(gr, sumh, bh, deal)));
        CVec q = pmul(gr, sumh, sumh, deal);
        CVec term2 = mul_tab(t.ik, q);
        for (auto& x : term2) x *= 0.5;
        out[0].resize(term1.size());
        out[1].resize(term1.size());
        for (std::size_t i = 0; i < term1.size(); ++i) {
          out[0][i] = -0.5 * eps * (term1[i] + term2[i]);
          out[1][i] = -0.5 * eps * (-term1[i] + term2[i]);
        }
      }
    };
  }
  return sys;
}

System make_system_diag2(GridPtr g, double eps, DiagRoute r,
                         SystemOptions opt) {
  check_grid(g);
  if (g->dim != 2) throw CaseError("diag2: 2D only");
  if (!(eps > 0) || eps > 1.0)
    throw ValidationError("diag2: eps must lie in (0, 1]");
  System sys;
  sys.name = r == DiagRoute::a_neg ? "diag2_a" : "diag2_c";
  sys.grid = g;
  sys.ncomp = 3;
  sys.lin.form = LinearPart::Form::diagonal;
  sys.lin.lam.resize(3);
  sys.lin.lam[0].assign(g->size(), cplx(0, 0));
  sys.lin.lam[1] = table(*g, [eps](double x, double y) {
    const double rr = std::sqrt(x * x + y * y);
    return cplx(0, -rr * std::sqrt(1.0 + eps * rr * rr));
  });
  sys.lin.lam[2] = table(*g, [eps](double x, double y) {
    const double rr = std::sqrt(x * x + y * y);
    return cplx(0, rr * std::sqrt(1.0 + eps * rr * rr));
  });
  double m = 0;
  for (const auto& l : sys.lin.lam[1]) m = std::max(m, std::abs(l));
  sys.omega_max = m;
  if (!opt.linear_only) {
    const bool deal = opt.dealias;
    GridPtr gp = g;
    CVec ikx = table(*g, [](double x, double) { return cplx(0, x); });
    CVec iky = table(*g, [](double, double y) { return cplx(0, y); });
    CVec r1 = table(*g, [](double x, double y) {
      const double rr = std::sqrt(x * x + y * y);
      return rr == 0 ? cplx(0, 0) : cplx(0, x / rr);
    });
    CVec r2 = table(*g, [](double x, double y) {
      const double rr = std::sqrt(x * x + y * y);
      return rr == 0 ? cplx(0, 0) : cplx(0, y / rr);
    });
    CVec jt = table(*g, [eps](double x, double y) {
      return cplx(std::sqrt(1.0 + eps * (x * x + y * y)), 0);
    });
    CVec jti = table(*g, [eps](double x, double y) {
      return cplx(1.0 / std::sqrt(1.0 + eps * (x * x + y * y)), 0);
    });
    const bool aneg = r == DiagRoute::a_neg;
    sys.nonlinear = [=](const SpecVec& in, SpecVec& out) {
      const Grid& gr = *gp;
      const cplx iu(0, 1);
      // reconstruct (eta, u1, u2)
      CVec etah(in[0].size()), u1h(in[0].size()), u2h(in[0].size());
      CVec sumv = in[1];
      add_scaled(sumv, 1.0, in[2]);
      if (aneg) {
        for (std::size_t i = 0; i < etah.size(); ++i)
          etah[i] = iu * (in[1][i] - in[2][i]);
        CVec a = mul_tab(jti, in[0]), s = mul_tab(jti, sumv);
        for (std::size_t i = 0; i < etah.size(); ++i) {
          u1h[i] = -r2[i] * a[i] + r1[i] * s[i];
          u2h[i] = r1[i] * a[i] + r2[i] * s[i];
        }
      } else {
        CVec dv = in[1];
        add_scaled(dv, -1.0, in[2]);
        CVec jd = mul_tab(jti, dv);
        for (std::size_t i = 0; i < etah.size(); ++i) {
          etah[i] = iu * jd[i];
          u1h[i] = -r2[i] * in[0][i] + r1[i] * sumv[i];
          u2h[i] = r1[i] * in[0][i] + r2[i] * sumv[i];
        }
      }
      // the static component stashes the mean velocity at the zero mode
      u1h[0] = cplx(in[0][0].real(), 0);
      u2h[0] = cplx(in[0][0].imag(), 0);
      // physical nonlinearity hats
      CVec n0 = mul_tab(ikx, pmul(gr, etah, u1h, deal));
      add_scaled(n0, 1.0, mul_tab(iky, pmul(gr, etah, u2h, deal)));
      CVec u1 = phys(gr, u1h), u2 = phys(gr, u2h);
      CVec q(u1.size());
      for (std::size_t i = 0; i < q.size(); ++i)
        q[i] = 0.5 * (u1[i] * u1[i] + u2[i] * u2[i]);
      CVec qh = hatof(gr, q);
      if (deal) dealias_spec(gr, qh);
      CVec n1 = mul_tab(ikx, qh), n2 = mul_tab(iky, qh);
      out[0].resize(etah.size());
      out[1].resize(etah.size());
      out[2].resize(etah.size());
      if (aneg) {
        for (std::size_t i = 0; i < etah.size(); ++i) {
          const cplx mix = jt[i] * (r1[i] * n1[i] + r2[i] * n2[i]);
          out[0][i] = -eps * jt[i] * (r2[i] * n1[i] - r1[i] * n2[i]);
          out[1][i] = -0.5 * eps * (-iu * n0[i] - mix);
          out[2][i] = -0.5 * eps * (iu * n0[i] - mix);
        }
      } else {
        for (std::size_t i = 0; i < etah.size(); ++i) {
          const cplx mix = r1[i] * n1[i] + r2[i] * n2[i];
          out[0][i] = -eps * (r2[i] * n1[i] - r1[i] * n2[i]);
          out[1][i] = -0.5 * eps * (-iu * jt[i] * n0[i] - mix);
          out[2][i] = -0.5 * eps * (iu * jt[i] * n0[i] - mix);
        }
      }
    };
  }
  return sys;
}

namespace {

State eval_state_rhs(const System& sys, const State& s) {
  require_finite(s.eta, "rhs");
  for (const auto& u : s.vel) require_finite(u, "rhs");
  SpecVec in = pack_spectral(s);
  SpecVec out = rhs_spec(sys, in);
  // derivatives of aliased products may park imaginary content on the
  // Nyquist mode; the state wrapper keeps the real part like apply_multiplier
  return unpack_spectral(s.eta.grid, out, s.time, -1.0);
}

}  // namespace

State rhs_abcd(const CaseParams& p, const State& s, SystemOptions opt) {
  return eval_state_rhs(make_system_abcd(s.eta.grid, p, opt), s);
}

State rhs_bathymetry(const CaseParams& p, const Field& beta, const State& s,
                     SystemOptions opt) {
  return eval_state_rhs(make_system_bathymetry(s.eta.grid, p, beta, opt), s);
}

State rhs_fifth(const FifthParams& p, const State& s, SystemOptions opt) {
  return eval_state_rhs(make_system_fifth(s.eta.grid, p, opt), s);
}

State rhs_fd(const FdParams& p, const State& s, SystemOptions opt) {
  return eval_state_rhs(make_system_fd(s.eta.grid, p, opt), s);
}

State rhs_kaup(const KaupParams& p, const State& s, SystemOptions opt) {
  return eval_state_rhs(make_system_kaup(s.eta.grid, p, opt), s);
}

State rhs_eta_v(double eps, const State& s, SystemOptions opt) {
  return eval_state_rhs(make_system_eta_v(s.eta.grid, eps, opt), s);
}

State rhs_mollified(double eps, double delta, const State& s,
                    SystemOptions opt) {
  return eval_state_rhs(make_system_mollified(s.eta.grid, eps, delta, opt), s);
}

State rhs_tilde(double eps, const State& s, bool drop_remainder,
                SystemOptions opt) {
  return eval_state_rhs(make_system_tilde(s.eta.grid, eps, drop_remainder, opt),
                        s);
}

Diag1State rhs_diag1(double eps, DiagRoute r, const Diag1State& w,
                     SystemOptions opt) {
  require_finite(w.zeta, "rhs_diag1");
  require_finite(w.v, "rhs_diag1");
  System sys = make_system_diag1(w.zeta.grid, eps, r, opt);
  SpecVec in{spectrum(w.zeta), spectrum(w.v)};
  SpecVec out = rhs_spec(sys, in);
  Diag1State res;
  res.zeta = field_from_spectrum(w.zeta.grid, out[0]);
  res.v = field_from_spectrum(w.zeta.grid, out[1]);
  res.time = w.time;
  return res;
}

Diag2State rhs_diag2(double eps, DiagRoute r, const Diag2State& w,
                     SystemOptions opt) {
  System sys = make_system_diag2(w.grid, eps, r, opt);
  SpecVec in{w.zeta, w.v1, w.v2};
  SpecVec out = rhs_spec(sys, in);
  Diag2State res;
  res.grid = w.grid;
  res.zeta = out[0];
  res.v1 = out[1];
  res.v2 = out[2];
  res.time = w.time;
  return res;
}

}  // namespace bsq
