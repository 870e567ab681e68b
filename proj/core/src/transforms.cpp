#include "bsq/transforms.hpp"

#include <cmath>
#include <string>

#include "bsq/diagnostics.hpp"
#include "bsq/fft.hpp"
#include "bsq/multiplier.hpp"
#include "bsq/norms.hpp"

namespace bsq {

namespace {

using CVec = std::vector<cplx>;

// Every quadratic nonlinearity goes through these, so rhs evaluations,
// bundles, and residual checks cancel to rounding.
Field pm(const Field& a, const Field& b) { return dealias(mul(a, b)); }
Field pd(const Field& a, const Field& b) { return dealias(div(a, b)); }

Field dx(const Field& f, int axis = 0) {
  return apply_multiplier(deriv(axis), f);
}

MultiplierOp dxn_op(int axis, int order) {
  MultiplierOp op;
  op.name = "deriv_pow";
  op.symbol = [axis, order](double x, double y) {
    const cplx ik(0, axis == 0 ? x : y);
    cplx z(1, 0);
    for (int k = 0; k < order; ++k) z *= ik;
    return z;
  };
  return op;
}

// symbol i xi_axis (1 + eps |xi|^2): gradient composed with (1 - eps Lap)
MultiplierOp grad_jsq(int axis, double eps) {
  MultiplierOp op;
  op.name = "grad_jsq";
  op.symbol = [axis, eps](double x, double y) {
    const double r2 = x * x + y * y;
    return cplx(0, (axis == 0 ? x : y) * (1.0 + eps * r2));
  };
  return op;
}

// symbol -i xi_axis |xi|^2: gradient of the Laplacian
MultiplierOp grad_lap(int axis) {
  MultiplierOp op;
  op.name = "grad_lap";
  op.symbol = [axis](double x, double y) {
    const double r2 = x * x + y * y;
    return cplx(0, -(axis == 0 ? x : y) * r2);
  };
  return op;
}

Field depth(const Field& eta, double eps) {
  return shift(scale(eta, eps), 1.0);
}

void require_depth_positive(const Field& h) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] <= 0.0)
      throw CavitationError("bundle: 1 + eps eta nonpositive at node " +
                            std::to_string(i));
}

struct RTables {
  CVec r1, r2, jt, jti;
};

RTables r_tables(const Grid& g, double eps) {
  RTables t;
  const std::size_t m = g.size();
  t.r1.resize(m);
  t.r2.resize(m);
  t.jt.resize(m);
  t.jti.resize(m);
  for (int jy = 0; jy < g.n; ++jy)
    for (int jx = 0; jx < g.n; ++jx) {
      const std::size_t i = std::size_t(jy) * g.n + jx;
      const double x = g.xi[jx], y = g.xi[jy];
      const double r = std::sqrt(x * x + y * y);
      t.r1[i] = r == 0 ? cplx(0, 0) : cplx(0, x / r);
      t.r2[i] = r == 0 ? cplx(0, 0) : cplx(0, y / r);
      const double j = std::sqrt(1.0 + eps * r * r);
      t.jt[i] = cplx(j, 0);
      t.jti[i] = cplx(1.0 / j, 0);
    }
  return t;
}

}  // namespace

Diag1State diagonalize_1d(DiagRoute r, double eps, const State& s) {
  if (s.eta.grid->dim != 1) throw CaseError("diagonalize_1d: 1D only");
  Diag1State w;
  w.time = s.time;
  if (r == DiagRoute::a_neg) {
    Field ju = apply_multiplier(j_eps(eps), s.vel[0]);
    w.zeta = scale(add(s.eta, ju), 0.5);
    w.v = scale(sub(s.eta, ju), 0.5);
  } else {
    Field je = apply_multiplier(j_eps(eps), s.eta);
    w.zeta = scale(add(je, s.vel[0]), 0.5);
    w.v = scale(sub(s.vel[0], je), 0.5);
  }
  return w;
}

State undiagonalize_1d(DiagRoute r, double eps, const Diag1State& w) {
  GridPtr g = w.zeta.grid;
  State s = make_state(g);
  s.time = w.time;
  if (r == DiagRoute::a_neg) {
    s.eta = add(w.zeta, w.v);
    s.vel[0] = apply_multiplier(j_eps_inv(eps), sub(w.zeta, w.v));
  } else {
    s.eta = apply_multiplier(j_eps_inv(eps), sub(w.zeta, w.v));
    s.vel[0] = add(w.zeta, w.v);
  }
  return s;
}

Diag2State diagonalize_2d(DiagRoute r, double eps, const State& s) {
  GridPtr g = s.eta.grid;
  if (g->dim != 2) throw CaseError("diagonalize_2d: 2D only");
  const RTables t = r_tables(*g, eps);
  const CVec eh = spectrum(s.eta);
  const CVec u1 = spectrum(s.vel[0]);
  const CVec u2 = spectrum(s.vel[1]);
  const std::size_t m = g->size();
  Diag2State w;
  w.grid = g;
  w.time = s.time;
  w.zeta.resize(m);
  w.v1.resize(m);
  w.v2.resize(m);
  const cplx iu(0, 1);
  for (std::size_t i = 0; i < m; ++i) {
    if (r == DiagRoute::a_neg) {
      const cplx mix = t.jt[i] * (t.r1[i] * u1[i] + t.r2[i] * u2[i]);
      w.zeta[i] = t.jt[i] * (t.r2[i] * u1[i] - t.r1[i] * u2[i]);
      w.v1[i] = 0.5 * (-iu * eh[i] - mix);
      w.v2[i] = 0.5 * (iu * eh[i] - mix);
    } else {
      const cplx mix = t.r1[i] * u1[i] + t.r2[i] * u2[i];
      w.zeta[i] = t.r2[i] * u1[i] - t.r1[i] * u2[i];
      w.v1[i] = 0.5 * (-iu * t.jt[i] * eh[i] - mix);
      w.v2[i] = 0.5 * (iu * t.jt[i] * eh[i] - mix);
    }
  }
  // The zero mode carries no direction; stash the mean velocity in the
  // static component so the change of variables stays invertible.
  w.zeta[0] = cplx(u1[0].real(), u2[0].real());
  return w;
}

State undiagonalize_2d(DiagRoute r, double eps, const Diag2State& w) {
  GridPtr g = w.grid;
  const RTables t = r_tables(*g, eps);
  const std::size_t m = g->size();
  CVec eh(m), u1(m), u2(m);
  const cplx iu(0, 1);
  for (std::size_t i = 0; i < m; ++i) {
    const cplx sum = w.v1[i] + w.v2[i];
    if (r == DiagRoute::a_neg) {
      eh[i] = iu * (w.v1[i] - w.v2[i]);
      u1[i] = t.jti[i] * (-t.r2[i] * w.zeta[i] + t.r1[i] * sum);
      u2[i] = t.jti[i] * (t.r1[i] * w.zeta[i] + t.r2[i] * sum);
    } else {
      eh[i] = iu * t.jti[i] * (w.v1[i] - w.v2[i]);
      u1[i] = -t.r2[i] * w.zeta[i] + t.r1[i] * sum;
      u2[i] = t.r1[i] * w.zeta[i] + t.r2[i] * sum;
    }
  }
  u1[0] = cplx(w.zeta[0].real(), 0);
  u2[0] = cplx(w.zeta[0].imag(), 0);
  State s = make_state(g);
  s.time = w.time;
  s.eta = field_from_spectrum(g, eh);
  s.vel[0] = field_from_spectrum(g, u1);
  s.vel[1] = field_from_spectrum(g, u2);
  return s;
}

State to_v_variables(const State& s, double eps) {
  State out = s;
  const Field h = depth(s.eta, eps);
  for (std::size_t j = 0; j < s.vel.size(); ++j) out.vel[j] = mul(h, s.vel[j]);
  return out;
}

State from_v_variables(const State& s, double eps) {
  State out = s;
  const Field h = depth(s.eta, eps);
  for (std::size_t j = 0; j < s.vel.size(); ++j) out.vel[j] = div(s.vel[j], h);
  return out;
}

Field to_tilde(const Field& eta, double eps) {
  MultiplierOp op;
  op.name = "one_minus_eps_lap";
  op.symbol = [eps](double x, double y) {
    return cplx(1.0 + eps * (x * x + y * y), 0);
  };
  return apply_multiplier(op, eta);
}

Field from_tilde(const Field& tilde_eta, double eps) {
  return apply_multiplier(helmholtz_inv(eps), tilde_eta);
}

State to_tilde_state(const State& s, double eps) {
  State out = s;
  out.eta = to_tilde(s.eta, eps);
  return out;
}

State from_tilde_state(const State& s, double eps) {
  State out = s;
  out.eta = from_tilde(s.eta, eps);
  return out;
}

Bundle1 make_bundle_1d(const State& s, double eps) {
  if (s.eta.grid->dim != 1) throw CaseError("make_bundle_1d: 1D only");
  Bundle1 b;
  b.eps = eps;
  b.eta = s.eta;
  b.v = s.vel[0];
  const Field h = depth(b.eta, eps);
  require_depth_positive(h);
  const State r = rhs_eta_v(eps, s);
  b.eta_t = r.eta;
  b.v_t = r.vel[0];
  b.eta_tt = scale(dx(b.v_t), -1.0);
  const Field P = apply_multiplier(grad_jsq(0, eps), b.eta);
  const Field Pt = apply_multiplier(grad_jsq(0, eps), b.eta_t);
  const Field W = pd(b.v, h);
  // time derivative of the momentum flux v^2 / (1 + eps eta)
  Field Qt = add(pd(pm(scale(b.v, 2.0), b.v_t), h),
                 scale(pm(b.eta_t, pm(W, W)), -eps));
  b.v_tt = scale(pm(b.eta_t, P), -eps);
  axpy(b.v_tt, -1.0, pm(h, Pt));
  axpy(b.v_tt, -eps, dx(Qt));
  return b;
}

Bundle2 make_bundle_2d(const State& s, double eps) {
  if (s.eta.grid->dim != 2) throw CaseError("make_bundle_2d: 2D only");
  Bundle2 b;
  b.eps = eps;
  b.eta = s.eta;
  b.v = {s.vel[0], s.vel[1]};
  const Field h = depth(b.eta, eps);
  require_depth_positive(h);
  const State r = rhs_eta_v(eps, s);
  b.eta_t = r.eta;
  b.v_t = {r.vel[0], r.vel[1]};
  b.eta_tt = scale(add(dx(b.v_t[0], 0), dx(b.v_t[1], 1)), -1.0);

  std::array<Field, 2> P, Pt, W, Wt;
  for (int i = 0; i < 2; ++i) {
    P[i] = apply_multiplier(grad_jsq(i, eps), b.eta);
    Pt[i] = apply_multiplier(grad_jsq(i, eps), b.eta_t);
    W[i] = pd(b.v[i], h);
    Wt[i] = pd(sub(b.v_t[i], scale(pm(b.eta_t, W[i]), eps)), h);
  }
  for (int i = 0; i < 2; ++i) {
    Field dB = add(dx(add(pm(Wt[i], b.v[0]), pm(W[i], b.v_t[0])), 0),
                   dx(add(pm(Wt[i], b.v[1]), pm(W[i], b.v_t[1])), 1));
    b.v_tt[i] = scale(pm(b.eta_t, P[i]), -eps);
    axpy(b.v_tt[i], -1.0, pm(h, Pt[i]));
    axpy(b.v_tt[i], -eps, dB);
  }
  b.eta_ttt = scale(add(dx(b.v_tt[0], 0), dx(b.v_tt[1], 1)), -1.0);

  std::array<Field, 2> Ptt, Wtt;
  for (int i = 0; i < 2; ++i) {
    Ptt[i] = apply_multiplier(grad_jsq(i, eps), b.eta_tt);
    Field num = sub(b.v_tt[i], scale(pm(b.eta_t, Wt[i]), 2.0 * eps));
    num = sub(num, scale(pm(b.eta_tt, W[i]), eps));
    Wtt[i] = pd(num, h);
  }
  for (int i = 0; i < 2; ++i) {
    Field d2B = make_field(b.eta.grid);
    for (int j = 0; j < 2; ++j) {
      Field term = add(pm(Wtt[i], b.v[j]), scale(pm(Wt[i], b.v_t[j]), 2.0));
      term = add(term, pm(W[i], b.v_tt[j]));
      axpy(d2B, 1.0, dx(term, j));
    }
    b.v_ttt[i] = scale(pm(b.eta_tt, P[i]), -eps);
    axpy(b.v_ttt[i], -2.0 * eps, pm(b.eta_t, Pt[i]));
    axpy(b.v_ttt[i], -1.0, pm(h, Ptt[i]));
    axpy(b.v_ttt[i], -eps, d2B);
  }
  return b;
}

Bundle1 bundle_from_snapshots_1d(const std::array<State, 5>& snap, double dt,
                                 double eps) {
  if (!(dt > 0)) throw ParamError("bundle_from_snapshots_1d: dt must be > 0");
  for (const auto& s : snap)
    if (!same_grid(*s.eta.grid, *snap[0].eta.grid))
      throw FieldError("bundle_from_snapshots_1d: grid mismatch");
  auto d1 = [dt](const Field& a, const Field& b, const Field& c,
                 const Field& d) {
    // (f[-2] - 8 f[-1] + 8 f[1] - f[2]) / (12 dt)
    Field out = scale(a, 1.0 / (12 * dt));
    axpy(out, -8.0 / (12 * dt), b);
    axpy(out, 8.0 / (12 * dt), c);
    axpy(out, -1.0 / (12 * dt), d);
    return out;
  };
  auto d2 = [dt](const Field& a, const Field& b, const Field& c,
                 const Field& d, const Field& e) {
    // (-f[-2] + 16 f[-1] - 30 f[0] + 16 f[1] - f[2]) / (12 dt^2)
    const double w = 1.0 / (12 * dt * dt);
    Field out = scale(a, -w);
    axpy(out, 16 * w, b);
    axpy(out, -30 * w, c);
    axpy(out, 16 * w, d);
    axpy(out, -w, e);
    return out;
  };
  Bundle1 b;
  b.eps = eps;
  b.eta = snap[2].eta;
  b.v = snap[2].vel[0];
  b.eta_t = d1(snap[0].eta, snap[1].eta, snap[3].eta, snap[4].eta);
  b.v_t = d1(snap[0].vel[0], snap[1].vel[0], snap[3].vel[0], snap[4].vel[0]);
  b.eta_tt =
      d2(snap[0].eta, snap[1].eta, snap[2].eta, snap[3].eta, snap[4].eta);
  b.v_tt = d2(snap[0].vel[0], snap[1].vel[0], snap[2].vel[0], snap[3].vel[0],
              snap[4].vel[0]);
  return b;
}

// The dynamics are closed on the dealias band, so the reformulation identity
// only holds there; strip above-cut content before the high-order symbols
// amplify it.
static Bundle1 band_limit(const Bundle1& in) {
  Bundle1 b = in;
  for (Field* f : {&b.eta, &b.eta_t, &b.eta_tt, &b.v, &b.v_t, &b.v_tt})
    if (f->grid) *f = dealias(*f);
  return b;
}

static Bundle2 band_limit(const Bundle2& in) {
  Bundle2 b = in;
  for (Field* f : {&b.eta, &b.eta_t, &b.eta_tt, &b.eta_ttt})
    if (f->grid) *f = dealias(*f);
  for (auto* arr : {&b.v, &b.v_t, &b.v_tt, &b.v_ttt})
    for (Field& f : *arr)
      if (f.grid) f = dealias(f);
  return b;
}

std::pair<Field, Field> quasilinear_residual_1d(const Bundle1& raw) {
  const Bundle1 b = band_limit(raw);
  const double eps = b.eps;
  const Field h = depth(b.eta, eps);
  require_depth_positive(h);
  const Field etax = dx(b.eta);
  const Field etaxxx = apply_multiplier(dxn_op(0, 3), b.eta);
  const Field vx = dx(b.v);
  const Field W = pd(b.v, h);
  const Field vsq = pm(b.v, b.v);

  Field f = scale(pd(pm(vx, vx), h), 2.0 * eps);
  axpy(f, -2.0 * eps * eps, pd(pd(pm(pm(b.v, vx), etax), h), h));
  axpy(f, -eps * eps, dx(pd(pd(pm(etax, vsq), h), h)));

  Field r1 = b.eta_tt;
  axpy(r1, -1.0, dx(pm(h, etax)));
  axpy(r1, eps, dx(pm(h, etaxxx)));
  axpy(r1, 2.0 * eps, pm(W, dx(b.eta_t)));
  axpy(r1, -1.0, f);

  const Field Pfield = sub(etax, scale(etaxxx, eps));
  Field g = scale(pm(pd(b.eta_t, h), Pfield), -eps);
  axpy(g, -2.0 * eps, pd(pd(pm(vx, b.v_t), h), h));
  axpy(g, eps * eps, pd(dx(pd(pd(pm(vsq, b.eta_t), h), h)), h));

  Field r2 = pd(b.v_tt, h);
  axpy(r2, -1.0, apply_multiplier(dxn_op(0, 2), b.v));
  axpy(r2, eps, apply_multiplier(dxn_op(0, 4), b.v));
  axpy(r2, 2.0 * eps, pm(W, dx(pd(b.v_t, h))));
  axpy(r2, -1.0, g);
  return {r1, r2};
}

std::pair<Field, std::array<Field, 2>> quasilinear_residual_2d(
    const Bundle2& raw) {
  const Bundle2 b = band_limit(raw);
  const double eps = b.eps;
  const Field h = depth(b.eta, eps);
  require_depth_positive(h);

  std::array<Field, 2> etagrad, W, Vt, Pfield;
  for (int i = 0; i < 2; ++i) {
    etagrad[i] = dx(b.eta, i);
    W[i] = pd(b.v[i], h);
    Vt[i] = pd(b.v_t[i], h);
    Pfield[i] = apply_multiplier(grad_jsq(i, eps), b.eta);
  }
  const Field divv = add(dx(b.v[0], 0), dx(b.v[1], 1));
  const Field divvt = add(dx(b.v_t[0], 0), dx(b.v_t[1], 1));

  // gradient of 1/(1 + eps eta) = -eps grad(eta) / h^2
  std::array<Field, 2> ginv;
  for (int i = 0; i < 2; ++i) ginv[i] = scale(pd(pd(etagrad[i], h), h), -eps);

  // f = eps |div v|^2/h + 2 eps (v . grad 1/h)(div v)
  //     + eps v . grad(v . grad 1/h) + eps sum_ij d_j(v_i/h) d_i(v_j)
  Field f = scale(pd(pm(divv, divv), h), eps);
  Field vdotginv = add(pm(b.v[0], ginv[0]), pm(b.v[1], ginv[1]));
  axpy(f, 2.0 * eps, pm(vdotginv, divv));
  axpy(f, eps, add(pm(b.v[0], dx(vdotginv, 0)), pm(b.v[1], dx(vdotginv, 1))));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      axpy(f, eps, pm(dx(W[i], j), dx(b.v[j], i)));

  Field r1 = b.eta_tt;
  for (int i = 0; i < 2; ++i) {
    axpy(r1, -1.0, dx(pm(h, etagrad[i]), i));
    axpy(r1, eps, dx(pm(h, apply_multiplier(grad_lap(i), b.eta)), i));
    axpy(r1, 2.0 * eps, pm(W[i], dx(b.eta_t, i)));
  }
  axpy(r1, -1.0, f);

  std::array<Field, 2> r2;
  for (int i = 0; i < 2; ++i) {
    // g_i = -(eps eta_t/h)(grad eta - eps grad Lap eta)_i
    //       + eps^2 (v/h . grad)(v eta_t/h^2)_i - (eps/h) d_t(v/h)_i div v
    Field K = pd(pd(pm(b.v[i], b.eta_t), h), h);
    Field Wdot = pd(sub(b.v_t[i], scale(pm(b.eta_t, W[i]), eps)), h);
    Field gi = scale(pm(pd(b.eta_t, h), Pfield[i]), -eps);
    axpy(gi, eps * eps, add(pm(W[0], dx(K, 0)), pm(W[1], dx(K, 1))));
    axpy(gi, -eps, pd(pm(Wdot, divv), h));

    r2[i] = pd(b.v_tt[i], h);
    axpy(r2[i], -1.0, dx(divv, i));
    axpy(r2[i], eps, apply_multiplier(grad_lap(i), divv));
    axpy(r2[i], eps, add(pm(W[0], dx(Vt[i], 0)), pm(W[1], dx(Vt[i], 1))));
    axpy(r2[i], eps, add(pm(Vt[0], dx(W[i], 0)), pm(Vt[1], dx(W[i], 1))));
    axpy(r2[i], eps, pm(pd(W[i], h), divvt));
    axpy(r2[i], -1.0, gi);
  }
  return {r1, r2};
}

TransferReport regularity_transfer_check_1d(const Bundle1& b) {
  const double eps = b.eps;
  const Field h = depth(b.eta, eps);
  require_depth_positive(h);
  TransferReport rep;
  rep.res_first = l2_norm(add(dx(b.v), b.eta_t));
  Field res = apply_multiplier(grad_jsq(0, eps), b.eta);
  axpy(res, 1.0, pd(b.v_t, h));
  axpy(res, eps, pd(dx(pd(pm(b.v, b.v), h)), h));
  rep.res_second = l2_norm(res);
  const QuasiEnergy qe = energy_quasilinear_1d(b);
  rep.ratio = qe.total > 0 ? qe.script / qe.total : 0.0;
  return rep;
}

TransferReport regularity_transfer_check_2d(const Bundle2& b) {
  const double eps = b.eps;
  const Field h = depth(b.eta, eps);
  require_depth_positive(h);
  TransferReport rep;
  rep.res_first = l2_norm(add(add(dx(b.v[0], 0), dx(b.v[1], 1)), b.eta_t));
  std::array<Field, 2> W;
  for (int i = 0; i < 2; ++i) W[i] = pd(b.v[i], h);
  double acc = 0;
  for (int i = 0; i < 2; ++i) {
    Field B = add(dx(pm(W[i], b.v[0]), 0), dx(pm(W[i], b.v[1]), 1));
    Field res = apply_multiplier(grad_jsq(i, eps), b.eta);
    axpy(res, 1.0, pd(b.v_t[i], h));
    axpy(res, eps, pd(B, h));
    const double r = l2_norm(res);
    acc += r * r;
  }
  rep.res_second = std::sqrt(acc);
  const QuasiEnergy qe = energy_quasilinear_2d(b);
  rep.ratio = qe.total > 0 ? qe.script / qe.total : 0.0;
  return rep;
}

double curl_norm(const State& s) {
  if (s.eta.grid->dim != 2) throw CaseError("curl_norm: 2D only");
  return l2_norm(sub(dx(s.vel[1], 0), dx(s.vel[0], 1)));
}

State curl_free_projection(const State& s) {
  GridPtr g = s.eta.grid;
  if (g->dim != 2) throw CaseError("curl_free_projection: 2D only");
  CVec u1 = spectrum(s.vel[0]);
  CVec u2 = spectrum(s.vel[1]);
  for (int jy = 0; jy < g->n; ++jy)
    for (int jx = 0; jx < g->n; ++jx) {
      const std::size_t i = std::size_t(jy) * g->n + jx;
      const double x = g->xi[jx], y = g->xi[jy];
      const double r2 = x * x + y * y;
      if (r2 == 0) continue;  // mean velocity has no rotational part
      const cplx p = (x * u1[i] + y * u2[i]) / r2;
      u1[i] = x * p;
      u2[i] = y * p;
    }
  State out = s;
  out.vel[0] = field_from_spectrum(g, u1);
  out.vel[1] = field_from_spectrum(g, u2);
  return out;
}

}  // namespace bsq
