#include "bsq/diagnostics.hpp"

#include <cmath>
#include <string>

#include "bsq/multiplier.hpp"
#include "bsq/norms.hpp"

namespace bsq {

namespace {

bool near(double x, double y) { return std::abs(x - y) <= 1e-14; }
bool zero(double x) { return near(x, 0.0); }

double sq(double x) { return x * x; }

Field dx(const Field& f, int axis) { return apply_multiplier(deriv(axis), f); }

Field lap(const Field& f) {
  MultiplierOp op;
  op.name = "lap";
  op.symbol = [](double x, double y) { return cplx(-(x * x + y * y), 0); };
  return apply_multiplier(op, f);
}

// (1 + |xi|^2)^{s/2}
Field lam_pow(const Field& f, double s) {
  MultiplierOp op;
  op.name = "lam_pow";
  op.symbol = [s](double x, double y) {
    return cplx(std::pow(1.0 + x * x + y * y, 0.5 * s), 0);
  };
  return apply_multiplier(op, f);
}

// (1 - coef Lap), symbol 1 + coef |xi|^2
Field helm(const Field& f, double coef) {
  MultiplierOp op;
  op.name = "one_minus_coef_lap";
  op.symbol = [coef](double x, double y) {
    return cplx(1.0 + coef * (x * x + y * y), 0);
  };
  return apply_multiplier(op, f);
}

Field depth(const Field& eta, double eps) {
  return shift(scale(eta, eps), 1.0);
}

double grad_sq(const Field& f) {
  double acc = sq(l2_norm(dx(f, 0)));
  if (f.grid->dim == 2) acc += sq(l2_norm(dx(f, 1)));
  return acc;
}

}  // namespace

double hamiltonian(const CaseParams& p, const State& s) {
  if (!near(p.b, p.d))
    throw CaseError("hamiltonian: conserved only when b = d");
  const double eps = p.eps;
  double e = -p.c * eps * grad_sq(s.eta) + sq(l2_norm(s.eta));
  Field usq = mul(s.vel[0], s.vel[0]);
  for (std::size_t j = 1; j < s.vel.size(); ++j)
    axpy(usq, 1.0, mul(s.vel[j], s.vel[j]));
  for (const auto& u : s.vel) e += -p.a * eps * grad_sq(u) + sq(l2_norm(u));
  e += eps * l2_inner(s.eta, usq);
  return 0.5 * e;
}

double hamiltonian_fd(const FdParams& p, const State& s) {
  const double eps = p.eps;
  const double se = std::sqrt(eps);
  const bool pe = p.with_p_eps;
  const double beta = p.beta;
  MultiplierOp half;
  half.name = "fd_symbol_sqrt";
  half.symbol = [se, eps, pe, beta](double x, double y) {
    const double r = std::sqrt(x * x + y * y);
    double t = r == 0 ? 1.0 : std::tanh(se * r) / (se * r);
    if (pe) t *= std::sqrt(1.0 + beta * eps * r * r);
    return cplx(std::sqrt(t), 0);
  };
  double e = sq(l2_norm(s.eta));
  Field usq = mul(s.vel[0], s.vel[0]);
  for (std::size_t j = 1; j < s.vel.size(); ++j)
    axpy(usq, 1.0, mul(s.vel[j], s.vel[j]));
  for (const auto& u : s.vel) e += sq(l2_norm(apply_multiplier(half, u)));
  e += eps * l2_inner(s.eta, usq);
  return 0.5 * e;
}

bool energy_symmetrized_supported(const CaseParams& p) {
  if (p.b > 0 && zero(p.a) && zero(p.c) && zero(p.d)) return true;
  if (p.d > 0 && zero(p.a) && zero(p.b) && zero(p.c)) return true;
  if (p.a < 0 && zero(p.b) && zero(p.c) && zero(p.d)) return true;
  return false;
}

double energy_symmetrized(const CaseParams& p, const State& s, double s_ord) {
  const double eps = p.eps;
  const Field h = depth(s.eta, eps);
  Field X0 = lam_pow(s.eta, s_ord);
  std::vector<Field> X;
  for (const auto& u : s.vel) X.push_back(lam_pow(u, s_ord));

  if (p.b > 0 && zero(p.a) && zero(p.c) && zero(p.d)) {
    Field M0 = helm(X0, p.b * eps);
    double e = sq(l2_norm(M0));
    for (std::size_t j = 0; j < X.size(); ++j)
      e += l2_inner(helm(X[j], p.b * eps), mul(h, X[j]));
    return e;
  }
  if (p.d > 0 && zero(p.a) && zero(p.b) && zero(p.c)) {
    Field L0 = helm(X0, p.d * eps);
    Field G = mul(s.vel[0], lap(X[0]));
    for (std::size_t k = 1; k < X.size(); ++k)
      axpy(G, 1.0, mul(s.vel[k], lap(X[k])));
    Field rhs0 = X0;
    for (std::size_t j = 0; j < X.size(); ++j)
      axpy(rhs0, eps, mul(s.vel[j], X[j]));
    double e = l2_inner(L0, rhs0);
    const double d3 = p.d * eps * eps * eps;
    for (std::size_t j = 0; j < X.size(); ++j) {
      Field Lj = helm(X[j], p.d * eps);
      Field rhs = scale(mul(s.vel[j], X0), eps);
      axpy(rhs, 1.0, mul(h, Lj));
      axpy(rhs, d3, mul(s.vel[j], G));
      e += l2_inner(Lj, rhs);
    }
    return e;
  }
  if (p.a < 0 && zero(p.b) && zero(p.c) && zero(p.d)) {
    Field rhs0 = X0;
    for (std::size_t j = 0; j < X.size(); ++j)
      axpy(rhs0, eps, mul(s.vel[j], X[j]));
    double e = l2_inner(X0, rhs0);
    for (std::size_t j = 0; j < X.size(); ++j) {
      Field rhs = scale(mul(s.vel[j], X0), eps);
      axpy(rhs, 1.0, mul(h, X[j]));
      axpy(rhs, p.a * eps, lap(X[j]));
      e += l2_inner(X[j], rhs);
    }
    return e;
  }
  throw CaseError("energy_symmetrized: unsupported coefficient pattern");
}

double energy_symmetrized_fifth(const FifthParams& p, const State& s,
                                double s_ord) {
  if (s.eta.grid->dim != 1)
    throw CaseError("energy_symmetrized_fifth: 1D only");
  const double eps = p.base.eps;
  const double a = p.base.a, b = p.base.b, c = p.base.c, d = p.base.d;
  Field Xe = lam_pow(s.eta, s_ord);
  Field Xu = lam_pow(s.vel[0], s_ord);
  MultiplierOp m0e;
  m0e.name = "m0_eta";
  m0e.symbol = [b, b1 = p.b1, eps](double x, double) {
    const double x2 = x * x;
    return cplx(1.0 + b * eps * x2 + b1 * eps * eps * x2 * x2, 0);
  };
  MultiplierOp m0u;
  m0u.name = "m0_u";
  m0u.symbol = [d, d1 = p.d1, eps](double x, double) {
    const double x2 = x * x;
    return cplx(1.0 + d * eps * x2 + d1 * eps * eps * x2 * x2, 0);
  };
  Field M0e = apply_multiplier(m0e, Xe);
  Field M0u = apply_multiplier(m0u, Xu);
  Field Xexx = lap(Xe);
  Field Xuxx = lap(Xu);
  Field Se = Xe;
  axpy(Se, c * eps, Xexx);
  axpy(Se, eps * eps, mul(s.eta, Xexx));
  Field Su = Xu;
  axpy(Su, eps, mul(s.eta, Xu));
  axpy(Su, a * eps, Xuxx);
  axpy(Su, (a - 1.0 / 3.0) * eps * eps, mul(s.eta, Xuxx));
  return l2_inner(M0e, Se) + l2_inner(M0u, Su);
}

QuasiEnergy energy_quasilinear_1d(const Bundle1& b) {
  const double eps = b.eps;
  const Field h = depth(b.eta, eps);
  auto dn = [](const Field& f, int k) {
    MultiplierOp op;
    op.name = "deriv_pow";
    op.symbol = [k](double x, double) {
      cplx z(1, 0);
      for (int i = 0; i < k; ++i) z *= cplx(0, x);
      return z;
    };
    return apply_multiplier(op, f);
  };
  auto elev = [&](const Field& base, const Field& der) {
    double e = sq(l2_norm(der)) + eps * sq(l2_norm(dn(der, 1)));
    Field b1 = dn(base, 1), b2 = dn(base, 2), b3 = dn(base, 3);
    e += l2_inner(mul(h, b1), b1);
    e += 2 * eps * l2_inner(mul(h, b2), b2);
    e += eps * eps * l2_inner(mul(h, b3), b3);
    return e;
  };
  auto flux = [&](const Field& base, const Field& der) {
    return l2_inner(div(der, h), der) + sq(l2_norm(dn(base, 1))) +
           eps * sq(l2_norm(dn(base, 2)));
  };
  QuasiEnergy q;
  q.e0 = sq(l2_norm(b.eta)) + eps * sq(l2_norm(dn(b.eta, 1))) +
         l2_inner(div(b.v, h), b.v);
  q.e1 = elev(b.eta, b.eta_t) + flux(b.v, b.v_t);
  q.e2 = elev(b.eta_t, b.eta_tt) + flux(b.v_t, b.v_tt);
  q.total = q.e0 + q.e1 + q.e2;
  q.script = sq(xsk_norm(b.eta, 2, 3, eps)) + sq(xsk_norm(b.eta_t, 1, 2, eps)) +
             sq(xsk_norm(b.eta_tt, 0, 1, eps)) + sq(xsk_norm(b.v, 2, 2, eps)) +
             sq(xsk_norm(b.v_t, 1, 1, eps)) + sq(l2_norm(b.v_tt));
  return q;
}

QuasiEnergy energy_quasilinear_2d(const Bundle2& b) {
  const double eps = b.eps;
  const Field h = depth(b.eta, eps);
  auto elev = [&](const Field& base, const Field& der) {
    double e = sq(l2_norm(der)) + eps * grad_sq(der);
    Field L = lap(base);
    for (int a = 0; a < 2; ++a) {
      Field ga = dx(base, a);
      e += l2_inner(mul(h, ga), ga);
      Field gl = dx(L, a);
      e += eps * eps * l2_inner(mul(h, gl), gl);
    }
    e += 2 * eps * l2_inner(mul(h, L), L);
    return e;
  };
  auto flux = [&](const std::array<Field, 2>& base,
                  const std::array<Field, 2>& der) {
    double e = 0;
    for (int i = 0; i < 2; ++i) e += l2_inner(div(der[i], h), der[i]);
    Field dvb = add(dx(base[0], 0), dx(base[1], 1));
    e += sq(l2_norm(dvb)) + eps * grad_sq(dvb);
    return e;
  };
  QuasiEnergy q;
  q.e0 = sq(l2_norm(b.eta)) + eps * grad_sq(b.eta);
  for (int i = 0; i < 2; ++i) q.e0 += l2_inner(div(b.v[i], h), b.v[i]);
  q.e1 = elev(b.eta, b.eta_t) + flux(b.v, b.v_t);
  q.e2 = elev(b.eta_t, b.eta_tt) + flux(b.v_t, b.v_tt);
  q.e3 = elev(b.eta_tt, b.eta_ttt) + flux(b.v_tt, b.v_ttt);
  q.total = q.e0 + q.e1 + q.e2 + q.e3;
  q.script = sq(xsk_norm(b.eta, 3, 4, eps)) + sq(xsk_norm(b.eta_t, 2, 3, eps)) +
             sq(xsk_norm(b.eta_tt, 1, 2, eps)) +
             sq(xsk_norm(b.eta_ttt, 0, 1, eps));
  for (int i = 0; i < 2; ++i) {
    q.script += sq(xsk_norm(b.v[i], 3, 3, eps)) +
                sq(xsk_norm(b.v_t[i], 2, 2, eps)) +
                sq(xsk_norm(b.v_tt[i], 1, 1, eps)) + sq(l2_norm(b.v_ttt[i]));
  }
  return q;
}

double check_noncavitation(const State& s, double eps, double H) {
  const Field& eta = s.eta;
  double minv = 1.0 + eps * eta[0];
  std::size_t arg = 0;
  for (std::size_t i = 1; i < eta.size(); ++i) {
    const double hv = 1.0 + eps * eta[i];
    if (hv < minv) {
      minv = hv;
      arg = i;
    }
  }
  const double margin = minv - H;
  if (margin < 0)
    throw CavitationError("noncavitation violated: min depth " +
                          std::to_string(minv) + " below threshold " +
                          std::to_string(H) + " at node " +
                          std::to_string(arg));
  return margin;
}

std::optional<Verdict> BlowupMonitor::feed(const EnergyReport& r) {
  if (verdict_) return verdict_;
  auto trigger = [&](const std::string& reason) {
    Verdict v;
    v.blowup = true;
    v.t = r.t;
    v.reason = reason;
    verdict_ = v;
  };
  if (!r.finite) {
    trigger("non-finite state");
    return verdict_;
  }
  if (r.margin < 0) {
    trigger("cavitation");
    return verdict_;
  }
  const double e = monitored_energy(r);
  if (!e0_) {
    e0_ = e;
  } else if (*e0_ != 0 && std::abs(e) > opt_.factor * std::abs(*e0_)) {
    trigger("energy growth factor exceeded");
    return verdict_;
  }
  return verdict_;
}

double monitored_energy(const EnergyReport& r) {
  if (r.energy_s) return *r.energy_s;
  if (r.energy_quasi) return *r.energy_quasi;
  if (r.hamiltonian) return *r.hamiltonian;
  return sq(r.eta_sobolev) + sq(r.vel_sobolev);
}

}  // namespace bsq
