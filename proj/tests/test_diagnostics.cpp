#include <doctest.h>

#include <cmath>
#include <vector>

#include "bsq/diagnostics.hpp"
#include "bsq/errors.hpp"
#include "bsq/field.hpp"
#include "bsq/grid.hpp"
#include "bsq/initial_data.hpp"
#include "bsq/multiplier.hpp"
#include "bsq/norms.hpp"
#include "bsq/params.hpp"
#include "bsq/state.hpp"
#include "bsq/transforms.hpp"

using namespace bsq;

namespace {

Field harmonic(GridPtr g, int k, double amp, bool sine = false) {
  Field f = make_field(g);
  const double kt = 2.0 * pi * k / g->length;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g->node(int(i % g->n));
    f[i] = amp * (sine ? std::sin(kt * x) : std::cos(kt * x));
  }
  return f;
}

State random_state(GridPtr g, std::uint64_t seed) {
  InitSpec spec;
  spec.family = "random_bandlimited";
  spec.amplitude = 0.08;
  spec.u_amplitude = 0.05;
  spec.kmax = g->n / 8;
  spec.envelope_p = 1.5;
  spec.seed = seed;
  return make_initial_data(g, spec);
}

// rectangle-rule quadrature, independent of the norms module
double quad(const Field& f) {
  double acc = 0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i];
  return acc * f.grid->cell();
}

Field dnx(const Field& f, int k) {
  Field out = f;
  for (int i = 0; i < k; ++i) out = apply_multiplier(deriv(0), out);
  return out;
}

EnergyReport healthy(double t, double e) {
  EnergyReport r;
  r.t = t;
  r.energy_s = e;
  r.margin = 0.4;
  return r;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("conserved functional in closed form") {
  auto g = make_grid(1, 64);
  const double eps = 0.2;
  CaseParams p = case_by_id(6, eps);  // b = d
  State s = make_state(g);
  s.eta = harmonic(g, 1, 0.1);
  s.vel[0] = shift(harmonic(g, 1, 0.05), 0.05);

  const double want =
      0.5 * (-p.c * eps * 0.01 * pi - p.a * eps * 0.0025 * pi + 0.01 * pi +
             0.0075 * pi + eps * 0.1 * 0.0025 * 2.0 * pi);
  CHECK(hamiltonian(p, s) == doctest::Approx(want).epsilon(1e-12));

  CHECK_THROWS_AS(hamiltonian(case_by_id(1, eps), s), CaseError);

  auto g2 = make_grid(2, 32);
  State s2 = make_state(g2);
  for (int iy = 0; iy < g2->n; ++iy)
    for (int ix = 0; ix < g2->n; ++ix) {
      const double x = g2->node(ix), y = g2->node(iy);
      const std::size_t i = std::size_t(iy) * g2->n + ix;
      s2.eta[i] = 0.1 * std::cos(x) * std::cos(y);
      s2.vel[0][i] = 0.05 * std::sin(x) * std::cos(y);
      s2.vel[1][i] = 0.05 * std::cos(x) * std::sin(y);
    }
  const double pp = pi * pi;
  const double want2 =
      0.5 * (-p.c * eps * 0.02 * pp - p.a * eps * 0.01 * pp + 0.01 * pp +
             0.005 * pp);
  CHECK(hamiltonian(p, s2) == doctest::Approx(want2).epsilon(1e-12));
}

TEST_CASE("conserved functional for the nonlocal family") {
  auto g = make_grid(1, 64);
  FdParams p;
  p.eps = 0.3;
  State s = make_state(g);
  s.eta = harmonic(g, 1, 0.1);
  s.vel[0] = shift(harmonic(g, 1, 0.05), 0.05);

  const double t1 = std::tanh(std::sqrt(p.eps)) / std::sqrt(p.eps);
  auto expected = [&](double tfac) {
    return 0.5 * (0.01 * pi + 2.0 * pi * (0.0025 + 0.00125 * tfac) +
                  p.eps * 0.1 * 0.0025 * 2.0 * pi);
  };
  CHECK(hamiltonian_fd(p, s) == doctest::Approx(expected(t1)).epsilon(1e-12));

  FdParams q = p;
  q.with_p_eps = true;
  q.beta = 0.6;
  CHECK(hamiltonian_fd(q, s) ==
        doctest::Approx(expected(std::sqrt(1.0 + q.beta * q.eps) * t1))
            .epsilon(1e-12));
}

TEST_CASE("symmetrized energy in closed form") {
  auto g = make_grid(1, 64);
  const double eps = 0.25, sord = 1.6;
  const double A = 0.1, B = 0.2;
  const double w2 = std::pow(2.0, sord), w5 = std::pow(5.0, sord);
  State s = make_state(g);
  s.eta = harmonic(g, 2, A);
  s.vel[0] = harmonic(g, 1, B);

  CaseParams pb = case_by_id(7, eps);
  CHECK(energy_symmetrized_supported(pb));
  const double b = pb.b;
  const double eb = std::pow(1.0 + 4 * b * eps, 2) * w5 * A * A * pi +
                    (1.0 + b * eps) * w2 * B * B * pi * (1.0 + eps * A / 2);
  CHECK(energy_symmetrized(pb, s, sord) == doctest::Approx(eb).epsilon(1e-11));

  CaseParams pd = make_case(0, 0, 0, 1.0 / 3.0, eps);
  CHECK(energy_symmetrized_supported(pd));
  const double d = pd.d;
  const double cross = std::sqrt(w5 * w2) * A * B * B * eps * pi / 2;
  const double ed = (1.0 + 4 * d * eps) * (w5 * A * A * pi + cross) +
                    (1.0 + d * eps) * cross +
                    std::pow(1.0 + d * eps, 2) * w2 * B * B * pi *
                        (1.0 + eps * A / 2) -
                    (1.0 + d * eps) * w2 * std::pow(B, 4) * d * eps * eps *
                        eps * 0.75 * pi;
  CHECK(energy_symmetrized(pd, s, sord) == doctest::Approx(ed).epsilon(1e-11));

  CaseParams pa = make_case(-1.0 / 3.0, 0, 0, 0, eps);
  CHECK(energy_symmetrized_supported(pa));
  const double ea = w5 * A * A * pi + cross + cross +
                    w2 * B * B * pi * (1.0 + eps * A / 2) -
                    pa.a * eps * w2 * B * B * pi;
  CHECK(energy_symmetrized(pa, s, sord) == doctest::Approx(ea).epsilon(1e-11));

  CHECK_FALSE(energy_symmetrized_supported(case_by_id(1, eps)));
  CHECK_THROWS_AS(energy_symmetrized(case_by_id(1, eps), s, sord), CaseError);
}

TEST_CASE("symmetrized energy for the fifth order family") {
  auto g = make_grid(1, 64);
  const double eps = 0.25, sord = 1.6;
  const double A = 0.1, B = 0.2;
  FifthParams p;
  p.base = make_case(-1.0 / 6.0, 1.0 / 6.0, -1.0 / 6.0, 1.0 / 6.0, eps);
  p.b1 = 0.05;
  p.d1 = 0.04;
  p = validate_fifth(p);

  State s = make_state(g);
  s.eta = harmonic(g, 2, A);
  s.vel[0] = harmonic(g, 1, B);

  const double a = p.base.a, bb = p.base.b, c = p.base.c, d = p.base.d;
  const double w2 = std::pow(2.0, sord), w5 = std::pow(5.0, sord);
  const double K = 1.0 + 4 * bb * eps + 16 * p.b1 * eps * eps;
  const double D = 1.0 + d * eps + p.d1 * eps * eps;
  const double first = K * (1.0 - 4 * c * eps) * w5 * A * A * pi;
  const double second =
      D * w2 * B * B *
      ((1.0 - a * eps) * pi + (eps - (a - 1.0 / 3.0) * eps * eps) * A * pi / 2);
  CHECK(energy_symmetrized_fifth(p, s, sord) ==
        doctest::Approx(first + second).epsilon(1e-11));

  auto g2 = make_grid(2, 16);
  CHECK_THROWS_AS(energy_symmetrized_fifth(p, make_state(g2), sord), CaseError);
}

TEST_CASE("cascade energy matches its printed formula") {
  auto g = make_grid(1, 128);
  const double eps = 0.12;
  State s = random_state(g, 77);
  Bundle1 b = make_bundle_1d(s, eps);
  QuasiEnergy q = energy_quasilinear_1d(b);

  Field h = shift(scale(b.eta, eps), 1.0);
  auto ip = [&](const Field& f, const Field& w) { return quad(mul(f, w)); };
  auto wsq = [&](const Field& f) { return quad(mul(f, f)); };
  auto elev = [&](const Field& base, const Field& der) {
    double e = wsq(der) + eps * wsq(dnx(der, 1));
    e += ip(mul(h, dnx(base, 1)), dnx(base, 1));
    e += 2 * eps * ip(mul(h, dnx(base, 2)), dnx(base, 2));
    e += eps * eps * ip(mul(h, dnx(base, 3)), dnx(base, 3));
    return e;
  };
  auto flux = [&](const Field& base, const Field& der) {
    return ip(div(der, h), der) + wsq(dnx(base, 1)) + eps * wsq(dnx(base, 2));
  };
  const double e0 = wsq(b.eta) + eps * wsq(dnx(b.eta, 1)) + ip(div(b.v, h), b.v);
  const double e1 = elev(b.eta, b.eta_t) + flux(b.v, b.v_t);
  const double e2 = elev(b.eta_t, b.eta_tt) + flux(b.v_t, b.v_tt);
  CHECK(q.e0 == doctest::Approx(e0).epsilon(1e-10));
  CHECK(q.e1 == doctest::Approx(e1).epsilon(1e-10));
  CHECK(q.e2 == doctest::Approx(e2).epsilon(1e-10));
  CHECK(q.total == doctest::Approx(e0 + e1 + e2).epsilon(1e-10));

  auto x2 = [&](const Field& f, double so, int k) {
    const double lo = sobolev_norm(f, so), hi = sobolev_norm(f, so + k);
    return lo * lo + std::pow(eps, k) * hi * hi;
  };
  const double script = x2(b.eta, 2, 3) + x2(b.eta_t, 1, 2) +
                        x2(b.eta_tt, 0, 1) + x2(b.v, 2, 2) + x2(b.v_t, 1, 1) +
                        std::pow(l2_norm(b.v_tt), 2);
  CHECK(q.script == doctest::Approx(script).epsilon(1e-10));
}

TEST_CASE("cascade energy matches its printed formula in two dimensions") {
  auto g = make_grid(2, 32);
  const double eps = 0.12;
  InitSpec spec;
  spec.family = "cosine_modes";
  spec.amplitude = 0.05;
  spec.u_amplitude = 0.04;
  spec.modes = {1, 2};
  spec.phases = {0.3, 1.1};
  State s = make_initial_data(g, spec);
  Bundle2 b = make_bundle_2d(s, eps);
  QuasiEnergy q = energy_quasilinear_2d(b);

  Field h = shift(scale(b.eta, eps), 1.0);
  auto ip = [&](const Field& f, const Field& w) { return quad(mul(f, w)); };
  auto wsq = [&](const Field& f) { return quad(mul(f, f)); };
  auto d1 = [&](const Field& f, int ax) { return apply_multiplier(deriv(ax), f); };
  auto lapf = [&](const Field& f) {
    return add(d1(d1(f, 0), 0), d1(d1(f, 1), 1));
  };
  auto gsq = [&](const Field& f) { return wsq(d1(f, 0)) + wsq(d1(f, 1)); };
  auto elev = [&](const Field& base, const Field& der) {
    double e = wsq(der) + eps * gsq(der);
    Field L = lapf(base);
    for (int ax = 0; ax < 2; ++ax) {
      Field ga = d1(base, ax);
      e += ip(mul(h, ga), ga);
      Field gl = d1(L, ax);
      e += eps * eps * ip(mul(h, gl), gl);
    }
    e += 2 * eps * ip(mul(h, L), L);
    return e;
  };
  auto flux = [&](const std::array<Field, 2>& base,
                  const std::array<Field, 2>& der) {
    double e = 0;
    for (int i = 0; i < 2; ++i) e += ip(div(der[i], h), der[i]);
    Field dv = add(d1(base[0], 0), d1(base[1], 1));
    e += wsq(dv) + eps * gsq(dv);
    return e;
  };
  double e0 = wsq(b.eta) + eps * gsq(b.eta);
  for (int i = 0; i < 2; ++i) e0 += ip(div(b.v[i], h), b.v[i]);
  const double e1 = elev(b.eta, b.eta_t) + flux(b.v, b.v_t);
  const double e2 = elev(b.eta_t, b.eta_tt) + flux(b.v_t, b.v_tt);
  const double e3 = elev(b.eta_tt, b.eta_ttt) + flux(b.v_tt, b.v_ttt);
  CHECK(q.e0 == doctest::Approx(e0).epsilon(1e-10));
  CHECK(q.e1 == doctest::Approx(e1).epsilon(1e-10));
  CHECK(q.e2 == doctest::Approx(e2).epsilon(1e-10));
  CHECK(q.e3 == doctest::Approx(e3).epsilon(1e-10));
  CHECK(q.total == doctest::Approx(e0 + e1 + e2 + e3).epsilon(1e-10));
}

TEST_CASE("noncavitation margin") {
  auto g = make_grid(1, 64);
  State s = make_state(g);
  s.eta = harmonic(g, 1, -0.4);
  CHECK(check_noncavitation(s, 1.0, 0.5) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(check_noncavitation(s, 1.0, 0.7), CavitationError);
  CHECK(check_noncavitation(s, 0.5, 0.5) ==
        doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("monitor trips on the designated conditions") {
  BlowupMonitor::Options opt;
  opt.factor = 16;

  BlowupMonitor growth(opt);
  CHECK_FALSE(growth.feed(healthy(0.0, 1.0)).has_value());
  CHECK_FALSE(growth.feed(healthy(0.1, 15.9)).has_value());
  auto v = growth.feed(healthy(0.2, 16.1));
  REQUIRE(v.has_value());
  CHECK(v->blowup);
  CHECK(v->reason == "energy growth factor exceeded");
  CHECK(v->t == doctest::Approx(0.2));
  // sticky afterwards
  auto again = growth.feed(healthy(0.3, 1.0));
  REQUIRE(again.has_value());
  CHECK(again->t == doctest::Approx(0.2));

  BlowupMonitor cav(opt);
  CHECK_FALSE(cav.feed(healthy(0.0, 1.0)).has_value());
  EnergyReport bad = healthy(0.5, 1.0);
  bad.margin = -0.01;
  auto vc = cav.feed(bad);
  REQUIRE(vc.has_value());
  CHECK(vc->reason == "cavitation");

  BlowupMonitor fin(opt);
  EnergyReport nf = healthy(0.25, 1.0);
  nf.finite = false;
  nf.margin = -1;  // non-finite takes precedence
  auto vf = fin.feed(nf);
  REQUIRE(vf.has_value());
  CHECK(vf->reason == "non-finite state");

  // zero initial energy disables the growth trigger
  BlowupMonitor z(opt);
  CHECK_FALSE(z.feed(healthy(0.0, 0.0)).has_value());
  CHECK_FALSE(z.feed(healthy(0.1, 1e9)).has_value());

  // growth is judged against the first report only
  BlowupMonitor first(opt);
  CHECK_FALSE(first.feed(healthy(0.0, 2.0)).has_value());
  CHECK_FALSE(first.feed(healthy(0.1, 31.0)).has_value());
  CHECK(first.feed(healthy(0.2, 33.0)).has_value());
}

TEST_CASE("watched energy priority") {
  EnergyReport r;
  r.eta_sobolev = 3.0;
  r.vel_sobolev = 4.0;
  CHECK(monitored_energy(r) == doctest::Approx(25.0));
  r.hamiltonian = 7.0;
  CHECK(monitored_energy(r) == doctest::Approx(7.0));
  r.energy_quasi = 5.0;
  CHECK(monitored_energy(r) == doctest::Approx(5.0));
  r.energy_s = 2.0;
  CHECK(monitored_energy(r) == doctest::Approx(2.0));
}

}  // TEST_SUITE
