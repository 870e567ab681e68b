#include <doctest.h>

#include <cmath>
#include <vector>

#include "bsq/errors.hpp"
#include "bsq/field.hpp"
#include "bsq/grid.hpp"
#include "bsq/initial_data.hpp"
#include "bsq/multiplier.hpp"
#include "bsq/norms.hpp"
#include "bsq/params.hpp"
#include "bsq/state.hpp"
#include "bsq/systems.hpp"
#include "bsq/transforms.hpp"

using namespace bsq;

namespace {

Field harmonic(GridPtr g, int k, double amp, bool sine) {
  Field f = make_field(g);
  const double kt = 2.0 * pi * k / g->length;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g->node(int(i % g->n));
    f[i] = amp * (sine ? std::sin(kt * x) : std::cos(kt * x));
  }
  return f;
}

// 1D or 2D field depending only on x
Field cosx(GridPtr g, double amp) { return harmonic(g, 1, amp, false); }
Field sinx(GridPtr g, double amp) { return harmonic(g, 1, amp, true); }

double supdiff(const Field& a, const Field& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

State random_state(GridPtr g, std::uint64_t seed, bool curl_free = false) {
  InitSpec spec;
  spec.family = "random_bandlimited";
  spec.amplitude = 0.08;
  spec.u_amplitude = 0.06;
  spec.kmax = g->n / 8;
  spec.envelope_p = 1.5;
  spec.seed = seed;
  spec.curl_free = curl_free;
  return make_initial_data(g, spec);
}

}  // namespace

TEST_SUITE("systems") {

TEST_CASE("sign pattern registry") {
  const double s = 1.0 / 6.0;
  CHECK(registry_match(-s, 2 * s, -s, 0) == 1);
  CHECK(registry_match(0, 2 * s, -s, 0) == 2);
  CHECK(registry_match(-s, 0, -s, 2 * s) == 3);
  CHECK(registry_match(-s, s, -s, 2 * s) == 4);
  CHECK(registry_match(0, 0.1, -s, 0.3) == 5);
  CHECK(registry_match(0, s, -s, 2 * s) == 5);
  CHECK(registry_match(-s, s, -s, s) == 6);
  CHECK(registry_match(-s, s, 0, 0) == 6);
  CHECK(registry_match(0, 1.0 / 3.0, 0, 0) == 7);
  CHECK(registry_match(0, s, -s, s) == 7);
  CHECK(registry_match(-s, s, 0, s) == 8);
  CHECK(registry_match(0, 0, 0, 2 * s) == 8);
  CHECK(registry_match(-s, 0, 0, 2 * s) == 9);
  CHECK(registry_match(0, s, 0, s) == 10);
  CHECK(registry_match(-s, 0, -s, 0) == 11);
  CHECK(registry_match(0, 0, -s, 0) == 12);
  CHECK(registry_match(-s, 0, 0, 0) == 13);
  CHECK(registry_match(0, 0, 0, 0) == 0);
  CHECK(registry_match(0.1, 0, 0.1, 0) == 0);

  for (int id = 1; id <= 13; ++id) {
    CaseParams p = case_by_id(id, 0.1);
    CHECK(p.registry == id);
    CHECK(p.eps == doctest::Approx(0.1));
    CHECK(p.a + p.b + p.c + p.d ==
          doctest::Approx(1.0 / 3.0 - p.tau).epsilon(1e-12));
    CHECK(p.tau >= 0.0);
  }
  CHECK(case_by_id(7, 0.1).b == doctest::Approx(1.0 / 3.0));
  CHECK(case_by_id(6, 0.1).tau == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(case_by_id(0, 0.1), ValidationError);
  CHECK_THROWS_AS(case_by_id(14, 0.1), ValidationError);
}

TEST_CASE("case construction guards") {
  CaseParams flat = make_case(0, 0, 0, 0, 0.2);
  CHECK(flat.tau == doctest::Approx(1.0 / 3.0));
  CHECK(flat.registry == 0);

  // a = c > 0 is admissible under the alternate branch
  CaseParams ac = make_case(1.0 / 6.0, 0, 1.0 / 6.0, 0, 0.2);
  CHECK(ac.registry == 0);

  CHECK_THROWS_AS(make_case(0.1, 0, 0, 0, 0.2), ValidationError);
  CHECK_THROWS_AS(make_case(0, -0.1, 0, 0.1 + 1.0 / 3.0, 0.2), ValidationError);
  CHECK_THROWS_AS(make_case(0, 0.4, 0, -0.1, 0.2), ValidationError);
  CHECK_THROWS_AS(make_case(-0.1, 0.5, 0, 0, 0.2), ValidationError);  // tau < 0
  CHECK_THROWS_AS(make_case(0, 0, 0, 0, 0.0), ValidationError);
  CHECK_THROWS_AS(make_case(0, 0, 0, 0, 1.5), ValidationError);

  CHECK_THROWS_AS(make_case_tau(0, 0, 0, 0, 0.2, 0.1), ValidationError);
  CaseParams ok = make_case_tau(0, 1.0 / 6.0, 0, 1.0 / 6.0, 0.0, 0.1);
  CHECK(ok.registry == 10);
}

TEST_CASE("linear response matches the dispersion symbols") {
  auto g = make_grid(1, 64);
  const double eps = 0.2;
  CaseParams p = make_case(-1.0 / 6.0, 1.0 / 6.0, -1.0 / 6.0, 1.0 / 6.0, eps);

  State s = make_state(g);
  s.vel[0] = harmonic(g, 3, 1.0, false);
  State r = rhs_abcd(p, s);
  const double A3 = (1.0 - 9 * eps * p.a) / (1.0 + 9 * eps * p.b);
  CHECK(supdiff(r.eta, harmonic(g, 3, 3.0 * A3, true)) < 1e-12);
  // velocity equation only sees the quadratic self term here
  Field want_u = harmonic(g, 6, 1.5 * eps / (1.0 + 36 * eps * p.d), true);
  CHECK(supdiff(r.vel[0], want_u) < 1e-12);

  State se = make_state(g);
  se.eta = harmonic(g, 2, 1.0, false);
  State re = rhs_abcd(p, se);
  const double B2 = (1.0 - 4 * eps * p.c) / (1.0 + 4 * eps * p.d);
  CHECK(supdiff(re.vel[0], harmonic(g, 2, 2.0 * B2, true)) < 1e-12);
  CHECK(sup_norm(re.eta) < 1e-13);

  SystemOptions lo;
  lo.linear_only = true;
  State rl = rhs_abcd(p, s, lo);
  CHECK(supdiff(rl.eta, harmonic(g, 3, 3.0 * A3, true)) < 1e-12);
  CHECK(sup_norm(rl.vel[0]) < 1e-13);
}

TEST_CASE("quadratic terms against hand built products") {
  auto g = make_grid(1, 64);
  const double eps = 0.15;

  State s = make_state(g);
  s.eta = cosx(g, 1.0);
  s.vel[0] = cosx(g, 1.0);

  // flat coefficients: both equations close in two harmonics
  State r0 = rhs_abcd(make_case(0, 0, 0, 0, eps), s);
  Field want_e = sinx(g, 1.0);
  axpy(want_e, eps, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(r0.eta, want_e) < 1e-12);
  Field want_u = sinx(g, 1.0);
  axpy(want_u, 0.5 * eps, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(r0.vel[0], want_u) < 1e-12);

  // regularized first equation pushes each harmonic through its own factor
  const double b = 1.0 / 3.0;
  State r7 = rhs_abcd(case_by_id(7, eps), s);
  Field w7 = sinx(g, 1.0 / (1.0 + b * eps));
  axpy(w7, eps / (1.0 + 4 * b * eps), harmonic(g, 2, 1.0, true));
  CHECK(supdiff(r7.eta, w7) < 1e-12);
  CHECK(supdiff(r7.vel[0], want_u) < 1e-12);

  // two dimensions, data varying along x only
  auto g2 = make_grid(2, 32);
  State s2 = make_state(g2);
  s2.eta = cosx(g2, 1.0);
  s2.vel[0] = cosx(g2, 1.0);
  State r2 = rhs_abcd(case_by_id(7, eps), s2);
  Field w2 = sinx(g2, 1.0 / (1.0 + b * eps));
  axpy(w2, eps / (1.0 + 4 * b * eps), harmonic(g2, 2, 1.0, true));
  CHECK(supdiff(r2.eta, w2) < 1e-12);
  Field w2u = sinx(g2, 1.0);
  axpy(w2u, 0.5 * eps, harmonic(g2, 2, 1.0, true));
  CHECK(supdiff(r2.vel[0], w2u) < 1e-12);
  CHECK(sup_norm(r2.vel[1]) < 1e-13);
}

TEST_CASE("transport sees the bathymetry") {
  auto g = make_grid(1, 64);
  const double eps = 0.15;
  CaseParams p = case_by_id(7, eps);
  Field beta = cosx(g, 0.3);

  State s = make_state(g);
  s.eta = harmonic(g, 3, 0.2, false);
  s.vel[0] = cosx(g, 1.0);

  State plain = rhs_abcd(p, s);
  State bat = rhs_bathymetry(p, beta, s);
  Field diff = sub(bat.eta, plain.eta);
  // div(beta u) = d/dx (0.3 cos^2 x) = -0.3 sin 2x, filtered by the b-term
  Field want = harmonic(g, 2, -0.3 * eps / (1.0 + 4 * p.b * eps), true);
  CHECK(supdiff(diff, want) < 1e-12);
  CHECK(supdiff(bat.vel[0], plain.vel[0]) < 1e-14);
}

TEST_CASE("weakly dispersive system rejects unresolvable grids") {
  KaupParams kp;
  kp.eps = 0.1;
  kp = validate_kaup(kp);
  auto fine = make_grid(1, 64);
  CHECK_THROWS_AS(make_system_kaup(fine, kp), ResolutionError);
  kp.allow_unstable_grid = true;
  CHECK_NOTHROW(make_system_kaup(fine, kp));

  KaupParams ok;
  ok.eps = 0.01;
  auto g = make_grid(1, 16);  // nyquist^2 = 64 < 300
  State s = make_state(g);
  s.eta = cosx(g, 1.0);
  s.vel[0] = cosx(g, 1.0);
  State r = rhs_kaup(ok, s);
  Field we = sinx(g, 1.0 - ok.eps / 3.0);
  axpy(we, ok.eps, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(r.eta, we) < 1e-12);
  Field wu = sinx(g, 1.0);
  axpy(wu, 0.5 * ok.eps, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(r.vel[0], wu) < 1e-12);
}

TEST_CASE("full dispersion closed forms") {
  auto g = make_grid(1, 64);
  FdParams p;
  p.eps = 0.3;
  p = validate_fd(p);
  State s = make_state(g);
  s.eta = cosx(g, 1.0);
  s.vel[0] = cosx(g, 1.0);
  const double t1 = std::tanh(std::sqrt(p.eps)) / std::sqrt(p.eps);
  State r = rhs_fd(p, s);
  Field we = sinx(g, t1);
  axpy(we, p.eps, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(r.eta, we) < 1e-12);
  Field wu = sinx(g, 1.0);
  axpy(wu, 0.5 * p.eps, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(r.vel[0], wu) < 1e-12);

  FdParams q = p;
  q.with_p_eps = true;
  q.beta = 0.6;
  State rq = rhs_fd(q, s);
  Field wq = sinx(g, std::sqrt(1.0 + q.beta * q.eps) * t1);
  axpy(wq, q.eps, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(rq.eta, wq) < 1e-12);
}

TEST_CASE("fifth order closed forms and sign guards") {
  const double eps = 0.2;
  FifthParams p;
  p.base = make_case(-1.0 / 6.0, 1.0 / 6.0, -1.0 / 6.0, 1.0 / 6.0, eps);
  p.b1 = 0.05;
  p.d1 = 0.04;
  p = validate_fifth(p);

  FifthParams bad = p;
  bad.b1 = 0;
  CHECK_THROWS_AS(validate_fifth(bad), ValidationError);
  bad = p;
  bad.a1 = 0.1;
  CHECK_THROWS_AS(validate_fifth(bad), ValidationError);
  bad = p;
  bad.base = make_case(0, 1.0 / 3.0, 0, 0, eps);  // needs a < 0, c < 0
  CHECK_THROWS_AS(validate_fifth(bad), ValidationError);

  auto g = make_grid(1, 64);
  State s = make_state(g);
  s.eta = cosx(g, 1.0);
  s.vel[0] = cosx(g, 1.0);
  State r = rhs_fifth(p, s);

  const double a = p.base.a, b = p.base.b, c = p.base.c, d = p.base.d;
  const double e1 = (1.0 - a * eps + p.a1 * eps * eps) /
                    (1.0 + b * eps + p.b1 * eps * eps);
  const double e2 = (eps * (1.0 + 4 * b * eps) -
                     (a + b - 1.0 / 3.0) * eps * eps) /
                    (1.0 + 4 * b * eps + 16 * p.b1 * eps * eps);
  Field we = sinx(g, e1);
  axpy(we, e2, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(r.eta, we) < 1e-12);

  const double u1 = (1.0 - c * eps + p.c1 * eps * eps) /
                    (1.0 + d * eps + p.d1 * eps * eps);
  const double u2 = (0.5 * eps + eps * eps * (d - c - 1.5)) /
                    (1.0 + 4 * d * eps + 16 * p.d1 * eps * eps);
  Field wu = sinx(g, u1);
  axpy(wu, u2, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(r.vel[0], wu) < 1e-12);
}

TEST_CASE("velocity flux closed forms") {
  auto g = make_grid(1, 64);
  const double eps = 0.25;

  State sv = make_state(g);
  sv.vel[0] = harmonic(g, 4, 0.3, true);
  State rv = rhs_eta_v(eps, sv);
  Field want = scale(apply_multiplier(deriv(0), sv.vel[0]), -1.0);
  CHECK(supdiff(rv.eta, want) < 1e-12);

  State se = make_state(g);
  se.eta = cosx(g, 1.0);
  State re = rhs_eta_v(eps, se);
  Field wu = sinx(g, 1.0 + eps);
  axpy(wu, 0.5 * eps * (1.0 + eps), harmonic(g, 2, 1.0, true));
  CHECK(supdiff(re.vel[0], wu) < 5e-12);
  CHECK(sup_norm(re.eta) < 1e-13);

  State s2 = make_state(g);
  s2.vel[0] = cosx(g, 1.0);
  State r2 = rhs_eta_v(eps, s2);
  CHECK(supdiff(r2.vel[0], harmonic(g, 2, eps, true)) < 1e-12);
}

TEST_CASE("mollified system places the cutoff where it belongs") {
  auto g = make_grid(1, 64);
  const double eps = 0.25, delta = 0.3;
  const double phi2 = 0.9591894571091382;  // profile at 0.6

  // transparent when the cutoff clears the whole grid
  State s = random_state(g, 99);
  const double dtr = 0.5 / g->nyquist();
  State a = rhs_mollified(eps, dtr, s);
  State b = rhs_eta_v(eps, s);
  CHECK(supdiff(a.eta, b.eta) < 1e-13);
  CHECK(supdiff(a.vel[0], b.vel[0]) < 1e-13);

  // elevation-only data: quadratic term is built from the smoothed elevation
  State se = make_state(g);
  se.eta = cosx(g, 0.3);
  State re = rhs_mollified(eps, delta, se);
  Field wu = sinx(g, (1.0 + eps) * 0.3);
  axpy(wu, 0.5 * eps * (1.0 + eps) * 0.09, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(re.vel[0], wu) < 1e-12);

  // velocity-only data: the flux quotient passes through the cutoff twice
  State sv = make_state(g);
  sv.vel[0] = cosx(g, 0.2);
  State rv = rhs_mollified(eps, delta, sv);
  CHECK(supdiff(rv.eta, sinx(g, 0.2)) < 1e-12);
  Field wv = harmonic(g, 2, eps * 0.04 * phi2 * phi2, true);
  CHECK(supdiff(rv.vel[0], wv) < 1e-12);

  CHECK_THROWS_AS(make_system_mollified(make_grid(2, 16), eps, delta),
                  CaseError);
}

TEST_CASE("premultiplied elevation family and its remainder") {
  auto g = make_grid(1, 64);
  const double eps = 0.2, A = 0.4, B = 0.5;

  State su = make_state(g);
  su.vel[0] = cosx(g, 1.0);
  State ru = rhs_tilde(eps, su, false);
  CHECK(supdiff(ru.eta, sinx(g, 1.0 + eps)) < 5e-12);
  CHECK(supdiff(ru.vel[0], harmonic(g, 2, 0.5 * eps, true)) < 1e-12);

  State s = make_state(g);
  s.eta = cosx(g, A);
  s.vel[0] = cosx(g, B);
  State full = rhs_tilde(eps, s, false);
  State drop = rhs_tilde(eps, s, true);

  Field we = sinx(g, B * (1.0 + eps));
  axpy(we, eps * A * B, harmonic(g, 2, 1.0, true));
  Field wfull = we;
  axpy(wfull, 3.0 * eps * eps * A * B / (1.0 + eps),
       harmonic(g, 2, 1.0, true));
  CHECK(supdiff(full.eta, wfull) < 1e-12);
  CHECK(supdiff(drop.eta, we) < 1e-12);

  Field wu = sinx(g, A);
  axpy(wu, 0.5 * eps * B * B, harmonic(g, 2, 1.0, true));
  CHECK(supdiff(full.vel[0], wu) < 1e-12);
  CHECK(supdiff(drop.vel[0], wu) < 1e-12);
}

TEST_CASE("right hand sides preserve the means") {
  auto g = make_grid(1, 64);
  State s = random_state(g, 7);
  auto zero_means = [](const State& r) {
    CHECK(std::abs(mean(r.eta)) < 1e-13);
    for (const auto& u : r.vel) CHECK(std::abs(mean(u)) < 1e-13);
  };
  zero_means(rhs_abcd(case_by_id(4, 0.1), s));
  zero_means(rhs_eta_v(0.1, s));
  zero_means(rhs_tilde(0.1, s, false));
  FdParams fd;
  fd.eps = 0.1;
  zero_means(rhs_fd(fd, s));

  auto g2 = make_grid(2, 32);
  State s2 = random_state(g2, 8);
  zero_means(rhs_abcd(case_by_id(4, 0.1), s2));
  zero_means(rhs_eta_v(0.1, s2));
}

TEST_CASE("gradient velocity structure survives the flow when c = d = 0") {
  auto g2 = make_grid(2, 32);
  CaseParams p = make_case(-1.0 / 6.0, 0.5, 0, 0, 0.1);
  State s2 = random_state(g2, 9, true);
  CHECK(curl_norm(s2) < 1e-11);
  State r = rhs_abcd(p, s2);
  CHECK(curl_norm(r) < 1e-11);
}

TEST_CASE("dealias option changes high mode products only") {
  auto g = make_grid(1, 64);
  State low = make_state(g);
  low.eta = harmonic(g, 2, 0.3, false);
  low.vel[0] = harmonic(g, 3, 0.2, false);
  CaseParams p = make_case(0, 0, 0, 0, 0.2);
  SystemOptions raw;
  raw.dealias = false;
  State da = rhs_abcd(p, low);
  State db = rhs_abcd(p, low, raw);
  CHECK(supdiff(da.eta, db.eta) < 1e-13);

  InitSpec spec;
  spec.family = "random_bandlimited";
  spec.amplitude = 0.3;
  spec.u_amplitude = 0.3;
  spec.kmax = 30;  // products spill past the cut
  spec.seed = 5;
  State hot = make_initial_data(g, spec);
  State ha = rhs_abcd(p, hot);
  State hb = rhs_abcd(p, hot, raw);
  CHECK(supdiff(ha.eta, hb.eta) > 1e-6);
}

}  // TEST_SUITE
