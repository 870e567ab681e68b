#include "bsq/initial_data.hpp"

#include <cmath>

#include "bsq/field.hpp"
#include "bsq/transforms.hpp"

namespace bsq {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t kTagElevation = 1;
constexpr std::uint64_t kTagVelocityBase = 2;  // component j uses 2 + j

struct Rng {
  std::uint64_t state;
  Rng(std::uint64_t seed, std::uint64_t tag) : state(splitmix64(seed ^ tag)) {}
  std::uint64_t next() {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() {  // [0, 1)
    return double(next() >> 11) * 0x1.0p-53;
  }
};

// fills a field from a pointwise profile of the node coordinates
template <typename F>
Field profile(GridPtr g, F&& fn) {
  Field f = make_field(g);
  if (g->dim == 1) {
    for (int i = 0; i < g->n; ++i) f[i] = fn(g->node(i), 0.0);
  } else {
    for (int iy = 0; iy < g->n; ++iy)
      for (int ix = 0; ix < g->n; ++ix)
        f[std::size_t(iy) * g->n + ix] = fn(g->node(ix), g->node(iy));
  }
  return f;
}

Field random_band(GridPtr g, const InitSpec& spec, std::uint64_t tag) {
  const int n = g->n;
  const int kmax = spec.kmax;
  if (kmax < 1) throw ValidationError("initial data: kmax must be >= 1");
  if (kmax > n / 2 - 1)
    throw ValidationError("initial data: kmax exceeds grid resolution");
  Rng rng(spec.seed, tag);
  std::vector<cplx> coef(g->size(), cplx(0, 0));
  const double p = spec.envelope_p;
  if (g->dim == 1) {
    for (int k = 1; k <= kmax; ++k) {
      const double amp = std::pow(double(k), -p);
      const double th = 2.0 * pi * rng.uniform();
      const cplx c = 0.5 * amp * std::exp(cplx(0, th));
      coef[k] = c;
      coef[n - k] = std::conj(c);
    }
  } else {
    // half-plane draw, conjugate partner fills the other half
    for (int ky = 0; ky <= kmax; ++ky)
      for (int kx = -kmax; kx <= kmax; ++kx) {
        if (ky == 0 && kx <= 0) continue;
        const double r = std::sqrt(double(kx) * kx + double(ky) * ky);
        if (r > kmax) continue;
        const double amp = std::pow(r, -p);
        const double th = 2.0 * pi * rng.uniform();
        const cplx c = 0.5 * amp * std::exp(cplx(0, th));
        const int jx = (kx % n + n) % n;
        const int jy = ky;
        const int cx = ((-kx) % n + n) % n;
        const int cy = (n - ky) % n;
        coef[std::size_t(jy) * n + jx] = c;
        coef[std::size_t(cy) * n + cx] = std::conj(c);
      }
  }
  return field_from_spectrum(g, coef);
}

double sup_abs(const Field& f) {
  double m = 0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

State make_initial_data(GridPtr g, const InitSpec& spec) {
  const double L = g->length;
  const double x0 = spec.x0 < 0 ? 0.5 * L : spec.x0;
  const double y0 = spec.y0 < 0 ? 0.5 * L : spec.y0;
  const double w = spec.width;
  if (!(w > 0)) throw ValidationError("initial data: width must be > 0");
  State s = make_state(g);

  if (spec.family == "gaussian_hump" || spec.family == "solitary_like") {
    const bool hump = spec.family == "gaussian_hump";
    auto shape = [&](double x, double y) {
      double r2 = (x - x0) * (x - x0);
      if (g->dim == 2) r2 += (y - y0) * (y - y0);
      if (hump) return std::exp(-r2 / (w * w));
      const double c = std::cosh(std::sqrt(r2) / w);
      return 1.0 / (c * c);
    };
    s.eta = profile(g, [&](double x, double y) {
      return spec.amplitude * shape(x, y);
    });
    for (auto& u : s.vel)
      u = profile(g, [&](double x, double y) {
        return spec.u_amplitude * shape(x, y);
      });
  } else if (spec.family == "cosine_modes") {
    std::vector<double> ph = spec.phases;
    ph.resize(spec.modes.size(), 0.0);
    for (int k : spec.modes)
      if (k < 1 || k > g->n / 2 - 1)
        throw ValidationError("initial data: cosine mode out of range");
    auto sum = [&](double x, double y, bool sx, bool sy) {
      double acc = 0;
      for (std::size_t m = 0; m < spec.modes.size(); ++m) {
        const double kt = 2.0 * pi * spec.modes[m] / L;
        const double fx =
            sx ? std::sin(kt * x + ph[m]) : std::cos(kt * x + ph[m]);
        if (g->dim == 1) {
          acc += fx;
        } else {
          const double fy =
              sy ? std::sin(kt * y + ph[m]) : std::cos(kt * y + ph[m]);
          acc += fx * fy;
        }
      }
      return acc;
    };
    s.eta = profile(g, [&](double x, double y) {
      return spec.amplitude * sum(x, y, false, false);
    });
    s.vel[0] = profile(g, [&](double x, double y) {
      return spec.u_amplitude * sum(x, y, true, false);
    });
    if (g->dim == 2)
      s.vel[1] = profile(g, [&](double x, double y) {
        return spec.u_amplitude * sum(x, y, false, true);
      });
  } else if (spec.family == "random_bandlimited") {
    s.eta = random_band(g, spec, kTagElevation);
    const double se = sup_abs(s.eta);
    if (se > 0) s.eta = scale(s.eta, spec.amplitude / se);
    if (spec.u_amplitude != 0) {
      for (std::size_t j = 0; j < s.vel.size(); ++j)
        s.vel[j] = random_band(g, spec, kTagVelocityBase + j);
      if (g->dim == 2 && spec.curl_free) s = curl_free_projection(s);
      Field mag = mul(s.vel[0], s.vel[0]);
      for (std::size_t j = 1; j < s.vel.size(); ++j)
        axpy(mag, 1.0, mul(s.vel[j], s.vel[j]));
      double sm = 0;
      for (std::size_t i = 0; i < mag.size(); ++i)
        sm = std::max(sm, mag[i]);
      sm = std::sqrt(sm);
      if (sm > 0)
        for (auto& u : s.vel) u = scale(u, spec.u_amplitude / sm);
    }
    return s;
  } else {
    throw ValidationError("initial data: unknown family '" + spec.family +
                          "'");
  }
  if (g->dim == 2 && spec.curl_free && spec.u_amplitude != 0)
    s = curl_free_projection(s);
  return s;
}

}  // namespace bsq
