#include "bsq/state.hpp"

#include "bsq/fft.hpp"

namespace bsq {

State make_state(GridPtr g) {
  State s;
  s.eta = make_field(g);
  s.vel.resize(g->dim, make_field(g));
  return s;
}

bool finite(const State& s) {
  if (!finite(s.eta)) return false;
  for (const auto& u : s.vel)
    if (!finite(u)) return false;
  return true;
}

SpecVec pack_spectral(const State& s) {
  SpecVec c;
  c.push_back(spectrum(s.eta));
  for (const auto& u : s.vel) c.push_back(spectrum(u));
  return c;
}

State unpack_spectral(GridPtr g, const SpecVec& c, double time,
                      double imag_tol) {
  if (c.size() != std::size_t(g->dim) + 1)
    throw FieldError("unpack_spectral: component count mismatch");
  State s;
  s.eta = field_from_spectrum(g, c[0], imag_tol);
  for (int j = 0; j < g->dim; ++j)
    s.vel.push_back(field_from_spectrum(g, c[j + 1], imag_tol));
  s.time = time;
  return s;
}

}  // namespace bsq
