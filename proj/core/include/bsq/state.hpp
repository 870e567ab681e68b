#pragma once
#include <vector>

#include "bsq/field.hpp"

namespace bsq {

// Surface elevation plus velocity components (one per space dimension).
// The same container carries (eta, v) for the velocity-flux formulation.
struct State {
  Field eta;
  std::vector<Field> vel;
  double time = 0;
};

State make_state(GridPtr g);  // zero fields, vel.size() == g->dim
bool finite(const State& s);

// Spectral image of a state: one coefficient vector per component,
// component 0 the elevation.
using SpecVec = std::vector<std::vector<cplx>>;

SpecVec pack_spectral(const State& s);
State unpack_spectral(GridPtr g, const SpecVec& c, double time = 0,
                      double imag_tol = 1e-10);

// Diagonalized 1D pair: counter-propagating components.
struct Diag1State {
  Field zeta, v;
  double time = 0;
};

// Diagonalized 2D triple, stored spectrally; component 0 is static and
// carries the rotational part, components 1/2 are complex conjugates of
// each other whenever the physical state is real.
struct Diag2State {
  GridPtr grid;
  std::vector<cplx> zeta, v1, v2;
  double time = 0;
};

}  // namespace bsq
