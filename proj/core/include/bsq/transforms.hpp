#pragma once
#include <array>
#include <utility>

#include "bsq/state.hpp"
#include "bsq/systems.hpp"

namespace bsq {

// 1D change to counter-propagating variables.
//   a_neg: zeta = (eta + J u)/2,  v = (eta - J u)/2,  J = (1 - eps dxx)^{1/2}
//   c_neg: zeta = (J eta + u)/2,  v = (-J eta + u)/2
Diag1State diagonalize_1d(DiagRoute r, double eps, const State& s);
State undiagonalize_1d(DiagRoute r, double eps, const Diag1State& w);

// 2D change to (static, forward, backward) spectral variables; the static
// component vanishes iff the velocity is curl-free (zero-mean part).
Diag2State diagonalize_2d(DiagRoute r, double eps, const State& s);
State undiagonalize_2d(DiagRoute r, double eps, const Diag2State& w);

// Velocity-flux change of variables v = (1 + eps eta) u and back.
State to_v_variables(const State& s, double eps);
State from_v_variables(const State& s, double eps);

// Premultiplied elevation (1 - eps Lap) eta and back.
Field to_tilde(const Field& eta, double eps);
Field from_tilde(const Field& tilde_eta, double eps);
State to_tilde_state(const State& s, double eps);
State from_tilde_state(const State& s, double eps);

// Exact time-derivative bundles of the velocity-flux system, built by
// nested application of the right-hand side and its directional
// derivatives.
struct Bundle1 {
  double eps = 0;
  Field eta, eta_t, eta_tt;
  Field v, v_t, v_tt;
};
struct Bundle2 {
  double eps = 0;
  Field eta, eta_t, eta_tt, eta_ttt;
  std::array<Field, 2> v, v_t, v_tt, v_ttt;
};
Bundle1 make_bundle_1d(const State& s, double eps);
Bundle2 make_bundle_2d(const State& s, double eps);
// Fallback: 4th-order central differences across five equispaced snapshots
// (returns the bundle at the middle one).
Bundle1 bundle_from_snapshots_1d(const std::array<State, 5>& snap, double dt,
                                 double eps);

// Residuals of the second-order reformulation, elevation and velocity-flux
// halves.
std::pair<Field, Field> quasilinear_residual_1d(const Bundle1& b);
std::pair<Field, std::array<Field, 2>> quasilinear_residual_2d(
    const Bundle2& b);

// Residuals of the two substitution identities that trade time for space
// derivatives, plus the ratio of the scaled-norm functional to the
// quadratic-form energy.
struct TransferReport {
  double res_first = 0;   // |div v + eta_t|_2
  double res_second = 0;  // second identity residual, L2
  double ratio = 0;       // script-E / E
};
TransferReport regularity_transfer_check_1d(const Bundle1& b);
TransferReport regularity_transfer_check_2d(const Bundle2& b);

// 2D rotational diagnostics.
double curl_norm(const State& s);
State curl_free_projection(const State& s);

}  // namespace bsq
