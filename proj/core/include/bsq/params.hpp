#pragma once
#include <string>

#include "bsq/errors.hpp"

namespace bsq {

// Coefficient set of the four-parameter family
//   eta_t + div u + eps [ div(eta u) + a div Lap u - b Lap eta_t ] = 0
//   u_t + grad eta + eps [ (1/2) grad |u|^2 + c grad Lap eta - d Lap u_t ] = 0
// subject to a + b + c + d = 1/3 - tau and linear well-posedness
// (a <= 0, c <= 0, b >= 0, d >= 0) or (a = c, b >= 0, d >= 0).
struct CaseParams {
  double a = 0, b = 0, c = 0, d = 0;
  double tau = 0;
  double eps = 0;
  int registry = 0;  // matched sign-pattern tag 1..13, 0 when outside the table
};

// Sign-pattern tag for long-time-behavior bookkeeping; ties resolve to the
// lowest number, 0 when no pattern matches.
int registry_match(double a, double b, double c, double d);

// Checks the coefficient constraint (tolerance 1e-12), eps in (0,1],
// tau >= 0, and linear well-posedness; fills the registry tag.
// Throws ValidationError on violation.
CaseParams validate_params(CaseParams p);

// Convenience constructors. make_case derives tau = 1/3 - (a+b+c+d).
CaseParams make_case(double a, double b, double c, double d, double eps);
CaseParams make_case_tau(double a, double b, double c, double d, double tau,
                         double eps);
// Canonical representative of a registry tag (1..13).
CaseParams case_by_id(int id, double eps);

// Fifth-order extension coefficients (sign pattern of the regularized
// dispersion class: b >= 0, b1 > 0, a < 0, a1 = 0, d >= 0, d1 > 0, c < 0,
// c1 = 0).
struct FifthParams {
  CaseParams base;
  double a1 = 0, b1 = 0, c1 = 0, d1 = 0;
};
FifthParams validate_fifth(FifthParams p);

// Full-dispersion family: symbol tanh(sqrt(eps)|xi|)/(sqrt(eps)|xi|) in the
// first equation; with_p_eps swaps in (1+beta*eps|xi|^2)^{1/2} * that symbol.
struct FdParams {
  double eps = 0;
  bool with_p_eps = false;
  double beta = 0;
};
FdParams validate_fd(FdParams p);

// Weakly dispersive system with symbol 1 - eps xi^2 / 3 in the first
// equation: linearly unstable for xi^2 > 3/eps, so grids resolving such
// modes are rejected unless explicitly overridden.
struct KaupParams {
  double eps = 0;
  bool allow_unstable_grid = false;
};
KaupParams validate_kaup(KaupParams p);

}  // namespace bsq
