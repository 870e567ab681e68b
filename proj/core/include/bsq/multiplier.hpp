#pragma once
#include <functional>
#include <string>
#include <vector>

#include "bsq/field.hpp"

namespace bsq {

// Fourier multiplier: acts diagonally on modes, coefficient-wise
// (Op f)_k = symbol(xi_k) f_k. The symbol receives the signed per-axis
// wavenumbers (xi_y = 0 in 1D).
struct MultiplierOp {
  std::string name;
  std::function<cplx(double xix, double xiy)> symbol;
};

// Mode table of the symbol on a grid; throws SymbolError on non-finite
// values at resolved modes.
std::vector<cplx> sample_symbol(const MultiplierOp& op, const Grid& g);

Field apply_multiplier(const MultiplierOp& op, const Field& f);
void apply_table(const std::vector<cplx>& table, std::vector<cplx>& coef);

MultiplierOp identity_op();
MultiplierOp deriv(int axis);                  // i xi_axis
MultiplierOp laplacian();                      // -|xi|^2
MultiplierOp abs_d(double s);                  // |xi|^s, 0 at xi = 0
MultiplierOp j_eps(double eps);                // (1 + eps |xi|^2)^{1/2}
MultiplierOp j_eps_inv(double eps);            // (1 + eps |xi|^2)^{-1/2}
MultiplierOp helmholtz_inv(double coef);       // (1 + coef |xi|^2)^{-1}
MultiplierOp r_eps(double eps);                // i xi / ((1+eps xi^2)^{1/2} + sqrt(eps)|xi|), 1D
MultiplierOp hilbert();                        // -i sign(xi), 1D
MultiplierOp riesz(int axis);                  // i xi_axis / |xi|, 0 at 0
MultiplierOp t_eps(double eps);                // tanh(sqrt(eps)|xi|) / (sqrt(eps)|xi|), 1 at 0
MultiplierOp p_eps(double eps, double beta);   // (1 + beta eps |xi|^2)^{1/2} t_eps
MultiplierOp mollifier_op(double delta);       // phi(delta |xi|)

// Smooth cutoff profile: 1 on |s| <= 1/2, exp(1 - 1/(1 - (2|s|-1)^2))
// on 1/2 < |s| < 1, 0 beyond.
double bump_phi(double s);

// Zero every mode with |j| > n/3 on any axis (2/3 rule for quadratic terms).
Field dealias(const Field& f);
void dealias_spec(const Grid& g, std::vector<cplx>& coef);
bool dealias_mode_kept(const Grid& g, std::size_t flat_index);

}  // namespace bsq
