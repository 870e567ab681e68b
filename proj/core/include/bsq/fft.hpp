#pragma once
#include <vector>

#include "bsq/grid.hpp"

namespace bsq::fft {

// Unnormalized complex DFT, out-of-place (in != out), sign -1 forward.
// Plans are cached per {dim, n, sign} and shared across threads.
void dft(const cplx* in, cplx* out, int dim, int n, int sign);

// Normalized transforms: forward divides by the total point count so the
// coefficients are the amplitudes in f(x) = sum_k f_k e^{i xi_k . x}.
std::vector<cplx> forward(const Grid& g, const std::vector<double>& values);
std::vector<cplx> forward_c(const Grid& g, const std::vector<cplx>& values);
std::vector<cplx> inverse_c(const Grid& g, const std::vector<cplx>& coef);
// Inverse returning the real part; throws FieldError if the imaginary part
// exceeds `imag_tol` in sup norm (pass a negative tol to skip the check).
std::vector<double> inverse(const Grid& g, const std::vector<cplx>& coef,
                            double imag_tol = 1e-10);

}  // namespace bsq::fft
