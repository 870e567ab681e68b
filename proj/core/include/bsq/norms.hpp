#pragma once
#include "bsq/field.hpp"

namespace bsq {

// L^2 inner product and norms by quadrature: (f|g) = sum f g dx (exact for
// band-limited fields). Sobolev norms are spectral sums
//   |f|_{H^s}^2 = L^dim * sum_k (1 + |xi_k|^2)^s |f_k|^2
// with the normalized coefficients, so |cos x|_{L^2} = sqrt(pi) on [0, 2pi).
double l2_inner(const Field& a, const Field& b);
double l2_norm(const Field& f);
double sup_norm(const Field& f);
double sobolev_norm(const Field& f, double s);

// Scaled-family norm: |f|^2 = |f|_{H^s}^2 + eps^k |f|_{H^{s+k}}^2.
double xsk_norm(const Field& f, double s, int k, double eps);

}  // namespace bsq
