#include "bsq/norms.hpp"

#include <cmath>

#include "bsq/fft.hpp"

namespace bsq {

namespace {
// L^dim * sum (1+|xi|^2)^s |f_k|^2 over modes.
double weighted_sum(const Field& f, double s) {
  const Grid& g = *f.grid;
  auto coef = spectrum(f);
  const double meas = g.dim == 1 ? g.length : g.length * g.length;
  double acc = 0;
  if (g.dim == 1) {
    for (int j = 0; j < g.n; ++j) {
      const double w = 1.0 + g.xi[j] * g.xi[j];
      acc += std::pow(w, s) * std::norm(coef[j]);
    }
  } else {
    for (int jy = 0; jy < g.n; ++jy)
      for (int jx = 0; jx < g.n; ++jx) {
        const double w = 1.0 + g.xi[jx] * g.xi[jx] + g.xi[jy] * g.xi[jy];
        acc += std::pow(w, s) * std::norm(coef[std::size_t(jy) * g.n + jx]);
      }
  }
  return meas * acc;
}
}  // namespace

double l2_inner(const Field& a, const Field& b) {
  if (!same_grid(*a.grid, *b.grid)) throw FieldError("l2_inner: grid mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc * a.grid->cell();
}

double l2_norm(const Field& f) { return std::sqrt(l2_inner(f, f)); }

double sup_norm(const Field& f) {
  double m = 0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double sobolev_norm(const Field& f, double s) {
  return std::sqrt(weighted_sum(f, s));
}

double xsk_norm(const Field& f, double s, int k, double eps) {
  if (k < 0) throw ParamError("xsk_norm: k must be nonnegative");
  if (!(eps > 0)) throw ParamError("xsk_norm: eps must be positive");
  const double lo = weighted_sum(f, s);
  const double hi = weighted_sum(f, s + k);
  return std::sqrt(lo + std::pow(eps, k) * hi);
}

}  // namespace bsq
