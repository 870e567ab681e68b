#include "bsq/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "bsq/errors.hpp"

namespace bsq::fft {

namespace {

struct PlanKey {
  int dim, n, sign;
  bool operator<(const PlanKey& o) const {
    if (dim != o.dim) return dim < o.dim;
    if (n != o.n) return n < o.n;
    return sign < o.sign;
  }
};

// Plans are created once per shape with FFTW_ESTIMATE | FFTW_UNALIGNED and
// replayed on caller buffers via the new-array interface, which is
// thread-safe; only creation needs the lock.
fftw_plan get_plan(int dim, int n, int sign) {
  static std::map<PlanKey, fftw_plan> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  const PlanKey key{dim, n, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const std::size_t total = dim == 1 ? n : std::size_t(n) * n;
  fftw_complex* a = fftw_alloc_complex(total);
  fftw_complex* b = fftw_alloc_complex(total);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = dim == 1 ? fftw_plan_dft_1d(n, a, b, sign, flags)
                            : fftw_plan_dft_2d(n, n, a, b, sign, flags);
  fftw_free(a);
  fftw_free(b);
  if (!plan) throw Error("fft: plan creation failed");
  cache.emplace(key, plan);
  return plan;
}

}  // namespace

void dft(const cplx* in, cplx* out, int dim, int n, int sign) {
  fftw_plan plan = get_plan(dim, n, sign);
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

std::vector<cplx> forward(const Grid& g, const std::vector<double>& values) {
  std::vector<cplx> tmp(values.begin(), values.end());
  return forward_c(g, tmp);
}

std::vector<cplx> forward_c(const Grid& g, const std::vector<cplx>& values) {
  if (values.size() != g.size()) throw FieldError("fft: size mismatch");
  std::vector<cplx> out(values.size());
  dft(values.data(), out.data(), g.dim, g.n, FFTW_FORWARD);
  const double norm = 1.0 / double(g.size());
  for (auto& c : out) c *= norm;
  return out;
}

std::vector<cplx> inverse_c(const Grid& g, const std::vector<cplx>& coef) {
  if (coef.size() != g.size()) throw FieldError("fft: size mismatch");
  std::vector<cplx> out(coef.size());
  dft(coef.data(), out.data(), g.dim, g.n, FFTW_BACKWARD);
  return out;
}

std::vector<double> inverse(const Grid& g, const std::vector<cplx>& coef,
                            double imag_tol) {
  std::vector<cplx> full = inverse_c(g, coef);
  std::vector<double> out(full.size());
  double worst = 0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    out[i] = full[i].real();
    worst = std::max(worst, std::abs(full[i].imag()));
  }
  if (imag_tol >= 0 && worst > imag_tol)
    throw FieldError("fft: inverse of non-conjugate-symmetric spectrum (imag " +
                     std::to_string(worst) + ")");
  return out;
}

}  // namespace bsq::fft
