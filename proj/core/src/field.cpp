#include "bsq/field.hpp"

#include <cmath>
#include <string>

#include "bsq/fft.hpp"

namespace bsq {

namespace {
void require_same(const Field& a, const Field& b, const char* what) {
  if (!a.grid || !b.grid || !same_grid(*a.grid, *b.grid))
    throw FieldError(std::string(what) + ": grid mismatch");
}
}  // namespace

Field make_field(GridPtr g) {
  if (!g) throw FieldError("field: null grid");
  return Field{g, std::vector<double>(g->size(), 0.0)};
}

Field make_field(GridPtr g, std::vector<double> v) {
  if (!g) throw FieldError("field: null grid");
  if (v.size() != g->size()) throw FieldError("field: size mismatch");
  return Field{g, std::move(v)};
}

bool finite(const Field& f) {
  for (double x : f.v)
    if (!std::isfinite(x)) return false;
  return true;
}

void require_finite(const Field& f, const char* what) {
  if (!finite(f)) throw FieldError(std::string(what) + ": non-finite field");
}

std::vector<cplx> spectrum(const Field& f) { return fft::forward(*f.grid, f.v); }

Field field_from_spectrum(GridPtr g, const std::vector<cplx>& coef,
                          double imag_tol) {
  return make_field(g, fft::inverse(*g, coef, imag_tol));
}

double mean(const Field& f) {
  double s = 0;
  for (double x : f.v) s += x;
  return s / double(f.size());
}

Field add(const Field& a, const Field& b) {
  require_same(a, b, "add");
  Field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Field sub(const Field& a, const Field& b) {
  require_same(a, b, "sub");
  Field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Field scale(const Field& a, double c) {
  Field out = a;
  for (auto& x : out.v) x *= c;
  return out;
}

Field shift(const Field& a, double c) {
  Field out = a;
  for (auto& x : out.v) x += c;
  return out;
}

Field mul(const Field& a, const Field& b) {
  require_same(a, b, "mul");
  Field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

Field div(const Field& a, const Field& b, double floor) {
  require_same(a, b, "div");
  Field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (std::abs(b[i]) < floor)
      throw CavitationError("div: denominator vanished at node " +
                            std::to_string(i));
    out[i] /= b[i];
  }
  return out;
}

void axpy(Field& y, double alpha, const Field& x) {
  require_same(y, x, "axpy");
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace bsq
