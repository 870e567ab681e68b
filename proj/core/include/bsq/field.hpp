#pragma once
#include <vector>

#include "bsq/grid.hpp"

namespace bsq {

// Real scalar field sampled on a shared grid.
struct Field {
  GridPtr grid;
  std::vector<double> v;

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
  std::size_t size() const { return v.size(); }
};

Field make_field(GridPtr g);                         // zeros
Field make_field(GridPtr g, std::vector<double> v);  // takes ownership

bool finite(const Field& f);
void require_finite(const Field& f, const char* what);

std::vector<cplx> spectrum(const Field& f);
Field field_from_spectrum(GridPtr g, const std::vector<cplx>& coef,
                          double imag_tol = 1e-10);

double mean(const Field& f);

// Pointwise arithmetic (grids must match).
Field add(const Field& a, const Field& b);
Field sub(const Field& a, const Field& b);
Field scale(const Field& a, double c);
Field shift(const Field& a, double c);  // a + c
Field mul(const Field& a, const Field& b);
// a / b computed pointwise in real space; throws CavitationError if |b|
// drops below `floor` anywhere.
Field div(const Field& a, const Field& b, double floor = 1e-12);

void axpy(Field& y, double alpha, const Field& x);  // y += alpha * x

}  // namespace bsq
