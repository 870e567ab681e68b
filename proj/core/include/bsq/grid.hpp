#pragma once
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "bsq/errors.hpp"

namespace bsq {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Uniform periodic grid on [0,L)^dim with n points per axis, n a power of two.
// Mode j carries the signed wavenumber xi[j] = 2*pi*s(j)/L where s(j) = j for
// j < n/2 and j - n otherwise, so j = n/2 is the Nyquist mode -n/2.
// 2D storage is row-major with x fastest: index = iy*n + ix.
struct Grid {
  int dim = 1;
  int n = 0;
  double length = 2.0 * pi;
  std::vector<double> xi;  // per-axis wavenumber table, size n

  std::size_t size() const {
    return dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n);
  }
  double dx() const { return length / n; }
  double cell() const { return dim == 1 ? dx() : dx() * dx(); }
  double node(int i) const { return dx() * i; }
  double nyquist() const { return pi * n / length; }
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, int n, double length = 2.0 * pi);

bool same_grid(const Grid& a, const Grid& b);

}  // namespace bsq
