#include "bsq/grid.hpp"

#include <cmath>

namespace bsq {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

GridPtr make_grid(int dim, int n, double length) {
  if (dim != 1 && dim != 2) throw ParamError("grid: dim must be 1 or 2");
  if (n < 8 || !power_of_two(n))
    throw ParamError("grid: n must be a power of two >= 8");
  if (!(length > 0) || !std::isfinite(length))
    throw ParamError("grid: length must be positive");
  auto g = std::make_shared<Grid>();
  g->dim = dim;
  g->n = n;
  g->length = length;
  g->xi.resize(n);
  const double base = 2.0 * pi / length;
  for (int j = 0; j < n; ++j) {
    const int s = j < n / 2 ? j : j - n;
    g->xi[j] = base * s;
  }
  return g;
}

bool same_grid(const Grid& a, const Grid& b) {
  return a.dim == b.dim && a.n == b.n && a.length == b.length;
}

}  // namespace bsq
