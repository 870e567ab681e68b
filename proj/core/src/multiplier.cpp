#include "bsq/multiplier.hpp"

#include <cmath>
#include <string>

#include "bsq/fft.hpp"

namespace bsq {

namespace {
double hypot2(double x, double y) { return std::sqrt(x * x + y * y); }

void check_eps(double eps, const char* who) {
  if (!(eps > 0) || !std::isfinite(eps))
    throw ParamError(std::string(who) + ": eps must be positive");
}
}  // namespace

std::vector<cplx> sample_symbol(const MultiplierOp& op, const Grid& g) {
  std::vector<cplx> table(g.size());
  if (g.dim == 1) {
    for (int j = 0; j < g.n; ++j) table[j] = op.symbol(g.xi[j], 0.0);
  } else {
    for (int jy = 0; jy < g.n; ++jy)
      for (int jx = 0; jx < g.n; ++jx)
        table[std::size_t(jy) * g.n + jx] = op.symbol(g.xi[jx], g.xi[jy]);
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!std::isfinite(table[i].real()) || !std::isfinite(table[i].imag()))
      throw SymbolError(op.name + ": non-finite symbol at mode " +
                        std::to_string(i));
  }
  return table;
}

Field apply_multiplier(const MultiplierOp& op, const Field& f) {
  require_finite(f, op.name.c_str());
  auto table = sample_symbol(op, *f.grid);
  auto coef = spectrum(f);
  apply_table(table, coef);
  // Odd symbols have no partner for the Nyquist modes; their imaginary
  // remainder is discarded by taking the real part.
  return make_field(f.grid, fft::inverse(*f.grid, coef, -1.0));
}

void apply_table(const std::vector<cplx>& table, std::vector<cplx>& coef) {
  if (table.size() != coef.size()) throw FieldError("apply_table: size mismatch");
  for (std::size_t i = 0; i < coef.size(); ++i) coef[i] *= table[i];
}

MultiplierOp identity_op() {
  return {"identity", [](double, double) { return cplx(1.0, 0.0); }};
}

MultiplierOp deriv(int axis) {
  if (axis != 0 && axis != 1) throw ParamError("deriv: axis must be 0 or 1");
  return {axis == 0 ? "d/dx" : "d/dy", [axis](double x, double y) {
            return cplx(0.0, axis == 0 ? x : y);
          }};
}

MultiplierOp laplacian() {
  return {"laplacian",
          [](double x, double y) { return cplx(-(x * x + y * y), 0.0); }};
}

MultiplierOp abs_d(double s) {
  return {"|D|^s", [s](double x, double y) {
            const double r = hypot2(x, y);
            if (r == 0.0) return cplx(s == 0.0 ? 1.0 : 0.0, 0.0);
            return cplx(std::pow(r, s), 0.0);
          }};
}

MultiplierOp j_eps(double eps) {
  check_eps(eps, "j_eps");
  return {"J_eps", [eps](double x, double y) {
            return cplx(std::sqrt(1.0 + eps * (x * x + y * y)), 0.0);
          }};
}

MultiplierOp j_eps_inv(double eps) {
  check_eps(eps, "j_eps_inv");
  return {"J_eps^{-1}", [eps](double x, double y) {
            return cplx(1.0 / std::sqrt(1.0 + eps * (x * x + y * y)), 0.0);
          }};
}

MultiplierOp helmholtz_inv(double coef) {
  if (!(coef >= 0) || !std::isfinite(coef))
    throw ParamError("helmholtz_inv: coef must be nonnegative");
  return {"helmholtz_inv", [coef](double x, double y) {
            return cplx(1.0 / (1.0 + coef * (x * x + y * y)), 0.0);
          }};
}

MultiplierOp r_eps(double eps) {
  check_eps(eps, "r_eps");
  // i xi / ((1+eps xi^2)^{1/2} + sqrt(eps)|xi|); equals
  // i xi ((1+eps xi^2)^{1/2} - sqrt(eps)|xi|), bounded by 1/(2 sqrt(eps)).
  const double se = std::sqrt(eps);
  return {"R_eps", [eps, se](double x, double) {
            return cplx(0.0,
                        x / (std::sqrt(1.0 + eps * x * x) + se * std::abs(x)));
          }};
}

MultiplierOp hilbert() {
  return {"hilbert", [](double x, double) {
            if (x == 0.0) return cplx(0.0, 0.0);
            return cplx(0.0, x > 0 ? -1.0 : 1.0);
          }};
}

MultiplierOp riesz(int axis) {
  if (axis != 0 && axis != 1) throw ParamError("riesz: axis must be 0 or 1");
  return {axis == 0 ? "riesz_x" : "riesz_y", [axis](double x, double y) {
            const double r = hypot2(x, y);
            if (r == 0.0) return cplx(0.0, 0.0);
            return cplx(0.0, (axis == 0 ? x : y) / r);
          }};
}

MultiplierOp t_eps(double eps) {
  check_eps(eps, "t_eps");
  const double se = std::sqrt(eps);
  return {"T_eps", [se](double x, double y) {
            const double z = se * hypot2(x, y);
            if (z == 0.0) return cplx(1.0, 0.0);
            return cplx(std::tanh(z) / z, 0.0);
          }};
}

MultiplierOp p_eps(double eps, double beta) {
  check_eps(eps, "p_eps");
  if (!(beta >= 0) || !std::isfinite(beta))
    throw ParamError("p_eps: beta must be nonnegative");
  const double se = std::sqrt(eps);
  return {"P_eps", [eps, beta, se](double x, double y) {
            const double r2 = x * x + y * y;
            const double z = se * std::sqrt(r2);
            const double t = z == 0.0 ? 1.0 : std::tanh(z) / z;
            return cplx(std::sqrt(1.0 + beta * eps * r2) * t, 0.0);
          }};
}

double bump_phi(double s) {
  const double t = std::abs(s);
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double w = 2.0 * t - 1.0;  // in (0,1)
  return std::exp(1.0 - 1.0 / (1.0 - w * w));
}

MultiplierOp mollifier_op(double delta) {
  if (!(delta >= 0) || !std::isfinite(delta))
    throw ParamError("mollifier: delta must be nonnegative");
  return {"mollifier", [delta](double x, double y) {
            return cplx(bump_phi(delta * hypot2(x, y)), 0.0);
          }};
}

bool dealias_mode_kept(const Grid& g, std::size_t flat) {
  const int cut = g.n / 3;
  auto kept = [&](int j) {
    const int s = j < g.n / 2 ? j : j - g.n;
    return std::abs(s) <= cut;
  };
  if (g.dim == 1) return kept(int(flat));
  return kept(int(flat % g.n)) && kept(int(flat / g.n));
}

void dealias_spec(const Grid& g, std::vector<cplx>& coef) {
  for (std::size_t i = 0; i < coef.size(); ++i)
    if (!dealias_mode_kept(g, i)) coef[i] = 0.0;
}

Field dealias(const Field& f) {
  auto coef = spectrum(f);
  dealias_spec(*f.grid, coef);
  return make_field(f.grid, fft::inverse(*f.grid, coef, -1.0));
}

}  // namespace bsq
