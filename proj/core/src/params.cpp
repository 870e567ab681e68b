#include "bsq/params.hpp"

#include <cmath>
#include <string>

namespace bsq {

namespace {
constexpr double kZeroTol = 1e-14;
constexpr double kSumTol = 1e-12;

bool zero(double x) { return std::abs(x) <= kZeroTol; }
bool pos(double x) { return x > kZeroTol; }
bool neg(double x) { return x < -kZeroTol; }
bool same(double x, double y) { return std::abs(x - y) <= kZeroTol; }
}  // namespace

int registry_match(double a, double b, double c, double d) {
  // Ordered sign-pattern table; the first (lowest-numbered) match wins.
  if (pos(b) && zero(d) && neg(a) && neg(c)) return 1;
  if (pos(b) && zero(d) && zero(a) && neg(c)) return 2;
  if (zero(b) && pos(d) && neg(a) && neg(c)) return 3;
  if ((!same(b, d) && pos(b) && pos(d) && neg(a) && neg(c)) ||
      (zero(b) && pos(d) && zero(a) && neg(c)))
    return 4;
  if (!same(b, d) && pos(b) && pos(d) && zero(a) && neg(c)) return 5;
  if ((same(b, d) && pos(b) && neg(a) && neg(c)) ||
      (pos(b) && zero(d) && neg(a) && zero(c)))
    return 6;
  if ((pos(b) && zero(d) && zero(a) && zero(c)) ||
      (same(b, d) && pos(b) && zero(a) && neg(c)))
    return 7;
  if ((pos(b) && pos(d) && neg(a) && zero(c)) ||
      (zero(b) && pos(d) && zero(a) && zero(c)))
    return 8;
  if (zero(b) && pos(d) && neg(a) && zero(c)) return 9;
  if (pos(b) && pos(d) && zero(a) && zero(c)) return 10;
  if (zero(b) && zero(d) && neg(a) && neg(c)) return 11;
  if (zero(b) && zero(d) && zero(a) && neg(c)) return 12;
  if (zero(b) && zero(d) && neg(a) && zero(c)) return 13;
  return 0;
}

CaseParams validate_params(CaseParams p) {
  for (double x : {p.a, p.b, p.c, p.d, p.tau, p.eps})
    if (!std::isfinite(x)) throw ValidationError("params: non-finite entry");
  if (!(p.eps > 0) || p.eps > 1.0)
    throw ValidationError("params: eps must lie in (0, 1]");
  if (p.tau < 0) throw ValidationError("params: tau must be nonnegative");
  const double sum = p.a + p.b + p.c + p.d;
  if (std::abs(sum - (1.0 / 3.0 - p.tau)) > kSumTol)
    throw ValidationError(
        "params: a+b+c+d must equal 1/3 - tau (got " + std::to_string(sum) +
        " vs " + std::to_string(1.0 / 3.0 - p.tau) + ")");
  const bool order1 = p.a <= kZeroTol && p.c <= kZeroTol && p.b >= -kZeroTol &&
                      p.d >= -kZeroTol;
  const bool order2 =
      std::abs(p.a - p.c) <= kZeroTol && p.b >= -kZeroTol && p.d >= -kZeroTol;
  if (!order1 && !order2)
    throw ValidationError(
        "params: linear well-posedness needs (a<=0, c<=0, b>=0, d>=0) or "
        "(a=c, b>=0, d>=0)");
  const int tag = registry_match(p.a, p.b, p.c, p.d);
  if (p.registry != 0 && p.registry != tag)
    throw ValidationError("params: declared case tag " +
                          std::to_string(p.registry) +
                          " does not match coefficients (tag " +
                          std::to_string(tag) + ")");
  p.registry = tag;
  return p;
}

CaseParams make_case(double a, double b, double c, double d, double eps) {
  double tau = 1.0 / 3.0 - (a + b + c + d);
  // cancellation can push an exact zero a hair negative
  if (tau < 0 && tau > -kSumTol) tau = 0;
  return make_case_tau(a, b, c, d, tau, eps);
}

CaseParams make_case_tau(double a, double b, double c, double d, double tau,
                         double eps) {
  CaseParams p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.d = d;
  p.tau = tau;
  p.eps = eps;
  return validate_params(p);
}

CaseParams case_by_id(int id, double eps) {
  const double s = 1.0 / 6.0;
  switch (id) {
    case 1: return make_case(-s, 2 * s, -s, 0, eps);
    case 2: return make_case(0, 2 * s, -s, 0, eps);
    case 3: return make_case(-s, 0, -s, 2 * s, eps);
    case 4: return make_case(-s, s, -s, 2 * s, eps);
    case 5: return make_case(0, s, -s, 2 * s, eps);
    case 6: return make_case(-s, s, -s, s, eps);
    case 7: return make_case(0, 1.0 / 3.0, 0, 0, eps);
    case 8: return make_case(-s, s, 0, s, eps);
    case 9: return make_case(-s, 0, 0, 2 * s, eps);
    case 10: return make_case(0, s, 0, s, eps);
    case 11: return make_case(-s, 0, -s, 0, eps);
    case 12: return make_case(0, 0, -s, 0, eps);
    case 13: return make_case(-s, 0, 0, 0, eps);
    default:
      throw ValidationError("case_by_id: tag must be 1..13");
  }
}

FifthParams validate_fifth(FifthParams p) {
  p.base = validate_params(p.base);
  for (double x : {p.a1, p.b1, p.c1, p.d1})
    if (!std::isfinite(x)) throw ValidationError("fifth: non-finite entry");
  // regularized-dispersion sign pattern
  if (!(p.base.b >= 0) || !(p.b1 > 0) || !(p.base.a < 0) || !zero(p.a1) ||
      !(p.base.d >= 0) || !(p.d1 > 0) || !(p.base.c < 0) || !zero(p.c1))
    throw ValidationError(
        "fifth: need b>=0, b1>0, a<0, a1=0, d>=0, d1>0, c<0, c1=0");
  return p;
}

FdParams validate_fd(FdParams p) {
  if (!(p.eps > 0) || p.eps > 1.0)
    throw ValidationError("fd: eps must lie in (0, 1]");
  if (p.with_p_eps && !(p.beta >= 0))
    throw ValidationError("fd: beta must be nonnegative");
  return p;
}

KaupParams validate_kaup(KaupParams p) {
  if (!(p.eps > 0) || p.eps > 1.0)
    throw ValidationError("kaup: eps must lie in (0, 1]");
  return p;
}

}  // namespace bsq
