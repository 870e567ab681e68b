#include "bsq/mollified.hpp"

#include <cmath>
#include <string>

#include "bsq/norms.hpp"
#include "bsq/systems.hpp"

namespace bsq {

namespace {

constexpr double kRoundingFloor = 1e-13;

double state_dist(const State& a, const State& b, double eps) {
  const double x = xsk_norm(sub(a.eta, b.eta), 0, 1, eps);
  const double v = l2_norm(sub(a.vel[0], b.vel[0]));
  return std::sqrt(x * x + v * v);
}

std::vector<State> run_ladder_entry(const State& s0, double eps, double delta,
                                    const CauchyConfig& cfg,
                                    bool samples_wanted) {
  GridPtr g = s0.eta.grid;
  System sys = make_system_mollified(g, eps, delta);
  IntegratorConfig ic;
  ic.scheme = Scheme::rk4_if;
  ic.dt = cfg.dt;
  ic.t_end = cfg.t_end;
  ic.report_every = cfg.report_every;
  std::vector<State> samples;
  SpecVec u = evolve_spec(sys, ic, pack_spectral(s0),
                          [&](int, double t, const SpecVec& v) {
                            if (samples_wanted)
                              samples.push_back(unpack_spectral(g, v, t));
                            return true;
                          });
  if (!samples_wanted) samples.push_back(unpack_spectral(g, u, cfg.t_end));
  return samples;
}

void check_ladder(const State& s0, const CauchyConfig& cfg,
                  std::size_t min_entries) {
  if (s0.eta.grid->dim != 1)
    throw ValidationError("smoothing ladder: 1D states only");
  if (cfg.deltas.size() < min_entries)
    throw ValidationError("smoothing ladder: need at least " +
                          std::to_string(min_entries) + " delta values");
  for (double d : cfg.deltas)
    if (!(d > 0)) throw ValidationError("smoothing ladder: deltas must be > 0");
  if (!(cfg.eps > 0)) throw ValidationError("smoothing ladder: eps must be > 0");
}

}  // namespace

CauchyResult cauchy_study(const State& s0, const CauchyConfig& cfg) {
  check_ladder(s0, cfg, 2);
  std::vector<std::vector<State>> traj;
  for (double d : cfg.deltas)
    traj.push_back(run_ladder_entry(s0, cfg.eps, d, cfg, true));
  for (std::size_t k = 1; k < traj.size(); ++k)
    if (traj[k].size() != traj[0].size())
      throw ValidationError("smoothing ladder: sample misalignment");

  CauchyResult res;
  double dmax = 0;
  for (std::size_t i = 0; i < cfg.deltas.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.deltas.size(); ++j) {
      CauchyPair pr;
      pr.delta_lo = std::min(cfg.deltas[i], cfg.deltas[j]);
      pr.delta_hi = std::max(cfg.deltas[i], cfg.deltas[j]);
      double dist = 0;
      for (std::size_t k = 0; k < traj[i].size(); ++k)
        dist = std::max(dist, state_dist(traj[i][k], traj[j][k], cfg.eps));
      pr.dist = dist;
      dmax = std::max(dmax, dist);
      res.pairs.push_back(pr);
    }
  if (dmax < kRoundingFloor) {
    res.degenerate = true;
    return res;
  }
  // least-squares fit of log dist against log of the coarser delta
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& pr : res.pairs) {
    if (pr.dist <= 0) continue;
    const double x = std::log(pr.delta_hi), y = std::log(pr.dist);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double den = m * sxx - sx * sx;
    if (std::abs(den) > 1e-30) {
      res.slope = (m * sxy - sx * sy) / den;
      res.intercept = (sy - res.slope * sx) / m;
    }
  }
  return res;
}

LimitResult limit_extract(const State& s0, const CauchyConfig& cfg) {
  check_ladder(s0, cfg, 3);
  for (std::size_t k = 1; k < cfg.deltas.size(); ++k)
    if (!(cfg.deltas[k] < cfg.deltas[k - 1]))
      throw ValidationError(
          "smoothing ladder: deltas must be strictly decreasing");

  std::vector<State> finals;
  for (double d : cfg.deltas)
    finals.push_back(run_ladder_entry(s0, cfg.eps, d, cfg, false).front());

  LimitResult res;
  res.deltas = cfg.deltas;
  const double d0 = cfg.deltas[0], d1 = cfg.deltas[1], d2 = cfg.deltas[2];
  const double diff01 = state_dist(finals[0], finals[1], cfg.eps);
  const double diff12 = state_dist(finals[1], finals[2], cfg.eps);
  if (diff01 < kRoundingFloor || diff12 < kRoundingFloor) {
    res.degenerate = true;
    res.proxy = finals.back();
    return res;
  }
  const double rbar = std::sqrt(d0 / d2);
  res.rate = std::log(diff01 / diff12) / std::log(rbar);
  const double den = std::pow(rbar, res.rate) - 1.0;
  if (!(den > 0) || !std::isfinite(res.rate)) {
    res.degenerate = true;
    res.proxy = finals.back();
    return res;
  }
  res.bar = diff12 / den;
  const double q = 1.0 / den;
  State proxy = finals[2];
  proxy.eta = add(finals[2].eta, scale(sub(finals[2].eta, finals[1].eta), q));
  proxy.vel[0] =
      add(finals[2].vel[0], scale(sub(finals[2].vel[0], finals[1].vel[0]), q));
  proxy.time = cfg.t_end;
  res.proxy = proxy;
  if (cfg.deltas.size() >= 4) {
    const double w = std::pow(cfg.deltas.back() / d2, res.rate);
    State pred = proxy;
    pred.eta = add(proxy.eta, scale(sub(finals[2].eta, proxy.eta), w));
    pred.vel[0] =
        add(proxy.vel[0], scale(sub(finals[2].vel[0], proxy.vel[0]), w));
    res.residual = state_dist(finals.back(), pred, cfg.eps);
  }
  return res;
}

}  // namespace bsq
