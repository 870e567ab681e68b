#pragma once
#include <vector>

#include "bsq/integrator.hpp"
#include "bsq/state.hpp"

namespace bsq {

// Pairwise-distance study across a smoothing ladder. Runs the mollified
// velocity-flux system once per delta from the same initial state, samples
// the trajectories at report times, and fits
//   log dist(delta_i, delta_j)  vs  log max(delta_i, delta_j)
// where dist is the sup over samples of the scaled-norm distance
// ( |d_eta|_{X^0_eps}^2 + |d_v|_2^2 )^{1/2}.
struct CauchyConfig {
  std::vector<double> deltas;
  double eps = 0.1;
  double dt = 1e-3;
  double t_end = 1.0;
  int report_every = 50;
};

struct CauchyPair {
  double delta_lo = 0, delta_hi = 0;
  double dist = 0;
};

struct CauchyResult {
  std::vector<CauchyPair> pairs;
  double slope = 0, intercept = 0;  // log-log fit
  bool degenerate = false;          // all distances at rounding level
};

CauchyResult cauchy_study(const State& s0, const CauchyConfig& cfg);

// Richardson extrapolation across the ladder (coarse entries fit the rate,
// the finest is held out): proxy = S(d2) + (S(d2) - S(d1)) / (r^p - 1) with
// r = d1/d2, then the held-out state must sit within the fitted bar of the
// proxy's prediction.
struct LimitResult {
  std::vector<double> deltas;
  double rate = 0;       // fitted convergence order p
  double bar = 0;        // extrapolation error estimate
  double residual = 0;   // holdout mismatch
  bool degenerate = false;
  State proxy;           // delta -> 0 trajectory endpoint estimate
};

LimitResult limit_extract(const State& s0, const CauchyConfig& cfg);

}  // namespace bsq
