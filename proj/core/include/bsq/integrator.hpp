#pragma once
#include <functional>

#include "bsq/systems.hpp"

namespace bsq {

enum class Scheme { rk4_if, rk4_plain };

Scheme scheme_from_name(const std::string& name);
std::string scheme_name(Scheme s);

// Classical four-stage scheme; rk4_if propagates the linear part exactly
// through cached mode-wise exponentials, rk4_plain treats L + N together and
// enforces dt * omega_max <= budget.
struct StepPlan {
  Scheme scheme = Scheme::rk4_if;
  double dt = 0;
  // wave2/wave3 exponential entries for dt and dt/2:
  //   [cos, alpha*sinc, beta*sinc] per mode
  std::vector<cplx> full_c, full_sa, full_sb;
  std::vector<cplx> half_c, half_sa, half_sb;
  std::vector<std::vector<cplx>> full_l, half_l;  // diagonal form
};

inline constexpr double rk4_budget = 2.828;

StepPlan make_step_plan(const System& sys, Scheme scheme, double dt);
void apply_exponential(const System& sys, const StepPlan& p, bool half,
                       SpecVec& u);
void step(const System& sys, const StepPlan& p, SpecVec& u);

struct IntegratorConfig {
  Scheme scheme = Scheme::rk4_if;
  double dt = 1e-3;
  double t_end = 1.0;
  int report_every = 10;
};

// Steps from u0 to t_end (last step shortened to land exactly); invokes
// on_report at t = 0, every report_every-th step, and at the end. A false
// return from on_report stops the run early.
SpecVec evolve_spec(
    const System& sys, const IntegratorConfig& cfg, SpecVec u0,
    const std::function<bool(int step, double t, const SpecVec&)>& on_report =
        {});

}  // namespace bsq
