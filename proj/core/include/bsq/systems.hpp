#pragma once
#include <functional>
#include <string>

#include "bsq/multiplier.hpp"
#include "bsq/params.hpp"
#include "bsq/state.hpp"

namespace bsq {

// Mode-diagonal linear propagator data. wave2 couples a component pair
// through [[0, alpha], [beta, 0]] per mode; wave3 is the 2D three-component
// analogue reduced to the xi-parallel pair (alpha = -i|xi| A, beta = -i|xi| B,
// the perpendicular velocity part static); diagonal applies lam[comp]
// componentwise.
struct LinearPart {
  enum class Form { wave2, wave3, diagonal };
  Form form = Form::wave2;
  std::vector<cplx> alpha, beta;       // wave2 / wave3, per mode
  std::vector<std::vector<cplx>> lam;  // diagonal, per component per mode
};

// Semidiscrete system dU/dt = L U + N(U) on spectral components.
struct System {
  std::string name;
  GridPtr grid;
  int ncomp = 2;
  LinearPart lin;
  std::function<void(const SpecVec& in, SpecVec& out)> nonlinear;  // writes N(U)
  double omega_max = 0;  // largest linear frequency, explicit-step budget
};

struct SystemOptions {
  bool dealias = true;      // 2/3-rule cut after every quadratic product
  bool linear_only = false; // drop N entirely (dispersion measurements)
};

SpecVec apply_linear(const System& sys, const SpecVec& u);
SpecVec rhs_spec(const System& sys, const SpecVec& u);

System make_system_abcd(GridPtr g, const CaseParams& p,
                        SystemOptions opt = {});
// eta replaced by eta - beta in the transport flux only.
System make_system_bathymetry(GridPtr g, const CaseParams& p,
                              const Field& beta, SystemOptions opt = {});
System make_system_fifth(GridPtr g, const FifthParams& p,
                         SystemOptions opt = {});
System make_system_fd(GridPtr g, const FdParams& p, SystemOptions opt = {});
System make_system_kaup(GridPtr g, const KaupParams& p,
                        SystemOptions opt = {});
// Velocity-flux formulation (1D and 2D): v = (1 + eps eta) u.
System make_system_eta_v(GridPtr g, double eps, SystemOptions opt = {});
// Mollified velocity-flux system, smoothing symbol phi(delta |xi|).
System make_system_mollified(GridPtr g, double eps, double delta,
                             SystemOptions opt = {});
// Elevation premultiplied by (1 - eps Lap); drop_remainder freezes the
// eps^2 correction so the system coincides with the a=-1 family.
System make_system_tilde(GridPtr g, double eps, bool drop_remainder,
                         SystemOptions opt = {});

enum class DiagRoute { a_neg, c_neg };  // a=-1,b=c=d=0  /  c=-1,a=b=d=0
System make_system_diag1(GridPtr g, double eps, DiagRoute r,
                         SystemOptions opt = {});
System make_system_diag2(GridPtr g, double eps, DiagRoute r,
                         SystemOptions opt = {});

// State-level right-hand sides (returned State holds d/dt fields).
State rhs_abcd(const CaseParams& p, const State& s, SystemOptions opt = {});
State rhs_bathymetry(const CaseParams& p, const Field& beta, const State& s,
                     SystemOptions opt = {});
State rhs_fifth(const FifthParams& p, const State& s, SystemOptions opt = {});
State rhs_fd(const FdParams& p, const State& s, SystemOptions opt = {});
State rhs_kaup(const KaupParams& p, const State& s, SystemOptions opt = {});
State rhs_eta_v(double eps, const State& s, SystemOptions opt = {});
State rhs_mollified(double eps, double delta, const State& s,
                    SystemOptions opt = {});
State rhs_tilde(double eps, const State& s, bool drop_remainder,
                SystemOptions opt = {});
Diag1State rhs_diag1(double eps, DiagRoute r, const Diag1State& w,
                     SystemOptions opt = {});
Diag2State rhs_diag2(double eps, DiagRoute r, const Diag2State& w,
                     SystemOptions opt = {});

}  // namespace bsq
