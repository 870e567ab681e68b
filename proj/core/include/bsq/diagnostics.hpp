#pragma once
#include <optional>
#include <string>

#include "bsq/params.hpp"
#include "bsq/state.hpp"
#include "bsq/transforms.hpp"

namespace bsq {

// Conserved quadratic-plus-cubic functional of the b = d subfamily:
//   (1/2) Int ( -c eps |grad eta|^2 - a eps |grad u|^2 + eta^2 + |u|^2
//               + eps eta |u|^2 ).
// Throws CaseError when b != d.
double hamiltonian(const CaseParams& p, const State& s);
// Full-dispersion analogue (1/2) Int ( |T^{1/2} u|^2 + eta^2 + eps eta |u|^2 ).
double hamiltonian_fd(const FdParams& p, const State& s);

// Symmetrizer-weighted Sobolev energy of order `s_ord`. Supported
// coefficient patterns: b>0 a=c=d=0; d>0 a=b=c=0; a=-1 b=c=d=0.
double energy_symmetrized(const CaseParams& p, const State& s, double s_ord);
bool energy_symmetrized_supported(const CaseParams& p);
double energy_symmetrized_fifth(const FifthParams& p, const State& s,
                                double s_ord);

// Cascaded quadratic-form energies of the velocity-flux formulation and the
// equivalent scaled-norm functional.
struct QuasiEnergy {
  double e0 = 0;
  double e1 = 0, e2 = 0, e3 = 0;  // e3 used in 2D only
  double total = 0;
  double script = 0;  // sum of the scaled Sobolev norms
};
QuasiEnergy energy_quasilinear_1d(const Bundle1& b);
QuasiEnergy energy_quasilinear_2d(const Bundle2& b);

// Returns min(1 + eps eta) - H; throws CavitationError (with the grid
// location of the minimum) when that margin is negative.
double check_noncavitation(const State& s, double eps, double H);

// One diagnostics row. Optional entries stay empty when the case does not
// support them.
struct EnergyReport {
  double t = 0;
  std::optional<double> hamiltonian;
  std::optional<double> energy_s;     // symmetrized energy
  std::optional<double> energy_quasi; // velocity-flux cascade total
  std::optional<double> energy_script;
  double mass = 0;                    // mean of eta
  double margin = 0;                  // min(1+eps eta) - H
  std::optional<double> curl;
  double eta_sobolev = 0;
  double vel_sobolev = 0;
  double eta_xnorm = 0;  // |eta|_{X^s_eps}
  double vel_xnorm = 0;
  bool finite = true;
};

struct Verdict {
  bool blowup = false;
  double t = 0;
  std::string reason;
};

// Watches a report stream for non-finite values, cavitation, and growth of
// the designated energy past factor * (its initial value).
class BlowupMonitor {
 public:
  struct Options {
    double factor = 16;
    double H = 0.5;
  };
  explicit BlowupMonitor(Options o) : opt_(o) {}
  // Returns a verdict once triggered; later reports keep returning it.
  std::optional<Verdict> feed(const EnergyReport& r);
  const std::optional<Verdict>& verdict() const { return verdict_; }

 private:
  Options opt_;
  std::optional<double> e0_;
  std::optional<Verdict> verdict_;
};

// Energy watched by the monitor: first available of energy_s, energy_quasi,
// hamiltonian, plain Sobolev sum.
double monitored_energy(const EnergyReport& r);

}  // namespace bsq
