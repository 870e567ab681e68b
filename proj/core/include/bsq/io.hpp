#pragma once
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "bsq/diagnostics.hpp"
#include "bsq/state.hpp"

namespace bsq {

// Diagnostics table, one row per report. Schema (header row is authoritative):
//   t, hamiltonian, energy_s, energy_quasi, energy_script, mass,
//   noncavitation_margin, curl_norm, eta_sobolev, vel_sobolev,
//   eta_xnorm, vel_xnorm, verdict
// Numbers print with %.17g; inapplicable cells stay empty; the verdict cell
// is empty until a blow-up verdict tags the final row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void write_report(const EnergyReport& r, const std::string& verdict = "");
  void close();

 private:
  std::ofstream out_;
};

std::string format_double(double x);  // %.17g

// Flat binary state snapshot. Layout, all little-endian:
//   bytes 0..3   magic "BSQ1"
//   uint64       dim
//   uint64       n            (points per axis)
//   float64      L
//   float64      eps
//   float64      time
//   float64[]    field data, row-major, elevation first then each velocity
//                component (component count = remaining size / n^dim)
void write_bsq1(const std::string& path, const State& s, double eps);
struct Bsq1File {
  int dim = 0;
  int n = 0;
  double length = 0, eps = 0, time = 0;
  std::vector<std::vector<double>> components;
};
Bsq1File read_bsq1(const std::string& path);

// Root directory for run outputs: BSQ_OUT_ROOT env var, else current
// directory; relative output paths resolve against it.
std::string output_root();
std::string resolve_output_dir(const std::string& dir);
void ensure_dir(const std::string& path);

}  // namespace bsq
