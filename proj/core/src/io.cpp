#include "bsq/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>

namespace bsq {

namespace {

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ofstream& out, double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, 8);
  put_u64(out, v);
}

std::uint64_t get_u64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

double get_f64(std::ifstream& in) {
  const std::uint64_t v = get_u64(in);
  double x;
  std::memcpy(&x, &v, 8);
  return x;
}

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : "";
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw Error("cannot open csv file '" + path + "'");
  out_ << "t,hamiltonian,energy_s,energy_quasi,energy_script,mass,"
          "noncavitation_margin,curl_norm,eta_sobolev,vel_sobolev,"
          "eta_xnorm,vel_xnorm,verdict\n";
}

void CsvWriter::write_report(const EnergyReport& r,
                             const std::string& verdict) {
  out_ << format_double(r.t) << ',' << opt_cell(r.hamiltonian) << ','
       << opt_cell(r.energy_s) << ',' << opt_cell(r.energy_quasi) << ','
       << opt_cell(r.energy_script) << ',' << format_double(r.mass) << ','
       << format_double(r.margin) << ',' << opt_cell(r.curl) << ','
       << format_double(r.eta_sobolev) << ',' << format_double(r.vel_sobolev)
       << ',' << format_double(r.eta_xnorm) << ','
       << format_double(r.vel_xnorm) << ',' << verdict << '\n';
}

void CsvWriter::close() {
  if (out_.is_open()) out_.close();
}

void write_bsq1(const std::string& path, const State& s, double eps) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open snapshot file '" + path + "'");
  const Grid& g = *s.eta.grid;
  out.write("BSQ1", 4);
  put_u64(out, std::uint64_t(g.dim));
  put_u64(out, std::uint64_t(g.n));
  put_f64(out, g.length);
  put_f64(out, eps);
  put_f64(out, s.time);
  for (std::size_t i = 0; i < s.eta.size(); ++i) put_f64(out, s.eta[i]);
  for (const auto& u : s.vel)
    for (std::size_t i = 0; i < u.size(); ++i) put_f64(out, u[i]);
  if (!out) throw Error("snapshot write failed: '" + path + "'");
}

Bsq1File read_bsq1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot file '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "BSQ1", 4) != 0)
    throw Error("not a BSQ1 snapshot: '" + path + "'");
  Bsq1File f;
  f.dim = int(get_u64(in));
  f.n = int(get_u64(in));
  f.length = get_f64(in);
  f.eps = get_f64(in);
  f.time = get_f64(in);
  if (!in || (f.dim != 1 && f.dim != 2) || f.n < 2)
    throw Error("corrupt BSQ1 header: '" + path + "'");
  const std::size_t m =
      f.dim == 1 ? std::size_t(f.n) : std::size_t(f.n) * std::size_t(f.n);
  while (true) {
    std::vector<double> comp(m);
    for (std::size_t i = 0; i < m; ++i) comp[i] = get_f64(in);
    if (!in) break;
    f.components.push_back(std::move(comp));
    in.peek();
    if (in.eof()) break;
  }
  if (f.components.size() < 2)
    throw Error("BSQ1 snapshot missing components: '" + path + "'");
  return f;
}

std::string output_root() {
  const char* env = std::getenv("BSQ_OUT_ROOT");
  if (env && *env) return env;
  return ".";
}

std::string resolve_output_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_absolute()) return p.string();
  return (std::filesystem::path(output_root()) / p).string();
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error("cannot create directory '" + path + "': " + ec.message());
}

}  // namespace bsq
