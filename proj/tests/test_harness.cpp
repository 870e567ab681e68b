#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsq/config.hpp"
#include "bsq/errors.hpp"
#include "bsq/grid.hpp"
#include "bsq/initial_data.hpp"
#include "bsq/io.hpp"
#include "bsq/runner.hpp"
#include "bsq/systems.hpp"
#include "bsq/transforms.hpp"

using namespace bsq;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

int count_commas(const std::string& s) {
  int c = 0;
  for (char ch : s)
    if (ch == ',') ++c;
  return c;
}

std::string scratch_dir(const std::string& leaf) {
  const std::string dir = resolve_output_dir("harness_scratch/" + leaf);
  ensure_dir(dir);
  return dir;
}

double max_abs(const Field& f) {
  double m = 0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config grammar accepts comments and flat dotted keys") {
  const std::string text =
      "# leading comment\n"
      "\n"
      "grid.n = 64   # inline comment\n"
      "eps = 0.25\n"
      "init.family = gaussian_hump\n"
      "flag_on = yes\n"
      "list = 1, 2.5, -3\n";
  Config c = Config::parse_text(text);
  CHECK(c.has("grid.n"));
  CHECK(c.get_int("grid.n") == 64);
  CHECK(c.get_double("eps") == doctest::Approx(0.25));
  CHECK(c.get_str("init.family") == "gaussian_hump");
  CHECK(c.get_bool("flag_on", false) == true);
  const auto xs = c.get_list("list");
  REQUIRE(xs.size() == 3);
  CHECK(xs[0] == doctest::Approx(1.0));
  CHECK(xs[1] == doctest::Approx(2.5));
  CHECK(xs[2] == doctest::Approx(-3.0));
  CHECK(c.get_str("absent", "fallback") == "fallback");
  CHECK(c.get_double("absent", 7.5) == doctest::Approx(7.5));
  CHECK(c.get_int("absent", 9) == 9);
  CHECK(c.get_bool("absent", true) == true);
}

TEST_CASE("config grammar rejects malformed input") {
  CHECK_THROWS_AS(Config::parse_text("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_text("just words\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_text("bad key = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_text("= 1\n"), ConfigError);

  Config c = Config::parse_text("x = nope\nn = 3.5\nb = maybe\nl = 1,,2\n");
  CHECK_THROWS_AS(c.get_double("x"), ConfigError);
  CHECK_THROWS_AS(c.get_int("n"), ConfigError);
  CHECK_THROWS_AS(c.get_bool("b", false), ConfigError);
  CHECK_THROWS_AS(c.get_list("l"), ConfigError);
  CHECK_THROWS_AS(c.get_list("x"), ConfigError);
  CHECK_THROWS_AS(c.get_str("missing"), ConfigError);
  CHECK_THROWS_AS(Config::parse_file("/no/such/config.cfg"), ConfigError);
}

TEST_CASE("config keeps insertion order and serializes canonically") {
  const std::string text = "b = 2\na = 1\nz.k = x\n";
  Config c = Config::parse_text(text);
  const auto& items = c.items();
  REQUIRE(items.size() == 3);
  CHECK(items[0].first == "b");
  CHECK(items[1].first == "a");
  CHECK(items[2].first == "z.k");

  const std::string canon = c.serialize();
  CHECK(canon == "b = 2\na = 1\nz.k = x\n");
  CHECK(Config::parse_text(canon).serialize() == canon);

  c.set("a", "10");
  CHECK(c.get_int("a") == 10);
  c.set("new.key", "v");
  CHECK(c.items().back().first == "new.key");
  CHECK_THROWS_AS(c.set("bad key", "v"), ConfigError);

  Config k = Config::parse_text("alpha = 1\nbeta = 2\n");
  CHECK_NOTHROW(k.check_known_keys({"alpha", "beta", "gamma"}));
  CHECK_THROWS_AS(k.check_known_keys({"alpha"}), ConfigError);
}

TEST_CASE("boolean tokens cover the documented spellings") {
  Config c = Config::parse_text(
      "a = true\nb = TRUE\nc = 1\nd = yes\ne = on\n"
      "f = false\ng = 0\nh = no\ni = OFF\n");
  for (const char* k : {"a", "b", "c", "d", "e"})
    CHECK(c.get_bool(k, false) == true);
  for (const char* k : {"f", "g", "h", "i"})
    CHECK(c.get_bool(k, true) == false);
}

TEST_CASE("seed expansion matches the frozen reference values") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);
  CHECK(splitmix64(1) == 0x910A2DEC89025CC1ull);
  CHECK(splitmix64(0x123456789ABCDEFull) == 0x157A3807A48FAA9Dull);
}

TEST_CASE("random initial data is deterministic per seed and field") {
  GridPtr g = make_grid(1, 64, 2 * pi);
  InitSpec spec;
  spec.family = "random_bandlimited";
  spec.amplitude = 0.3;
  spec.u_amplitude = 0.2;
  spec.kmax = 10;
  spec.seed = 42;
  State a = make_initial_data(g, spec);
  State b = make_initial_data(g, spec);
  for (int i = 0; i < g->size(); ++i) {
    CHECK(a.eta[i] == b.eta[i]);
    CHECK(a.vel[0][i] == b.vel[0][i]);
  }
  spec.seed = 43;
  State c = make_initial_data(g, spec);
  double d = 0;
  for (int i = 0; i < g->size(); ++i)
    d = std::max(d, std::abs(a.eta[i] - c.eta[i]));
  CHECK(d > 1e-6);

  // elevation and velocity use distinct streams even at equal amplitude
  spec.seed = 42;
  spec.u_amplitude = 0.3;
  State e = make_initial_data(g, spec);
  double dd = 0;
  for (int i = 0; i < g->size(); ++i)
    dd = std::max(dd, std::abs(e.eta[i] - e.vel[0][i]));
  CHECK(dd > 1e-6);

  CHECK(max_abs(a.eta) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(max_abs(a.vel[0]) <= 0.2 + 1e-13);
}

TEST_CASE("random two dimensional data honors the projection switch") {
  GridPtr g = make_grid(2, 32, 2 * pi);
  InitSpec spec;
  spec.family = "random_bandlimited";
  spec.amplitude = 0.1;
  spec.u_amplitude = 0.2;
  spec.kmax = 6;
  spec.seed = 7;
  spec.curl_free = true;
  State s = make_initial_data(g, spec);
  CHECK(curl_norm(s) < 1e-10);
  double sup2 = 0;
  for (int i = 0; i < g->size(); ++i) {
    const double m2 =
        s.vel[0][i] * s.vel[0][i] + s.vel[1][i] * s.vel[1][i];
    sup2 = std::max(sup2, m2);
  }
  CHECK(std::sqrt(sup2) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("shaped initial data families evaluate as advertised") {
  GridPtr g = make_grid(1, 64, 2 * pi);
  InitSpec spec;
  spec.family = "gaussian_hump";
  spec.amplitude = 0.4;
  spec.width = 0.7;
  State s = make_initial_data(g, spec);
  CHECK(s.eta[32] == doctest::Approx(0.4));  // centered at box midpoint
  CHECK(s.eta[0] < 1e-4);

  spec.family = "solitary_like";
  State p = make_initial_data(g, spec);
  CHECK(p.eta[32] == doctest::Approx(0.4));
  CHECK(p.eta[30] < 0.4);

  spec.family = "cosine_modes";
  spec.modes = {2};
  spec.phases = {0.3};
  spec.u_amplitude = 0.25;
  State cm = make_initial_data(g, spec);
  const double x5 = g->node(5);
  CHECK(cm.eta[5] == doctest::Approx(0.4 * std::cos(2 * x5 + 0.3)));
  CHECK(cm.vel[0][5] == doctest::Approx(0.25 * std::sin(2 * x5 + 0.3)));

  spec.width = -1.0;
  CHECK_THROWS_AS(make_initial_data(g, spec), ValidationError);
  spec.width = 0.7;
  spec.family = "no_such_family";
  CHECK_THROWS_AS(make_initial_data(g, spec), ValidationError);
  spec.family = "cosine_modes";
  spec.modes = {32};  // needs k <= n/2 - 1
  CHECK_THROWS_AS(make_initial_data(g, spec), ValidationError);
  spec.modes = {0};
  CHECK_THROWS_AS(make_initial_data(g, spec), ValidationError);
  spec.modes = {2};
  spec.family = "random_bandlimited";
  spec.kmax = 0;
  CHECK_THROWS_AS(make_initial_data(g, spec), ValidationError);
  spec.kmax = 40;  // exceeds n/2 - 1
  CHECK_THROWS_AS(make_initial_data(g, spec), ValidationError);
}

TEST_CASE("number formatting survives a read back") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e17, 1e-300, 0.0, 6.02e23}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("diagnostics csv follows the frozen schema") {
  const std::string dir = scratch_dir("csv");
  const std::string path = dir + "/probe.csv";
  {
    CsvWriter w(path);
    EnergyReport full;
    full.t = 0.25;
    full.hamiltonian = 1.5;
    full.energy_s = 2.5;
    full.energy_quasi = 3.5;
    full.energy_script = 4.5;
    full.mass = 0.125;
    full.margin = 0.75;
    full.curl = 0.0625;
    full.eta_sobolev = 1.25;
    full.vel_sobolev = 2.25;
    full.eta_xnorm = 3.25;
    full.vel_xnorm = 4.25;
    w.write_report(full);

    EnergyReport bare;
    bare.t = 0.5;
    bare.mass = 0.25;
    bare.margin = -0.5;
    w.write_report(bare, "cavitation");
    w.close();
  }
  const auto rows = lines_of(slurp(path));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        "t,hamiltonian,energy_s,energy_quasi,energy_script,mass,"
        "noncavitation_margin,curl_norm,eta_sobolev,vel_sobolev,"
        "eta_xnorm,vel_xnorm,verdict");
  CHECK(count_commas(rows[1]) == 12);
  CHECK(count_commas(rows[2]) == 12);
  CHECK(rows[1].substr(0, 9) == "0.25,1.5,");
  CHECK(rows[1].back() == ',');  // no verdict on a healthy row
  CHECK(rows[2].substr(0, 4) == "0.5,");
  CHECK(rows[2].find(",,,,") != std::string::npos);  // optional cells empty
  CHECK(rows[2].substr(rows[2].size() - 11) == ",cavitation");
}

TEST_CASE("binary snapshots round trip every header field") {
  const std::string dir = scratch_dir("bsq1");
  GridPtr g = make_grid(1, 16, 4 * pi);
  State s = make_state(g);
  s.time = 1.375;
  for (int i = 0; i < 16; ++i) {
    s.eta[i] = 0.01 * i - 0.05;
    s.vel[0][i] = std::sin(0.3 * i);
  }
  const std::string path = dir + "/state.bsq1";
  write_bsq1(path, s, 0.125);
  Bsq1File f = read_bsq1(path);
  CHECK(f.dim == 1);
  CHECK(f.n == 16);
  CHECK(f.length == 4 * pi);
  CHECK(f.eps == 0.125);
  CHECK(f.time == 1.375);
  REQUIRE(f.components.size() == 2);
  for (int i = 0; i < 16; ++i) {
    CHECK(f.components[0][i] == s.eta[i]);
    CHECK(f.components[1][i] == s.vel[0][i]);
  }

  GridPtr g2 = make_grid(2, 8, 2 * pi);
  State s2 = make_state(g2);
  s2.eta[3] = 0.5;
  s2.vel[1][9] = -0.25;
  write_bsq1(dir + "/state2.bsq1", s2, 0.5);
  Bsq1File f2 = read_bsq1(dir + "/state2.bsq1");
  CHECK(f2.dim == 2);
  CHECK(f2.n == 8);
  REQUIRE(f2.components.size() == 3);
  CHECK(f2.components[0][3] == 0.5);
  CHECK(f2.components[2][9] == -0.25);

  std::ofstream junk(dir + "/junk.bsq1", std::ios::binary);
  junk << "NOPE and then some bytes";
  junk.close();
  CHECK_THROWS_AS(read_bsq1(dir + "/junk.bsq1"), Error);
  CHECK_THROWS_AS(read_bsq1(dir + "/absent.bsq1"), Error);
}

TEST_CASE("output root tracks the environment override") {
  const char* prev = std::getenv("BSQ_OUT_ROOT");
  const std::string saved = prev ? prev : "";

  setenv("BSQ_OUT_ROOT", "/tmp/bsq_root_probe", 1);
  CHECK(output_root() == "/tmp/bsq_root_probe");
  CHECK(resolve_output_dir("rel") == "/tmp/bsq_root_probe/rel");
  CHECK(resolve_output_dir("/abs/place") == "/abs/place");

  unsetenv("BSQ_OUT_ROOT");
  CHECK(output_root() == ".");
  CHECK(resolve_output_dir("rel") == "./rel");

  if (prev)
    setenv("BSQ_OUT_ROOT", saved.c_str(), 1);
}

TEST_CASE("run setup defaults and key screening") {
  RunSetup s = build_run_setup(Config::parse_text(""));
  CHECK(s.dim == 1);
  CHECK(s.n == 256);
  CHECK(s.system == "abcd");
  CHECK(s.eps == doctest::Approx(0.1));
  CHECK(s.cp.a == 0.0);
  CHECK(s.cp.b == 0.0);
  CHECK(s.cp.tau == doctest::Approx(1.0 / 3.0));
  CHECK(s.sobolev_s == doctest::Approx(1.6));
  CHECK(s.outdir == "out");
  CHECK(s.save_final == true);

  CHECK_THROWS_AS(build_run_setup(Config::parse_text("no.such.key = 1\n")),
                  ConfigError);
}

TEST_CASE("run setup validation walls") {
  auto setup = [](const std::string& text) {
    return build_run_setup(Config::parse_text(text));
  };
  CHECK_THROWS_AS(setup("grid.n = 100\n"), ValidationError);
  CHECK_THROWS_AS(setup("grid.n = 4\n"), ValidationError);
  CHECK_THROWS_AS(setup("grid.dim = 3\n"), ValidationError);
  CHECK_THROWS_AS(setup("grid.length = 0\n"), ValidationError);
  CHECK_THROWS_AS(setup("eps = 0\n"), ValidationError);
  CHECK_THROWS_AS(setup("eps = 1.5\n"), ValidationError);
  CHECK_THROWS_AS(setup("system = full_euler\n"), ValidationError);
  CHECK_THROWS_AS(setup("case.id = 3\ncase.a = -0.1\n"), ValidationError);
  CHECK_THROWS_AS(setup("case.id = 14\n"), ValidationError);
  CHECK_THROWS_AS(setup("case.a = 0.5\n"), ValidationError);
  CHECK_THROWS_AS(setup("init.modes = 1.5, 2\n"), ValidationError);
  CHECK_THROWS_AS(setup("integrator.dt = 0\n"), ValidationError);
  CHECK_THROWS_AS(setup("integrator.t_end = -1\n"), ValidationError);
  CHECK_THROWS_AS(setup("integrator.scheme = euler\n"), ValidationError);
  CHECK_THROWS_AS(setup("output.snapshot_every = -2\n"), ValidationError);
  CHECK_THROWS_AS(setup("system = mollified\ndelta = 0\n"), ValidationError);

  // one dimensional families refuse a plane grid
  for (const char* sys : {"fifth_order", "kaup", "mollified"}) {
    const std::string text =
        std::string("grid.dim = 2\nsystem = ") + sys + "\n";
    CHECK_THROWS_AS(setup(text), ValidationError);
  }

  CHECK(setup("case.id = 7\n").cp.b == doctest::Approx(1.0 / 3.0));
  CHECK(setup("case.id = 4\n").cp.registry == 4);
}

TEST_CASE("single run writes the advertised artifacts") {
  const std::string dir = scratch_dir("run_one");
  Config cfg = Config::parse_text(
      "grid.n = 32\n"
      "eps = 0.1\n"
      "case.id = 4\n"
      "init.family = gaussian_hump\n"
      "init.amplitude = 0.05\n"
      "init.width = 1.0\n"
      "integrator.scheme = rk4_if\n"
      "integrator.dt = 0.001\n"
      "integrator.t_end = 0.02\n"
      "integrator.report_every = 10\n"
      "output.snapshot_every = 1\n");
  cfg.set("output.dir", dir);
  RunSetup su = build_run_setup(cfg);
  RunResult res = run_single(su);

  CHECK(res.verdict.blowup == false);
  CHECK(res.steps == 20);
  REQUIRE(res.reports.size() == 3);  // steps 0, 10, 20
  CHECK(res.reports[0].t == doctest::Approx(0.0));
  CHECK(res.reports[2].t == doctest::Approx(0.02));
  CHECK(res.final_state.time == doctest::Approx(0.02));

  const auto rows = lines_of(slurp(res.csv_path));
  CHECK(rows.size() == 4);  // header + one row per report

  for (int k : {0, 10, 20}) {
    Bsq1File snap = read_bsq1(dir + "/snap_" + std::to_string(k) + ".bsq1");
    CHECK(snap.n == 32);
    CHECK(snap.eps == doctest::Approx(0.1));
  }
  Bsq1File fin = read_bsq1(dir + "/final.bsq1");
  CHECK(fin.time == doctest::Approx(0.02));

  nlohmann::json j;
  std::ifstream mf(res.manifest_path);
  REQUIRE(mf.good());
  mf >> j;
  CHECK(j.at("format") == "bsq-manifest-1");
  CHECK(j.at("result").at("steps") == 20);
  const std::string text = j.at("config_text").get<std::string>();
  CHECK(Config::parse_text(text).serialize() == su.raw.serialize());
}

TEST_CASE("runs that start below the depth floor are rejected") {
  const std::string dir = scratch_dir("run_floor");
  Config cfg = Config::parse_text(
      "grid.n = 32\n"
      "eps = 1.0\n"
      "init.family = cosine_modes\n"
      "init.amplitude = -1.5\n"  // 1 + eps eta dips under zero
      "init.modes = 1\n"
      "integrator.dt = 0.001\n"
      "integrator.t_end = 0.01\n");
  cfg.set("output.dir", dir);
  CHECK_THROWS_AS(run_single(build_run_setup(cfg)), ValidationError);
}

TEST_CASE("tau consistency check tolerates rounding but not drift") {
  // coefficients that miss the declared tau by 5e-13 pass, by 1e-9 fail
  const double s6 = 1.0 / 6.0;
  CHECK_NOTHROW(make_case_tau(-s6, s6 + 5e-13, -s6, 2 * s6, s6, 0.2));
  CHECK_THROWS_AS(make_case_tau(-s6, s6 + 1e-9, -s6, 2 * s6, s6, 0.2),
                  ValidationError);
}

TEST_CASE("command entry points translate failures into exit codes") {
  CHECK(cmd_run("/no/such/file.cfg") == 2);

  const std::string dir = scratch_dir("cli");
  {
    std::ofstream bad(dir + "/bad.cfg");
    bad << "grid.n = 100\n";
  }
  CHECK(cmd_run(dir + "/bad.cfg") == 3);
  {
    std::ofstream dup(dir + "/dup.cfg");
    dup << "eps = 0.1\neps = 0.2\n";
  }
  CHECK(cmd_run(dir + "/dup.cfg") == 2);
}

}  // TEST_SUITE
