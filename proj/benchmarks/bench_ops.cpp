#include <benchmark/benchmark.h>

#include "bsq/fft.hpp"
#include "bsq/initial_data.hpp"
#include "bsq/integrator.hpp"
#include "bsq/multiplier.hpp"
#include "bsq/norms.hpp"
#include "bsq/systems.hpp"
#include "bsq/transforms.hpp"

namespace {

bsq::State random_state(bsq::GridPtr g) {
  bsq::InitSpec is;
  is.family = "random_bandlimited";
  is.amplitude = 0.05;
  is.u_amplitude = 0.05;
  is.kmax = g->n / 4;
  is.envelope_p = 1.5;
  return bsq::make_initial_data(g, is);
}

void bm_fft_1d(benchmark::State& state) {
  auto g = bsq::make_grid(1, int(state.range(0)), 2 * bsq::pi);
  const bsq::Field f = random_state(g).eta;
  for (auto _ : state) {
    auto c = bsq::fft::forward(*g, f.v);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(bm_fft_1d)->Arg(256)->Arg(1024);

void bm_fft_2d(benchmark::State& state) {
  auto g = bsq::make_grid(2, int(state.range(0)), 2 * bsq::pi);
  const bsq::Field f = random_state(g).eta;
  for (auto _ : state) {
    auto c = bsq::fft::forward(*g, f.v);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(bm_fft_2d)->Arg(64)->Arg(128);

void bm_multiplier(benchmark::State& state) {
  auto g = bsq::make_grid(1, 1024, 2 * bsq::pi);
  const bsq::Field f = random_state(g).eta;
  const auto op = bsq::j_eps(0.1);
  for (auto _ : state) {
    auto r = bsq::apply_multiplier(op, f);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(bm_multiplier);

void bm_rhs_abcd_1d(benchmark::State& state) {
  auto g = bsq::make_grid(1, int(state.range(0)), 2 * bsq::pi);
  auto sys = bsq::make_system_abcd(g, bsq::case_by_id(7, 0.1));
  const auto u = bsq::pack_spectral(random_state(g));
  for (auto _ : state) {
    auto r = bsq::rhs_spec(sys, u);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(bm_rhs_abcd_1d)->Arg(256)->Arg(1024);

void bm_rhs_abcd_2d(benchmark::State& state) {
  auto g = bsq::make_grid(2, int(state.range(0)), 2 * bsq::pi);
  auto sys = bsq::make_system_abcd(g, bsq::case_by_id(7, 0.1));
  const auto u = bsq::pack_spectral(random_state(g));
  for (auto _ : state) {
    auto r = bsq::rhs_spec(sys, u);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(bm_rhs_abcd_2d)->Arg(64)->Arg(128);

void bm_step_if(benchmark::State& state) {
  auto g = bsq::make_grid(1, 256, 2 * bsq::pi);
  auto sys = bsq::make_system_abcd(g, bsq::case_by_id(7, 0.1));
  const auto plan = bsq::make_step_plan(sys, bsq::Scheme::rk4_if, 1e-3);
  auto u = bsq::pack_spectral(random_state(g));
  for (auto _ : state) bsq::step(sys, plan, u);
}
BENCHMARK(bm_step_if);

void bm_sobolev_norm(benchmark::State& state) {
  auto g = bsq::make_grid(1, 1024, 2 * bsq::pi);
  const bsq::Field f = random_state(g).eta;
  for (auto _ : state) {
    double n = bsq::sobolev_norm(f, 1.6);
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(bm_sobolev_norm);

void bm_diagonalize_2d(benchmark::State& state) {
  auto g = bsq::make_grid(2, 64, 2 * bsq::pi);
  const bsq::State s = random_state(g);
  for (auto _ : state) {
    auto w = bsq::diagonalize_2d(bsq::DiagRoute::a_neg, 0.1, s);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(bm_diagonalize_2d);

}  // namespace

BENCHMARK_MAIN();
