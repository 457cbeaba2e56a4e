// Serial reference vs OpenMP kernels. Run with --benchmark_filter to pick one.
#include <benchmark/benchmark.h>

#include <cmath>

#include "bstar/extension.hpp"
#include "bstar/multipole.hpp"
#include "bstar/sector.hpp"
#include "bstar/transform.hpp"

namespace {

using bstar::Exec;

bstar::RadialProfile gaussian_profile(std::size_t n) {
  auto g = bstar::make_grid(n, 40.0);
  return bstar::sample(g, [](double r) { return std::exp(-r * r); });
}

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_multiplier_matrix(benchmark::State& st) {
  const auto g = bstar::make_grid(static_cast<std::size_t>(st.range(0)), 40.0);
  for (auto _ : st) benchmark::DoNotOptimize(bstar::multiplier_matrix(*g, g->rho(), exec_of(st)));
}

void BM_bessel_sector_matrix(benchmark::State& st) {
  const auto g = bstar::make_grid(static_cast<std::size_t>(st.range(0)), 40.0);
  for (auto _ : st) benchmark::DoNotOptimize(bstar::bessel_sector_matrix(1, *g, exec_of(st)));
}

void BM_multipole_matrix(benchmark::State& st) {
  const auto g = bstar::make_grid(static_cast<std::size_t>(st.range(0)), 40.0);
  for (auto _ : st) benchmark::DoNotOptimize(bstar::multipole_matrix(2, *g, exec_of(st)));
}

void BM_sine_interpolate(benchmark::State& st) {
  const auto u = gaussian_profile(static_cast<std::size_t>(st.range(0)));
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(u.size(), 0.01, 39.9);
  for (auto _ : st) benchmark::DoNotOptimize(bstar::sine_interpolate(u, x, exec_of(st)));
}

void BM_poisson_extend(benchmark::State& st) {
  const auto u = gaussian_profile(static_cast<std::size_t>(st.range(0)));
  const bstar::TGrid t(u.size() / 2, 20.0);
  for (auto _ : st) benchmark::DoNotOptimize(bstar::poisson_extend(u, t, exec_of(st)));
}

void BM_quadratic_form(benchmark::State& st) {
  const auto u = gaussian_profile(static_cast<std::size_t>(st.range(0)));
  const bstar::TGrid t(u.size() / 2, 20.0);
  const auto psi = bstar::poisson_extend(u, t);
  bstar::FormOptions o;
  o.require_rescaled = false;
  o.exec = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(bstar::quadratic_form(u, psi, o));
}

void BM_form_minimize(benchmark::State& st) {
  const auto u = gaussian_profile(static_cast<std::size_t>(st.range(0)));
  const bstar::TGrid t(u.size() / 2, 20.0);
  bstar::FormOptions o;
  o.require_rescaled = false;
  o.exec = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(bstar::form_minimize(u, t, bstar::BasisOptions{}, o));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {256, 1024})
    for (long par : {0, 1}) b->Args({n, par});
  b->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_multiplier_matrix)->Apply(sizes);
BENCHMARK(BM_bessel_sector_matrix)->Apply(sizes);
BENCHMARK(BM_multipole_matrix)->Apply(sizes);
BENCHMARK(BM_sine_interpolate)->Apply(sizes);
BENCHMARK(BM_poisson_extend)->Apply(sizes);
BENCHMARK(BM_quadratic_form)->Apply(sizes);
BENCHMARK(BM_form_minimize)->Apply(sizes);
BENCHMARK_MAIN();
