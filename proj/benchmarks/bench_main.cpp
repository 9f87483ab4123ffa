#include <benchmark/benchmark.h>

#include "nag/condition.hpp"
#include "nag/homology.hpp"
#include "nag/homotopy.hpp"
#include "nag/norms.hpp"
#include "nag/rng.hpp"

namespace {

nag::PolySystem dense_system(int n, int d, std::uint64_t seed) {
  nag::Rng rng(seed);
  nag::HomogeneousPoly p(n + 1, d);
  for (std::int64_t r = 0; r < p.coefficients().size(); ++r)
    p.coefficients()[r] = nag::Complex(rng.normal(), 0.0);
  return nag::PolySystem(nag::Field::Real, {std::move(p)});
}

void bm_evaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const nag::PolySystem f = dense_system(n, d, 1);
  nag::Rng rng(2);
  const auto xv = rng.sphere_point(n + 1);
  const nag::UnitPoint x =
      nag::UnitPoint::real(Eigen::Map<const Eigen::VectorXd>(xv.data(), n + 1));
  for (auto _ : state) benchmark::DoNotOptimize(nag::evaluate(f, x));
}
BENCHMARK(bm_evaluate)->Args({2, 4})->Args({3, 6})->Args({4, 8});

void bm_norm_sweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const nag::PolySystem f = dense_system(n, 3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(nag::linf_norm_real(f, k));
  const nag::GridSpec spec = nag::make_grid_spec(n, nag::norm_grid_exponent(k, 3));
  state.SetItemsProcessed(state.iterations() * spec.point_count);
}
BENCHMARK(bm_norm_sweep)->Args({1, 7})->Args({2, 5})->Args({2, 7})->Args({3, 5});

void bm_sigma_q(benchmark::State& state) {
  const nag::PolySystem f = dense_system(3, 3, 4);
  nag::Rng rng(5);
  const auto xv = rng.sphere_point(4);
  const nag::UnitPoint x = nag::UnitPoint::real(Eigen::Map<const Eigen::VectorXd>(xv.data(), 4));
  for (auto _ : state) benchmark::DoNotOptimize(nag::scaled_sigma_q(f, x, 1.0));
}
BENCHMARK(bm_sigma_q);

void bm_miniball(benchmark::State& state) {
  nag::Rng rng(6);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 4; ++i) {
    const auto v = rng.sphere_point(3);
    pts.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), 3));
  }
  std::vector<const Eigen::VectorXd*> ptrs;
  for (const auto& p : pts) ptrs.push_back(&p);
  for (auto _ : state) benchmark::DoNotOptimize(nag::miniball(ptrs));
}
BENCHMARK(bm_miniball);

void bm_homotopy_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::vector<int> degrees(static_cast<std::size_t>(n), 2);
  nag::Rng rng(7);
  const nag::StandardPair pair = nag::bp_sample(n, degrees, 11);
  for (auto _ : state) benchmark::DoNotOptimize(nag::projective_newton(pair.g, pair.zeta));
}
BENCHMARK(bm_homotopy_step)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
