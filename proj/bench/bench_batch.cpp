// Serial reference loops against their OpenMP versions.

#include "csrbf/batch.hpp"
#include "csrbf/pointset.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace csrbf;

template <bool Parallel>
void BM_Gram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto points = random_pointset(3, n, 1, default_min_separation(3, n));
  const KernelParams p(12.0, 0.3, 3);
  for (auto _ : state) {
    auto a = Parallel ? batch::omp::gram(points.coords(), p) : batch::serial::gram(points.coords(), p);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Gram<false>)->Name("gram/serial")->Arg(500)->Arg(1500);
BENCHMARK(BM_Gram<true>)->Name("gram/omp")->Arg(500)->Arg(1500);

template <bool Parallel>
void BM_SignedDerivative(benchmark::State& state) {
  const auto grid = sign_check_grid(10000);
  const auto poly = derivative_poly(static_cast<int>(state.range(0)));
  const double alpha = static_cast<double>(alpha_threshold(poly.order()).alpha);
  for (auto _ : state) {
    auto v = Parallel ? batch::omp::signed_derivative(poly, grid, alpha)
                      : batch::serial::signed_derivative(poly, grid, alpha);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_SignedDerivative<false>)->Name("signed_derivative/serial")->Arg(4)->Arg(12);
BENCHMARK(BM_SignedDerivative<true>)->Name("signed_derivative/omp")->Arg(4)->Arg(12);

template <bool Parallel>
void BM_ExactSign(benchmark::State& state) {
  const auto grid = sign_check_grid(1000);
  const auto poly = derivative_poly(static_cast<int>(state.range(0)));
  const Rational alpha(alpha_threshold(poly.order()).alpha);
  for (auto _ : state) {
    auto v = Parallel ? batch::omp::signed_derivative_sign(poly, grid, alpha)
                      : batch::serial::signed_derivative_sign(poly, grid, alpha);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_ExactSign<false>)->Name("exact_sign/serial")->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactSign<true>)->Name("exact_sign/omp")->Arg(12)->Unit(benchmark::kMillisecond);

template <bool Parallel>
void BM_Evaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto centers = random_pointset(2, n, 2, default_min_separation(2, n));
  const KernelParams p(6.0, 2.0 / std::sqrt(static_cast<double>(n)), 2);
  const Eigen::VectorXd c = Eigen::VectorXd::Ones(n);
  const CellGrid grid(centers.coords(), p.delta());
  const auto queries = random_pointset(2, 20000, 3, 1e-7);
  for (auto _ : state) {
    auto v = Parallel ? batch::omp::evaluate(grid, centers.coords(), c, p, queries.coords())
                      : batch::serial::evaluate(grid, centers.coords(), c, p, queries.coords());
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * queries.size());
}
BENCHMARK(BM_Evaluate<false>)->Name("evaluate/serial")->Arg(5000);
BENCHMARK(BM_Evaluate<true>)->Name("evaluate/omp")->Arg(5000);

template <bool Parallel>
void BM_NearestDistance(benchmark::State& state) {
  const auto centers = random_pointset(3, 1000, 4, default_min_separation(3, 1000));
  const auto samples = random_pointset(3, 10000, 5, 1e-7);
  for (auto _ : state) {
    auto v = Parallel ? batch::omp::nearest_distance(centers.coords(), samples.coords())
                      : batch::serial::nearest_distance(centers.coords(), samples.coords());
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_NearestDistance<false>)->Name("nearest_distance/serial");
BENCHMARK(BM_NearestDistance<true>)->Name("nearest_distance/omp");

}  // namespace

BENCHMARK_MAIN();
