// OpenMP kernels against their serial references.
#include "ricci/graph_metric.hpp"
#include "ricci/kernels.hpp"
#include "ricci/rgg.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

using namespace ricci;

namespace {

std::shared_ptr<const PointCloud> sphere_cloud(int n) {
    return std::make_shared<const PointCloud>(sample_uniform(ManifoldOracle::sphere(2), n, 7));
}

Vec noise(int n) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    Vec u(n);
    for (int i = 0; i < n; ++i) u(i) = g(rng);
    return u;
}

template <bool Omp>
void BM_NeighborLists(benchmark::State& st) {
    const auto field = DistanceField::exact(sphere_cloud(static_cast<int>(st.range(0))));
    for (auto _ : st) {
        auto lists = Omp ? kernels::neighbor_lists_omp(field, 0.2) : kernels::neighbor_lists_serial(field, 0.2);
        benchmark::DoNotOptimize(lists);
    }
}

template <bool Omp>
void BM_Laplacian(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const Rgg rgg = build_rgg(DistanceField::exact(sphere_cloud(n)), 0.2);
    const Vec u = noise(n);
    for (auto _ : st) {
        Vec out = Omp ? kernels::laplacian_apply_omp(rgg, 1.0, u) : kernels::laplacian_apply_serial(rgg, 1.0, u);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Omp>
void BM_Lip(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const Rgg rgg = build_rgg(DistanceField::exact(sphere_cloud(n)), 0.35);
    const Mat dist = GraphMetric(rgg, 0.05, 2.2).all_pairs();
    const Vec u = noise(n);
    for (auto _ : st) {
        auto r = Omp ? kernels::lip_omp(dist, u) : kernels::lip_serial(dist, u);
        benchmark::DoNotOptimize(r);
    }
}

}  // namespace

BENCHMARK(BM_NeighborLists<true>)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NeighborLists<false>)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Laplacian<true>)->Arg(4000)->Arg(16000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Laplacian<false>)->Arg(4000)->Arg(16000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Lip<true>)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lip<false>)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
