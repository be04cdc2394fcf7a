#include <benchmark/benchmark.h>

#include <random>

#include "adaptct/projector.hpp"

using namespace adaptct;

namespace {

Volume random_volume(int nz, int n, unsigned seed) {
    Volume v(nz, n, n);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> dist(0.0f, 0.02f);
    for (std::size_t i = 0; i < v.size(); ++i) v.data()[i] = dist(rng);
    return v;
}

} // namespace

static void BM_ForwardProject(benchmark::State& state) {
    const int n = int(state.range(0));
    const Volume v = random_volume(8, n, 1);
    const ProjectionGeometry geom = auto_geometry(n, n);
    double angle = 0.0;
    for (auto _ : state) {
        const Projection p = forward_project(v, angle, geom);
        benchmark::DoNotOptimize(p.values.data());
        angle += 0.7;
        if (angle >= 180.0) angle -= 180.0;
    }
    state.SetItemsProcessed(state.iterations() * v.size());
}
BENCHMARK(BM_ForwardProject)->Arg(96)->Arg(150);

static void BM_BackProject(benchmark::State& state) {
    const int n = int(state.range(0));
    const Volume v = random_volume(8, n, 2);
    const ProjectionGeometry geom = auto_geometry(n, n);
    const Projection p = forward_project(v, 33.0, geom);
    for (auto _ : state) {
        const Volume b = back_project(p, geom, v.nz(), n, n);
        benchmark::DoNotOptimize(b.data());
    }
    state.SetItemsProcessed(state.iterations() * v.size());
}
BENCHMARK(BM_BackProject)->Arg(96)->Arg(150);

static void BM_SliceProjectorBuild(benchmark::State& state) {
    const int n = int(state.range(0));
    const ProjectionGeometry geom = auto_geometry(n, n);
    double angle = 0.0;
    for (auto _ : state) {
        SliceProjector proj(angle, geom, n, n);
        benchmark::DoNotOptimize(&proj);
        angle += 1.3;
        if (angle >= 180.0) angle -= 180.0;
    }
}
BENCHMARK(BM_SliceProjectorBuild)->Arg(96)->Arg(150);

BENCHMARK_MAIN();
