#include <benchmark/benchmark.h>

#include "adaptct/edges.hpp"
#include "adaptct/phantom.hpp"

using namespace adaptct;

namespace {

Volume bench_phantom(int nz, int n) {
    PhantomSpec spec;
    spec.nz = nz;
    spec.nx = n;
    spec.ny = n;
    spec.attenuation_scale = 0.01;
    Shape box;
    box.kind = Shape::Kind::Box;
    box.center = {0.5 * (nz - 1), 0.45 * n, 0.5 * n};
    box.size = {double(nz), 0.3 * n, 0.55 * n};
    box.rot_z_deg = 25.0;
    spec.shapes.push_back(box);
    Shape sph;
    sph.kind = Shape::Kind::Sphere;
    sph.center = {0.5 * (nz - 1), 0.7 * n, 0.25 * n};
    sph.radius = 0.1 * n;
    spec.shapes.push_back(sph);
    return generate_phantom(spec);
}

std::vector<double> full_grid() {
    std::vector<double> g;
    for (int a = 0; a < 180; ++a) g.push_back(double(a));
    return g;
}

} // namespace

static void BM_CannyDetect(benchmark::State& state) {
    const int n = int(state.range(0));
    const Volume v = bench_phantom(1, n);
    for (auto _ : state) {
        const EdgeMap m = detect_edges(v.slice(0), CannyParams{});
        benchmark::DoNotOptimize(m.v.data());
    }
}
BENCHMARK(BM_CannyDetect)->Arg(96)->Arg(150);

static void BM_Ppht(benchmark::State& state) {
    const int n = int(state.range(0));
    const Volume v = bench_phantom(1, n);
    const EdgeMap m = detect_edges(v.slice(0), CannyParams{});
    for (auto _ : state) {
        const auto segs = ppht(m, PphtParams{});
        benchmark::DoNotOptimize(segs.data());
    }
}
BENCHMARK(BM_Ppht)->Arg(96)->Arg(150);

static void BM_EdgeAlignmentTable(benchmark::State& state) {
    const int nz = int(state.range(0));
    const Volume v = bench_phantom(nz, 96);
    const std::vector<double> grid = full_grid();
    for (auto _ : state) {
        const EdgeAlignmentResult t = edge_alignment_table(v, grid, EdgeParams{});
        benchmark::DoNotOptimize(t.f.data());
    }
}
BENCHMARK(BM_EdgeAlignmentTable)->Arg(1)->Arg(8);
