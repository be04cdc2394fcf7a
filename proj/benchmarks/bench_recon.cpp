#include <benchmark/benchmark.h>

#include "adaptct/phantom.hpp"
#include "adaptct/recon.hpp"

using namespace adaptct;

namespace {

std::vector<WeightedProjection> noiseless_data(const Volume& v, const ProjectionGeometry& geom,
                                               int num_angles) {
    std::vector<WeightedProjection> data;
    for (int k = 0; k < num_angles; ++k) {
        const double angle = k * 180.0 / num_angles;
        const Projection p = forward_project(v, angle, geom);
        WeightedProjection wp;
        wp.angle_deg = angle;
        wp.nz = p.nz;
        wp.nc = p.nc;
        wp.p = p.values;
        wp.w.assign(p.values.size(), 1.0f);
        data.push_back(std::move(wp));
    }
    return data;
}

Volume bench_phantom(int nz, int n) {
    PhantomSpec spec;
    spec.nz = nz;
    spec.nx = n;
    spec.ny = n;
    spec.attenuation_scale = 0.01;
    Shape box;
    box.kind = Shape::Kind::Box;
    box.center = {0.5 * (nz - 1), 0.5 * n, 0.5 * n};
    box.size = {double(nz), 0.4 * n, 0.5 * n};
    box.rot_z_deg = 20.0;
    spec.shapes.push_back(box);
    return generate_phantom(spec);
}

} // namespace

static void BM_ReconstructTwentyViews(benchmark::State& state) {
    const int n = int(state.range(0));
    const Volume gt = bench_phantom(8, n);
    const ProjectionGeometry geom = auto_geometry(n, n);
    const auto data = noiseless_data(gt, geom, 20);
    ReconParams params;
    params.beta = 1.0;
    params.max_iterations = int(state.range(1));
    params.tolerance = 1e-12;
    for (auto _ : state) {
        const Volume rec = reconstruct(data, geom, gt.nz(), n, n, nullptr, params, nullptr);
        benchmark::DoNotOptimize(rec.data());
    }
}
BENCHMARK(BM_ReconstructTwentyViews)->Args({96, 10})->Args({96, 50})->Unit(benchmark::kMillisecond);
