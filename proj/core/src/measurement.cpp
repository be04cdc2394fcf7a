#include "adaptct/measurement.hpp"

#include <cmath>
#include <random>

#include "adaptct/errors.hpp"

namespace adaptct {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> expected_counts(const Projection& projection, double i0) {
    if (i0 <= 0.0) throw InvalidInputError("blank-scan intensity I0 must be positive");
    std::vector<double> lambda(projection.values.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const double p = std::max(0.0, double(projection.values[i]));
        lambda[i] = i0 * std::exp(-p);
    }
    return lambda;
}

CountData simulate_counts(const Projection& projection, double i0, std::uint64_t seed) {
    const std::vector<double> lambda = expected_counts(projection, i0);
    CountData out;
    out.angle_deg = projection.angle_deg;
    out.nz = projection.nz;
    out.nc = projection.nc;
    out.i0 = i0;
    out.counts.assign(lambda.size(), 0);

    // One substream per slice, independent of acquisition order.
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < projection.nz; ++iz) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(iz)));
        const std::size_t base = static_cast<std::size_t>(iz) * projection.nc;
        for (int ic = 0; ic < projection.nc; ++ic) {
            const double mean = lambda[base + ic];
            if (mean <= 0.0) continue;
            std::poisson_distribution<std::int64_t> poisson(mean);
            out.counts[base + ic] = poisson(rng);
        }
    }
    return out;
}

CountData quantize_counts(const Projection& projection, double i0) {
    const std::vector<double> lambda = expected_counts(projection, i0);
    CountData out;
    out.angle_deg = projection.angle_deg;
    out.nz = projection.nz;
    out.nc = projection.nc;
    out.i0 = i0;
    out.counts.resize(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i)
        out.counts[i] = std::llround(lambda[i]);
    return out;
}

WeightedProjection counts_to_attenuation(const CountData& counts, double c_min) {
    if (counts.i0 <= 0.0) throw InvalidInputError("CountData has non-positive I0");
    WeightedProjection out;
    out.angle_deg = counts.angle_deg;
    out.nz = counts.nz;
    out.nc = counts.nc;
    out.p.resize(counts.counts.size());
    out.w.resize(counts.counts.size());
    for (std::size_t i = 0; i < counts.counts.size(); ++i) {
        const double c = static_cast<double>(counts.counts[i]);
        if (c < c_min) {
            out.p[i] = static_cast<float>(-std::log(c_min / counts.i0));
            out.w[i] = 0.0f;
        } else {
            out.p[i] = static_cast<float>(-std::log(c / counts.i0));
            out.w[i] = static_cast<float>(c);
        }
    }
    return out;
}

} // namespace adaptct
