#pragma once

#include <cstdint>
#include <vector>

#include "adaptct/projector.hpp"

namespace adaptct {

/// Raw transmission counts for one view.
struct CountData {
    double angle_deg = 0.0;
    int nz = 0;
    int nc = 0;
    std::vector<std::int64_t> counts; // nz * nc, non-negative
    double i0 = 0.0;                  // blank-scan intensity

    std::int64_t at(int iz, int ic) const { return counts[static_cast<std::size_t>(iz) * nc + ic]; }
    std::int64_t& at(int iz, int ic) { return counts[static_cast<std::size_t>(iz) * nc + ic]; }
};

/// Attenuation data with statistical weights, ready for the reconstructor.
struct WeightedProjection {
    double angle_deg = 0.0;
    int nz = 0;
    int nc = 0;
    std::vector<float> p; // -ln(counts / I0)
    std::vector<float> w; // counts (inverse-variance surrogate), 0 where clamped

    float p_at(int iz, int ic) const { return p[static_cast<std::size_t>(iz) * nc + ic]; }
    float w_at(int iz, int ic) const { return w[static_cast<std::size_t>(iz) * nc + ic]; }
};

/// Expected transmission counts I0 * exp(-p) for an ideal projection.
std::vector<double> expected_counts(const Projection& projection, double i0);

/// Draw Poisson counts with mean I0 * exp(-p).  The RNG is split per slice
/// from the given seed, so results do not depend on evaluation order.
/// Throws InvalidInputError when i0 <= 0.
CountData simulate_counts(const Projection& projection, double i0, std::uint64_t seed);

/// Deterministic round of the expected counts (noiseless acquisition).
CountData quantize_counts(const Projection& projection, double i0);

/// Transmission preprocessing: p = -ln(max(counts, c_min) / I0), w = counts,
/// with w = 0 wherever the clamp engaged.
WeightedProjection counts_to_attenuation(const CountData& counts, double c_min = 1.0);

/// SplitMix64-style mixer used to derive independent RNG streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

} // namespace adaptct
