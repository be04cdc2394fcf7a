#pragma once

#include <vector>

#include "adaptct/measurement.hpp"
#include "adaptct/projector.hpp"
#include "adaptct/volume.hpp"

namespace adaptct {

struct ReconParams {
    double beta = -1.0;           // prior strength; < 0 selects the auto heuristic
    double beta_auto_scale = 0.1; // multiplier on the data/prior magnitude ratio
    double delta = 1e-3;          // Huber edge-preservation threshold
    int max_iterations = 200;
    double tolerance = 1e-4;      // relative update norm
    bool nonnegativity = true;
};

struct ReconReport {
    int iterations = 0;
    std::vector<double> objective; // value after each iteration, front = initial
    double final_relative_update = 0.0;
    double beta_used = 0.0;
    int momentum_rejects = 0;
};

/// Weighted-least-squares reconstruction with an edge-preserving Huber prior
/// over the in-slice 8-neighborhood, solved by diagonally preconditioned
/// gradient descent with Nesterov momentum and a monotone safeguard.  Starts
/// from init when given, zeros otherwise; stops on the iteration cap or when
/// the relative update norm drops below tolerance.
Volume reconstruct(const std::vector<WeightedProjection>& data,
                   const ProjectionGeometry& geom,
                   int nz, int nx, int ny,
                   const Volume* init,
                   const ReconParams& params,
                   ReconReport* report = nullptr);

} // namespace adaptct
