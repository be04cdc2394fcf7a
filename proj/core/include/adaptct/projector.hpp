#pragma once

#include <vector>

#include "adaptct/volume.hpp"

namespace adaptct {

/// Parallel-beam detector layout shared by every view of an experiment.
/// Channel c sits at t = (c - (Nc-1)/2) * pitch along the detector axis;
/// the detector coordinate of pixel (ix, iy) at view angle theta is
/// t = (ix-cx) cos(theta) - (iy-cy) sin(theta).
struct ProjectionGeometry {
    int num_channels = 0;
    double pitch = 1.0;       // channel spacing in voxel lengths
    double center_x = -1.0;   // rotation center; negative = image center
    double center_y = -1.0;

    double channel_position(int c) const {
        return (c - 0.5 * (num_channels - 1)) * pitch;
    }
    double rotation_center_x(int nx) const {
        return center_x >= 0.0 ? center_x : 0.5 * (nx - 1);
    }
    double rotation_center_y(int ny) const {
        return center_y >= 0.0 ? center_y : 0.5 * (ny - 1);
    }
};

/// Detector auto-sizing: wide enough that no object mass falls off.
ProjectionGeometry auto_geometry(int nx, int ny);

/// One measured or simulated view: Nz x Nc line integrals at a single angle.
struct Projection {
    double angle_deg = 0.0;
    int nz = 0;
    int nc = 0;
    std::vector<float> values; // nz * nc, channel fastest

    float at(int iz, int ic) const { return values[static_cast<std::size_t>(iz) * nc + ic]; }
    float& at(int iz, int ic) { return values[static_cast<std::size_t>(iz) * nc + ic]; }
};

/// Slice-wise strip-integral forward projection.  Each pixel deposits its
/// exact trapezoid footprint integrated over each detector bin, so the total
/// deposited mass per pixel is exactly 1/pitch and the operator is linear.
/// Throws GeometryError on inconsistent dims, InvalidInputError for an angle
/// outside [0, 180).
Projection forward_project(const Volume& volume, double angle_deg, const ProjectionGeometry& geom);

/// Exact adjoint of forward_project (same footprint weights, transposed).
Volume back_project(const Projection& projection, const ProjectionGeometry& geom,
                    int nz, int nx, int ny);

/// Sparse per-slice weight table for one (angle, geometry, slice-dims)
/// triple.  Rebuilding the footprint weights per solver iteration is the
/// dominant cost of iterative reconstruction, so the solver caches these.
class SliceProjector {
public:
    SliceProjector() = default;
    SliceProjector(double angle_deg, const ProjectionGeometry& geom, int nx, int ny);

    double angle_deg() const { return angle_deg_; }
    int num_channels() const { return nc_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(nx_) * ny_; }

    /// row[c] += sum of w * pixel over this slice (row holds nc doubles).
    void apply_forward(const double* pixels, double* row) const;
    /// pixels[p] += sum of w * row[c]; accumulates.
    void apply_adjoint(const double* row, double* pixels) const;
    /// Forward projection of an all-ones slice (per-channel ray density).
    void ones_forward(double* row) const;

private:
    double angle_deg_ = 0.0;
    int nc_ = 0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::uint32_t> offsets_; // per-pixel CSR offsets (nx*ny + 1)
    std::vector<std::int32_t> channels_;
    std::vector<float> weights_;
};

} // namespace adaptct
