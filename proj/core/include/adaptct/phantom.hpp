#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "adaptct/volume.hpp"

namespace adaptct {

/// Geometric primitive voxelized by center-inclusion.  Coordinates and sizes
/// are in voxel units; centers are (cz, cx, cy) matching the (Nz, Nx, Ny)
/// dim order.  rot_z_deg rotates the shape about the z axis (x-y plane).
struct Shape {
    enum class Kind { Sphere, Box, Cylinder, Prism };

    Kind kind = Kind::Sphere;
    std::array<double, 3> center{0, 0, 0}; // (cz, cx, cy)
    double radius = 0;                     // sphere, cylinder
    std::array<double, 3> size{0, 0, 0};   // box: (sz, sx, sy); prism: (sz, sx, sy)
    double height = 0;                     // cylinder, prism extent along z (prism uses size[0] when height == 0)
    double rot_z_deg = 0;

    /// True when the point (z, x, y) lies inside the primitive.
    bool contains(double z, double x, double y) const;

    /// Conservative axis-aligned bounds (z, x, y) of the primitive.
    void bounds(std::array<double, 3>& lo, std::array<double, 3>& hi) const;

    std::string describe() const;
};

struct PhantomSpec {
    int nz = 50, nx = 150, ny = 150;
    std::vector<Shape> shapes;
    double attenuation_scale = 0.01; // value assigned to voxels inside any shape
    std::uint64_t seed = 0;          // provenance only; generation is deterministic

    bool same_geometry(const PhantomSpec& o) const;
};

/// Voxelize the spec: a voxel is set to the attenuation scale when its center
/// lies inside any listed primitive, 0 otherwise.  Overlaps stay binary.
/// Throws InvalidInputError when a shape extends outside the grid or the
/// scale is not positive.
Volume generate_phantom(const PhantomSpec& spec);

} // namespace adaptct
