#include "adaptct/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adaptct/angles.hpp"

namespace adaptct {

namespace {

// Rotate the in-plane offset into the shape frame (inverse of the material
// rotation about z).
inline void to_shape_frame(double rot_deg, double dx, double dy, double& ux, double& uy) {
    if (rot_deg == 0.0) {
        ux = dx;
        uy = dy;
        return;
    }
    const double r = deg_to_rad(rot_deg);
    const double c = std::cos(r), s = std::sin(r);
    ux = c * dx + s * dy;
    uy = -s * dx + c * dy;
}

// Isosceles triangle used as the prism cross-section, sized (sx, sy).
inline bool triangle_contains(double ux, double uy, double sx, double sy) {
    // vertices: a = (-sx/2, -sy/2), b = (sx/2, -sy/2), c = (0, sy/2)
    const double ax = -0.5 * sx, ay = -0.5 * sy;
    const double bx = 0.5 * sx, by = -0.5 * sy;
    const double cx = 0.0, cy = 0.5 * sy;
    auto side = [](double x0, double y0, double x1, double y1, double px, double py) {
        return (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0);
    };
    const double d0 = side(ax, ay, bx, by, ux, uy);
    const double d1 = side(bx, by, cx, cy, ux, uy);
    const double d2 = side(cx, cy, ax, ay, ux, uy);
    const bool any_neg = d0 < 0 || d1 < 0 || d2 < 0;
    const bool any_pos = d0 > 0 || d1 > 0 || d2 > 0;
    return !(any_neg && any_pos);
}

} // namespace

bool Shape::contains(double z, double x, double y) const {
    const double dz = z - center[0];
    const double dx = x - center[1];
    const double dy = y - center[2];
    switch (kind) {
    case Kind::Sphere:
        return dz * dz + dx * dx + dy * dy <= radius * radius;
    case Kind::Box: {
        if (std::fabs(dz) > 0.5 * size[0]) return false;
        double ux, uy;
        to_shape_frame(rot_z_deg, dx, dy, ux, uy);
        return std::fabs(ux) <= 0.5 * size[1] && std::fabs(uy) <= 0.5 * size[2];
    }
    case Kind::Cylinder: {
        const double h = height > 0 ? height : size[0];
        if (std::fabs(dz) > 0.5 * h) return false;
        return dx * dx + dy * dy <= radius * radius;
    }
    case Kind::Prism: {
        const double h = height > 0 ? height : size[0];
        if (std::fabs(dz) > 0.5 * h) return false;
        double ux, uy;
        to_shape_frame(rot_z_deg, dx, dy, ux, uy);
        return triangle_contains(ux, uy, size[1], size[2]);
    }
    }
    return false;
}

void Shape::bounds(std::array<double, 3>& lo, std::array<double, 3>& hi) const {
    double rz = 0, rx = 0, ry = 0;
    const double rr = deg_to_rad(rot_z_deg);
    const double ac = std::fabs(std::cos(rr)), as = std::fabs(std::sin(rr));
    switch (kind) {
    case Kind::Sphere:
        rz = rx = ry = radius;
        break;
    case Kind::Box:
        rz = 0.5 * size[0];
        rx = 0.5 * (size[1] * ac + size[2] * as);
        ry = 0.5 * (size[1] * as + size[2] * ac);
        break;
    case Kind::Cylinder:
        rz = 0.5 * (height > 0 ? height : size[0]);
        rx = ry = radius;
        break;
    case Kind::Prism: {
        rz = 0.5 * (height > 0 ? height : size[0]);
        const double c = std::cos(rr), s = std::sin(rr);
        const double vx[3] = {-0.5 * size[1], 0.5 * size[1], 0.0};
        const double vy[3] = {-0.5 * size[2], -0.5 * size[2], 0.5 * size[2]};
        rx = ry = 0.0;
        for (int i = 0; i < 3; ++i) {
            rx = std::max(rx, std::fabs(c * vx[i] - s * vy[i]));
            ry = std::max(ry, std::fabs(s * vx[i] + c * vy[i]));
        }
        break;
    }
    }
    lo = {center[0] - rz, center[1] - rx, center[2] - ry};
    hi = {center[0] + rz, center[1] + rx, center[2] + ry};
}

std::string Shape::describe() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Sphere: os << "sphere"; break;
    case Kind::Box: os << "box"; break;
    case Kind::Cylinder: os << "cylinder"; break;
    case Kind::Prism: os << "prism"; break;
    }
    os << " at (" << center[0] << ", " << center[1] << ", " << center[2] << ")";
    return os.str();
}

bool PhantomSpec::same_geometry(const PhantomSpec& o) const {
    if (nz != o.nz || nx != o.nx || ny != o.ny) return false;
    if (attenuation_scale != o.attenuation_scale) return false;
    if (seed != o.seed) return false;
    if (shapes.size() != o.shapes.size()) return false;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        const Shape& a = shapes[i];
        const Shape& b = o.shapes[i];
        if (a.kind != b.kind || a.center != b.center || a.radius != b.radius ||
            a.size != b.size || a.height != b.height || a.rot_z_deg != b.rot_z_deg)
            return false;
    }
    return true;
}

Volume generate_phantom(const PhantomSpec& spec) {
    if (spec.attenuation_scale <= 0.0)
        throw InvalidInputError("phantom attenuation scale must be positive");
    if (spec.nz <= 0 || spec.nx <= 0 || spec.ny <= 0)
        throw InvalidInputError("phantom dims must be positive");

    // In-plane extents must stay inside the physical grid (voxel cells, not
    // centers).  Along z the shape may stick out: slices are independent and
    // axial truncation is routine (a tall cylinder through a short stack).
    const double dims[3] = {spec.nz - 0.5, spec.nx - 0.5, spec.ny - 0.5};
    for (std::size_t i = 0; i < spec.shapes.size(); ++i) {
        std::array<double, 3> lo, hi;
        spec.shapes[i].bounds(lo, hi);
        for (int a = 1; a < 3; ++a) {
            if (lo[a] < -0.5 || hi[a] > dims[a]) {
                std::ostringstream os;
                os << "phantom shape " << i << " (" << spec.shapes[i].describe()
                   << ") extends outside the grid";
                throw InvalidInputError(os.str());
            }
        }
    }

    Volume vol(spec.nz, spec.nx, spec.ny);
    const float value = static_cast<float>(spec.attenuation_scale);
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < spec.nz; ++iz) {
        MutableImageView s = vol.slice(iz);
        for (int ix = 0; ix < spec.nx; ++ix) {
            for (int iy = 0; iy < spec.ny; ++iy) {
                for (const Shape& shape : spec.shapes) {
                    if (shape.contains(iz, ix, iy)) {
                        s.at(ix, iy) = value;
                        break;
                    }
                }
            }
        }
    }
    return vol;
}

} // namespace adaptct
