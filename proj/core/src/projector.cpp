#include "adaptct/projector.hpp"

#include <algorithm>
#include <cmath>

#include "adaptct/angles.hpp"

namespace adaptct {

namespace {

// Line-integral footprint of a unit square pixel on the detector axis: a
// trapezoid (box_|cos| convolved with box_|sin|) of unit area.  Channel
// weights integrate it over the channel bin, so the weights of one pixel
// sum to exactly 1/pitch across a covering detector.
struct Footprint {
    double r1;   // support half-width (a+b)/2
    double r0;   // flat-top half-width |a-b|/2
    double ramp; // ramp width min(a,b)
    double hgt;  // peak 1/max(a,b)

    explicit Footprint(double angle_rad) {
        const double a = std::fabs(std::cos(angle_rad));
        const double b = std::fabs(std::sin(angle_rad));
        r1 = 0.5 * (a + b);
        r0 = 0.5 * std::fabs(a - b);
        ramp = std::min(a, b);
        hgt = 1.0 / std::max(a, b);
    }

    double cdf(double u) const {
        if (u <= -r1) return 0.0;
        if (u >= r1) return 1.0;
        if (ramp > 0.0) {
            if (u < -r0) {
                const double t = u + r1;
                return 0.5 * hgt * t * t / ramp;
            }
            if (u > r0) {
                const double t = r1 - u;
                return 1.0 - 0.5 * hgt * t * t / ramp;
            }
        }
        return std::clamp(0.5 + hgt * u, 0.0, 1.0);
    }
};

// Visit every nonzero (pixel, channel, weight) triple of one slice at one
// angle.  Both projection directions and the cached sparse table use this,
// which is what makes the pair an exact adjoint.
template <class F>
void for_each_weight(double angle_deg, const ProjectionGeometry& geom, int nx, int ny, F&& f) {
    const double th = deg_to_rad(angle_deg);
    const double c = std::cos(th);
    const double s = std::sin(th);
    const Footprint fp(th);
    const double cx = geom.rotation_center_x(nx);
    const double cy = geom.rotation_center_y(ny);
    const double tau = geom.pitch;
    const double inv_tau = 1.0 / tau;
    const double cc = 0.5 * (geom.num_channels - 1);
    const int nc = geom.num_channels;

    for (int ix = 0; ix < nx; ++ix) {
        const double tx = (ix - cx) * c;
        for (int iy = 0; iy < ny; ++iy) {
            const double tp = tx - (iy - cy) * s;
            int clo = static_cast<int>(std::floor((tp - fp.r1) * inv_tau + cc - 0.5));
            int chi = static_cast<int>(std::ceil((tp + fp.r1) * inv_tau + cc + 0.5));
            clo = std::max(clo, 0);
            chi = std::min(chi, nc - 1);
            for (int ch = clo; ch <= chi; ++ch) {
                const double u = (ch - cc) * tau - tp;
                const double w = (fp.cdf(u + 0.5 * tau) - fp.cdf(u - 0.5 * tau)) * inv_tau;
                if (w > 0.0) f(ix, iy, ch, w);
            }
        }
    }
}

void check_angle(double angle_deg) {
    if (!(angle_deg >= 0.0 && angle_deg < 180.0))
        throw InvalidInputError("view angle must lie in [0, 180)");
}

void check_geometry(const ProjectionGeometry& geom) {
    if (geom.num_channels <= 0 || geom.pitch <= 0.0)
        throw GeometryError("projection geometry needs positive channel count and pitch");
}

} // namespace

ProjectionGeometry auto_geometry(int nx, int ny) {
    ProjectionGeometry geom;
    geom.num_channels = static_cast<int>(std::ceil(std::hypot(double(nx), double(ny)))) + 2;
    return geom;
}

Projection forward_project(const Volume& volume, double angle_deg, const ProjectionGeometry& geom) {
    check_angle(angle_deg);
    check_geometry(geom);
    if (volume.empty()) throw GeometryError("forward_project: empty volume");

    Projection out;
    out.angle_deg = angle_deg;
    out.nz = volume.nz();
    out.nc = geom.num_channels;
    out.values.assign(static_cast<std::size_t>(out.nz) * out.nc, 0.0f);

#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < volume.nz(); ++iz) {
        std::vector<double> row(out.nc, 0.0);
        ImageView s = volume.slice(iz);
        for_each_weight(angle_deg, geom, s.nx, s.ny, [&](int ix, int iy, int ch, double w) {
            row[ch] += w * s.at(ix, iy);
        });
        for (int ic = 0; ic < out.nc; ++ic)
            out.at(iz, ic) = static_cast<float>(row[ic]);
    }
    return out;
}

Volume back_project(const Projection& projection, const ProjectionGeometry& geom,
                    int nz, int nx, int ny) {
    check_angle(projection.angle_deg);
    check_geometry(geom);
    if (projection.nc != geom.num_channels)
        throw GeometryError("back_project: projection channel count does not match geometry");
    if (projection.nz != nz)
        throw GeometryError("back_project: projection slice count does not match dims");

    Volume out(nz, nx, ny);
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < nz; ++iz) {
        std::vector<double> acc(static_cast<std::size_t>(nx) * ny, 0.0);
        for_each_weight(projection.angle_deg, geom, nx, ny, [&](int ix, int iy, int ch, double w) {
            acc[static_cast<std::size_t>(ix) * ny + iy] += w * projection.at(iz, ch);
        });
        MutableImageView s = out.slice(iz);
        for (std::size_t i = 0; i < acc.size(); ++i)
            s.data[i] = static_cast<float>(acc[i]);
    }
    return out;
}

SliceProjector::SliceProjector(double angle_deg, const ProjectionGeometry& geom, int nx, int ny)
    : angle_deg_(angle_deg), nc_(geom.num_channels), nx_(nx), ny_(ny) {
    check_angle(angle_deg);
    check_geometry(geom);
    const std::size_t npix = static_cast<std::size_t>(nx) * ny;
    offsets_.assign(npix + 1, 0);
    for_each_weight(angle_deg, geom, nx, ny, [&](int ix, int iy, int, double) {
        ++offsets_[static_cast<std::size_t>(ix) * ny + iy + 1];
    });
    for (std::size_t i = 1; i <= npix; ++i) offsets_[i] += offsets_[i - 1];
    channels_.resize(offsets_[npix]);
    weights_.resize(offsets_[npix]);
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for_each_weight(angle_deg, geom, nx, ny, [&](int ix, int iy, int ch, double w) {
        const std::uint32_t k = cursor[static_cast<std::size_t>(ix) * ny + iy]++;
        channels_[k] = ch;
        weights_[k] = static_cast<float>(w);
    });
}

void SliceProjector::apply_forward(const double* pixels, double* row) const {
    const std::size_t npix = pixel_count();
    for (std::size_t px = 0; px < npix; ++px) {
        const double v = pixels[px];
        if (v == 0.0) continue;
        for (std::uint32_t k = offsets_[px]; k < offsets_[px + 1]; ++k)
            row[channels_[k]] += weights_[k] * v;
    }
}

void SliceProjector::apply_adjoint(const double* row, double* pixels) const {
    const std::size_t npix = pixel_count();
    for (std::size_t px = 0; px < npix; ++px) {
        double acc = 0.0;
        for (std::uint32_t k = offsets_[px]; k < offsets_[px + 1]; ++k)
            acc += weights_[k] * row[channels_[k]];
        pixels[px] += acc;
    }
}

void SliceProjector::ones_forward(double* row) const {
    const std::size_t npix = pixel_count();
    for (std::size_t px = 0; px < npix; ++px)
        for (std::uint32_t k = offsets_[px]; k < offsets_[px + 1]; ++k)
            row[channels_[k]] += weights_[k];
}

} // namespace adaptct
