#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "adaptct/errors.hpp"

namespace adaptct {

/// Read-only view of one Nx x Ny slice, indexed (ix, iy) with iy fastest.
struct ImageView {
    const float* data = nullptr;
    int nx = 0;
    int ny = 0;

    float at(int ix, int iy) const { return data[static_cast<std::size_t>(ix) * ny + iy]; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
};

struct MutableImageView {
    float* data = nullptr;
    int nx = 0;
    int ny = 0;

    float& at(int ix, int iy) { return data[static_cast<std::size_t>(ix) * ny + iy]; }
    float at(int ix, int iy) const { return data[static_cast<std::size_t>(ix) * ny + iy]; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }

    operator ImageView() const { return ImageView{data, nx, ny}; }
};

/// 3D attenuation image, dims (Nz, Nx, Ny), stored z-major then x then y.
/// Dimensions are fixed at construction.
class Volume {
public:
    Volume() = default;
    Volume(int nz, int nx, int ny, float fill = 0.0f)
        : nz_(nz), nx_(nx), ny_(ny),
          data_(static_cast<std::size_t>(nz) * nx * ny, fill) {
        if (nz <= 0 || nx <= 0 || ny <= 0)
            throw InvalidInputError("Volume dims must be positive");
    }

    int nz() const { return nz_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    float at(int iz, int ix, int iy) const {
        return data_[(static_cast<std::size_t>(iz) * nx_ + ix) * ny_ + iy];
    }
    float& at(int iz, int ix, int iy) {
        return data_[(static_cast<std::size_t>(iz) * nx_ + ix) * ny_ + iy];
    }

    ImageView slice(int iz) const {
        return ImageView{data_.data() + static_cast<std::size_t>(iz) * nx_ * ny_, nx_, ny_};
    }
    MutableImageView slice(int iz) {
        return MutableImageView{data_.data() + static_cast<std::size_t>(iz) * nx_ * ny_, nx_, ny_};
    }

    const float* data() const { return data_.data(); }
    float* data() { return data_.data(); }

    bool same_dims(const Volume& o) const {
        return nz_ == o.nz_ && nx_ == o.nx_ && ny_ == o.ny_;
    }

private:
    int nz_ = 0, nx_ = 0, ny_ = 0;
    std::vector<float> data_;
};

/// Rotate every slice counter-clockwise by 90 degrees in the (x, y) frame.
/// Requires square slices.
Volume rotate_slices_ccw90(const Volume& v);

} // namespace adaptct
