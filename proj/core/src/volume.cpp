#include "adaptct/volume.hpp"

namespace adaptct {

Volume rotate_slices_ccw90(const Volume& v) {
    if (v.nx() != v.ny())
        throw GeometryError("rotate_slices_ccw90 requires square slices");
    const int n = v.nx();
    Volume out(v.nz(), n, n);
    for (int iz = 0; iz < v.nz(); ++iz)
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                out.at(iz, ix, iy) = v.at(iz, iy, n - 1 - ix);
    return out;
}

} // namespace adaptct
