#pragma once

#include <cmath>

// Angle conventions used throughout the library.
//
// A slice is an Nx x Ny array indexed (ix, iy); geometric coordinates are
// x = ix - cx, y = iy - cy about the rotation center.  A view angle theta
// (degrees, [0, 180)) has ray direction (sin theta, cos theta): theta = 0
// means rays travel along the y axis and project onto the x axis.  A line
// segment with endpoint delta (dx, dy) has orientation
// fold_angle_180(atan2(dx, dy)), so a segment is parallel to the rays of
// view angle theta exactly when its orientation equals theta.

namespace adaptct {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Fold an angle in degrees into [0, 180).
inline double fold_angle_180(double deg) {
    double r = std::fmod(deg, 180.0);
    if (r < 0.0) r += 180.0;
    if (r >= 180.0) r = 0.0; // fmod can round up to 180 exactly
    return r;
}

/// Wraparound angular distance on the half-circle of orientations.
/// Inputs in [0, 180); result in [0, 90].
inline double angular_distance_deg(double a, double b) {
    double d = std::fabs(a - b);
    return std::min(d, 180.0 - d);
}

/// Orientation of the direction vector (dx, dy), folded into [0, 180).
/// Matches the view-angle convention: orientation(sin t, cos t) == t.
inline double direction_orientation_deg(double dx, double dy) {
    if (dx == 0.0 && dy == 0.0) return 0.0;
    return fold_angle_180(rad_to_deg(std::atan2(dx, dy)));
}

} // namespace adaptct
