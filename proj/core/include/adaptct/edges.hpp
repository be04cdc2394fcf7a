#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "adaptct/angles.hpp"
#include "adaptct/volume.hpp"

namespace adaptct {

/// Binary edge image of one slice.
struct EdgeMap {
    int nx = 0;
    int ny = 0;
    std::vector<std::uint8_t> v;

    EdgeMap() = default;
    EdgeMap(int nx_, int ny_) : nx(nx_), ny(ny_), v(static_cast<std::size_t>(nx_) * ny_, 0) {}

    std::uint8_t at(int ix, int iy) const { return v[static_cast<std::size_t>(ix) * ny + iy]; }
    std::uint8_t& at(int ix, int iy) { return v[static_cast<std::size_t>(ix) * ny + iy]; }
    std::size_t count() const;
};

/// Line segment in pixel coordinates.  Orientation follows the view-angle
/// convention (see angles.hpp): a segment is aligned with view angle theta
/// when orientation_deg() == theta.
struct LineSegment {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    std::array<double, 2> midpoint() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    double length() const;
    double orientation_deg() const { return direction_orientation_deg(x1 - x0, y1 - y0); }
};

struct CannyParams {
    double sigma = 1.0;         // Gaussian smoothing, pixels
    double high_fraction = 0.2; // high threshold as a fraction of the max gradient magnitude
    double low_ratio = 0.5;     // low threshold as a fraction of the high threshold
};

struct PphtParams {
    int vote_threshold = 10;
    double min_length = 10.0; // pixels, Euclidean
    int max_gap = 3;          // pixels
    double theta_step_deg = 1.0;
    double rho_step = 1.0;
    std::uint64_t seed = 1;
};

// Half-opening of the double-sided alignment cone.  Large openings let a
// cone anchored on one edge reach a small object's corners and opposite
// side, which drags the aligned-angle peak off by up to epsilon; 3 degrees
// keeps that bias inside the angular tolerance of the diagnostics while
// still absorbing the 1-degree PPHT bin jitter.
struct ConeParams {
    double epsilon_deg = 3.0;
};

/// How a segment contributes to candidate angles: the default reading points
/// the cone axis along the candidate angle; the alternative keeps the mask
/// fixed along the segment and gates the contribution by candidate proximity.
enum class AlignmentMode { ConeAxisAlongCandidate, SegmentGated };

/// Canny edge detection with absolute gradient-magnitude thresholds.
/// Requires high >= low > 0, sigma > 0, and at least 3 pixels per side.
EdgeMap canny(ImageView slice, double sigma, double low, double high);

/// Canny with thresholds relative to the slice's max gradient magnitude
/// (scale invariant); a constant slice yields an empty map.
EdgeMap detect_edges(ImageView slice, const CannyParams& params);

/// Progressive probabilistic Hough transform: randomized voting with line
/// walking, gap tolerance and pixel consumption.  Deterministic per seed.
std::vector<LineSegment> ppht(const EdgeMap& edges, const PphtParams& params);

/// Membership test for the double-sided cone with vertex at the segment
/// midpoint, axis along view angle theta_deg and half-opening epsilon.
/// The pixel containing the vertex is always inside.
bool cone_contains(double vx, double vy, double theta_deg, double epsilon_deg,
                   int px, int py);

/// Rasterized cone membership mask (mainly diagnostic; the alignment table
/// uses the predicate directly).
EdgeMap cone_mask(const LineSegment& segment, double theta_deg, const ConeParams& cone,
                  int nx, int ny);

/// Edge alignment values over a candidate angle list.  raw holds the exact
/// integer overlap counts; f is raw normalized so its maximum is 1 (all zero
/// when no segment overlaps any edge pixel).
struct EdgeAlignmentResult {
    std::vector<double> angles_deg;
    std::vector<double> f;
    std::vector<std::int64_t> raw;
};

EdgeAlignmentResult edge_alignment_from_features(
    std::span<const EdgeMap> edge_maps,
    std::span<const std::vector<LineSegment>> segments,
    std::span<const double> candidates_deg,
    const ConeParams& cone,
    AlignmentMode mode = AlignmentMode::ConeAxisAlongCandidate);

struct EdgeParams {
    CannyParams canny;
    PphtParams ppht;
    ConeParams cone;
    AlignmentMode mode = AlignmentMode::ConeAxisAlongCandidate;
};

/// Full pipeline: per slice Canny -> PPHT -> cone accumulation over the
/// candidate list.  PPHT randomness is derived per slice from params.ppht.seed.
EdgeAlignmentResult edge_alignment_table(const Volume& volume,
                                         std::span<const double> candidates_deg,
                                         const EdgeParams& params);

} // namespace adaptct
