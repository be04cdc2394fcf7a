#include "adaptct/edges.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "adaptct/errors.hpp"
#include "adaptct/measurement.hpp" // mix_seed

namespace adaptct {

std::size_t EdgeMap::count() const {
    std::size_t n = 0;
    for (std::uint8_t b : v) n += b != 0;
    return n;
}

double LineSegment::length() const {
    return std::hypot(x1 - x0, y1 - y0);
}

namespace {

struct GradientField {
    int nx = 0, ny = 0;
    std::vector<float> gx, gy, mag;
    float max_mag = 0.0f;

    float mag_at(int ix, int iy) const { return mag[static_cast<std::size_t>(ix) * ny + iy]; }
};

std::vector<float> gaussian_blur(ImageView slice, double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(radius + 1);
    double sum = 0.0;
    for (int k = 0; k <= radius; ++k) {
        kernel[k] = std::exp(-0.5 * (k * k) / (sigma * sigma));
        sum += (k == 0) ? kernel[k] : 2.0 * kernel[k];
    }
    for (double& k : kernel) k /= sum;

    const int nx = slice.nx, ny = slice.ny;
    auto clampi = [](int i, int n) { return std::clamp(i, 0, n - 1); };
    std::vector<float> tmp(slice.size()), out(slice.size());
    // along y (replicate border)
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            double acc = kernel[0] * slice.at(ix, iy);
            for (int k = 1; k <= radius; ++k)
                acc += kernel[k] * (slice.at(ix, clampi(iy - k, ny)) + slice.at(ix, clampi(iy + k, ny)));
            tmp[static_cast<std::size_t>(ix) * ny + iy] = static_cast<float>(acc);
        }
    }
    // along x
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            double acc = kernel[0] * tmp[static_cast<std::size_t>(ix) * ny + iy];
            for (int k = 1; k <= radius; ++k)
                acc += kernel[k] * (tmp[static_cast<std::size_t>(clampi(ix - k, nx)) * ny + iy] +
                                    tmp[static_cast<std::size_t>(clampi(ix + k, nx)) * ny + iy]);
            out[static_cast<std::size_t>(ix) * ny + iy] = static_cast<float>(acc);
        }
    }
    return out;
}

GradientField compute_gradient(ImageView slice, double sigma) {
    const int nx = slice.nx, ny = slice.ny;
    GradientField g;
    g.nx = nx;
    g.ny = ny;
    g.gx.assign(slice.size(), 0.0f);
    g.gy.assign(slice.size(), 0.0f);
    g.mag.assign(slice.size(), 0.0f);

    const std::vector<float> sm = gaussian_blur(slice, sigma);
    auto at = [&](int ix, int iy) { return sm[static_cast<std::size_t>(ix) * ny + iy]; };
    for (int ix = 1; ix < nx - 1; ++ix) {
        for (int iy = 1; iy < ny - 1; ++iy) {
            // Sobel
            const double dx = (at(ix + 1, iy - 1) + 2.0 * at(ix + 1, iy) + at(ix + 1, iy + 1)) -
                              (at(ix - 1, iy - 1) + 2.0 * at(ix - 1, iy) + at(ix - 1, iy + 1));
            const double dy = (at(ix - 1, iy + 1) + 2.0 * at(ix, iy + 1) + at(ix + 1, iy + 1)) -
                              (at(ix - 1, iy - 1) + 2.0 * at(ix, iy - 1) + at(ix + 1, iy - 1));
            const std::size_t i = static_cast<std::size_t>(ix) * ny + iy;
            g.gx[i] = static_cast<float>(dx);
            g.gy[i] = static_cast<float>(dy);
            g.mag[i] = static_cast<float>(std::hypot(dx, dy));
            g.max_mag = std::max(g.max_mag, g.mag[i]);
        }
    }
    return g;
}

EdgeMap threshold_edges(const GradientField& g, double low, double high) {
    const int nx = g.nx, ny = g.ny;
    // 22.5-degree sectors; ties along the gradient direction keep exactly one
    // pixel (>= on the up-gradient side, > on the down-gradient side).
    constexpr double kTan67 = 2.414213562373095;
    std::vector<std::uint8_t> cls(g.mag.size(), 0); // 0 none, 1 weak, 2 strong
    for (int ix = 1; ix < nx - 1; ++ix) {
        for (int iy = 1; iy < ny - 1; ++iy) {
            const std::size_t i = static_cast<std::size_t>(ix) * ny + iy;
            const double m = g.mag[i];
            if (m < low || m <= 0.0) continue;
            const double gx = g.gx[i], gy = g.gy[i];
            const double ax = std::fabs(gx), ay = std::fabs(gy);
            int dx, dy;
            if (ax >= kTan67 * ay) {
                dx = gx > 0 ? 1 : -1;
                dy = 0;
            } else if (ay >= kTan67 * ax) {
                dx = 0;
                dy = gy > 0 ? 1 : -1;
            } else {
                dx = gx > 0 ? 1 : -1;
                dy = gy > 0 ? 1 : -1;
            }
            const double m_plus = g.mag_at(ix + dx, iy + dy);
            const double m_minus = g.mag_at(ix - dx, iy - dy);
            if (m >= m_plus && m > m_minus)
                cls[i] = (m >= high) ? 2 : 1;
        }
    }

    EdgeMap out(nx, ny);
    std::vector<std::pair<int, int>> stack;
    for (int ix = 1; ix < nx - 1; ++ix)
        for (int iy = 1; iy < ny - 1; ++iy)
            if (cls[static_cast<std::size_t>(ix) * ny + iy] == 2 && !out.at(ix, iy)) {
                out.at(ix, iy) = 1;
                stack.emplace_back(ix, iy);
                while (!stack.empty()) {
                    auto [px, py] = stack.back();
                    stack.pop_back();
                    for (int ddx = -1; ddx <= 1; ++ddx)
                        for (int ddy = -1; ddy <= 1; ++ddy) {
                            const int qx = px + ddx, qy = py + ddy;
                            if (qx < 1 || qx >= nx - 1 || qy < 1 || qy >= ny - 1) continue;
                            if (out.at(qx, qy)) continue;
                            if (cls[static_cast<std::size_t>(qx) * ny + qy] == 0) continue;
                            out.at(qx, qy) = 1;
                            stack.emplace_back(qx, qy);
                        }
                }
            }
    return out;
}

void check_slice_dims(ImageView slice) {
    if (slice.nx < 3 || slice.ny < 3)
        throw InvalidInputError("edge detection needs at least 3 pixels per side");
}

} // namespace

EdgeMap canny(ImageView slice, double sigma, double low, double high) {
    check_slice_dims(slice);
    if (!(sigma > 0.0)) throw InvalidInputError("canny: sigma must be positive");
    if (!(low > 0.0) || high < low) throw InvalidInputError("canny: need high >= low > 0");
    const GradientField g = compute_gradient(slice, sigma);
    return threshold_edges(g, low, high);
}

EdgeMap detect_edges(ImageView slice, const CannyParams& params) {
    check_slice_dims(slice);
    if (!(params.sigma > 0.0)) throw InvalidInputError("detect_edges: sigma must be positive");
    const GradientField g = compute_gradient(slice, params.sigma);
    if (g.max_mag <= 0.0f) return EdgeMap(slice.nx, slice.ny); // constant slice
    const double high = params.high_fraction * g.max_mag;
    const double low = params.low_ratio * high;
    return threshold_edges(g, low, high);
}

std::vector<LineSegment> ppht(const EdgeMap& edges, const PphtParams& params) {
    if (params.vote_threshold <= 0 || params.min_length <= 0 || params.max_gap < 0 ||
        params.theta_step_deg <= 0 || params.rho_step <= 0)
        throw InvalidInputError("ppht: parameters must be positive");

    const int nx = edges.nx, ny = edges.ny;
    const int numangle = std::max(1, static_cast<int>(std::lround(180.0 / params.theta_step_deg)));
    const int half_rho = static_cast<int>(std::ceil(std::hypot(double(nx), double(ny)) / params.rho_step)) + 1;
    const int numrho = 2 * half_rho + 1;

    std::vector<double> cos_t(numangle), sin_t(numangle);
    for (int n = 0; n < numangle; ++n) {
        const double th = deg_to_rad(n * params.theta_step_deg);
        cos_t[n] = std::cos(th);
        sin_t[n] = std::sin(th);
    }

    struct Pt {
        int x, y;
    };
    std::vector<Pt> points;
    std::vector<std::uint8_t> mask(edges.v);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            if (edges.at(ix, iy)) points.push_back({ix, iy});

    std::vector<int> accum(static_cast<std::size_t>(numangle) * numrho, 0);
    std::mt19937_64 rng(params.seed);
    std::vector<LineSegment> segments;

    auto rho_index = [&](int x, int y, int n) {
        return static_cast<int>(std::lround((x * cos_t[n] + y * sin_t[n]) / params.rho_step)) + half_rho;
    };

    const int max_steps = 2 * (nx + ny) + 4; // walk safety bound
    int count = static_cast<int>(points.size());
    while (count > 0) {
        const int idx = static_cast<int>(rng() % static_cast<std::uint64_t>(count));
        const Pt pt = points[idx];
        points[idx] = points[count - 1];
        --count;

        if (!mask[static_cast<std::size_t>(pt.x) * ny + pt.y]) continue; // consumed by an earlier line

        // vote in every angle bin, track the strongest
        int max_val = params.vote_threshold - 1, max_n = -1;
        for (int n = 0; n < numangle; ++n) {
            const int r = rho_index(pt.x, pt.y, n);
            const int val = ++accum[static_cast<std::size_t>(n) * numrho + r];
            if (val > max_val) {
                max_val = val;
                max_n = n;
            }
        }
        if (max_n < 0) continue;

        // direction of the line whose normal is (cos, sin)
        const double dx = -sin_t[max_n];
        const double dy = cos_t[max_n];
        const bool x_dominant = std::fabs(dx) >= std::fabs(dy);

        // pixel sequence along the line from pt in direction k (0: +, 1: -)
        auto step_pixel = [&](int k, int step, int& px, int& py) {
            const double sgn = (k == 0) ? 1.0 : -1.0;
            if (x_dominant) {
                const double sx = sgn * (dx > 0 ? 1.0 : -1.0);
                px = pt.x + static_cast<int>(sx) * step;
                py = static_cast<int>(std::lround(pt.y + sx * step * dy / dx));
            } else {
                const double sy = sgn * (dy > 0 ? 1.0 : -1.0);
                py = pt.y + static_cast<int>(sy) * step;
                px = static_cast<int>(std::lround(pt.x + sy * step * dx / dy));
            }
        };

        Pt line_end[2] = {pt, pt};
        for (int k = 0; k < 2; ++k) {
            int gap = 0;
            for (int step = 0; step < max_steps; ++step) {
                int px, py;
                step_pixel(k, step, px, py);
                if (px < 0 || px >= nx || py < 0 || py >= ny) break;
                if (mask[static_cast<std::size_t>(px) * ny + py]) {
                    gap = 0;
                    line_end[k] = {px, py};
                } else if (++gap > params.max_gap) {
                    break;
                }
            }
        }

        const double len = std::hypot(double(line_end[1].x - line_end[0].x),
                                      double(line_end[1].y - line_end[0].y));
        const bool good = len >= params.min_length;

        // consume walked pixels; only a good line removes its votes
        for (int k = 0; k < 2; ++k) {
            for (int step = 0; step < max_steps; ++step) {
                int px, py;
                step_pixel(k, step, px, py);
                if (px < 0 || px >= nx || py < 0 || py >= ny) break;
                std::uint8_t& m = mask[static_cast<std::size_t>(px) * ny + py];
                if (m) {
                    if (good) {
                        for (int n = 0; n < numangle; ++n)
                            --accum[static_cast<std::size_t>(n) * numrho + rho_index(px, py, n)];
                    }
                    m = 0;
                }
                if (px == line_end[k].x && py == line_end[k].y) break;
            }
        }

        if (good)
            segments.push_back(LineSegment{double(line_end[0].x), double(line_end[0].y),
                                           double(line_end[1].x), double(line_end[1].y)});
    }
    return segments;
}

bool cone_contains(double vx, double vy, double theta_deg, double epsilon_deg,
                   int px, int py) {
    const double dx = px - vx;
    const double dy = py - vy;
    if (std::fabs(dx) <= 0.5 && std::fabs(dy) <= 0.5) return true; // vertex pixel
    const double psi = direction_orientation_deg(dx, dy);
    return angular_distance_deg(psi, theta_deg) <= epsilon_deg;
}

EdgeMap cone_mask(const LineSegment& segment, double theta_deg, const ConeParams& cone,
                  int nx, int ny) {
    const auto [vx, vy] = segment.midpoint();
    EdgeMap out(nx, ny);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            if (cone_contains(vx, vy, theta_deg, cone.epsilon_deg, ix, iy))
                out.at(ix, iy) = 1;
    return out;
}

EdgeAlignmentResult edge_alignment_from_features(
    std::span<const EdgeMap> edge_maps,
    std::span<const std::vector<LineSegment>> segments,
    std::span<const double> candidates_deg,
    const ConeParams& cone,
    AlignmentMode mode) {
    if (edge_maps.size() != segments.size())
        throw InvalidInputError("edge_alignment_from_features: one segment list per edge map");
    const std::size_t ncand = candidates_deg.size();

    EdgeAlignmentResult result;
    result.angles_deg.assign(candidates_deg.begin(), candidates_deg.end());
    result.raw.assign(ncand, 0);
    result.f.assign(ncand, 0.0);
    if (ncand == 0) return result;

    const int nslices = static_cast<int>(edge_maps.size());
    std::vector<std::vector<std::int64_t>> partial(nslices);

#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < nslices; ++k) {
        std::vector<std::int64_t> raw_k(ncand, 0);
        const EdgeMap& em = edge_maps[k];
        std::vector<std::pair<int, int>> pixels;
        for (int ix = 0; ix < em.nx; ++ix)
            for (int iy = 0; iy < em.ny; ++iy)
                if (em.at(ix, iy)) pixels.emplace_back(ix, iy);
        if (pixels.empty()) {
            partial[k] = std::move(raw_k);
            continue;
        }

        std::vector<double> psi;
        psi.reserve(pixels.size());
        for (const LineSegment& seg : segments[k]) {
            const auto [vx, vy] = seg.midpoint();
            std::int64_t vertex_hits = 0;
            psi.clear();
            for (auto [px, py] : pixels) {
                const double dx = px - vx;
                const double dy = py - vy;
                if (std::fabs(dx) <= 0.5 && std::fabs(dy) <= 0.5) {
                    ++vertex_hits;
                } else {
                    psi.push_back(direction_orientation_deg(dx, dy));
                }
            }
            if (mode == AlignmentMode::ConeAxisAlongCandidate) {
                for (std::size_t j = 0; j < ncand; ++j) {
                    const double theta = candidates_deg[j];
                    std::int64_t cnt = vertex_hits;
                    for (const double a : psi)
                        cnt += angular_distance_deg(a, theta) <= cone.epsilon_deg;
                    raw_k[j] += cnt;
                }
            } else {
                const double phi = seg.orientation_deg();
                std::int64_t overlap = vertex_hits;
                for (const double a : psi)
                    overlap += angular_distance_deg(a, phi) <= cone.epsilon_deg;
                for (std::size_t j = 0; j < ncand; ++j)
                    if (angular_distance_deg(phi, candidates_deg[j]) <= cone.epsilon_deg)
                        raw_k[j] += overlap;
            }
        }
        partial[k] = std::move(raw_k);
    }

    for (int k = 0; k < nslices; ++k)
        for (std::size_t j = 0; j < ncand; ++j)
            result.raw[j] += partial[k][j];

    const std::int64_t max_raw = *std::max_element(result.raw.begin(), result.raw.end());
    if (max_raw > 0)
        for (std::size_t j = 0; j < ncand; ++j)
            result.f[j] = static_cast<double>(result.raw[j]) / static_cast<double>(max_raw);
    return result;
}

EdgeAlignmentResult edge_alignment_table(const Volume& volume,
                                         std::span<const double> candidates_deg,
                                         const EdgeParams& params) {
    const int nz = volume.nz();
    std::vector<EdgeMap> maps(nz);
    std::vector<std::vector<LineSegment>> segs(nz);

#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < nz; ++k) {
        maps[k] = detect_edges(volume.slice(k), params.canny);
        PphtParams pp = params.ppht;
        pp.seed = mix_seed(params.ppht.seed, static_cast<std::uint64_t>(k));
        segs[k] = ppht(maps[k], pp);
    }
    return edge_alignment_from_features(maps, segs, candidates_deg, params.cone, params.mode);
}

} // namespace adaptct
