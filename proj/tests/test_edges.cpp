#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "adaptct/edges.hpp"
#include "adaptct/phantom.hpp"
#include "oracles.hpp"

using namespace adaptct;

namespace {

std::vector<float> constant_image(int nx, int ny, float v) {
    return std::vector<float>(std::size_t(nx) * ny, v);
}

// Clean 1-pixel-wide digital line through (cx, cy) along orientation phi
// (view-angle convention: direction (sin phi, cos phi)), half-length L:
// exactly one pixel per step of the dominant axis.
void draw_line(std::vector<float>& img, int nx, int ny, double cx, double cy, double phi_deg,
               double half_len, float value) {
    const double r = deg_to_rad(phi_deg);
    const double dx = std::sin(r), dy = std::cos(r);
    auto put = [&](double x, double y) {
        const int ix = int(std::lround(x));
        const int iy = int(std::lround(y));
        if (ix >= 0 && ix < nx && iy >= 0 && iy < ny) img[std::size_t(ix) * ny + iy] = value;
    };
    if (std::fabs(dy) >= std::fabs(dx)) {
        const int k = int(std::floor(half_len * std::fabs(dy)));
        for (int t = -k; t <= k; ++t) put(cx + t * dx / dy, cy + t);
    } else {
        const int k = int(std::floor(half_len * std::fabs(dx)));
        for (int t = -k; t <= k; ++t) put(cx + t, cy + t * dy / dx);
    }
}

EdgeMap edge_map_from(const std::vector<float>& img, int nx, int ny) {
    EdgeMap m(nx, ny);
    for (std::size_t i = 0; i < img.size(); ++i) m.v[i] = img[i] != 0.0f;
    return m;
}

std::vector<double> degree_grid(double step = 1.0) {
    std::vector<double> g;
    for (double a = 0.0; a < 180.0 - 1e-9; a += step) g.push_back(a);
    return g;
}

} // namespace

TEST_CASE("constant slice has no edges") {
    const auto img = constant_image(32, 32, 3.7f);
    const EdgeMap m = detect_edges(ImageView{img.data(), 32, 32}, CannyParams{});
    CHECK(m.count() == 0);
}

TEST_CASE("degenerate slice dims are rejected") {
    const auto img = constant_image(2, 8, 0.0f);
    CHECK_THROWS_AS(detect_edges(ImageView{img.data(), 2, 8}, CannyParams{}), InvalidInputError);
    CHECK_THROWS_AS(canny(ImageView{img.data(), 2, 8}, 1.0, 0.1, 0.2), InvalidInputError);
}

TEST_CASE("canny parameter preconditions") {
    const auto img = constant_image(16, 16, 0.0f);
    const ImageView v{img.data(), 16, 16};
    CHECK_THROWS_AS(canny(v, 0.0, 0.1, 0.2), InvalidInputError);
    CHECK_THROWS_AS(canny(v, 1.0, 0.0, 0.2), InvalidInputError);
    CHECK_THROWS_AS(canny(v, 1.0, 0.3, 0.2), InvalidInputError);
}

TEST_CASE("a step edge thins to a single-pixel line") {
    const int n = 64;
    std::vector<float> img(std::size_t(n) * n, 0.0f);
    for (int ix = 32; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) img[std::size_t(ix) * n + iy] = 1.0f;
    const EdgeMap m = detect_edges(ImageView{img.data(), n, n}, CannyParams{});
    CHECK(m.count() > 0);
    for (int iy = 2; iy < n - 2; ++iy) {
        int per_column = 0;
        for (int ix = 0; ix < n; ++ix)
            if (m.at(ix, iy)) {
                ++per_column;
                CHECK(std::fabs(ix - 31.5) <= 1.5); // within one pixel of the step
            }
        CHECK(per_column == 1);
    }
}

TEST_CASE("binary square edge count is close to its perimeter") {
    const int n = 64, side = 30;
    std::vector<float> img(std::size_t(n) * n, 0.0f);
    const int lo = (n - side) / 2;
    for (int ix = lo; ix < lo + side; ++ix)
        for (int iy = lo; iy < lo + side; ++iy) img[std::size_t(ix) * n + iy] = 1.0f;
    const EdgeMap m = detect_edges(ImageView{img.data(), n, n}, CannyParams{});
    const double perimeter = 4.0 * side;
    CHECK(double(m.count()) == doctest::Approx(perimeter).epsilon(0.2));
}

TEST_CASE("ppht on an empty map returns no segments") {
    EdgeMap m(32, 32);
    CHECK(ppht(m, PphtParams{}).empty());
}

TEST_CASE("ppht finds a single drawn line with the right orientation") {
    const int n = 128;
    std::vector<float> img(std::size_t(n) * n, 0.0f);
    draw_line(img, n, n, 63.5, 63.5, 30.0, 50.0, 1.0f);
    const EdgeMap m = edge_map_from(img, n, n);

    PphtParams params;
    params.min_length = 30.0;
    params.seed = 5;
    const auto segs = ppht(m, params);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].length() >= 30.0);
    CHECK(angular_distance_deg(segs[0].orientation_deg(), 30.0) <= 2.0);
}

TEST_CASE("ppht separates the two bars of a plus sign") {
    const int n = 100;
    std::vector<float> img(std::size_t(n) * n, 0.0f);
    draw_line(img, n, n, 49.5, 49.5, 0.0, 30.0, 1.0f);  // along y: orientation 0
    draw_line(img, n, n, 49.5, 49.5, 90.0, 30.0, 1.0f); // along x: orientation 90
    const EdgeMap m = edge_map_from(img, n, n);

    PphtParams params;
    params.min_length = 30.0;
    params.seed = 17;
    const auto segs = ppht(m, params);
    REQUIRE(segs.size() >= 2);
    bool saw0 = false, saw90 = false;
    for (const LineSegment& s : segs) {
        const double o = s.orientation_deg();
        const bool near0 = angular_distance_deg(o, 0.0) <= 2.0;
        const bool near90 = angular_distance_deg(o, 90.0) <= 2.0;
        CHECK((near0 || near90));
        saw0 = saw0 || near0;
        saw90 = saw90 || near90;
    }
    CHECK(saw0);
    CHECK(saw90);
}

TEST_CASE("ppht is deterministic for a fixed seed") {
    const int n = 96;
    std::vector<float> img(std::size_t(n) * n, 0.0f);
    draw_line(img, n, n, 40.0, 50.0, 72.0, 35.0, 1.0f);
    draw_line(img, n, n, 60.0, 30.0, 15.0, 25.0, 1.0f);
    const EdgeMap m = edge_map_from(img, n, n);
    PphtParams params;
    params.seed = 99;
    const auto a = ppht(m, params);
    const auto b = ppht(m, params);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x0 == b[i].x0);
        CHECK(a[i].y0 == b[i].y0);
        CHECK(a[i].x1 == b[i].x1);
        CHECK(a[i].y1 == b[i].y1);
    }
}

TEST_CASE("cone mask with nearly 90 degree opening covers almost everything") {
    LineSegment seg{30.0, 30.0, 34.0, 34.0};
    const EdgeMap m = cone_mask(seg, 120.0, ConeParams{89.9}, 64, 64);
    CHECK(double(m.count()) >= 0.99 * 64.0 * 64.0);
}

TEST_CASE("cone along the segment contains both endpoints") {
    LineSegment seg{10.0, 20.0, 40.0, 50.0};
    const EdgeMap m = cone_mask(seg, seg.orientation_deg(), ConeParams{10.0}, 64, 64);
    CHECK(m.at(10, 20) == 1);
    CHECK(m.at(40, 50) == 1);
}

TEST_CASE("perpendicular cone excludes the endpoints of a long segment") {
    LineSegment seg{10.0, 50.0, 90.0, 50.0}; // orientation 90
    const double perp = 0.0;
    const EdgeMap m = cone_mask(seg, perp, ConeParams{5.0}, 100, 100);
    CHECK(m.at(10, 50) == 0);
    CHECK(m.at(90, 50) == 0);
    // agree with the independent membership oracle on every pixel
    for (int ix = 0; ix < 100; ix += 7)
        for (int iy = 0; iy < 100; iy += 7)
            CHECK(m.at(ix, iy) == (oracle::cone_member(50.0, 50.0, perp, 5.0, ix, iy) ? 1 : 0));
}

TEST_CASE("alignment table matches the brute-force oracle exactly") {
    std::mt19937 rng(404);
    std::uniform_int_distribution<int> coord(2, 61);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<double> candidates = degree_grid(1.0);

    for (int trial = 0; trial < 6; ++trial) {
        EdgeMap em(64, 64);
        for (std::size_t i = 0; i < em.v.size(); ++i) em.v[i] = unit(rng) < 0.04;
        std::vector<LineSegment> segs;
        const int nseg = 1 + int(rng() % 5);
        for (int s = 0; s < nseg; ++s) {
            LineSegment seg{double(coord(rng)), double(coord(rng)), double(coord(rng)),
                            double(coord(rng))};
            if (seg.length() < 5.0) seg.x1 = seg.x0 + 11;
            segs.push_back(seg);
        }

        std::vector<EdgeMap> maps{em};
        std::vector<std::vector<LineSegment>> seg_lists{segs};
        const EdgeAlignmentResult fast =
            edge_alignment_from_features(maps, seg_lists, candidates, ConeParams{10.0});
        const oracle::AlignmentTable slow =
            oracle::edge_alignment(maps, seg_lists, candidates, 10.0);

        REQUIRE(fast.raw.size() == slow.raw.size());
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            CHECK(fast.raw[j] == slow.raw[j]);
            CHECK(fast.f[j] == slow.f[j]); // same integers, same division
        }
        int fast_argmax = 0;
        for (std::size_t j = 1; j < fast.f.size(); ++j)
            if (fast.f[j] > fast.f[fast_argmax]) fast_argmax = int(j);
        CHECK(fast_argmax == slow.argmax);
    }
}

TEST_CASE("alignment of an axis-aligned rectangle peaks at its edge orientations") {
    PhantomSpec spec;
    spec.nz = 1;
    spec.nx = 96;
    spec.ny = 96;
    spec.attenuation_scale = 0.01;
    Shape box;
    box.kind = Shape::Kind::Box;
    box.center = {0.0, 47.5, 47.5};
    box.size = {1.0, 26.0, 56.0};
    spec.shapes.push_back(box);
    const Volume v = generate_phantom(spec);

    const std::vector<double> candidates = degree_grid(1.0);
    const EdgeAlignmentResult table = edge_alignment_table(v, candidates, EdgeParams{});

    double max_f = 0.0;
    for (double f : table.f) max_f = std::max(max_f, f);
    CHECK(max_f == doctest::Approx(1.0));

    // first-maximum argmax lands on the long-side orientation; the short
    // sides carry a secondary peak at 90
    int argmax = 0;
    for (std::size_t j = 1; j < table.f.size(); ++j)
        if (table.f[j] > table.f[argmax]) argmax = int(j);
    CHECK(angular_distance_deg(candidates[argmax], 0.0) <= 2.0);

    double peak90 = 0.0, far_max = 0.0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (angular_distance_deg(candidates[j], 90.0) <= 2.0)
            peak90 = std::max(peak90, table.f[j]);
        if (angular_distance_deg(candidates[j], 0.0) > 15.0 &&
            angular_distance_deg(candidates[j], 90.0) > 15.0)
            far_max = std::max(far_max, table.f[j]);
    }
    CHECK(peak90 > far_max);
}

TEST_CASE("alignment of an empty volume is identically zero") {
    const Volume v(2, 48, 48);
    const std::vector<double> candidates = degree_grid(5.0);
    const EdgeAlignmentResult table = edge_alignment_table(v, candidates, EdgeParams{});
    for (double f : table.f) CHECK(f == 0.0);
}

TEST_CASE("a long diagonal line drives the argmax to its orientation") {
    // 44.6 rather than 45.0: slope-1 rasterizations are exactly collinear,
    // which makes f flat across the whole cone opening (an exact tie);
    // a slightly off-diagonal line has rasterization jitter and a real peak
    const int n = 96;
    Volume v(2, n, n);
    for (int iz = 0; iz < 2; ++iz) {
        std::vector<float> img(std::size_t(n) * n, 0.0f);
        draw_line(img, n, n, 47.5, 47.5, 44.6, 40.0, 0.01f);
        for (std::size_t i = 0; i < img.size(); ++i) v.slice(iz).data[i] = img[i];
    }
    const std::vector<double> candidates = degree_grid(1.0);
    const EdgeAlignmentResult table = edge_alignment_table(v, candidates, EdgeParams{});
    int argmax = 0;
    for (std::size_t j = 1; j < table.f.size(); ++j)
        if (table.f[j] > table.f[argmax]) argmax = int(j);
    CHECK(angular_distance_deg(candidates[argmax], 45.0) <= 2.0);
}

TEST_CASE("slice accumulators add across slices") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    EdgeMap a(48, 48), b(48, 48);
    for (std::size_t i = 0; i < a.v.size(); ++i) a.v[i] = unit(rng) < 0.05;
    for (std::size_t i = 0; i < b.v.size(); ++i) b.v[i] = unit(rng) < 0.05;
    std::vector<LineSegment> sa{{5, 5, 30, 18}};
    std::vector<LineSegment> sb{{40, 8, 12, 33}, {20, 40, 44, 44}};
    const std::vector<double> candidates = degree_grid(3.0);

    std::vector<EdgeMap> both{a, b};
    std::vector<std::vector<LineSegment>> both_segs{sa, sb};
    const auto combined = edge_alignment_from_features(both, both_segs, candidates, ConeParams{});

    std::vector<EdgeMap> only_a{a}, only_b{b};
    std::vector<std::vector<LineSegment>> only_sa{sa}, only_sb{sb};
    const auto ta = edge_alignment_from_features(only_a, only_sa, candidates, ConeParams{});
    const auto tb = edge_alignment_from_features(only_b, only_sb, candidates, ConeParams{});

    for (std::size_t j = 0; j < candidates.size(); ++j)
        CHECK(combined.raw[j] == ta.raw[j] + tb.raw[j]);
}

TEST_CASE("rotating the slices rotates the argmax by 90 degrees") {
    const int n = 80;
    Volume v(1, n, n);
    {
        std::vector<float> img(std::size_t(n) * n, 0.0f);
        draw_line(img, n, n, 39.5, 39.5, 25.0, 34.0, 0.01f);
        draw_line(img, n, n, 20.5, 57.5, 25.0, 16.0, 0.01f);
        for (std::size_t i = 0; i < img.size(); ++i) v.slice(0).data[i] = img[i];
    }
    const Volume vr = rotate_slices_ccw90(v);
    const std::vector<double> candidates = degree_grid(1.0);
    const auto t0 = edge_alignment_table(v, candidates, EdgeParams{});
    const auto t1 = edge_alignment_table(vr, candidates, EdgeParams{});

    auto argmax_angle = [&](const EdgeAlignmentResult& t) {
        int j = 0;
        for (std::size_t k = 1; k < t.f.size(); ++k)
            if (t.f[k] > t.f[j]) j = int(k);
        return candidates[j];
    };
    const double a0 = argmax_angle(t0);
    const double a1 = argmax_angle(t1);
    CHECK(angular_distance_deg(fold_angle_180(a0 + 90.0), a1) <= 2.0);
}

TEST_CASE("segment-gated mode concentrates on the segment orientation") {
    EdgeMap em(64, 64);
    std::vector<float> img(std::size_t(64) * 64, 0.0f);
    draw_line(img, 64, 64, 31.5, 31.5, 60.0, 25.0, 1.0f);
    for (std::size_t i = 0; i < img.size(); ++i) em.v[i] = img[i] != 0.0f;
    std::vector<EdgeMap> maps{em};
    std::vector<std::vector<LineSegment>> segs{{LineSegment{10.0, 19.1, 53.0, 43.9}}};
    const std::vector<double> candidates = degree_grid(1.0);
    const auto t = edge_alignment_from_features(maps, segs, candidates, ConeParams{10.0},
                                                AlignmentMode::SegmentGated);
    const double phi = segs[0][0].orientation_deg();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (angular_distance_deg(candidates[j], phi) > 10.0)
            CHECK(t.raw[j] == 0);
        else
            CHECK(t.raw[j] > 0);
    }
}
