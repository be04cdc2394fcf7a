#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "adaptct/phantom.hpp"
#include "adaptct/selection.hpp"

using namespace adaptct;

TEST_CASE("angular distance handles wraparound") {
    CHECK(angular_distance_deg(10.0, 170.0) == doctest::Approx(20.0));
    CHECK(angular_distance_deg(45.0, 45.0) == 0.0);
    CHECK(angular_distance_deg(0.0, 90.0) == doctest::Approx(90.0));
    // symmetry
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> a(0.0, 180.0);
    for (int i = 0; i < 50; ++i) {
        const double x = a(rng), y = a(rng);
        CHECK(angular_distance_deg(x, y) == angular_distance_deg(y, x));
        CHECK(angular_distance_deg(x, y) <= 90.0);
    }
}

TEST_CASE("angle spacing matches hand-evaluated values") {
    const std::vector<double> selected{90.0};
    CHECK(angle_spacing_unnormalized(0.0, selected, 1.0) ==
          doctest::Approx(std::exp(-1.0 / 90.0)).epsilon(1e-12));
    CHECK(angle_spacing_unnormalized(45.0, selected, 1.0) ==
          doctest::Approx(std::exp(-1.0 / 45.0)).epsilon(1e-12));
    CHECK(angle_spacing_unnormalized(89.0, selected, 1.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    // ordering before normalization
    CHECK(angle_spacing_unnormalized(0.0, selected, 1.0) >
          angle_spacing_unnormalized(45.0, selected, 1.0));
    CHECK(angle_spacing_unnormalized(45.0, selected, 1.0) >
          angle_spacing_unnormalized(89.0, selected, 1.0));

    const std::vector<double> candidates{0.0, 45.0, 89.0};
    const AngleSpacingResult t = angle_spacing_table(candidates, selected, 1.0);
    CHECK(t.h[0] == doctest::Approx(1.0)); // farthest candidate normalizes to 1
    CHECK(t.h[1] < 1.0);
    CHECK(t.h[2] < t.h[1]);
}

TEST_CASE("candidates coinciding with a selected angle score zero") {
    const std::vector<double> selected{30.0, 100.0};
    CHECK(angle_spacing_unnormalized(30.0, selected, 1.0) == 0.0);
    const std::vector<double> candidates{30.0, 70.0};
    const AngleSpacingResult t = angle_spacing_table(candidates, selected, 1.0);
    CHECK(t.h[0] == 0.0);
    CHECK(t.h[1] == doctest::Approx(1.0));
}

TEST_CASE("angle spacing is symmetric across the wraparound") {
    const std::vector<double> selected{0.0};
    const double a = angle_spacing_unnormalized(10.0, selected, 1.0);
    const double b = angle_spacing_unnormalized(170.0, selected, 1.0);
    CHECK(a == b);
}

TEST_CASE("spacing dips near each of four selected angles and is flat far away") {
    const std::vector<double> selected{20.0, 65.0, 110.0, 155.0};
    std::vector<double> grid;
    for (double a = 0.0; a < 180.0 - 1e-9; a += 0.5) grid.push_back(a);
    const AngleSpacingResult t = angle_spacing_table(grid, selected, 1.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double dmin = 90.0;
        for (double s : selected) dmin = std::min(dmin, angular_distance_deg(grid[j], s));
        if (dmin >= 15.0) CHECK(t.h[j] >= 0.9);
        if (dmin <= 0.5) CHECK(t.h[j] < 0.2);
    }
}

TEST_CASE("monotone repulsion: growing the selected set never raises h") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> a(0.0, 180.0);
    std::vector<double> selected{a(rng), a(rng)};
    std::vector<double> candidates;
    for (int i = 0; i < 40; ++i) candidates.push_back(a(rng));
    for (int round = 0; round < 5; ++round) {
        std::vector<double> grown = selected;
        grown.push_back(a(rng));
        for (double c : candidates)
            CHECK(angle_spacing_unnormalized(c, grown, 1.0) <=
                  angle_spacing_unnormalized(c, selected, 1.0));
        selected = grown;
    }
}

TEST_CASE("AngleState tracks the remaining candidate grid") {
    AngleState state(45.0); // grid {0, 45, 90, 135}
    CHECK(state.grid_size() == 4);
    state.select(90.0);
    state.select(17.3); // off-grid: remembered, grid untouched
    const std::vector<double> rem = state.remaining();
    CHECK(rem == std::vector<double>{0.0, 45.0, 135.0});
    CHECK(state.is_selected_grid_angle(90.0));
    CHECK(!state.is_selected_grid_angle(45.0));
    CHECK_THROWS_AS(state.select(90.0), InvalidInputError);
    CHECK_THROWS_AS(state.select(190.0), InvalidInputError);
}

TEST_CASE("featureless reconstruction falls back to the spacing argmax") {
    const Volume flat(1, 48, 48); // all zero: no edges, f == 0
    AngleState state(1.0);
    for (double a : {0.0, 60.0, 120.0}) state.select(a);
    const SelectionResult sel = select_next_angle(flat, state, 1.0, 1.0, EdgeParams{});
    for (const ScoreRow& row : sel.table.rows) CHECK(row.f == 0.0);
    // maximally spaced: far from every selected angle
    for (double s : state.selected())
        CHECK(angular_distance_deg(sel.angle_deg, s) >= 25.0);
}

TEST_CASE("with gamma 0 a single dominant edge orientation is selected") {
    PhantomSpec spec;
    spec.nz = 2;
    spec.nx = 96;
    spec.ny = 96;
    spec.attenuation_scale = 0.01;
    Shape box;
    box.kind = Shape::Kind::Box;
    box.center = {0.5, 47.5, 47.5};
    box.size = {2.0, 6.0, 62.0};
    box.rot_z_deg = -30.0; // long edges at orientation 30
    spec.shapes.push_back(box);
    const Volume v = generate_phantom(spec);

    AngleState state(1.0);
    state.select(90.0);
    const SelectionResult sel = select_next_angle(v, state, 0.0, 1.0, EdgeParams{});
    CHECK(angular_distance_deg(sel.angle_deg, 30.0) <= 2.0);
}

TEST_CASE("a large gamma steers the choice into the unmeasured hole") {
    const Volume flat(1, 32, 32);
    AngleState state(1.0);
    for (int a = 0; a < 180; ++a)
        if (a < 70 || a > 110) state.select(double(a));
    const SelectionResult sel = select_next_angle(flat, state, 25.0, 1.0, EdgeParams{});
    CHECK(sel.angle_deg > 70.0);
    CHECK(sel.angle_deg < 110.0);
    // the selected angle is never an element of the measured set
    for (double s : state.selected()) CHECK(sel.angle_deg != s);
}

TEST_CASE("selection is deterministic") {
    PhantomSpec spec;
    spec.nz = 1;
    spec.nx = 64;
    spec.ny = 64;
    spec.attenuation_scale = 0.01;
    Shape box;
    box.kind = Shape::Kind::Box;
    box.center = {0.0, 31.5, 31.5};
    box.size = {1.0, 20.0, 40.0};
    box.rot_z_deg = 10.0;
    spec.shapes.push_back(box);
    const Volume v = generate_phantom(spec);
    AngleState state(1.0);
    for (double a : {0.0, 60.0, 120.0}) state.select(a);
    const SelectionResult s1 = select_next_angle(v, state, 1.0, 1.0, EdgeParams{});
    const SelectionResult s2 = select_next_angle(v, state, 1.0, 1.0, EdgeParams{});
    CHECK(s1.angle_deg == s2.angle_deg);
    REQUIRE(s1.table.rows.size() == s2.table.rows.size());
    for (std::size_t j = 0; j < s1.table.rows.size(); ++j) {
        CHECK(s1.table.rows[j].f == s2.table.rows[j].f);
        CHECK(s1.table.rows[j].h == s2.table.rows[j].h);
        CHECK(s1.table.rows[j].total == s1.table.rows[j].f + 1.0 * s1.table.rows[j].h);
    }
}

TEST_CASE("argmax is invariant under a shared positive rescaling") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> f(37), h(37);
        for (std::size_t j = 0; j < f.size(); ++j) {
            f[j] = unit(rng);
            h[j] = unit(rng);
        }
        const double gamma = 1.7, c = 0.01 + 5.0 * unit(rng);
        int best = 0, best_scaled = 0;
        for (std::size_t j = 1; j < f.size(); ++j) {
            if (f[j] + gamma * h[j] > f[best] + gamma * h[best]) best = int(j);
            if (c * f[j] + gamma * (c * h[j]) > c * f[best_scaled] + gamma * (c * h[best_scaled]))
                best_scaled = int(j);
        }
        CHECK(best == best_scaled);
    }
}

TEST_CASE("exhausted candidates raise") {
    const Volume flat(1, 16, 16);
    AngleState state(60.0); // grid {0, 60, 120}
    for (double a : {0.0, 60.0, 120.0}) state.select(a);
    CHECK_THROWS_AS(select_next_angle(flat, state, 1.0, 1.0, EdgeParams{}),
                    ExhaustedCandidatesError);
}

TEST_CASE("golden ratio angles match the closed form and stay distinct") {
    CHECK(golden_ratio_angle(0) == 0.0);
    CHECK(golden_ratio_angle(1) == doctest::Approx(111.2461179749811).epsilon(1e-12));

    constexpr double phi = 1.6180339887498948482;
    std::set<long long> rounded;
    for (int n = 0; n < 100; ++n) {
        const double g = golden_ratio_angle(n);
        CHECK(g >= 0.0);
        CHECK(g < 180.0);
        CHECK(std::fabs(g - std::fmod(n * 180.0 / phi, 180.0)) <= 1e-9);
        rounded.insert(std::llround(g * 1000.0));
    }
    CHECK(rounded.size() == 100); // no collisions on a 0.001 degree grid
}
