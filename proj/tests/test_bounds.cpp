#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gifc/bounds.hpp"

using namespace gifc;

TEST_CASE("zero secondary power collapses both bounds to zero") {
    const TrellisCode bpsk = make_uncoded_bpsk();
    const GifcParams params{std::sqrt(1.5), std::sqrt(1.5), 6.0, 0.0};
    const BoundsPoint p = compute_bounds_point(bpsk, params, 60'000, NoiseSource(21, 0));
    CHECK(std::abs(p.c_u_iud) <= 3.0 * p.se_u);
    CHECK(std::abs(p.c_l_iud) <= 3.0 * p.se_l);
}

TEST_CASE("lower bound never exceeds upper bound by construction") {
    const TrellisCode rep = make_code_by_id("rep-2-1-2");
    const GifcParams params{std::sqrt(1.5), std::sqrt(0.5), 6.0, 2.0};
    const BoundsPoint p = compute_bounds_point(rep, params, 60'000, NoiseSource(22, 0));
    CHECK(p.c_u_iud == p.i_x2_y2);
    CHECK(p.c_l_iud == std::min(p.i_x2_y1, p.i_x2_y2));
    CHECK(p.c_l_iud <= p.c_u_iud);
}

TEST_CASE("strong cross interference makes the bounds coincide") {
    // a12^2 = 0.5, a21^2 = 1.5: the link to the primary receiver is the
    // better one, so min{I(X2;Y1), I(X2;Y2)} lands on I(X2;Y2).
    const TrellisCode bpsk = make_uncoded_bpsk();
    const GifcParams params{std::sqrt(0.5), std::sqrt(1.5), 6.0, 2.0};
    const BoundsPoint p = compute_bounds_point(bpsk, params, 150'000, NoiseSource(23, 0));
    const double combined = std::sqrt(p.se_u * p.se_u + p.se_l * p.se_l);
    CHECK(std::abs(p.c_u_iud - p.c_l_iud) <= 3.0 * combined);
}

TEST_CASE("sweep produces one deterministic point per grid value") {
    const TrellisCode bpsk = make_uncoded_bpsk();
    const std::vector<double> grid = {0.5, 2.0};
    const auto points =
        sweep_p2(bpsk, std::sqrt(1.5), std::sqrt(1.5), 6.0, grid, 40'000, 7, 2);
    REQUIRE(points.size() == 2);
    CHECK(points[0].p2 == 0.5);
    CHECK(points[1].p2 == 2.0);

    // Same seed, serial execution: identical values.
    const auto again =
        sweep_p2(bpsk, std::sqrt(1.5), std::sqrt(1.5), 6.0, grid, 40'000, 7, 1);
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(points[i].c_u_iud == again[i].c_u_iud);
        CHECK(points[i].c_l_iud == again[i].c_l_iud);
        CHECK(points[i].i_x2_y1 == again[i].i_x2_y1);
        CHECK(points[i].i_x2_y2 == again[i].i_x2_y2);
    }

    // Each grid index owns its stream, so a sweep point equals the directly
    // computed point with that stream.
    const GifcParams params{std::sqrt(1.5), std::sqrt(1.5), 6.0, 2.0};
    const BoundsPoint direct = compute_bounds_point(bpsk, params, 40'000, NoiseSource(7, 1));
    CHECK(points[1].c_u_iud == direct.c_u_iud);
    CHECK(points[1].c_l_iud == direct.c_l_iud);
}

TEST_CASE("sweep rejects bad grids") {
    const TrellisCode bpsk = make_uncoded_bpsk();
    CHECK_THROWS_AS(sweep_p2(bpsk, 1.0, 1.0, 6.0, {}, 1000, 7), std::invalid_argument);
    CHECK_THROWS_AS(sweep_p2(bpsk, 1.0, 1.0, 6.0, {-1.0}, 1000, 7), std::invalid_argument);
}

TEST_CASE("single-code single-point comparison equals the direct computation") {
    const TrellisCode bpsk = make_uncoded_bpsk();
    const GifcParams params{std::sqrt(1.5), std::sqrt(1.5), 6.0, 0.0};
    const auto rows = compare_codes({bpsk}, params, {2.0}, 40'000, 7, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].code_id == "uncoded-bpsk");

    const GifcParams at2{params.a12, params.a21, params.p1, 2.0};
    const BoundsPoint direct = compute_bounds_point(bpsk, at2, 40'000, NoiseSource(7, 0));
    CHECK(rows[0].point.c_u_iud == direct.c_u_iud);
    CHECK(rows[0].point.c_l_iud == direct.c_l_iud);
    CHECK(rows[0].point.i_x2_y1 == direct.i_x2_y1);
    CHECK(rows[0].point.i_x2_y2 == direct.i_x2_y2);
}

TEST_CASE("reported rates stay inside the admissible band") {
    const TrellisCode cc = make_code_by_id("cc-2-1-2");
    const GifcParams params{1.0, 1.0, 6.0, 1.5};
    const BoundsPoint p = compute_bounds_point(cc, params, 60'000, NoiseSource(24, 0));
    const double cap = std::log2(4.0) / 2.0;  // log2 |X2| / n
    for (double v : {p.c_u_iud, p.c_l_iud, p.i_x2_y1, p.i_x2_y2}) {
        CHECK(v >= -3.0 * std::max({p.se_u, p.se_l, p.se_i_y1, p.se_i_y2}));
        CHECK(v <= cap + 3.0 * std::max({p.se_u, p.se_l, p.se_i_y1, p.se_i_y2}));
    }
}

TEST_CASE("default grid spans the non-monotonic region") {
    const auto& grid = default_p2_grid();
    REQUIRE(grid.size() == 10);
    CHECK(grid.front() == 0.25);
    CHECK(grid.back() == 10.0);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}
