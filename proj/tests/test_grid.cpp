#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tiletrack/grid.hpp"
#include "tiletrack/io.hpp"

using namespace tiletrack;

TEST_CASE("build_grid divides frames exactly") {
    const TileGrid g = build_grid(120, 80, 20);
    CHECK(g.cols == 6);
    CHECK(g.rows == 4);

    const TileGrid g2 = build_grid(128, 96, 16);
    CHECK(g2.cols == 8);
    CHECK(g2.rows == 6);

    CHECK_THROWS_AS(build_grid(100, 80, 30), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0, 80, 16), std::invalid_argument);
}

static ScoreMatrix scores_from(const std::vector<std::vector<double>>& rows) {
    ScoreMatrix m;
    m.scores = Grid2D<double>(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c)
            m.scores.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    return m;
}

TEST_CASE("threshold is inclusive") {
    const RelevanceMask all = threshold_scores(scores_from({{0.5, 0.5}, {0.5, 0.5}}), 0.5);
    CHECK(all.count() == 4);

    const RelevanceMask none = threshold_scores(scores_from({{0.0, 0.0}}), 0.25);
    CHECK(none.count() == 0);

    const RelevanceMask mixed = threshold_scores(scores_from({{0.2, 0.3, 0.8}}), 0.25);
    CHECK(mixed.relevant.at(0, 0) == 0);
    CHECK(mixed.relevant.at(0, 1) == 1);
    CHECK(mixed.relevant.at(0, 2) == 1);
}

TEST_CASE("raising the threshold never adds a relevant tile") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0, 1);
    for (int iter = 0; iter < 50; ++iter) {
        ScoreMatrix m;
        m.scores = Grid2D<double>(4, 5);
        for (double& v : m.scores.data()) v = uni(rng);
        const double t1 = uni(rng), t2 = uni(rng);
        const RelevanceMask lo = threshold_scores(m, std::min(t1, t2));
        const RelevanceMask hi = threshold_scores(m, std::max(t1, t2));
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 5; ++c)
                if (hi.relevant.at(r, c)) CHECK(lo.relevant.at(r, c));
    }
}

static RelevanceMask mask_from(int rows, int cols, const std::vector<TilePos>& on) {
    RelevanceMask m;
    m.relevant = Grid2D<uint8_t>(rows, cols, 0);
    for (const TilePos& t : on) m.relevant.at(t) = 1;
    return m;
}

TEST_CASE("corner-touching tiles stay separate") {
    const auto polys = extract_polyominoes(mask_from(3, 3, {{0, 0}, {1, 1}}));
    REQUIRE(polys.size() == 2);
    CHECK(polys[0].size() == 1);
    CHECK(polys[1].size() == 1);
}

TEST_CASE("full mask yields one polyomino") {
    RelevanceMask m;
    m.relevant = Grid2D<uint8_t>(4, 6, 1);
    const auto polys = extract_polyominoes(m);
    REQUIRE(polys.size() == 1);
    CHECK(polys[0].size() == 24);
}

TEST_CASE("L-shape plus isolated tile") {
    const auto polys = extract_polyominoes(mask_from(4, 4, {{0, 0}, {1, 0}, {1, 1}, {3, 3}}));
    REQUIRE(polys.size() == 2);
    CHECK(polys[0].size() == 3);
    CHECK(polys[0].anchor == TilePos{0, 0});
    CHECK(polys[1].size() == 1);
    CHECK(polys[1].anchor == TilePos{3, 3});
}

TEST_CASE("empty mask yields empty list") {
    CHECK(extract_polyominoes(mask_from(3, 3, {})).empty());
}

TEST_CASE("extraction partitions the relevant set, maximally and deterministically") {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 100; ++iter) {
        RelevanceMask m;
        m.relevant = Grid2D<uint8_t>(6, 8, 0);
        for (uint8_t& v : m.relevant.data()) v = rng() % 3 == 0 ? 1 : 0;

        const auto polys = extract_polyominoes(m);
        const auto again = extract_polyominoes(m);
        REQUIRE(polys.size() == again.size());
        for (size_t i = 0; i < polys.size(); ++i) CHECK(polys[i].tiles == again[i].tiles);

        Grid2D<int> owner(6, 8, -1);
        int covered = 0;
        for (size_t i = 0; i < polys.size(); ++i) {
            for (const TilePos& t : polys[i].tiles) {
                CHECK(m.relevant.at(t));
                CHECK(owner.at(t) == -1); // pairwise disjoint
                owner.at(t) = static_cast<int>(i);
                ++covered;
            }
        }
        CHECK(covered == m.count()); // partition

        // Maximality: no two polyominoes touch edge-to-edge.
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 8; ++c) {
                if (owner.at(r, c) < 0) continue;
                if (r + 1 < 6 && owner.at(r + 1, c) >= 0) CHECK(owner.at(r, c) == owner.at(r + 1, c));
                if (c + 1 < 8 && owner.at(r, c + 1) >= 0) CHECK(owner.at(r, c) == owner.at(r, c + 1));
            }
    }
}

TEST_CASE("make_polyomino validates connectivity") {
    CHECK_THROWS_AS(make_polyomino(1, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_polyomino(1, {{0, 0}, {2, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(make_polyomino(1, {{0, 0}, {0, 0}}), std::invalid_argument);
    CHECK_NOTHROW(make_polyomino(1, {{0, 0}, {0, 1}, {1, 1}}));
}

TEST_CASE("padding modes") {
    const TileGrid grid = build_grid(128, 96, 16);

    const Polyomino p = make_polyomino(1, {{1, 1}});
    const PaddedPolyomino none = pad_polyomino(p, PaddingMode::none, grid);
    CHECK(none.occupancy == p.tiles);

    const Polyomino corner = make_polyomino(1, {{0, 0}});
    const PaddedPolyomino clipped = pad_polyomino(corner, PaddingMode::half_top_left, grid);
    CHECK(clipped.occupancy == corner.tiles); // margin swallowed by the frame edge

    const PaddedPolyomino full = pad_polyomino(p, PaddingMode::full, grid);
    CHECK(full.occ_rows() == 3);
    CHECK(full.occ_cols() == 3);
    CHECK(full.occ_min == TilePos{0, 0});
    CHECK(full.occupancy.size() == 9);
}

TEST_CASE("padding occupancy contains the original tiles") {
    const TileGrid grid = build_grid(128, 96, 16);
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 50; ++iter) {
        RelevanceMask m;
        m.relevant = Grid2D<uint8_t>(grid.rows, grid.cols, 0);
        for (uint8_t& v : m.relevant.data()) v = rng() % 4 == 0 ? 1 : 0;
        for (const Polyomino& p : extract_polyominoes(m)) {
            for (PaddingMode mode : {PaddingMode::none, PaddingMode::half_top_left,
                                     PaddingMode::half_bottom_right, PaddingMode::full}) {
                const PaddedPolyomino padded = pad_polyomino(p, mode, grid);
                for (const TilePos& t : p.tiles)
                    CHECK(std::binary_search(padded.occupancy.begin(), padded.occupancy.end(), t));
                CHECK(padded.occ_rows() <= grid.rows);
                CHECK(padded.occ_cols() <= grid.cols);
            }
        }
    }
}

TEST_CASE("polyomino and mask json round trip") {
    const Polyomino p = make_polyomino(4, {{1, 2}, {1, 3}, {2, 2}});
    const nlohmann::json j = polyomino_to_json(p);
    CHECK(j.at("tiles").size() == 3);
    CHECK(j.at("tiles").at(0) == nlohmann::json({1, 2})); // row-major order
    const Polyomino back = polyomino_from_json(j);
    CHECK(back.frame == 4);
    CHECK(back.tiles == p.tiles);

    const RelevanceMask mask = mask_from_json(mask_to_json(threshold_scores(
        ScoreMatrix{2, Grid2D<double>(3, 4, 0.7)}, 0.5)));
    CHECK(mask.frame == 2);
    CHECK(mask.count() == 12);
}

TEST_CASE("window overhead") {
    CHECK(window_overhead(make_polyomino(1, {{0, 0}, {0, 1}, {1, 0}, {1, 1}})) == 0.0);
    CHECK(window_overhead(make_polyomino(1, {{0, 0}, {1, 0}, {1, 1}})) == doctest::Approx(1.0 / 3.0));
    CHECK(window_overhead(make_polyomino(1, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}})) ==
          doctest::Approx((9.0 - 5.0) / 5.0));
}
