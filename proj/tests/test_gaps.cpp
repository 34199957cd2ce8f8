#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tiletrack/engine.hpp"
#include "tiletrack/gaps.hpp"
#include "tiletrack/sim.hpp"

using namespace tiletrack;

namespace {

MissRateTensor tensor_for(const Scenario& sc, const GapSet& gaps, const std::string& tracker = "sort") {
    const auto factory = make_tracker_factory(tracker);
    const auto dets = reference_detections(sc);
    std::vector<int> frames;
    for (int f = 1; f <= sc.n_frames; ++f) frames.push_back(f);
    auto ref_tracker = factory();
    const auto reference = track_all(*ref_tracker, dets, frames);
    MissRateTensor t = measure_mistracks(reference, dets, gaps, sc.grid, factory);
    t.tracker = tracker;
    return t;
}

MissRateTensor synthetic_tensor(const std::vector<int>& gammas,
                                const std::vector<std::vector<long long>>& missed_flat, long long total) {
    MissRateTensor t;
    t.gaps.gammas = gammas;
    t.total = Grid2D<long long>(1, 1, total);
    for (const auto& m : missed_flat) t.missed.push_back(Grid2D<long long>(1, 1, m[0]));
    return t;
}

} // namespace

TEST_CASE("laplace smoothing") {
    // No observations: (0+1)/(0+2) = 1/2.
    const MissRateTensor empty = synthetic_tensor({1}, {{0}}, 0);
    CHECK(empty.rate(0, 0, 0) == doctest::Approx(0.5));
    // MissedA=2, TotalA=10 -> 3/12.
    const MissRateTensor some = synthetic_tensor({1}, {{2}}, 10);
    CHECK(some.rate(0, 0, 0) == doctest::Approx(0.25));
}

TEST_CASE("gap set validation") {
    GapSet bad;
    bad.gammas = {2, 4};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    GapSet unordered;
    unordered.gammas = {1, 4, 2};
    CHECK_THROWS_AS(unordered.validate(), std::invalid_argument);
    Scenario sc = presets::highway({});
    CHECK_THROWS_AS(measure_mistracks({}, {}, bad, sc.grid, make_tracker_factory("sort")),
                    std::invalid_argument);
}

TEST_CASE("derive rule: largest gamma within tolerance, defaulting to 1") {
    const MissRateTensor t = synthetic_tensor({1, 2, 4}, {{0}, {3}, {6}}, 8);
    // Rates: 1/10, 4/10, 7/10.
    CHECK(derive_gap_matrix(t, 0.4).gaps.at(0, 0) == 2);
    CHECK(derive_gap_matrix(t, 0.05).gaps.at(0, 0) == 1); // nothing qualifies
    CHECK(derive_gap_matrix(t, 1.0).gaps.at(0, 0) == 4);  // all rates < 1
    CHECK(derive_gap_matrix(t, 0.0).gaps.at(0, 0) == 1);  // rates strictly positive
}

TEST_CASE("sweep_tolerances is deterministic and monotone") {
    presets::PresetOptions opt;
    opt.seed = 31;
    opt.n_frames = 150;
    const Scenario sc = presets::intersection(opt);
    GapSet gaps;
    gaps.gammas = {1, 2, 4, 8, 16};
    const MissRateTensor tensor = tensor_for(sc, gaps);

    const auto matrices = sweep_tolerances(tensor, {0.4, 0.6, 0.8});
    REQUIRE(matrices.size() == 3);
    const auto dup = sweep_tolerances(tensor, {0.6, 0.6});
    CHECK(dup[0].gaps == dup[1].gaps);

    for (double t = 0.0; t <= 1.0; t += 0.05) {
        const GapMatrix lo = derive_gap_matrix(tensor, t);
        const GapMatrix hi = derive_gap_matrix(tensor, std::min(1.0, t + 0.05));
        for (int r = 0; r < lo.gaps.rows(); ++r)
            for (int c = 0; c < lo.gaps.cols(); ++c) CHECK(lo.gaps.at(r, c) <= hi.gaps.at(r, c));
    }
    CHECK(derive_gap_matrix(tensor, 1.0).gaps.data() ==
          std::vector<int>(static_cast<size_t>(sc.grid.rows) * sc.grid.cols, 16));
    CHECK(derive_gap_matrix(tensor, 0.0).gaps.data() ==
          std::vector<int>(static_cast<size_t>(sc.grid.rows) * sc.grid.cols, 1));
}

TEST_CASE("measured rates live strictly inside (0,1) and counts are consistent") {
    presets::PresetOptions opt;
    opt.seed = 5;
    opt.n_frames = 150;
    const Scenario sc = presets::intersection(opt);
    GapSet gaps;
    gaps.gammas = {1, 2, 4, 8};
    const MissRateTensor tensor = tensor_for(sc, gaps);

    for (size_t gi = 0; gi < gaps.gammas.size(); ++gi)
        for (int r = 0; r < sc.grid.rows; ++r)
            for (int c = 0; c < sc.grid.cols; ++c) {
                const double rate = tensor.rate(static_cast<int>(gi), r, c);
                CHECK(rate > 0.0);
                CHECK(rate < 1.0);
                CHECK(tensor.missed[gi].at(r, c) >= 0);
                CHECK(tensor.missed[gi].at(r, c) <= tensor.total.at(r, c));
            }
}

TEST_CASE("gap 1 measures the tracker against itself: zero misses") {
    presets::PresetOptions opt;
    opt.seed = 77;
    opt.n_frames = 120;
    const Scenario sc = presets::intersection(opt);
    GapSet gaps;
    gaps.gammas = {1, 2};
    const MissRateTensor tensor = tensor_for(sc, gaps);
    for (long long v : tensor.missed[0].data()) CHECK(v == 0);
}

TEST_CASE("constant-velocity traffic survives moderate gaps") {
    presets::PresetOptions opt;
    opt.seed = 13;
    opt.n_frames = 150;
    const Scenario sc = presets::highway(opt);
    GapSet gaps;
    gaps.gammas = {1, 2, 4};
    const MissRateTensor tensor = tensor_for(sc, gaps);
    long long missed = 0;
    for (size_t gi = 0; gi < gaps.gammas.size(); ++gi)
        for (long long v : tensor.missed[gi].data()) missed += v;
    CHECK(missed == 0);
}

TEST_CASE("stop-and-go approaches mistrack more than steady exits at gamma 4") {
    presets::PresetOptions opt;
    opt.seed = 2;
    opt.n_frames = 240;
    const Scenario sc = presets::intersection(opt);
    GapSet gaps;
    gaps.gammas = {1, 2, 4};
    const MissRateTensor tensor = tensor_for(sc, gaps);
    const auto regions = presets::intersection_regions(sc.grid);
    REQUIRE_FALSE(regions.approach.empty());
    REQUIRE_FALSE(regions.exit.empty());

    const int gi = 2; // gamma = 4
    double approach = 0, exit = 0;
    for (const TilePos& t : regions.approach) approach += tensor.rate(gi, t.row, t.col);
    for (const TilePos& t : regions.exit) exit += tensor.rate(gi, t.row, t.col);
    approach /= static_cast<double>(regions.approach.size());
    exit /= static_cast<double>(regions.exit.size());
    CHECK(approach > exit);
}

TEST_CASE("tensor and gap matrix json round trip") {
    presets::PresetOptions opt;
    opt.seed = 4;
    opt.n_frames = 60;
    const Scenario sc = presets::highway(opt);
    GapSet gaps;
    gaps.gammas = {1, 2, 4};
    const MissRateTensor tensor = tensor_for(sc, gaps);

    const std::string path = "test_tensor_tmp.json";
    save_tensor(tensor, path);
    const MissRateTensor loaded = load_tensor(path);
    CHECK(loaded.gaps.gammas == tensor.gaps.gammas);
    CHECK(loaded.total == tensor.total);
    REQUIRE(loaded.missed.size() == tensor.missed.size());
    for (size_t i = 0; i < tensor.missed.size(); ++i) CHECK(loaded.missed[i] == tensor.missed[i]);
    std::remove(path.c_str());

    const GapMatrix m = derive_gap_matrix(tensor, 0.6);
    const std::string gpath = "test_gaps_tmp.json";
    save_gap_matrix(m, gpath);
    const GapMatrix gm = load_gap_matrix(gpath);
    CHECK(gm.gaps == m.gaps);
    CHECK(gm.tolerance == m.tolerance);
    std::remove(gpath.c_str());
}
