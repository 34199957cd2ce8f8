// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria pin their tolerances in code; several use independent
// oracles (exhaustive enumeration, a straight-line packing interpreter,
// hand-computed scores).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "tiletrack/eval.hpp"
#include "tiletrack/io.hpp"
#include "tiletrack/parallel.hpp"

using namespace tiletrack;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
    std::string name;
    std::function<void(std::ostringstream&)> body;
};

void run_criterion(int number, const Criterion& criterion) {
    std::ostringstream detail;
    const auto start = Clock::now();
    bool ok = true;
    std::string error;
    try {
        criterion.body(detail);
    } catch (const std::exception& e) {
        ok = false;
        error = e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("[%s] %02d %-36s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number, criterion.name.c_str(),
                secs, detail.str().empty() ? "" : (" " + detail.str()).c_str(),
                error.empty() ? "" : (" -- " + error).c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void require(bool cond, const std::string& message) {
    if (!cond) throw std::runtime_error(message);
}

// --- shared helpers ---------------------------------------------------------

MissRateTensor learn_tensor(const Scenario& sc, const GapSet& gaps, const std::string& tracker) {
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

PruneInstance random_prune_instance(std::mt19937_64& rng) {
    const int gap_choices[3] = {1, 2, 4};
    for (;;) {
        const int n_frames = 1 + static_cast<int>(rng() % 6);
        PruneInstance inst;
        inst.f_start = 1;
        inst.f_end = n_frames;
        inst.frames.resize(n_frames);
        inst.gaps = Grid2D<int>(4, 4, 1);
        inst.last_covered = Grid2D<int>(4, 4, 0);
        for (int& g : inst.gaps.data()) g = gap_choices[rng() % 3];
        for (int t = 0; t < n_frames; ++t) {
            RelevanceMask mask;
            mask.relevant = Grid2D<uint8_t>(4, 4, 0);
            for (uint8_t& v : mask.relevant.data()) v = rng() % 4 == 0 ? 1 : 0;
            mask.frame = 1 + t;
            inst.frames[t] = extract_polyominoes(mask);
        }
        if (inst.n_variables() <= 12) return inst;
    }
}

// Straight-line interpreter of the first-fit-descending packing pseudocode;
// independent of the production packer.
struct InterpreterPlacement {
    int canvas, frame, index, row, col;
    bool operator==(const InterpreterPlacement&) const = default;
};

std::vector<InterpreterPlacement> interpret_pack(std::vector<PaddedPolyomino> polys, int h, int w) {
    std::stable_sort(polys.begin(), polys.end(), [](const PaddedPolyomino& a, const PaddedPolyomino& b) {
        if (a.occ_size() != b.occ_size()) return a.occ_size() > b.occ_size();
        if (a.base.frame != b.base.frame) return a.base.frame < b.base.frame;
        return a.base.index < b.base.index;
    });
    std::vector<std::vector<std::vector<bool>>> canvases;
    std::vector<InterpreterPlacement> out;
    for (const PaddedPolyomino& p : polys) {
        int ci = -1, pi = 0, pj = 0;
        for (size_t c = 0; c < canvases.size() && ci < 0; ++c)
            for (int i = 0; i + p.occ_rows() <= h && ci < 0; ++i)
                for (int j = 0; j + p.occ_cols() <= w && ci < 0; ++j) {
                    bool ok = true;
                    for (const TilePos& t : p.occupancy)
                        if (canvases[c][i + t.row - p.occ_min.row][j + t.col - p.occ_min.col]) {
                            ok = false;
                            break;
                        }
                    if (ok) {
                        ci = static_cast<int>(c);
                        pi = i;
                        pj = j;
                    }
                }
        if (ci < 0) {
            canvases.emplace_back(h, std::vector<bool>(w, false));
            ci = static_cast<int>(canvases.size()) - 1;
            pi = pj = 0;
        }
        for (const TilePos& t : p.occupancy)
            canvases[ci][pi + t.row - p.occ_min.row][pj + t.col - p.occ_min.col] = true;
        out.push_back({ci, p.base.frame, p.base.index, pi, pj});
    }
    return out;
}

Scenario random_scene(std::mt19937_64& rng, int n_frames) {
    Scenario sc;
    sc.seed = rng();
    sc.grid = build_grid(128, 96, 16);
    sc.n_frames = n_frames;
    const int n_objects = 2 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n_objects; ++i) {
        ObjectSpec obj;
        obj.id = i + 1;
        obj.w = 8 + static_cast<int>(rng() % 13);
        obj.h = 8 + static_cast<int>(rng() % 9);
        const int n_waypoints = 3 + static_cast<int>(rng() % 3);
        int f = 1 + static_cast<int>(rng() % 5);
        for (int k = 0; k < n_waypoints && f <= n_frames; ++k) {
            const double x = 1 + static_cast<double>(rng() % (sc.grid.frame_w - obj.w - 2));
            const double y = 1 + static_cast<double>(rng() % (sc.grid.frame_h - obj.h - 2));
            obj.waypoints.push_back({f, x, y});
            f += 5 + static_cast<int>(rng() % 10);
        }
        if (obj.waypoints.size() >= 2) sc.objects.push_back(std::move(obj));
    }
    sc.validate();
    return sc;
}

Config degenerate_config() {
    Config cfg;
    cfg.sampling_rate = 1;
    cfg.relevance_threshold = 0.0;
    cfg.padding = PaddingMode::none;
    cfg.scorer = Scorer::oracle;
    return cfg;
}

// --- criteria ---------------------------------------------------------------

void criterion_prune_1d_golden(std::ostringstream& detail) {
    const PruneInstance inst = load_instance(std::string(FIXTURES_DIR) + "/prune_1d_example.json");
    require(inst.total_tiles() == 27, "fixture must total 27 tiles");
    const PruneSolution exact = solve_exact(inst);
    require(exact.optimal, "solver must prove optimality");
    require(exact.objective == 21, "exact objective must be 21, got " + std::to_string(exact.objective));
    require(selection_feasible(inst, exact.selected), "solution must satisfy every constraint");
    const PruneSolution brute = solve_bruteforce(inst);
    require(brute.objective == 21, "exhaustive optimum must be 21");
    detail << "objective 21/27, exhaustive-confirmed";
}

void criterion_prune_oracle_equivalence(std::ostringstream& detail) {
    std::mt19937_64 rng(20240601);
    const int instances = 200;
    for (int i = 0; i < instances; ++i) {
        const PruneInstance inst = random_prune_instance(rng);
        const PruneSolution exact = solve_exact(inst);
        const PruneSolution brute = solve_bruteforce(inst);
        require(exact.optimal, "instance " + std::to_string(i) + ": solver gave up");
        require(exact.objective == brute.objective,
                "instance " + std::to_string(i) + ": exact " + std::to_string(exact.objective) +
                    " != brute " + std::to_string(brute.objective));
        require(selection_feasible(inst, exact.selected),
                "instance " + std::to_string(i) + ": infeasible selection");
    }
    detail << instances << " instances, objectives equal";
}

void criterion_pack_fidelity(std::ostringstream& detail) {
    const TileGrid grid = build_grid(128, 96, 16);
    std::mt19937_64 rng(77001);
    const int trials = 500;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<PaddedPolyomino> polys;
        const int n_frames = 1 + static_cast<int>(rng() % 8);
        for (int f = 1; f <= n_frames; ++f) {
            RelevanceMask mask;
            mask.frame = f;
            mask.relevant = Grid2D<uint8_t>(grid.rows, grid.cols, 0);
            for (uint8_t& v : mask.relevant.data()) v = rng() % 3 == 0 ? 1 : 0;
            for (const Polyomino& p : extract_polyominoes(mask))
                polys.push_back(pad_polyomino(p, PaddingMode::none, grid));
        }
        const auto canvases = pack(polys, grid.rows, grid.cols);
        std::vector<InterpreterPlacement> got;
        for (const Canvas& c : canvases)
            for (const Placement& pl : c.placements)
                got.push_back({c.id, pl.poly.base.frame, pl.poly.base.index, pl.offset_row, pl.offset_col});
        const auto want_rows = interpret_pack(polys, grid.rows, grid.cols);
        std::vector<InterpreterPlacement> want;
        for (int ci = 0; ci < static_cast<int>(canvases.size()); ++ci)
            for (const InterpreterPlacement& p : want_rows)
                if (p.canvas == ci) want.push_back(p);
        require(got == want, "trial " + std::to_string(trial) + ": placements differ from interpreter");
        require(got.size() == polys.size(), "every polyomino must be placed exactly once");
        for (const Canvas& c : canvases) {
            int cells = 0;
            for (const Placement& pl : c.placements) cells += pl.poly.occ_size();
            require(cells == c.occupied_tiles(), "placements overlap");
        }
    }
    // Unit-tile law on assorted canvas shapes.
    std::mt19937_64 rng2(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int h = 1 + static_cast<int>(rng2() % 6);
        const int w = 1 + static_cast<int>(rng2() % 8);
        const int n = 1 + static_cast<int>(rng2() % 60);
        std::vector<PaddedPolyomino> units;
        for (int i = 0; i < n; ++i)
            units.push_back(pad_polyomino(make_polyomino(1, {{0, 0}}, i), PaddingMode::none, grid));
        require(static_cast<int>(pack(units, h, w).size()) == (n + h * w - 1) / (h * w),
                "unit tiles must fill exactly ceil(n/(h*w)) canvases");
    }
    detail << trials << " multisets bit-identical";
}

void criterion_degenerate_equivalence(std::ostringstream& detail) {
    for (const char* preset : {"highway", "intersection", "sparse"}) {
        presets::PresetOptions opt;
        opt.seed = 2024;
        opt.n_frames = 150;
        const Scenario sc = presets::by_name(preset, opt);
        const std::string ref = tracks_to_csv(reference_run(sc, "sort").tracks);
        const std::string eng = tracks_to_csv(run(sc, degenerate_config()).tracks);
        require(ref == eng, std::string(preset) + ": track CSV differs from the reference pipeline");
        require(!ref.empty(), "reference CSV must not be empty");
    }
    detail << "3 presets byte-identical";
}

void criterion_unpack_roundtrip(std::ostringstream& detail) {
    std::mt19937_64 rng(424242);
    Config cfg = degenerate_config();
    cfg.relevance_threshold = 0.5;
    long long frames_checked = 0, boxes_checked = 0;
    for (int scene = 0; scene < 8; ++scene) {
        const Scenario sc = random_scene(rng, 40);
        RunArtifacts artifacts;
        (void)run(sc, cfg, nullptr, &artifacts);
        for (int f = 1; f <= sc.n_frames; ++f) {
            const auto gt = ground_truth_boxes(sc, f);
            if (gt.empty()) continue;
            ++frames_checked;
            for (const Detection& want : gt) {
                // The oracle scorer marks every tile the box overlaps, so the
                // box always lies fully inside a retained polyomino.
                bool found = false;
                for (const Detection& got : artifacts.unpacked_by_frame[f]) {
                    if (got.object_id != want.object_id) continue;
                    require(got.frame == f, "unpacked frame mismatch");
                    require(got.box == want.box, "frame " + std::to_string(f) + " object " +
                                                     std::to_string(want.object_id) +
                                                     ": box not recovered exactly");
                    found = true;
                }
                require(found, "object " + std::to_string(want.object_id) + " lost in frame " +
                                   std::to_string(f));
                ++boxes_checked;
            }
        }
    }
    require(frames_checked >= 100, "need at least 100 randomized frames, had " +
                                       std::to_string(frames_checked));
    detail << frames_checked << " frames / " << boxes_checked << " boxes exact";
}

void criterion_gap_matrix_laws(std::ostringstream& detail) {
    presets::PresetOptions opt;
    opt.seed = 31;
    opt.n_frames = 240;
    const Scenario sc = presets::intersection(opt);
    GapSet gaps;
    const MissRateTensor tensor = learn_tensor(sc, gaps, "sort");

    for (size_t gi = 0; gi < gaps.gammas.size(); ++gi)
        for (int r = 0; r < sc.grid.rows; ++r)
            for (int c = 0; c < sc.grid.cols; ++c) {
                const double rate = tensor.rate(static_cast<int>(gi), r, c);
                require(rate > 0.0 && rate < 1.0, "rate outside (0,1)");
            }

    GapMatrix prev = derive_gap_matrix(tensor, 0.0);
    for (int v : prev.gaps.data()) require(v == 1, "tolerance 0 must give the all-1 matrix");
    for (int step = 1; step <= 20; ++step) {
        const GapMatrix cur = derive_gap_matrix(tensor, step * 0.05);
        for (int r = 0; r < sc.grid.rows; ++r)
            for (int c = 0; c < sc.grid.cols; ++c)
                require(prev.gaps.at(r, c) <= cur.gaps.at(r, c), "gap matrix not monotone in tolerance");
        prev = cur;
    }
    for (int v : prev.gaps.data()) require(v == 16, "tolerance 1 must give max-gap everywhere");
    detail << "monotone over 21 tolerances, bounds exact";
}

void criterion_hota_properties(std::ostringstream& detail) {
    auto make_track = [](int id, const std::vector<std::pair<int, Box>>& obs) {
        Track t;
        t.id = id;
        for (const auto& [f, b] : obs) t.observations.push_back({f, b, 0});
        return t;
    };
    std::vector<Track> reference;
    for (int i = 0; i < 3; ++i) {
        std::vector<std::pair<int, Box>> obs;
        for (int f = 1; f <= 20; ++f)
            obs.push_back({f, Box{i * 40.0 + f, i * 25.0, i * 40.0 + f + 12, i * 25.0 + 10}});
        reference.push_back(make_track(i + 1, obs));
    }
    require(std::abs(hota(reference, reference).hota - 1.0) < 1e-12, "hota(T,T) must be 1");
    require(hota({}, reference).hota == 0.0, "hota(empty, T) must be 0");

    std::vector<Track> renamed = reference;
    renamed[0].id = 301;
    renamed[1].id = 102;
    renamed[2].id = 203;
    require(std::abs(hota(renamed, reference).hota - 1.0) < 1e-12, "id relabeling must not change hota");

    // Two objects, four frames, identities swapped at the midpoint: every
    // pair association count is 2 of 4, so AssA = 1/3 and DetA = 1.
    const Box a1{0, 0, 10, 10}, a2{2, 0, 12, 10}, a3{4, 0, 14, 10}, a4{6, 0, 16, 10};
    const Box b1{50, 50, 60, 60}, b2{52, 50, 62, 60}, b3{54, 50, 64, 60}, b4{56, 50, 66, 60};
    const std::vector<Track> toy_ref = {make_track(1, {{1, a1}, {2, a2}, {3, a3}, {4, a4}}),
                                        make_track(2, {{1, b1}, {2, b2}, {3, b3}, {4, b4}})};
    const std::vector<Track> toy_pred = {make_track(8, {{1, a1}, {2, a2}, {3, b3}, {4, b4}}),
                                         make_track(9, {{1, b1}, {2, b2}, {3, a3}, {4, a4}})};
    const HotaScore toy = hota(toy_pred, toy_ref);
    require(std::abs(toy.det_a - 1.0) <= 1e-9, "toy DetA must be 1");
    require(std::abs(toy.ass_a - 1.0 / 3.0) <= 1e-9, "toy AssA must be 1/3");
    require(std::abs(toy.hota - std::sqrt(1.0 / 3.0)) <= 1e-9, "toy HOTA must be sqrt(1/3)");
    detail << "perfection, emptiness, relabeling, switch case at 1e-9";
}

void criterion_pareto_sweep(std::ostringstream& detail) {
    presets::PresetOptions opt;
    opt.seed = 7;
    opt.n_frames = 240;
    const Scenario sc = presets::intersection(opt);

    std::map<std::string, MissRateTensor> tensors;
    GapSet gaps;
    tensors["sort"] = learn_tensor(sc, gaps, "sort");
    tensors["user"] = learn_tensor(sc, gaps, "user");

    const SweepOptions options; // full knob grid
    const SweepResult result = sweep(sc, tensors, options);
    require(result.points.size() == 480, "expected 480 configurations, got " +
                                             std::to_string(result.points.size()));
    for (const auto& p : result.points) {
        const int retained = (sc.n_frames + p.config.sampling_rate - 1) / p.config.sampling_rate;
        require(p.detector_calls <= retained, "canvas count exceeded the retained frame count");
    }

    const auto frontier = pareto(result.points);
    require(!frontier.empty(), "frontier must not be empty");
    for (const auto& p : frontier)
        for (const auto& q : frontier) {
            if (&p == &q) continue;
            require(!(q.throughput_fps >= p.throughput_fps && q.hota >= p.hota &&
                      (q.throughput_fps > p.throughput_fps || q.hota > p.hota)),
                    "frontier points must be mutually non-dominated");
        }

    double best_hota = 0;
    for (const auto& p : result.points) best_hota = std::max(best_hota, p.hota);
    require(best_hota == 1.0,
            "the degenerate configuration must score exactly 1 against the reference");
    const auto chosen = select(frontier, SelectMode::max_accuracy_loss, 0.0);
    require(chosen.has_value(), "zero-loss selection must exist");
    require(chosen->hota == best_hota, "zero-loss selection must be the max-accuracy point");
    detail << "480 points, frontier " << frontier.size() << ", max hota " << best_hota;
}

void criterion_exhaustive_gap_anchor(std::ostringstream& detail) {
    presets::PresetOptions opt;
    opt.seed = 5;
    opt.n_frames = 120;
    opt.frame_w = 48;
    opt.frame_h = 48;
    const Scenario sc = presets::intersection(opt); // 3x3 tile grid
    require(sc.grid.rows == 3 && sc.grid.cols == 3, "scene must be a 3x3 grid");

    const OracleRunInputs inputs = prepare_oracle_run(sc);
    const auto factory = make_tracker_factory("sort");

    // Reference tracks: the unpruned run (all-ones gaps keeps everything).
    const OracleRunResult reference = oracle_polyomino_run(inputs, Grid2D<int>(3, 3, 1), factory);

    struct PointRC {
        double ratio, hota;
    };
    const int gammas[3] = {1, 2, 4};
    const int total = 19683; // 3^9 per-tile assignments
    std::vector<PointRC> cloud(total);
    parallel_for(total, [&](int code) {
        Grid2D<int> gaps(3, 3, 1);
        int rest = code;
        for (int i = 0; i < 9; ++i) {
            gaps.data()[i] = gammas[rest % 3];
            rest /= 3;
        }
        const OracleRunResult res = oracle_polyomino_run(inputs, gaps, factory);
        cloud[code] = {res.pruning_ratio(), hota(res.tracks, reference.tracks).hota};
    });

    // Pareto frontier of the exhaustive cloud (maximize ratio and hota).
    std::vector<PointRC> frontier;
    for (const PointRC& p : cloud) {
        bool dominated = false;
        for (const PointRC& q : cloud)
            if (q.ratio >= p.ratio && q.hota >= p.hota && (q.ratio > p.ratio || q.hota > p.hota)) {
                dominated = true;
                break;
            }
        if (!dominated) frontier.push_back(p);
    }
    std::sort(frontier.begin(), frontier.end(),
              [](const PointRC& a, const PointRC& b) { return a.ratio < b.ratio; });

    // Heuristic points: tolerance-swept gap matrices from measured rates.
    GapSet gaps;
    gaps.gammas = {1, 2, 4};
    const MissRateTensor tensor = learn_tensor(sc, gaps, "sort");
    std::set<std::vector<int>> seen;
    double max_loss = 0;
    int points = 0;
    for (int step = 0; step <= 20; ++step) {
        const GapMatrix m = derive_gap_matrix(tensor, step * 0.05);
        if (!seen.insert(m.gaps.data()).second) continue;
        const OracleRunResult res = oracle_polyomino_run(inputs, m.gaps, factory);
        const double h = hota(res.tracks, reference.tracks).hota;
        const double ratio = res.pruning_ratio();
        // Anchor: the exhaustive frontier point with the highest ratio not
        // exceeding this heuristic point's ratio.
        PointRC anchor = frontier.front();
        for (const PointRC& p : frontier)
            if (p.ratio <= ratio + 1e-12) anchor = p;
        const double loss = anchor.hota - h;
        max_loss = std::max(max_loss, loss);
        ++points;
        require(loss <= 0.05, "heuristic point at ratio " + std::to_string(ratio) + " loses " +
                                  std::to_string(loss) + " HOTA vs its anchor");
    }
    std::ostringstream fmt;
    fmt.precision(4);
    fmt << points << " tolerance points, max anchor loss " << max_loss << ", frontier "
        << frontier.size() << " of " << total;
    detail << fmt.str();
}

void criterion_sparse_call_reduction(std::ostringstream& detail) {
    presets::PresetOptions opt;
    opt.seed = 11;
    opt.n_frames = 240;
    const Scenario sc = presets::sparse(opt);
    GapSet gaps;
    const MissRateTensor tensor = learn_tensor(sc, gaps, "sort");
    const GapMatrix m06 = derive_gap_matrix(tensor, 0.6);

    Config plain = degenerate_config();
    plain.relevance_threshold = 0.5;
    Config pruned = plain;
    pruned.mistrack_tolerance = 0.6;

    const RunReport without = run(sc, plain);
    const RunReport with = run(sc, pruned, &m06);
    require(with.detector_calls < with.n_frames, "pruned run must use strictly fewer calls than frames");
    require(without.detector_calls < without.n_frames,
            "unpruned sparse run must already use fewer calls than frames");
    require(with.detector_calls <= without.detector_calls,
            "enabling pruning must not increase detector calls");
    require(with.tiles_selected < without.tiles_selected, "pruning must drop tiles on this preset");
    detail << "N'=" << with.detector_calls << " (pruned) / " << without.detector_calls
           << " (plain) of N=" << sc.n_frames << ", tiles " << with.tiles_selected << "/"
           << with.tiles_total;
}

void criterion_spatial_mistrack_variation(std::ostringstream& detail) {
    presets::PresetOptions opt;
    opt.seed = 3;
    opt.n_frames = 240;
    const Scenario sc = presets::intersection(opt);
    GapSet gaps;
    gaps.gammas = {1, 2, 4};
    const MissRateTensor tensor = learn_tensor(sc, gaps, "sort");
    const auto regions = presets::intersection_regions(sc.grid);
    require(!regions.approach.empty() && !regions.exit.empty(), "regions must be nonempty");

    double approach = 0, exit = 0;
    for (const TilePos& t : regions.approach) approach += tensor.rate(2, t.row, t.col);
    for (const TilePos& t : regions.exit) exit += tensor.rate(2, t.row, t.col);
    approach /= static_cast<double>(regions.approach.size());
    exit /= static_cast<double>(regions.exit.size());
    require(approach > exit, "approach mean must exceed exit mean");
    std::ostringstream fmt;
    fmt.precision(4);
    fmt << "gamma=4 approach " << approach << " > exit " << exit;
    detail << fmt.str();
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"prune-1d-golden-instance", criterion_prune_1d_golden},
        {"prune-exact-vs-bruteforce", criterion_prune_oracle_equivalence},
        {"pack-matches-interpreter", criterion_pack_fidelity},
        {"engine-degenerate-equivalence", criterion_degenerate_equivalence},
        {"unpack-roundtrip-exact", criterion_unpack_roundtrip},
        {"gap-matrix-laws", criterion_gap_matrix_laws},
        {"hota-properties", criterion_hota_properties},
        {"pareto-sweep-480", criterion_pareto_sweep},
        {"tolerance-sweep-vs-exhaustive", criterion_exhaustive_gap_anchor},
        {"sparse-call-reduction", criterion_sparse_call_reduction},
        {"spatial-mistrack-variation", criterion_spatial_mistrack_variation},
    };
    for (size_t i = 0; i < criteria.size(); ++i) run_criterion(static_cast<int>(i) + 1, criteria[i]);
    if (g_failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d of %zu criteria FAILED\n", g_failures, criteria.size());
    return g_failures == 0 ? 0 : 1;
}
