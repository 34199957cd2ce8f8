#include "tiletrack/engine.hpp"

#include <chrono>
#include <map>
#include <unordered_map>

#include "tiletrack/parallel.hpp"

namespace tiletrack {

const char* to_string(Scorer s) { return s == Scorer::oracle ? "oracle" : "motion"; }

std::optional<Scorer> scorer_from_string(const std::string& s) {
    if (s == "oracle") return Scorer::oracle;
    if (s == "motion") return Scorer::motion;
    return std::nullopt;
}

void Config::validate() const {
    if (sampling_rate != 1 && sampling_rate != 2 && sampling_rate != 4 && sampling_rate != 8 &&
        sampling_rate != 16)
        throw std::invalid_argument("config: sampling rate must be one of 1,2,4,8,16");
    if (relevance_threshold < 0 || relevance_threshold > 1)
        throw std::invalid_argument("config: relevance threshold must be in [0,1]");
    if (mistrack_tolerance && (*mistrack_tolerance < 0 || *mistrack_tolerance > 1))
        throw std::invalid_argument("config: mistrack tolerance must be in [0,1]");
    gammas.validate();
    if (window_frames < gammas.max_gap())
        throw std::invalid_argument("config: window must be at least the largest gap");
    make_tracker_factory(tracker); // validates the name
}

namespace {

class StageTimer {
public:
    explicit StageTimer(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        sink_ += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    double& sink_;
    std::chrono::steady_clock::time_point start_;
};

Grid2D<int> effective_gaps(const Grid2D<int>& native, int sampling_rate) {
    Grid2D<int> out(native.rows(), native.cols(), 1);
    for (int r = 0; r < native.rows(); ++r)
        for (int c = 0; c < native.cols(); ++c)
            out.at(r, c) = std::max(1, native.at(r, c) / sampling_rate);
    return out;
}

} // namespace

RunReport run(const Scenario& video, const Config& cfg, const GapMatrix* gaps, RunArtifacts* artifacts,
              Detector* detector_override) {
    video.validate();
    cfg.validate();
    const bool pruning = cfg.mistrack_tolerance.has_value();
    if (pruning && gaps == nullptr)
        throw std::invalid_argument("run: gap matrix required when a mistrack tolerance is set");

    const TileGrid& grid = video.grid;
    RunReport report;
    report.n_frames = video.n_frames;

    std::vector<int> retained;
    for (int f = 1; f <= video.n_frames; f += cfg.sampling_rate) retained.push_back(f);
    report.n_retained = static_cast<int>(retained.size());
    const int n_ret = report.n_retained;

    const std::vector<FrameImage> frames_px = synthesize_frames(video, retained);
    std::unordered_map<int, size_t> frame_index;
    for (size_t i = 0; i < retained.size(); ++i) frame_index[retained[i]] = i;
    const FrameProvider provider = [&](int frame) -> const FrameImage& {
        auto it = frame_index.find(frame);
        if (it == frame_index.end()) throw std::runtime_error("render: source frame not retained");
        return frames_px[it->second];
    };

    // Classify: score tiles, threshold, group into polyominoes.
    std::vector<std::vector<Polyomino>> polys(n_ret);
    {
        StageTimer timer(report.stage_ms.classify_ms);
        const Grid2D<double> prior(grid.rows, grid.cols, 1.0);
        parallel_for(n_ret, [&](int k) {
            ScoreMatrix scores;
            if (cfg.scorer == Scorer::oracle) {
                scores = oracle_relevance(video, retained[k], grid);
            } else {
                const FrameImage& prev = k == 0 ? frames_px[0] : frames_px[k - 1];
                scores = motion_relevance(prev, frames_px[k], grid, prior, 0);
            }
            polys[k] = extract_polyominoes(threshold_scores(scores, cfg.relevance_threshold));
        });
    }
    for (const auto& list : polys)
        for (const Polyomino& p : list) report.tiles_total += p.size();

    OracleCanvasDetector oracle(video);
    Detector& detector = detector_override ? *detector_override : oracle;

    const Grid2D<int> gap_grid =
        pruning ? effective_gaps(gaps->gaps, cfg.sampling_rate) : Grid2D<int>(grid.rows, grid.cols, 1);
    Grid2D<int> last_covered(grid.rows, grid.cols, 0);

    std::vector<Canvas> all_canvases;
    std::vector<std::vector<Detection>> unpacked(video.n_frames + 1);
    long long occupied_cells = 0;

    for (int w_start = 1; w_start <= n_ret; w_start += cfg.window_frames) {
        const int w_end = std::min(n_ret, w_start + cfg.window_frames - 1);

        std::vector<const Polyomino*> selected;
        {
            StageTimer timer(report.stage_ms.prune_ms);
            if (pruning) {
                PruneInstance inst;
                inst.f_start = w_start;
                inst.f_end = w_end;
                inst.gaps = gap_grid;
                inst.last_covered = last_covered;
                for (int o = w_start; o <= w_end; ++o) inst.frames.push_back(polys[o - 1]);
                PruneSolution sol = solve_exact(inst);
                if (!sol.optimal) ++report.non_optimal_windows;
                for (const VarRef& v : sol.selected)
                    selected.push_back(&polys[v.frame - 1][v.k]);
                for (const VarRef& v : sol.selected)
                    for (const TilePos& t : polys[v.frame - 1][v.k].tiles)
                        last_covered.at(t) = std::max(last_covered.at(t), v.frame);
            } else {
                for (int o = w_start; o <= w_end; ++o)
                    for (const Polyomino& p : polys[o - 1]) selected.push_back(&p);
            }
        }
        for (const Polyomino* p : selected) report.tiles_selected += p->size();

        std::vector<Canvas> canvases;
        {
            StageTimer timer(report.stage_ms.pack_ms);
            std::vector<PaddedPolyomino> padded;
            padded.reserve(selected.size());
            for (const Polyomino* p : selected) padded.push_back(pad_polyomino(*p, cfg.padding, grid));
            canvases = pack(padded, grid.rows, grid.cols);
        }
        for (Canvas& c : canvases) c.id += static_cast<int>(all_canvases.size());

        std::vector<RenderedCanvas> rendered;
        {
            StageTimer timer(report.stage_ms.render_ms);
            rendered = render_canvases(canvases, provider, grid);
        }
        std::vector<std::vector<Detection>> canvas_dets(canvases.size());
        {
            StageTimer timer(report.stage_ms.detect_ms);
            for (size_t i = 0; i < rendered.size(); ++i) canvas_dets[i] = detector.detect(rendered[i]);
        }
        for (size_t i = 0; i < canvases.size(); ++i) {
            occupied_cells += canvases[i].occupied_tiles();
            for (const Detection& d : unpack(canvas_dets[i], canvases[i], grid))
                unpacked[d.frame].push_back(d);
        }
        if (artifacts) {
            for (Canvas& c : canvases) artifacts->canvases.push_back(c);
            if (artifacts->keep_rendered)
                for (RenderedCanvas& rc : rendered) artifacts->rendered.push_back(std::move(rc));
        }
        report.detector_calls += static_cast<long long>(canvases.size());
        all_canvases.insert(all_canvases.end(), std::make_move_iterator(canvases.begin()),
                            std::make_move_iterator(canvases.end()));
    }

    report.packing_efficacy =
        all_canvases.empty()
            ? 0.0
            : static_cast<double>(occupied_cells) /
                  (static_cast<double>(all_canvases.size()) * grid.rows * grid.cols);

    {
        StageTimer timer(report.stage_ms.track_ms);
        auto tracker = make_tracker_factory(cfg.tracker)();
        report.tracks = track_all(*tracker, unpacked, retained);
    }
    if (artifacts) artifacts->unpacked_by_frame = std::move(unpacked);

    report.throughput_fps =
        report.n_frames / (static_cast<double>(std::max<long long>(report.detector_calls, 1)) *
                           kDetectorCostSeconds);
    return report;
}

std::vector<std::vector<Detection>> reference_detections(const Scenario& video) {
    std::vector<std::vector<Detection>> dets(video.n_frames + 1);
    parallel_for(video.n_frames, [&](int i) { dets[i + 1] = ground_truth_boxes(video, i + 1); });
    return dets;
}

std::vector<Track> ground_truth_tracks(const Scenario& video) {
    std::map<int, Track> by_id;
    for (int f = 1; f <= video.n_frames; ++f) {
        for (const Detection& d : ground_truth_boxes(video, f)) {
            Track& t = by_id[d.object_id];
            t.id = d.object_id;
            t.observations.push_back({f, d.box, -1});
        }
    }
    std::vector<Track> tracks;
    for (auto& [id, t] : by_id) tracks.push_back(std::move(t));
    return tracks;
}

RunReport reference_run(const Scenario& video, const std::string& tracker_name) {
    video.validate();
    RunReport report;
    report.n_frames = video.n_frames;
    report.n_retained = video.n_frames;
    report.detector_calls = video.n_frames;

    const auto dets = reference_detections(video);
    std::vector<int> frames(video.n_frames);
    for (int f = 1; f <= video.n_frames; ++f) frames[f - 1] = f;

    StageTimer timer(report.stage_ms.track_ms);
    auto tracker = make_tracker_factory(tracker_name)();
    report.tracks = track_all(*tracker, dets, frames);
    report.throughput_fps = report.n_frames / (report.detector_calls * kDetectorCostSeconds);
    return report;
}

OracleRunInputs prepare_oracle_run(const Scenario& video) {
    video.validate();
    OracleRunInputs in;
    in.grid = video.grid;
    in.n_frames = video.n_frames;
    in.dets_by_frame = reference_detections(video);
    in.polys_by_frame.resize(video.n_frames + 1);
    const int ts = in.grid.tile_size;
    for (int f = 1; f <= video.n_frames; ++f) {
        RelevanceMask mask;
        mask.frame = f;
        mask.relevant = Grid2D<uint8_t>(in.grid.rows, in.grid.cols, 0);
        for (const Detection& d : in.dets_by_frame[f]) {
            const int r0 = std::max(0, static_cast<int>(std::floor(d.box.y1 / ts)));
            const int r1 = std::min(in.grid.rows - 1, static_cast<int>(std::ceil(d.box.y2 / ts)) - 1);
            const int c0 = std::max(0, static_cast<int>(std::floor(d.box.x1 / ts)));
            const int c1 = std::min(in.grid.cols - 1, static_cast<int>(std::ceil(d.box.x2 / ts)) - 1);
            for (int r = r0; r <= r1; ++r)
                for (int c = c0; c <= c1; ++c) mask.relevant.at(r, c) = 1;
        }
        in.polys_by_frame[f] = extract_polyominoes(mask);
    }
    return in;
}

OracleRunResult oracle_polyomino_run(const OracleRunInputs& in, const Grid2D<int>& gaps,
                                     const TrackerFactory& tracker_factory, int window_frames) {
    OracleRunResult result;
    for (int f = 1; f <= in.n_frames; ++f)
        for (const Polyomino& p : in.polys_by_frame[f]) result.tiles_total += p.size();

    // Selected tile sets per frame.
    std::vector<Grid2D<uint8_t>> keep(in.n_frames + 1, Grid2D<uint8_t>(in.grid.rows, in.grid.cols, 0));
    Grid2D<int> last_covered(in.grid.rows, in.grid.cols, 0);
    for (int w_start = 1; w_start <= in.n_frames; w_start += window_frames) {
        const int w_end = std::min(in.n_frames, w_start + window_frames - 1);
        PruneInstance inst;
        inst.f_start = w_start;
        inst.f_end = w_end;
        inst.gaps = gaps;
        inst.last_covered = last_covered;
        for (int f = w_start; f <= w_end; ++f) inst.frames.push_back(in.polys_by_frame[f]);
        const PruneSolution sol = solve_exact(inst);
        for (const VarRef& v : sol.selected) {
            const Polyomino& p = in.polys_by_frame[v.frame][v.k];
            result.tiles_selected += p.size();
            for (const TilePos& t : p.tiles) {
                keep[v.frame].at(t) = 1;
                last_covered.at(t) = std::max(last_covered.at(t), v.frame);
            }
        }
    }

    // Keep detections whose centers fall inside a retained polyomino.
    std::vector<std::vector<Detection>> filtered(in.n_frames + 1);
    for (int f = 1; f <= in.n_frames; ++f) {
        for (const Detection& d : in.dets_by_frame[f]) {
            const TilePos t = tile_of_point(in.grid, d.box.center_x(), d.box.center_y());
            if (keep[f].in_bounds(t.row, t.col) && keep[f].at(t)) filtered[f].push_back(d);
        }
    }
    std::vector<int> frames(in.n_frames);
    for (int f = 1; f <= in.n_frames; ++f) frames[f - 1] = f;
    auto tracker = tracker_factory();
    result.tracks = track_all(*tracker, filtered, frames);
    return result;
}

OracleRunResult oracle_polyomino_run(const Scenario& video, const GapMatrix& gaps,
                                     const std::string& tracker, int window_frames) {
    return oracle_polyomino_run(prepare_oracle_run(video), gaps.gaps, make_tracker_factory(tracker),
                                window_frames);
}

} // namespace tiletrack
