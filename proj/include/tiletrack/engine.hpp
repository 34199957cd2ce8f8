#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tiletrack/detector.hpp"
#include "tiletrack/gaps.hpp"
#include "tiletrack/packer.hpp"
#include "tiletrack/pruner.hpp"
#include "tiletrack/sim.hpp"
#include "tiletrack/tracker.hpp"

namespace tiletrack {

enum class Scorer { oracle, motion };

const char* to_string(Scorer s);
std::optional<Scorer> scorer_from_string(const std::string& s);

/// Runtime knobs. sampling_rate retains every s-th frame; mistrack_tolerance
/// of nullopt disables pruning.
struct Config {
    int sampling_rate = 1;
    double relevance_threshold = 0.0;
    std::optional<double> mistrack_tolerance;
    PaddingMode padding = PaddingMode::none;
    std::string tracker = "sort";
    int window_frames = 16;
    GapSet gammas;
    Scorer scorer = Scorer::oracle;

    void validate() const;
    bool operator==(const Config&) const = default;
};

/// Modeled per-canvas detector cost: the reference pipeline (one call per
/// frame) runs at exactly the nominal 15 FPS, so throughput ratios are
/// hardware-independent.
inline constexpr double kDetectorCostSeconds = 1.0 / 15.0;

struct StageTimes {
    double classify_ms = 0, prune_ms = 0, pack_ms = 0, render_ms = 0, detect_ms = 0, track_ms = 0;
};

struct RunReport {
    std::vector<Track> tracks;
    long long detector_calls = 0; // number of canvases
    int n_frames = 0;
    int n_retained = 0;
    long long tiles_total = 0;    // relevant tiles across retained frames
    long long tiles_selected = 0;
    double packing_efficacy = 0;  // 0 when no canvases were produced
    double throughput_fps = 0;    // modeled
    int non_optimal_windows = 0;  // solver fell back to greedy
    StageTimes stage_ms;

    double pruning_ratio() const {
        return tiles_total > 0 ? 1.0 - static_cast<double>(tiles_selected) / tiles_total : 0.0;
    }
};

/// Optional sinks for intermediate products.
struct RunArtifacts {
    bool keep_rendered = false;
    std::vector<Canvas> canvases;
    std::vector<RenderedCanvas> rendered;
    std::vector<std::vector<Detection>> unpacked_by_frame; // 1-based
};

/// Full pipeline: retain every s-th frame, score, threshold, extract
/// polyominoes, prune under the gap matrix (windowed), pad, pack, detect per
/// canvas, unpack, track. `gaps` is required iff mistrack_tolerance is set
/// and must come from the same tracker option.
RunReport run(const Scenario& video, const Config& cfg, const GapMatrix* gaps = nullptr,
              RunArtifacts* artifacts = nullptr, Detector* detector_override = nullptr);

/// Full-frame, every-frame baseline: detector on every frame, tracker at
/// native rate.
RunReport reference_run(const Scenario& video, const std::string& tracker = "sort");

/// Detections of the reference pipeline, 1-based by frame.
std::vector<std::vector<Detection>> reference_detections(const Scenario& video);

/// One track per simulated object, ids taken from the object specs.
std::vector<Track> ground_truth_tracks(const Scenario& video);

/// Ablation mode isolating the gap matrices: polyominoes come from
/// reference-pipeline boxes, pruning filters detections by
/// center-in-retained-polyomino, and the tracker runs at native rate.
struct OracleRunResult {
    std::vector<Track> tracks;
    long long tiles_total = 0;
    long long tiles_selected = 0;

    double pruning_ratio() const { // fraction of tiles skipped
        return tiles_total > 0 ? 1.0 - static_cast<double>(tiles_selected) / tiles_total : 0.0;
    }
};

/// Precomputed per-frame inputs so gap-assignment sweeps reuse them.
struct OracleRunInputs {
    TileGrid grid;
    int n_frames = 0;
    std::vector<std::vector<Detection>> dets_by_frame;  // 1-based
    std::vector<std::vector<Polyomino>> polys_by_frame; // 1-based
};

OracleRunInputs prepare_oracle_run(const Scenario& video);
OracleRunResult oracle_polyomino_run(const OracleRunInputs& inputs, const Grid2D<int>& gaps,
                                     const TrackerFactory& tracker_factory, int window_frames = 16);
OracleRunResult oracle_polyomino_run(const Scenario& video, const GapMatrix& gaps,
                                     const std::string& tracker = "sort", int window_frames = 16);

} // namespace tiletrack
