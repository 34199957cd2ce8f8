#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tiletrack/engine.hpp"

namespace tiletrack {

/// Higher-order tracking accuracy: geometric mean of detection and
/// association accuracy, averaged over 19 localization thresholds
/// alpha = 0.05 .. 0.95.
struct HotaScore {
    double hota = 0;
    double det_a = 0;
    double ass_a = 0;
    std::vector<double> alphas;
    std::vector<double> hota_alpha;
    std::vector<double> det_alpha;
    std::vector<double> ass_alpha;
};

/// Both inputs are interpolated to every frame before scoring (idempotent).
/// Rejects an empty reference.
HotaScore hota(const std::vector<Track>& predicted, const std::vector<Track>& reference);

struct ObservationStats {
    Grid2D<double> relevance_pct;  // % of frames each tile overlaps a box
    double mean_relevance_pct = 0;
    double mean_window_overhead = 0;
    long long polyomino_count = 0;
};

ObservationStats observation_stats(const Scenario& video);

struct OperatingPoint {
    Config config;
    double throughput_fps = 0;
    double hota = 0;
    long long detector_calls = 0;
};

struct SweepOptions {
    std::vector<int> s_values{1, 2, 4, 8, 16};
    std::vector<double> thresholds{0.25, 0.5, 0.75};
    std::vector<std::optional<double>> tolerances{std::nullopt, 0.4, 0.6, 0.8};
    std::vector<PaddingMode> paddings{PaddingMode::none, PaddingMode::half_top_left,
                                      PaddingMode::half_bottom_right, PaddingMode::full};
    std::vector<std::string> trackers{"sort", "user"};
    std::string reference_tracker = "sort";
    Scorer scorer = Scorer::oracle;
    int window_frames = 16;
    GapSet gammas;
};

struct SweepResult {
    std::vector<Track> reference_tracks;
    std::vector<OperatingPoint> points;
};

/// One operating point per distinct configuration in the knob cross product.
/// Gap matrices are derived from the tensor measured with each config's
/// tracker option; accuracy is HOTA against the reference-pipeline tracks.
SweepResult sweep(const Scenario& validation, const std::map<std::string, MissRateTensor>& tensors,
                  const SweepOptions& options);

/// Non-dominated subset, sorted by throughput ascending.
std::vector<OperatingPoint> pareto(const std::vector<OperatingPoint>& points);

enum class SelectMode {
    min_throughput,    // most accurate point with throughput >= value
    max_accuracy_loss, // highest-throughput point with hota >= (1-value)*reference
};

std::optional<OperatingPoint> select(const std::vector<OperatingPoint>& frontier, SelectMode mode,
                                     double value, double reference_accuracy = 1.0);

// --- file formats -----------------------------------------------------------

nlohmann::json config_to_json(const Config& cfg);
Config config_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const RunReport& report, const Config* cfg = nullptr);
nlohmann::json hota_to_json(const HotaScore& score);

void save_sweep(const SweepResult& result, const std::string& path,
                const nlohmann::json& metadata = {});
std::vector<OperatingPoint> load_sweep_points(const std::string& path);
/// CSV: throughput_fps,hota,s,T_r,M_bar,padding,tracker
std::string frontier_to_csv(const std::vector<OperatingPoint>& frontier);

} // namespace tiletrack
