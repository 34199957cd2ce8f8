#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tiletrack/grid.hpp"

namespace tiletrack {

/// Moving rectangle with piecewise-linear motion between waypoints. The
/// object exists from its first waypoint frame through its last; (x,y) is
/// the box's top-left corner in pixels.
struct ObjectSpec {
    int id = 0;
    int w = 0, h = 0; // pixels
    struct Waypoint {
        int frame;
        double x, y;
    };
    std::vector<Waypoint> waypoints; // strictly increasing in frame
};

/// Deterministic synthetic stationary scene: the same seed and inputs produce
/// bit-identical frames and boxes.
struct Scenario {
    uint64_t seed = 0;
    TileGrid grid;
    int n_frames = 1;
    double fps = 15.0;
    std::vector<ObjectSpec> objects;
    std::string preset; // informational; set by the preset generators

    void validate() const;
};

/// Single-channel 8-bit pixel buffer.
struct FrameImage {
    int frame = 0;
    int w = 0, h = 0;
    std::vector<uint8_t> px;

    uint8_t at(int x, int y) const { return px[static_cast<size_t>(y) * w + x]; }
    uint8_t& at(int x, int y) { return px[static_cast<size_t>(y) * w + x]; }
};

/// Interpolated top-left position of an object at frame f, or nullopt when
/// the object is not present.
std::optional<std::pair<double, double>> object_position(const ObjectSpec& obj, int frame);

FrameImage synthesize_frame(const Scenario& scenario, int frame);

std::vector<Detection> ground_truth_boxes(const Scenario& scenario, int frame);

/// Ground-truth tracks (one per object), interpolation-free.
struct Track; // tracker.hpp

/// Relevance oracle: 1.0 where any ground-truth box overlaps the tile with
/// positive area, else 0.0.
ScoreMatrix oracle_relevance(const Scenario& scenario, int frame, const TileGrid& grid);

/// Motion + position heuristic scorer. Per tile:
///   clamp01(mean(|cur - prev|) / saturation * prior + noise)
/// noise_seed == 0 disables the noise term.
ScoreMatrix motion_relevance(const FrameImage& prev, const FrameImage& cur, const TileGrid& grid,
                             const Grid2D<double>& position_prior, uint64_t noise_seed);

/// Mean absolute frame difference that maps to score 1.0 at prior 1.
inline constexpr double kMotionSaturation = 32.0;

/// Batch synthesis; parallel over frames.
std::vector<FrameImage> synthesize_frames(const Scenario& scenario, const std::vector<int>& frames);

namespace serial {
/// Straight-loop reference implementation used by tests and the benchmark.
std::vector<FrameImage> synthesize_frames(const Scenario& scenario, const std::vector<int>& frames);
} // namespace serial

namespace presets {

struct PresetOptions {
    uint64_t seed = 1;
    int n_frames = 240;
    int frame_w = 0;  // 0 = preset default
    int frame_h = 0;
    int tile_size = 16;
    double fps = 15.0;
};

/// Constant-velocity lanes, well-separated objects.
Scenario highway(const PresetOptions& opt);
/// Stop-and-go approach on the left half of the road, steady exit on the
/// right half.
Scenario intersection(const PresetOptions& opt);
/// At most ~5% of tiles relevant in any frame.
Scenario sparse(const PresetOptions& opt);

Scenario by_name(const std::string& name, const PresetOptions& opt);

/// Approach/exit tile regions of the intersection preset for a given grid.
/// The column just before the stop line is excluded from the approach set
/// (objects there are nearly stationary).
struct IntersectionRegions {
    std::vector<TilePos> approach;
    std::vector<TilePos> exit;
};
IntersectionRegions intersection_regions(const TileGrid& grid);

} // namespace presets

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

} // namespace tiletrack
