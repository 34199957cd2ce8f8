#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tiletrack/common.hpp"

namespace tiletrack {

struct TrackObservation {
    int frame = 0;
    Box box;
    int det_index = -1; // index into the frame's detection list; -1 if interpolated
};

struct Track {
    int id = 0;
    std::vector<TrackObservation> observations; // strictly increasing frames
};

struct TrackerConfig {
    int max_age = 3;          // frames a track survives unmatched
    int min_hits = 1;         // confirmations before emission
    double iou_threshold = 0.3;
};

/// Result of a min-cost maximum matching. row_to_col[r] is the assigned
/// column or -1 for unmatched rows.
struct AssignmentResult {
    std::vector<int> row_to_col;
    double cost = 0;
};

/// Min-cost maximum matching on a finite rectangular cost matrix.
/// Deterministic tie-break among optima: lexicographically smallest
/// assignment by row index, then column index.
AssignmentResult hungarian(const std::vector<std::vector<double>>& cost);

/// SORT noise defaults. State is [cx, cy, area, aspect, vcx, vcy, varea];
/// the measurement is the first four components.
namespace kalman_defaults {
inline constexpr double kInitPosVar = 10.0;
inline constexpr double kInitVelVar = 1e4;
inline constexpr double kProcessPosVar = 1.0;
inline constexpr double kProcessVelVar[3] = {0.01, 0.01, 1e-4};
inline constexpr double kMeasVar[4] = {1.0, 1.0, 10.0, 10.0};
} // namespace kalman_defaults

/// Constant-velocity Kalman filter over (cx, cy, area, aspect); velocities on
/// the first three.
class KalmanBox {
public:
    explicit KalmanBox(const Box& b);

    void predict();                 // one frame step
    void predict_steps(int steps);  // gap-aware: apply predict `steps` times
    void update(const Box& measurement);
    Box box() const;

    std::array<double, 7> state() const { return x_; }
    std::array<std::array<double, 7>, 7> covariance() const { return p_; }
    void set_state(const std::array<double, 7>& x, const std::array<std::array<double, 7>, 7>& p) {
        x_ = x;
        p_ = p;
    }

private:
    std::array<double, 7> x_{};
    std::array<std::array<double, 7>, 7> p_{};
};

struct TrackRow {
    int frame = 0;
    int track_id = 0;
    Box box;
    int det_index = -1;
};

/// Pluggable per-stream tracker: consumes detections frame by frame (frames
/// strictly increasing, gaps allowed) and emits confirmed rows.
class Tracker {
public:
    virtual ~Tracker() = default;
    virtual std::vector<TrackRow> step(int frame, const std::vector<Detection>& detections) = 0;
};

/// Built-in SORT: Kalman prediction, IoU-gated Hungarian association,
/// max_age lifecycle. Emitted rows carry the matched detection's box.
class SortTracker final : public Tracker {
public:
    explicit SortTracker(const TrackerConfig& cfg = {});
    std::vector<TrackRow> step(int frame, const std::vector<Detection>& detections) override;

private:
    struct Entry {
        int id;
        KalmanBox kf;
        int last_update_frame;
        int hits;
    };
    TrackerConfig cfg_;
    std::vector<Entry> tracks_;
    int last_frame_ = -1;
    int next_id_ = 1;
    int steps_ = 0;
};

using TrackerFactory = std::function<std::unique_ptr<Tracker>()>;

/// Tracker registry: "sort" is the built-in default; "user" is the
/// user-provided slot, which ships as an alternately configured SORT.
TrackerFactory make_tracker_factory(const std::string& name);
std::vector<std::string> tracker_names();

/// Run a tracker over the given frames (1-based detection lists) and group
/// emitted rows into tracks.
std::vector<Track> track_all(Tracker& tracker, const std::vector<std::vector<Detection>>& dets_by_frame,
                             const std::vector<int>& frames);

std::vector<Track> collect_tracks(const std::vector<TrackRow>& rows);

/// Fill every gap of each track with linearly interpolated boxes. Original
/// observations are unchanged; idempotent.
std::vector<Track> interpolate_tracks(const std::vector<Track>& tracks);

std::string tracks_to_csv(const std::vector<Track>& tracks);
std::vector<Track> tracks_from_csv(const std::string& text);
void save_tracks_csv(const std::vector<Track>& tracks, const std::string& path);
std::vector<Track> load_tracks_csv(const std::string& path);

} // namespace tiletrack
