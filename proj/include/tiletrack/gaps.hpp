#pragma once

#include <string>
#include <vector>

#include "tiletrack/grid.hpp"
#include "tiletrack/tracker.hpp"

namespace tiletrack {

/// Candidate sampling gaps. Must contain 1 (the native rate) and be strictly
/// increasing.
struct GapSet {
    std::vector<int> gammas{1, 2, 4, 8, 16};

    void validate() const;
    int max_gap() const { return gammas.back(); }
    bool operator==(const GapSet&) const = default;
};

/// Empirical per-tile mistrack counts across candidate gaps. Rates use
/// Laplace smoothing: (missed + 1) / (total + 2), so every rate is strictly
/// inside (0,1).
struct MissRateTensor {
    GapSet gaps;
    std::string tracker;               // producing tracker option
    std::vector<std::string> sources;  // producing scenario files, informational
    std::vector<Grid2D<long long>> missed; // one grid per gamma
    Grid2D<long long> total;               // native-rate association counts

    double rate(int gamma_index, int row, int col) const {
        return (missed[gamma_index].at(row, col) + 1.0) / (total.at(row, col) + 2.0);
    }
};

/// Per-tile maximum sampling gaps derived from a tensor at one tolerance.
struct GapMatrix {
    double tolerance = 0;
    std::string tracker;
    Grid2D<int> gaps; // entries from the gap set, defaulting to 1
};

/// Measure per-tile mistrack rates: for each gamma, re-run the tracker on
/// every-gamma-th-frame detections and count reference links (f, f+gamma)
/// whose endpoints the gamma-run does not keep in one track. Links attribute
/// to the tile holding the later endpoint's box center. TotalA counts the
/// native run's consecutive-frame links the same way.
MissRateTensor measure_mistracks(const std::vector<Track>& reference_tracks,
                                 const std::vector<std::vector<Detection>>& dets_by_frame,
                                 const GapSet& gaps, const TileGrid& grid,
                                 const TrackerFactory& tracker_factory);

/// Sum per-video counts into an aggregate tensor (same gap set and grid).
void accumulate(MissRateTensor& into, const MissRateTensor& from);

/// gaps[i][j] = max{gamma : rate(gamma,i,j) <= tolerance}, defaulting to 1.
GapMatrix derive_gap_matrix(const MissRateTensor& tensor, double tolerance);

std::vector<GapMatrix> sweep_tolerances(const MissRateTensor& tensor, const std::vector<double>& tolerances);

void save_tensor(const MissRateTensor& tensor, const std::string& path);
MissRateTensor load_tensor(const std::string& path);
void save_gap_matrix(const GapMatrix& m, const std::string& path);
GapMatrix load_gap_matrix(const std::string& path);

} // namespace tiletrack
