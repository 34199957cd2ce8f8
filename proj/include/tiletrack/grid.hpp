#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tiletrack/common.hpp"

namespace tiletrack {

/// Frame-to-tile lattice. Frame dimensions must be exact multiples of the
/// tile size; non-divisible inputs are rejected rather than cropped.
struct TileGrid {
    int frame_w = 0;   // pixels
    int frame_h = 0;   // pixels
    int tile_size = 0; // pixels
    int cols = 0;      // frame_w / tile_size
    int rows = 0;      // frame_h / tile_size

    bool operator==(const TileGrid&) const = default;
};

TileGrid build_grid(int frame_w, int frame_h, int tile_size);

/// Tile containing a pixel-space point (floor convention on both axes).
TilePos tile_of_point(const TileGrid& grid, double x, double y);

/// Per-frame relevance scores, one value in [0,1] per tile.
struct ScoreMatrix {
    int frame = 0;
    Grid2D<double> scores;
};

/// Per-frame boolean relevance mask derived from a ScoreMatrix and threshold.
struct RelevanceMask {
    int frame = 0;
    Grid2D<uint8_t> relevant;

    int count() const;
};

/// Inclusive threshold: a tile is relevant iff score >= threshold.
RelevanceMask threshold_scores(const ScoreMatrix& scores, double threshold);

/// A maximal 4-connected set of relevant tiles within one frame.
struct Polyomino {
    int frame = 0;
    int index = 0;                // position within the frame's extraction order
    std::vector<TilePos> tiles;   // sorted row-major, pairwise distinct

    TilePos anchor;               // (min row, min col) over tiles
    TilePos bbox_min, bbox_max;   // inclusive tile-space bounding box

    int size() const { return static_cast<int>(tiles.size()); }
    int bbox_rows() const { return bbox_max.row - bbox_min.row + 1; }
    int bbox_cols() const { return bbox_max.col - bbox_min.col + 1; }
    bool covers(TilePos p) const;
};

/// Validates non-emptiness, distinctness and 4-connectivity.
Polyomino make_polyomino(int frame, std::vector<TilePos> tiles, int index = 0);

/// Connected-component decomposition of a mask (4-connectivity, diagonals do
/// not merge). Output is sorted by anchor row then anchor col; components
/// sharing an anchor keep row-major discovery order.
std::vector<Polyomino> extract_polyominoes(const RelevanceMask& mask);

/// Padding knob: a pixel margin added around every member tile before packing.
enum class PaddingMode {
    none,             // 0
    half_top_left,    // 0.5 tile on top and left
    half_bottom_right,// 0.5 tile on bottom and right
    full,             // 1 tile on all four sides
};

const char* to_string(PaddingMode p);
std::optional<PaddingMode> padding_from_string(const std::string& s);

/// A polyomino plus its padded pixel footprint. The tile occupancy is the
/// ceil-cover of the footprint and is what the packer places; the footprint
/// is what rendering copies.
struct PaddedPolyomino {
    Polyomino base;
    std::vector<TilePos> occupancy;      // superset of base.tiles, sorted row-major
    int pad_top = 0, pad_left = 0;       // pixel margins before clipping
    int pad_bottom = 0, pad_right = 0;
    TilePos occ_min, occ_max;            // occupancy bounding box (inclusive)
    Box footprint;                       // padded pixel footprint bbox, clipped to frame

    int occ_rows() const { return occ_max.row - occ_min.row + 1; }
    int occ_cols() const { return occ_max.col - occ_min.col + 1; }
    int occ_size() const { return static_cast<int>(occupancy.size()); }

    /// Padded pixel rect of one member tile, clipped to frame bounds.
    Box tile_rect_padded(TilePos t, const TileGrid& grid) const;
};

PaddedPolyomino pad_polyomino(const Polyomino& p, PaddingMode mode, const TileGrid& grid);

/// (bbox area - |p|) / |p|: the extra fraction an axis-aligned window carries.
double window_overhead(const Polyomino& p);

} // namespace tiletrack
