#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tiletrack/grid.hpp"
#include "tiletrack/sim.hpp"

namespace tiletrack {

/// A padded polyomino placed at a tile offset inside a canvas. The offset is
/// the canvas position of the occupancy bounding box's top-left tile.
struct Placement {
    PaddedPolyomino poly;
    int offset_row = 0;
    int offset_col = 0;

    int dx_px(int tile_size) const { return (offset_col - poly.occ_min.col) * tile_size; }
    int dy_px(int tile_size) const { return (offset_row - poly.occ_min.row) * tile_size; }
};

/// Frame-sized tile grid holding non-overlapping placements. owner maps each
/// tile to its placement index (-1 = free).
struct Canvas {
    int id = 0;
    int rows = 0, cols = 0;
    Grid2D<int16_t> owner;
    std::vector<Placement> placements;

    int occupied_tiles() const;
};

struct PackStats {
    long long cell_checks = 0; // canPlaceAt tile probes
};

/// First-fit-descending packing: polyominoes sorted by occupancy size
/// descending (ties by frame then index ascending), canvases scanned in
/// creation order, offsets row-major from (0,0); a polyomino that fits
/// nowhere opens a new canvas and lands at (0,0).
std::vector<Canvas> pack(const std::vector<PaddedPolyomino>& polyominoes, int rows, int cols,
                         PackStats* stats = nullptr);

/// Occupied canvas tile-cells over total canvas tile-cells.
double packing_efficacy(const std::vector<Canvas>& canvases);

struct RenderedCanvas {
    Canvas canvas;
    FrameImage image; // pixels outside all placements are zero
};

using FrameProvider = std::function<const FrameImage&(int frame)>;

/// Copy each placement's padded pixel footprint from its source frame into
/// the canvas at the placement's translated position.
RenderedCanvas render(const Canvas& canvas, const FrameProvider& frames, const TileGrid& grid);

std::vector<RenderedCanvas> render_canvases(const std::vector<Canvas>& canvases, const FrameProvider& frames,
                                            const TileGrid& grid);

namespace serial {
std::vector<RenderedCanvas> render_canvases(const std::vector<Canvas>& canvases, const FrameProvider& frames,
                                            const TileGrid& grid);
} // namespace serial

/// Map canvas-space detections back to frame coordinates: the placement
/// owning the box-center tile determines the source frame and the inverse
/// translation. Boxes centered on free tiles are dropped; outputs are
/// clipped to the frame rect.
std::vector<Detection> unpack(const std::vector<Detection>& detections, const Canvas& canvas,
                              const TileGrid& grid);

/// Canvas manifest: {canvas_id, placements:[{frame, poly_index, offset:[r,c]}]}.
void save_canvas_manifest(const std::vector<Canvas>& canvases, const std::string& path);

/// Raw 8-bit grayscale buffer with a JSON sidecar header (<path>.json).
void save_rendered_raw(const RenderedCanvas& rc, const std::string& path);

} // namespace tiletrack
