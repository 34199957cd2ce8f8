#include "tiletrack/detector.hpp"

namespace tiletrack {

std::vector<Detection> oracle_detect_canvas(const RenderedCanvas& canvas, const Scenario& scenario,
                                            const TileGrid& grid) {
    std::vector<Detection> out;
    const Canvas& c = canvas.canvas;
    for (size_t pi = 0; pi < c.placements.size(); ++pi) {
        const Placement& pl = c.placements[pi];
        const double dx = pl.dx_px(grid.tile_size);
        const double dy = pl.dy_px(grid.tile_size);
        const Box rendered = pl.poly.footprint.translated(dx, dy);
        for (const Detection& gt : ground_truth_boxes(scenario, pl.poly.base.frame)) {
            const Box moved = gt.box.translated(dx, dy);
            const TilePos center = tile_of_point(grid, moved.center_x(), moved.center_y());
            if (!c.owner.in_bounds(center.row, center.col)) continue;
            if (c.owner.at(center.row, center.col) != static_cast<int16_t>(pi)) continue;
            Detection d = gt;
            d.frame = -1; // canvas space
            d.box = intersect(moved, rendered);
            if (!d.box.valid()) continue;
            out.push_back(d);
        }
    }
    return out;
}

} // namespace tiletrack
