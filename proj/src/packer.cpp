#include "tiletrack/packer.hpp"

#include "tiletrack/io.hpp"
#include "tiletrack/parallel.hpp"

namespace tiletrack {

int Canvas::occupied_tiles() const {
    int n = 0;
    for (int16_t v : owner.data()) n += v >= 0 ? 1 : 0;
    return n;
}

namespace {

bool can_place_at(const PaddedPolyomino& p, const Canvas& c, int i, int j, PackStats* stats) {
    for (const TilePos& t : p.occupancy) {
        if (stats) ++stats->cell_checks;
        if (c.owner.at(i + t.row - p.occ_min.row, j + t.col - p.occ_min.col) >= 0) return false;
    }
    return true;
}

/// Row-major scan for the first fitting offset; (-1,-1) when none fits.
std::pair<int, int> try_place(const PaddedPolyomino& p, const Canvas& c, PackStats* stats) {
    for (int i = 0; i + p.occ_rows() <= c.rows; ++i)
        for (int j = 0; j + p.occ_cols() <= c.cols; ++j)
            if (can_place_at(p, c, i, j, stats)) return {i, j};
    return {-1, -1};
}

void mark_placement(Canvas& c, const PaddedPolyomino& p, int i, int j) {
    const auto idx = static_cast<int16_t>(c.placements.size());
    for (const TilePos& t : p.occupancy)
        c.owner.at(i + t.row - p.occ_min.row, j + t.col - p.occ_min.col) = idx;
    c.placements.push_back({p, i, j});
}

} // namespace

std::vector<Canvas> pack(const std::vector<PaddedPolyomino>& polyominoes, int rows, int cols,
                         PackStats* stats) {
    for (const PaddedPolyomino& p : polyominoes)
        if (p.occ_rows() > rows || p.occ_cols() > cols)
            throw std::invalid_argument("pack: polyomino bounding box exceeds canvas");

    std::vector<const PaddedPolyomino*> order;
    order.reserve(polyominoes.size());
    for (const PaddedPolyomino& p : polyominoes) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const PaddedPolyomino* a, const PaddedPolyomino* b) {
        if (a->occ_size() != b->occ_size()) return a->occ_size() > b->occ_size();
        if (a->base.frame != b->base.frame) return a->base.frame < b->base.frame;
        return a->base.index < b->base.index;
    });

    std::vector<Canvas> canvases;
    for (const PaddedPolyomino* p : order) {
        bool placed = false;
        for (Canvas& c : canvases) {
            const auto [i, j] = try_place(*p, c, stats);
            if (i >= 0) {
                mark_placement(c, *p, i, j);
                placed = true;
                break;
            }
        }
        if (!placed) {
            Canvas c;
            c.id = static_cast<int>(canvases.size());
            c.rows = rows;
            c.cols = cols;
            c.owner = Grid2D<int16_t>(rows, cols, -1);
            mark_placement(c, *p, 0, 0);
            canvases.push_back(std::move(c));
        }
    }
    return canvases;
}

double packing_efficacy(const std::vector<Canvas>& canvases) {
    if (canvases.empty()) throw std::invalid_argument("packing_efficacy: no canvases");
    long long occupied = 0, total = 0;
    for (const Canvas& c : canvases) {
        occupied += c.occupied_tiles();
        total += static_cast<long long>(c.rows) * c.cols;
    }
    return static_cast<double>(occupied) / static_cast<double>(total);
}

RenderedCanvas render(const Canvas& canvas, const FrameProvider& frames, const TileGrid& grid) {
    RenderedCanvas rc;
    rc.canvas = canvas;
    rc.image.frame = -1;
    rc.image.w = grid.frame_w;
    rc.image.h = grid.frame_h;
    rc.image.px.assign(static_cast<size_t>(grid.frame_w) * grid.frame_h, 0);
    for (const Placement& pl : canvas.placements) {
        const FrameImage& src = frames(pl.poly.base.frame);
        const int dx = pl.dx_px(grid.tile_size);
        const int dy = pl.dy_px(grid.tile_size);
        for (const TilePos& t : pl.poly.base.tiles) {
            const Box r = pl.poly.tile_rect_padded(t, grid);
            for (int y = static_cast<int>(r.y1); y < static_cast<int>(r.y2); ++y)
                for (int x = static_cast<int>(r.x1); x < static_cast<int>(r.x2); ++x)
                    rc.image.at(x + dx, y + dy) = src.at(x, y);
        }
    }
    return rc;
}

std::vector<RenderedCanvas> render_canvases(const std::vector<Canvas>& canvases, const FrameProvider& frames,
                                            const TileGrid& grid) {
    std::vector<RenderedCanvas> out(canvases.size());
    parallel_for(static_cast<int>(canvases.size()), [&](int i) { out[i] = render(canvases[i], frames, grid); });
    return out;
}

namespace serial {
std::vector<RenderedCanvas> render_canvases(const std::vector<Canvas>& canvases, const FrameProvider& frames,
                                            const TileGrid& grid) {
    std::vector<RenderedCanvas> out(canvases.size());
    for (size_t i = 0; i < canvases.size(); ++i) out[i] = render(canvases[i], frames, grid);
    return out;
}
} // namespace serial

std::vector<Detection> unpack(const std::vector<Detection>& detections, const Canvas& canvas,
                              const TileGrid& grid) {
    std::vector<Detection> out;
    const Box frame_rect{0, 0, static_cast<double>(grid.frame_w), static_cast<double>(grid.frame_h)};
    for (const Detection& d : detections) {
        const TilePos center = tile_of_point(grid, d.box.center_x(), d.box.center_y());
        if (!canvas.owner.in_bounds(center.row, center.col)) continue;
        const int16_t idx = canvas.owner.at(center.row, center.col);
        if (idx < 0) continue; // center on empty canvas area
        const Placement& pl = canvas.placements[idx];
        const double dx = pl.dx_px(grid.tile_size);
        const double dy = pl.dy_px(grid.tile_size);
        Detection mapped = d;
        mapped.frame = pl.poly.base.frame;
        mapped.box = intersect(d.box.translated(-dx, -dy), frame_rect);
        if (!mapped.box.valid()) continue;
        out.push_back(mapped);
    }
    return out;
}

void save_canvas_manifest(const std::vector<Canvas>& canvases, const std::string& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const Canvas& c : canvases) {
        nlohmann::json jc;
        jc["canvas_id"] = c.id;
        jc["placements"] = nlohmann::json::array();
        for (const Placement& pl : c.placements) {
            nlohmann::json jp;
            jp["frame"] = pl.poly.base.frame;
            jp["poly_index"] = pl.poly.base.index;
            jp["offset"] = {pl.offset_row, pl.offset_col};
            jc["placements"].push_back(std::move(jp));
        }
        j.push_back(std::move(jc));
    }
    save_json(j, path);
}

void save_rendered_raw(const RenderedCanvas& rc, const std::string& path) {
    atomic_write_text(path, std::string(reinterpret_cast<const char*>(rc.image.px.data()), rc.image.px.size()));
    nlohmann::json j;
    j["canvas_id"] = rc.canvas.id;
    j["width"] = rc.image.w;
    j["height"] = rc.image.h;
    j["format"] = "gray8";
    save_json(j, path + ".json");
}

} // namespace tiletrack
