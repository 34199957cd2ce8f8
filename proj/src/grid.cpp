#include "tiletrack/grid.hpp"

#include <deque>
#include <set>

namespace tiletrack {

TileGrid build_grid(int frame_w, int frame_h, int tile_size) {
    if (frame_w < 1 || frame_h < 1 || tile_size < 1)
        throw std::invalid_argument("build_grid: dimensions and tile size must be >= 1");
    if (frame_w % tile_size != 0 || frame_h % tile_size != 0)
        throw std::invalid_argument("grid mismatch: frame " + std::to_string(frame_w) + "x" +
                                    std::to_string(frame_h) + " is not divisible by tile size " +
                                    std::to_string(tile_size));
    TileGrid g;
    g.frame_w = frame_w;
    g.frame_h = frame_h;
    g.tile_size = tile_size;
    g.cols = frame_w / tile_size;
    g.rows = frame_h / tile_size;
    return g;
}

TilePos tile_of_point(const TileGrid& grid, double x, double y) {
    return {static_cast<int>(std::floor(y / grid.tile_size)),
            static_cast<int>(std::floor(x / grid.tile_size))};
}

int RelevanceMask::count() const {
    int n = 0;
    for (uint8_t v : relevant.data()) n += v ? 1 : 0;
    return n;
}

RelevanceMask threshold_scores(const ScoreMatrix& scores, double threshold) {
    RelevanceMask mask;
    mask.frame = scores.frame;
    mask.relevant = Grid2D<uint8_t>(scores.scores.rows(), scores.scores.cols(), 0);
    for (int r = 0; r < scores.scores.rows(); ++r)
        for (int c = 0; c < scores.scores.cols(); ++c)
            mask.relevant.at(r, c) = scores.scores.at(r, c) >= threshold ? 1 : 0;
    return mask;
}

bool Polyomino::covers(TilePos p) const {
    return std::binary_search(tiles.begin(), tiles.end(), p);
}

static void finalize_shape(Polyomino& p) {
    std::sort(p.tiles.begin(), p.tiles.end());
    p.bbox_min = p.tiles.front();
    p.bbox_max = p.tiles.front();
    for (const TilePos& t : p.tiles) {
        p.bbox_min.row = std::min(p.bbox_min.row, t.row);
        p.bbox_min.col = std::min(p.bbox_min.col, t.col);
        p.bbox_max.row = std::max(p.bbox_max.row, t.row);
        p.bbox_max.col = std::max(p.bbox_max.col, t.col);
    }
    p.anchor = p.bbox_min;
}

Polyomino make_polyomino(int frame, std::vector<TilePos> tiles, int index) {
    if (tiles.empty()) throw std::invalid_argument("polyomino: empty tile set");
    Polyomino p;
    p.frame = frame;
    p.index = index;
    p.tiles = std::move(tiles);
    finalize_shape(p);
    for (size_t i = 1; i < p.tiles.size(); ++i)
        if (p.tiles[i] == p.tiles[i - 1]) throw std::invalid_argument("polyomino: duplicate tile");

    // 4-connectivity check via flood fill from the first tile.
    std::set<TilePos> pending(p.tiles.begin(), p.tiles.end());
    std::deque<TilePos> queue{*pending.begin()};
    pending.erase(pending.begin());
    while (!queue.empty()) {
        TilePos t = queue.front();
        queue.pop_front();
        const TilePos nbrs[4] = {{t.row - 1, t.col}, {t.row + 1, t.col}, {t.row, t.col - 1}, {t.row, t.col + 1}};
        for (const TilePos& n : nbrs) {
            auto it = pending.find(n);
            if (it != pending.end()) {
                queue.push_back(n);
                pending.erase(it);
            }
        }
    }
    if (!pending.empty()) throw std::invalid_argument("polyomino: tile set is not 4-connected");
    return p;
}

std::vector<Polyomino> extract_polyominoes(const RelevanceMask& mask) {
    const Grid2D<uint8_t>& m = mask.relevant;
    Grid2D<int> label(m.rows(), m.cols(), -1);
    std::vector<Polyomino> out;

    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            if (!m.at(r, c) || label.at(r, c) >= 0) continue;
            Polyomino p;
            p.frame = mask.frame;
            std::deque<TilePos> queue{{r, c}};
            label.at(r, c) = static_cast<int>(out.size());
            while (!queue.empty()) {
                TilePos t = queue.front();
                queue.pop_front();
                p.tiles.push_back(t);
                const TilePos nbrs[4] = {
                    {t.row - 1, t.col}, {t.row + 1, t.col}, {t.row, t.col - 1}, {t.row, t.col + 1}};
                for (const TilePos& n : nbrs) {
                    if (m.in_bounds(n.row, n.col) && m.at(n.row, n.col) && label.at(n.row, n.col) < 0) {
                        label.at(n.row, n.col) = static_cast<int>(out.size());
                        queue.push_back(n);
                    }
                }
            }
            finalize_shape(p);
            out.push_back(std::move(p));
        }
    }
    // Discovery order is row-major by first tile; re-sort by anchor, keeping
    // discovery order for equal anchors.
    std::stable_sort(out.begin(), out.end(), [](const Polyomino& a, const Polyomino& b) {
        return a.anchor < b.anchor;
    });
    for (size_t i = 0; i < out.size(); ++i) out[i].index = static_cast<int>(i);
    return out;
}

const char* to_string(PaddingMode p) {
    switch (p) {
        case PaddingMode::none: return "none";
        case PaddingMode::half_top_left: return "half-top-left";
        case PaddingMode::half_bottom_right: return "half-bottom-right";
        case PaddingMode::full: return "full";
    }
    return "none";
}

std::optional<PaddingMode> padding_from_string(const std::string& s) {
    if (s == "none") return PaddingMode::none;
    if (s == "half-top-left") return PaddingMode::half_top_left;
    if (s == "half-bottom-right") return PaddingMode::half_bottom_right;
    if (s == "full") return PaddingMode::full;
    return std::nullopt;
}

static void padding_margins(PaddingMode mode, int tile_size, int& top, int& left, int& bottom, int& right) {
    const int half = tile_size / 2;
    top = left = bottom = right = 0;
    switch (mode) {
        case PaddingMode::none: break;
        case PaddingMode::half_top_left:
            top = half;
            left = half;
            break;
        case PaddingMode::half_bottom_right:
            bottom = half;
            right = half;
            break;
        case PaddingMode::full:
            top = left = bottom = right = tile_size;
            break;
    }
}

Box PaddedPolyomino::tile_rect_padded(TilePos t, const TileGrid& grid) const {
    const double ts = grid.tile_size;
    Box r{t.col * ts - pad_left, t.row * ts - pad_top, (t.col + 1) * ts + pad_right, (t.row + 1) * ts + pad_bottom};
    return intersect(r, Box{0, 0, static_cast<double>(grid.frame_w), static_cast<double>(grid.frame_h)});
}

PaddedPolyomino pad_polyomino(const Polyomino& p, PaddingMode mode, const TileGrid& grid) {
    PaddedPolyomino padded;
    padded.base = p;
    padding_margins(mode, grid.tile_size, padded.pad_top, padded.pad_left, padded.pad_bottom, padded.pad_right);

    Grid2D<uint8_t> occ(grid.rows, grid.cols, 0);
    bool first = true;
    for (const TilePos& t : p.tiles) {
        Box r = padded.tile_rect_padded(t, grid);
        if (first) {
            padded.footprint = r;
            first = false;
        } else {
            padded.footprint.x1 = std::min(padded.footprint.x1, r.x1);
            padded.footprint.y1 = std::min(padded.footprint.y1, r.y1);
            padded.footprint.x2 = std::max(padded.footprint.x2, r.x2);
            padded.footprint.y2 = std::max(padded.footprint.y2, r.y2);
        }
        // Ceil-cover of the padded rect: every tile the rect overlaps with
        // positive area.
        const int ts = grid.tile_size;
        int r0 = static_cast<int>(std::floor(r.y1 / ts));
        int r1 = static_cast<int>(std::ceil(r.y2 / ts)) - 1;
        int c0 = static_cast<int>(std::floor(r.x1 / ts));
        int c1 = static_cast<int>(std::ceil(r.x2 / ts)) - 1;
        for (int rr = std::max(0, r0); rr <= std::min(grid.rows - 1, r1); ++rr)
            for (int cc = std::max(0, c0); cc <= std::min(grid.cols - 1, c1); ++cc)
                occ.at(rr, cc) = 1;
    }
    for (int r = 0; r < grid.rows; ++r)
        for (int c = 0; c < grid.cols; ++c)
            if (occ.at(r, c)) padded.occupancy.push_back({r, c});

    padded.occ_min = padded.occupancy.front();
    padded.occ_max = padded.occupancy.front();
    for (const TilePos& t : padded.occupancy) {
        padded.occ_min.row = std::min(padded.occ_min.row, t.row);
        padded.occ_min.col = std::min(padded.occ_min.col, t.col);
        padded.occ_max.row = std::max(padded.occ_max.row, t.row);
        padded.occ_max.col = std::max(padded.occ_max.col, t.col);
    }
    return padded;
}

double window_overhead(const Polyomino& p) {
    const double bbox_area = static_cast<double>(p.bbox_rows()) * p.bbox_cols();
    return (bbox_area - p.size()) / p.size();
}

} // namespace tiletrack
