#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tiletrack {

/// Tile coordinate on the frame grid (row-major).
struct TilePos {
    int row = 0;
    int col = 0;
    auto operator<=>(const TilePos&) const = default;
};

/// Dense row-major 2D array.
template <typename T>
class Grid2D {
public:
    Grid2D() = default;
    Grid2D(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Grid2D: negative dimensions");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool in_bounds(int r, int c) const { return r >= 0 && r < rows_ && c >= 0 && c < cols_; }

    T& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const T& at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
    T& at(TilePos p) { return at(p.row, p.col); }
    const T& at(TilePos p) const { return at(p.row, p.col); }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool operator==(const Grid2D&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

/// Axis-aligned pixel-space box, corners (x1,y1) top-left and (x2,y2) bottom-right.
struct Box {
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
    double center_x() const { return 0.5 * (x1 + x2); }
    double center_y() const { return 0.5 * (y1 + y2); }
    bool valid() const { return x1 < x2 && y1 < y2; }

    Box translated(double dx, double dy) const { return {x1 + dx, y1 + dy, x2 + dx, y2 + dy}; }

    bool operator==(const Box&) const = default;
};

inline Box intersect(const Box& a, const Box& b) {
    return {std::max(a.x1, b.x1), std::max(a.y1, b.y1), std::min(a.x2, b.x2), std::min(a.y2, b.y2)};
}

/// Intersection over union; 0 for disjoint or degenerate boxes.
inline double iou(const Box& a, const Box& b) {
    const Box inter = intersect(a, b);
    if (!inter.valid()) return 0.0;
    const double ia = inter.area();
    const double ua = a.area() + b.area() - ia;
    if (ua <= 0.0) return 0.0;
    return ia / ua;
}

/// One detector output (or ground-truth) box. object_id is set for ground
/// truth only; det_index identifies the box within its frame's detection list.
struct Detection {
    int frame = 0;
    Box box;
    int object_id = -1;
    double confidence = 1.0;
};

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic hash of three integers to [0,1).
inline double hash01(uint64_t a, uint64_t b, uint64_t c) {
    uint64_t h = splitmix64(a ^ splitmix64(b ^ splitmix64(c)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Shortest round-trippable decimal for CSV output; deterministic.
std::string format_number(double v);

} // namespace tiletrack
