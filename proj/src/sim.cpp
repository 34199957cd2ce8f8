#include "tiletrack/sim.hpp"

#include <set>

#include "tiletrack/io.hpp"
#include "tiletrack/parallel.hpp"

namespace tiletrack {

void Scenario::validate() const {
    if (n_frames < 1) throw std::invalid_argument("scenario: n_frames must be >= 1");
    if (fps <= 0) throw std::invalid_argument("scenario: fps must be positive");
    std::set<int> ids;
    for (const ObjectSpec& o : objects) {
        if (o.w < 1 || o.h < 1) throw std::invalid_argument("scenario: object size must be >= 1");
        if (o.waypoints.empty()) throw std::invalid_argument("scenario: object without waypoints");
        for (size_t i = 1; i < o.waypoints.size(); ++i)
            if (o.waypoints[i].frame <= o.waypoints[i - 1].frame)
                throw std::invalid_argument("scenario: waypoints must be strictly increasing in frame");
        if (!ids.insert(o.id).second) throw std::invalid_argument("scenario: duplicate object id");
    }
}

std::optional<std::pair<double, double>> object_position(const ObjectSpec& obj, int frame) {
    if (obj.waypoints.empty()) return std::nullopt;
    if (frame < obj.waypoints.front().frame || frame > obj.waypoints.back().frame) return std::nullopt;
    for (size_t i = 1; i < obj.waypoints.size(); ++i) {
        const auto& a = obj.waypoints[i - 1];
        const auto& b = obj.waypoints[i];
        if (frame > b.frame) continue;
        if (frame == a.frame) return {{a.x, a.y}};
        const double t = static_cast<double>(frame - a.frame) / (b.frame - a.frame);
        return {{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}};
    }
    const auto& last = obj.waypoints.back();
    return {{last.x, last.y}};
}

static uint8_t background_px(uint64_t seed, int x, int y) {
    return static_cast<uint8_t>(40 + splitmix64(seed ^ (static_cast<uint64_t>(x) << 21) ^ static_cast<uint64_t>(y)) % 24);
}

static uint8_t object_intensity(int id) {
    return static_cast<uint8_t>(140 + (static_cast<unsigned>(id) * 37u) % 100u);
}

/// Integer pixel box of an object at a frame, clipped to the frame rect.
static std::optional<Box> object_box(const Scenario& sc, const ObjectSpec& obj, int frame) {
    auto pos = object_position(obj, frame);
    if (!pos) return std::nullopt;
    const double x1 = static_cast<double>(std::lround(pos->first));
    const double y1 = static_cast<double>(std::lround(pos->second));
    Box b{x1, y1, x1 + obj.w, y1 + obj.h};
    b = intersect(b, Box{0, 0, static_cast<double>(sc.grid.frame_w), static_cast<double>(sc.grid.frame_h)});
    if (!b.valid()) return std::nullopt;
    return b;
}

FrameImage synthesize_frame(const Scenario& scenario, int frame) {
    if (frame < 1 || frame > scenario.n_frames)
        throw std::out_of_range("synthesize_frame: frame " + std::to_string(frame) + " out of range");
    FrameImage img;
    img.frame = frame;
    img.w = scenario.grid.frame_w;
    img.h = scenario.grid.frame_h;
    img.px.resize(static_cast<size_t>(img.w) * img.h);
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x)
            img.at(x, y) = background_px(scenario.seed, x, y);
    for (const ObjectSpec& obj : scenario.objects) {
        auto b = object_box(scenario, obj, frame);
        if (!b) continue;
        const uint8_t v = object_intensity(obj.id);
        for (int y = static_cast<int>(b->y1); y < static_cast<int>(b->y2); ++y)
            for (int x = static_cast<int>(b->x1); x < static_cast<int>(b->x2); ++x)
                img.at(x, y) = v;
    }
    return img;
}

std::vector<Detection> ground_truth_boxes(const Scenario& scenario, int frame) {
    std::vector<Detection> out;
    for (const ObjectSpec& obj : scenario.objects) {
        auto b = object_box(scenario, obj, frame);
        if (!b) continue;
        out.push_back(Detection{frame, *b, obj.id, 1.0});
    }
    return out;
}

ScoreMatrix oracle_relevance(const Scenario& scenario, int frame, const TileGrid& grid) {
    ScoreMatrix m;
    m.frame = frame;
    m.scores = Grid2D<double>(grid.rows, grid.cols, 0.0);
    const int ts = grid.tile_size;
    for (const Detection& d : ground_truth_boxes(scenario, frame)) {
        const int r0 = std::max(0, static_cast<int>(std::floor(d.box.y1 / ts)));
        const int r1 = std::min(grid.rows - 1, static_cast<int>(std::ceil(d.box.y2 / ts)) - 1);
        const int c0 = std::max(0, static_cast<int>(std::floor(d.box.x1 / ts)));
        const int c1 = std::min(grid.cols - 1, static_cast<int>(std::ceil(d.box.x2 / ts)) - 1);
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c)
                m.scores.at(r, c) = 1.0;
    }
    return m;
}

ScoreMatrix motion_relevance(const FrameImage& prev, const FrameImage& cur, const TileGrid& grid,
                             const Grid2D<double>& position_prior, uint64_t noise_seed) {
    if (prev.w != cur.w || prev.h != cur.h)
        throw std::invalid_argument("motion_relevance: frame dimensions differ");
    ScoreMatrix m;
    m.frame = cur.frame;
    m.scores = Grid2D<double>(grid.rows, grid.cols, 0.0);
    const int ts = grid.tile_size;
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            long long acc = 0;
            for (int y = r * ts; y < (r + 1) * ts; ++y)
                for (int x = c * ts; x < (c + 1) * ts; ++x)
                    acc += std::abs(static_cast<int>(cur.at(x, y)) - static_cast<int>(prev.at(x, y)));
            const double mad = static_cast<double>(acc) / (ts * ts);
            double score = mad / kMotionSaturation * position_prior.at(r, c);
            if (noise_seed != 0)
                score += 0.05 * hash01(noise_seed ^ static_cast<uint64_t>(cur.frame), r, c);
            m.scores.at(r, c) = clamp01(score);
        }
    }
    return m;
}

std::vector<FrameImage> synthesize_frames(const Scenario& scenario, const std::vector<int>& frames) {
    std::vector<FrameImage> out(frames.size());
    parallel_for(static_cast<int>(frames.size()),
                 [&](int i) { out[i] = synthesize_frame(scenario, frames[i]); });
    return out;
}

namespace serial {
std::vector<FrameImage> synthesize_frames(const Scenario& scenario, const std::vector<int>& frames) {
    std::vector<FrameImage> out(frames.size());
    for (size_t i = 0; i < frames.size(); ++i) out[i] = synthesize_frame(scenario, frames[i]);
    return out;
}
} // namespace serial

// ---------------------------------------------------------------------------
// Presets

namespace presets {

static TileGrid preset_grid(const PresetOptions& opt, int default_w, int default_h) {
    const int w = opt.frame_w > 0 ? opt.frame_w : default_w;
    const int h = opt.frame_h > 0 ? opt.frame_h : default_h;
    return build_grid(w, h, opt.tile_size);
}

Scenario highway(const PresetOptions& opt) {
    Scenario sc;
    sc.seed = opt.seed;
    sc.grid = preset_grid(opt, 128, 96);
    sc.n_frames = opt.n_frames;
    sc.fps = opt.fps;
    sc.preset = "highway";

    const double scale = sc.grid.frame_w / 128.0;
    const int box_w = std::max(10, sc.grid.frame_w / 8);
    const int box_h = std::max(8, sc.grid.frame_h / 8);
    const int lane_y[2] = {sc.grid.frame_h / 4, sc.grid.frame_h * 5 / 8};
    // Per-lane constant speeds, slow relative to the box width so a fresh
    // track still associates across a gap of 4 frames.
    const double lane_speed[2] = {std::max(0.75, (1 + splitmix64(sc.seed ^ 0xa1) % 2) * scale),
                                  std::max(0.75, (1 + splitmix64(sc.seed ^ 0xb2) % 2) * scale)};
    const double start_x = 2;
    const double end_x = sc.grid.frame_w - box_w - 2.0;
    const int spawn_gap = 24;

    int id = 1;
    for (int f0 = 1; f0 + 4 <= sc.n_frames; f0 += spawn_gap, ++id) {
        const int lane = (id - 1) % 2;
        const double speed = lane_speed[lane];
        const int travel = static_cast<int>((end_x - start_x) / speed);
        if (travel < 2) continue;
        ObjectSpec obj;
        obj.id = id;
        obj.w = box_w;
        obj.h = box_h;
        const int f1 = std::min(sc.n_frames, f0 + travel);
        obj.waypoints.push_back({f0, start_x, static_cast<double>(lane_y[lane])});
        obj.waypoints.push_back({f1, start_x + speed * (f1 - f0), static_cast<double>(lane_y[lane])});
        sc.objects.push_back(std::move(obj));
    }
    sc.validate();
    return sc;
}

Scenario intersection(const PresetOptions& opt) {
    Scenario sc;
    sc.seed = opt.seed;
    sc.grid = preset_grid(opt, 128, 96);
    sc.n_frames = opt.n_frames;
    sc.fps = opt.fps;
    sc.preset = "intersection";

    const double scale = sc.grid.frame_w / 128.0;
    const int box_w = std::max(8, sc.grid.frame_w / 9);
    const int box_h = std::max(6, sc.grid.frame_h / 9);
    const double road_y = sc.grid.frame_h * 5.0 / 12.0;
    const double start_x = 2;
    const double stop_x = sc.grid.frame_w / 2.0 - box_w - 1;
    const double end_x = sc.grid.frame_w - box_w - 2.0;
    const double exit_speed = std::max(1.0, 2 * scale);
    const int seg_frames = 3;
    const int spawn_gap = 26;

    int id = 1;
    for (int f0 = 1; f0 + 8 <= sc.n_frames; f0 += spawn_gap, ++id) {
        ObjectSpec obj;
        obj.id = id;
        obj.w = box_w;
        obj.h = box_h;
        int f = f0;
        double x = start_x;
        obj.waypoints.push_back({f, x, road_y});
        // Approach: alternating slow/fast segments until the stop line. The
        // first segment is slow so even a fresh track associates at the
        // native rate; the jumps between segments are what break
        // constant-velocity prediction across sampling gaps.
        for (int seg = 0; x < stop_x && f < sc.n_frames; ++seg) {
            const uint64_t h = splitmix64(sc.seed ^ (static_cast<uint64_t>(id) << 20) ^ seg);
            const double speed = (seg % 2 == 1 ? 6.0 + h % 2 : static_cast<double>(h % 2)) * scale;
            x = std::min(stop_x, x + speed * seg_frames);
            f += seg_frames;
            obj.waypoints.push_back({f, x, road_y});
        }
        if (x >= stop_x && f + 2 <= sc.n_frames) {
            f += 2; // brief dwell at the stop line
            obj.waypoints.push_back({f, stop_x, road_y});
            const int travel = static_cast<int>((end_x - stop_x) / exit_speed);
            const int f1 = std::min(sc.n_frames, f + travel);
            if (f1 > f) obj.waypoints.push_back({f1, stop_x + exit_speed * (f1 - f), road_y});
        }
        sc.objects.push_back(std::move(obj));
    }
    sc.validate();
    return sc;
}

Scenario sparse(const PresetOptions& opt) {
    Scenario sc;
    sc.seed = opt.seed;
    sc.grid = preset_grid(opt, 160, 128);
    sc.n_frames = opt.n_frames;
    sc.fps = opt.fps;
    sc.preset = "sparse";

    const int box_w = std::min(12, sc.grid.tile_size - 2);
    const int box_h = std::min(10, sc.grid.tile_size - 2);
    const double speed = 1.5;
    const double start_x = 2;
    const double end_x = sc.grid.frame_w - box_w - 2.0;
    const int travel = static_cast<int>((end_x - start_x) / speed);

    // One object on screen at a time keeps per-frame relevance low.
    int id = 1;
    for (int f0 = 1; f0 + 4 <= sc.n_frames; f0 += travel + 5, ++id) {
        ObjectSpec obj;
        obj.id = id;
        obj.w = box_w;
        obj.h = box_h;
        const int rows = sc.grid.rows;
        const double y = (1 + splitmix64(sc.seed ^ (id * 7919ULL)) % std::max(1, rows - 2)) *
                             static_cast<double>(sc.grid.tile_size) + 2;
        const int f1 = std::min(sc.n_frames, f0 + travel);
        obj.waypoints.push_back({f0, start_x, y});
        obj.waypoints.push_back({f1, start_x + speed * (f1 - f0), y});
        sc.objects.push_back(std::move(obj));
    }
    sc.validate();
    return sc;
}

Scenario by_name(const std::string& name, const PresetOptions& opt) {
    if (name == "highway") return highway(opt);
    if (name == "intersection") return intersection(opt);
    if (name == "sparse") return sparse(opt);
    throw std::invalid_argument("unknown preset: " + name);
}

IntersectionRegions intersection_regions(const TileGrid& grid) {
    // Link attributions land on the tile holding the box center, so the
    // regions cover the box-center row only. The column just before the
    // stop line is excluded from the approach set (objects there are nearly
    // stationary and easy to predict).
    const int box_w = std::max(8, grid.frame_w / 9);
    const int box_h = std::max(6, grid.frame_h / 9);
    const double center_y = grid.frame_h * 5.0 / 12.0 + box_h / 2.0;
    const int row = std::clamp(static_cast<int>(std::floor(center_y / grid.tile_size)), 0, grid.rows - 1);
    const double stop_center_x = grid.frame_w / 2.0 - box_w - 1 + box_w / 2.0;
    const int stop_col = static_cast<int>(std::floor(stop_center_x / grid.tile_size));
    IntersectionRegions regions;
    for (int c = 0; c < grid.cols; ++c) {
        if (c < stop_col)
            regions.approach.push_back({row, c});
        else if (c >= grid.cols / 2)
            regions.exit.push_back({row, c});
    }
    return regions;
}

} // namespace presets

// ---------------------------------------------------------------------------
// Scenario JSON

Scenario load_scenario(const std::string& path) {
    const nlohmann::json j = load_json(path);
    Scenario sc;
    sc.seed = j.at("seed").get<uint64_t>();
    sc.grid = build_grid(j.at("frame_w").get<int>(), j.at("frame_h").get<int>(), j.at("tile_size").get<int>());
    sc.n_frames = j.at("n_frames").get<int>();
    sc.fps = j.at("fps").get<double>();
    if (j.contains("preset")) sc.preset = j.at("preset").get<std::string>();
    for (const auto& jo : j.at("objects")) {
        ObjectSpec obj;
        obj.id = jo.at("id").get<int>();
        obj.w = jo.at("w").get<int>();
        obj.h = jo.at("h").get<int>();
        for (const auto& jw : jo.at("waypoints"))
            obj.waypoints.push_back({jw.at(0).get<int>(), jw.at(1).get<double>(), jw.at(2).get<double>()});
        sc.objects.push_back(std::move(obj));
    }
    sc.validate();
    return sc;
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    scenario.validate();
    nlohmann::json j;
    j["seed"] = scenario.seed;
    j["frame_w"] = scenario.grid.frame_w;
    j["frame_h"] = scenario.grid.frame_h;
    j["tile_size"] = scenario.grid.tile_size;
    j["n_frames"] = scenario.n_frames;
    j["fps"] = scenario.fps;
    if (!scenario.preset.empty()) j["preset"] = scenario.preset;
    j["objects"] = nlohmann::json::array();
    for (const ObjectSpec& obj : scenario.objects) {
        nlohmann::json jo;
        jo["id"] = obj.id;
        jo["w"] = obj.w;
        jo["h"] = obj.h;
        jo["waypoints"] = nlohmann::json::array();
        for (const auto& wp : obj.waypoints) jo["waypoints"].push_back({wp.frame, wp.x, wp.y});
        j["objects"].push_back(std::move(jo));
    }
    save_json(j, path);
}

} // namespace tiletrack
