#include "tiletrack/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tiletrack/common.hpp"

namespace tiletrack {

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

void save_json(const nlohmann::json& j, const std::string& path, int indent) {
    atomic_write_text(path, j.dump(indent) + "\n");
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json polyomino_to_json(const Polyomino& p) {
    nlohmann::json j;
    j["frame"] = p.frame;
    j["tiles"] = nlohmann::json::array();
    for (const TilePos& t : p.tiles) j["tiles"].push_back({t.row, t.col});
    return j;
}

Polyomino polyomino_from_json(const nlohmann::json& j) {
    std::vector<TilePos> tiles;
    for (const auto& jt : j.at("tiles")) tiles.push_back({jt.at(0).get<int>(), jt.at(1).get<int>()});
    return make_polyomino(j.at("frame").get<int>(), std::move(tiles));
}

nlohmann::json mask_to_json(const RelevanceMask& mask) {
    nlohmann::json j;
    j["frame"] = mask.frame;
    j["h"] = mask.relevant.rows();
    j["w"] = mask.relevant.cols();
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < mask.relevant.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < mask.relevant.cols(); ++c) row.push_back(mask.relevant.at(r, c) ? 1 : 0);
        rows.push_back(std::move(row));
    }
    j["relevant"] = std::move(rows);
    return j;
}

RelevanceMask mask_from_json(const nlohmann::json& j) {
    RelevanceMask mask;
    mask.frame = j.at("frame").get<int>();
    const int h = j.at("h").get<int>();
    const int w = j.at("w").get<int>();
    mask.relevant = Grid2D<uint8_t>(h, w, 0);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            mask.relevant.at(r, c) = j.at("relevant").at(r).at(c).get<int>() ? 1 : 0;
    return mask;
}

std::string format_number(double v) {
    char buf[64];
    // Shortest representation that round-trips a double.
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double parsed = 0;
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        std::sscanf(buf, "%lf", &parsed);
        if (parsed == v) break;
    }
    return buf;
}

} // namespace tiletrack
