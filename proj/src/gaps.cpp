#include "tiletrack/gaps.hpp"

#include <map>

#include "tiletrack/io.hpp"
#include "tiletrack/parallel.hpp"

namespace tiletrack {

void GapSet::validate() const {
    if (gammas.empty() || gammas.front() != 1)
        throw std::invalid_argument("gap set must contain 1 (native rate)");
    for (size_t i = 1; i < gammas.size(); ++i)
        if (gammas[i] <= gammas[i - 1])
            throw std::invalid_argument("gap set must be strictly increasing");
}

MissRateTensor measure_mistracks(const std::vector<Track>& reference_tracks,
                                 const std::vector<std::vector<Detection>>& dets_by_frame,
                                 const GapSet& gaps, const TileGrid& grid,
                                 const TrackerFactory& tracker_factory) {
    gaps.validate();
    const int n_frames = static_cast<int>(dets_by_frame.size()) - 1; // index 0 unused

    MissRateTensor tensor;
    tensor.gaps = gaps;
    tensor.total = Grid2D<long long>(grid.rows, grid.cols, 0);
    tensor.missed.assign(gaps.gammas.size(), Grid2D<long long>(grid.rows, grid.cols, 0));

    // Native consecutive-frame links define TotalA.
    for (const Track& t : reference_tracks) {
        for (size_t i = 1; i < t.observations.size(); ++i) {
            const TrackObservation& a = t.observations[i - 1];
            const TrackObservation& b = t.observations[i];
            if (b.frame != a.frame + 1) continue;
            const TilePos tile = tile_of_point(grid, b.box.center_x(), b.box.center_y());
            if (tensor.total.in_bounds(tile.row, tile.col)) ++tensor.total.at(tile);
        }
    }

    parallel_for(static_cast<int>(gaps.gammas.size()), [&](int gi) {
        const int gamma = gaps.gammas[gi];
        std::vector<int> frames;
        for (int f = 1; f <= n_frames; f += gamma) frames.push_back(f);

        // track id by (frame, det_index) in the gamma-run.
        auto tracker = tracker_factory();
        std::vector<std::vector<int>> run_id(dets_by_frame.size());
        for (size_t f = 0; f < dets_by_frame.size(); ++f) run_id[f].assign(dets_by_frame[f].size(), -1);
        for (int f : frames) {
            for (const TrackRow& row : tracker->step(f, dets_by_frame[f]))
                if (row.det_index >= 0) run_id[f][row.det_index] = row.track_id;
        }

        for (const Track& t : reference_tracks) {
            std::map<int, const TrackObservation*> by_frame;
            for (const TrackObservation& o : t.observations)
                if (o.det_index >= 0) by_frame[o.frame] = &o;
            for (int f = 1; f + gamma <= n_frames; f += gamma) {
                auto ia = by_frame.find(f);
                auto ib = by_frame.find(f + gamma);
                if (ia == by_frame.end() || ib == by_frame.end()) continue;
                const int id_a = run_id[f][ia->second->det_index];
                const int id_b = run_id[f + gamma][ib->second->det_index];
                if (id_a >= 0 && id_a == id_b) continue;
                const Box& b = ib->second->box;
                const TilePos tile = tile_of_point(grid, b.center_x(), b.center_y());
                if (tensor.missed[gi].in_bounds(tile.row, tile.col)) ++tensor.missed[gi].at(tile);
            }
        }
    });
    return tensor;
}

void accumulate(MissRateTensor& into, const MissRateTensor& from) {
    if (into.gaps.gammas != from.gaps.gammas || into.total.rows() != from.total.rows() ||
        into.total.cols() != from.total.cols())
        throw std::invalid_argument("tensor accumulate: gap set or grid mismatch");
    for (size_t i = 0; i < into.total.data().size(); ++i) into.total.data()[i] += from.total.data()[i];
    for (size_t g = 0; g < into.missed.size(); ++g)
        for (size_t i = 0; i < into.missed[g].data().size(); ++i)
            into.missed[g].data()[i] += from.missed[g].data()[i];
}

GapMatrix derive_gap_matrix(const MissRateTensor& tensor, double tolerance) {
    GapMatrix m;
    m.tolerance = tolerance;
    m.tracker = tensor.tracker;
    m.gaps = Grid2D<int>(tensor.total.rows(), tensor.total.cols(), 1);
    for (int r = 0; r < m.gaps.rows(); ++r) {
        for (int c = 0; c < m.gaps.cols(); ++c) {
            int best = 1;
            for (size_t gi = 0; gi < tensor.gaps.gammas.size(); ++gi)
                if (tensor.rate(static_cast<int>(gi), r, c) <= tolerance) best = std::max(best, tensor.gaps.gammas[gi]);
            m.gaps.at(r, c) = best;
        }
    }
    return m;
}

std::vector<GapMatrix> sweep_tolerances(const MissRateTensor& tensor, const std::vector<double>& tolerances) {
    std::vector<GapMatrix> out;
    out.reserve(tolerances.size());
    for (double t : tolerances) out.push_back(derive_gap_matrix(tensor, t));
    return out;
}

// ---------------------------------------------------------------------------
// Serialization: raw counts, so rates are recomputable bit-exactly.

static nlohmann::json grid_to_json(const Grid2D<long long>& g) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < g.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < g.cols(); ++c) row.push_back(g.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

static Grid2D<long long> grid_from_json(const nlohmann::json& j) {
    const int rows = static_cast<int>(j.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(j.at(0).size());
    Grid2D<long long> g(rows, cols, 0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g.at(r, c) = j.at(r).at(c).get<long long>();
    return g;
}

void save_tensor(const MissRateTensor& tensor, const std::string& path) {
    nlohmann::json j;
    j["tracker"] = tensor.tracker;
    if (!tensor.sources.empty()) j["sources"] = tensor.sources;
    j["gamma"] = tensor.gaps.gammas;
    j["h"] = tensor.total.rows();
    j["w"] = tensor.total.cols();
    j["total"] = grid_to_json(tensor.total);
    j["missed"] = nlohmann::json::array();
    for (const auto& g : tensor.missed) j["missed"].push_back(grid_to_json(g));
    save_json(j, path);
}

MissRateTensor load_tensor(const std::string& path) {
    const nlohmann::json j = load_json(path);
    MissRateTensor tensor;
    tensor.tracker = j.at("tracker").get<std::string>();
    if (j.contains("sources")) tensor.sources = j.at("sources").get<std::vector<std::string>>();
    tensor.gaps.gammas = j.at("gamma").get<std::vector<int>>();
    tensor.gaps.validate();
    tensor.total = grid_from_json(j.at("total"));
    for (const auto& g : j.at("missed")) tensor.missed.push_back(grid_from_json(g));
    if (tensor.missed.size() != tensor.gaps.gammas.size())
        throw std::runtime_error("tensor file: missed/gamma size mismatch");
    return tensor;
}

void save_gap_matrix(const GapMatrix& m, const std::string& path) {
    nlohmann::json j;
    j["tolerance"] = m.tolerance;
    j["tracker"] = m.tracker;
    j["h"] = m.gaps.rows();
    j["w"] = m.gaps.cols();
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.gaps.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.gaps.cols(); ++c) row.push_back(m.gaps.at(r, c));
        rows.push_back(std::move(row));
    }
    j["gaps"] = std::move(rows);
    save_json(j, path);
}

GapMatrix load_gap_matrix(const std::string& path) {
    const nlohmann::json j = load_json(path);
    GapMatrix m;
    m.tolerance = j.at("tolerance").get<double>();
    if (j.contains("tracker")) m.tracker = j.at("tracker").get<std::string>();
    const auto& rows = j.at("gaps");
    const int h = static_cast<int>(rows.size());
    const int w = h == 0 ? 0 : static_cast<int>(rows.at(0).size());
    m.gaps = Grid2D<int>(h, w, 1);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) m.gaps.at(r, c) = rows.at(r).at(c).get<int>();
    return m;
}

} // namespace tiletrack
