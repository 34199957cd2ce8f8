#include "tiletrack/tracker.hpp"

#include <limits>
#include <map>
#include <sstream>

#include "tiletrack/io.hpp"

namespace tiletrack {

// ---------------------------------------------------------------------------
// Assignment

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Min-cost perfect matching on a square matrix, O(n^3) potentials method.
double square_matching_cost(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return 0;
    std::vector<double> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    double cost = 0;
    for (int j = 1; j <= n; ++j) cost += a[match[j] - 1][j - 1];
    return cost;
}

/// Min total cost over maximum matchings of the active rows x active cols
/// submatrix. Dummy cells padded with a constant larger than any real
/// matching difference, so maximum cardinality always wins.
double submatrix_matching_cost(const std::vector<std::vector<double>>& cost,
                               const std::vector<int>& rows, const std::vector<int>& cols) {
    const int nr = static_cast<int>(rows.size());
    const int nc = static_cast<int>(cols.size());
    const int k = std::min(nr, nc);
    if (k == 0) return 0;
    double lo = kInf, hi = -kInf;
    for (int r : rows)
        for (int c : cols) {
            lo = std::min(lo, cost[r][c]);
            hi = std::max(hi, cost[r][c]);
        }
    const int n = std::max(nr, nc);
    const double pad = (hi - lo + 1.0) * (n + 1);
    std::vector<std::vector<double>> a(n, std::vector<double>(n, pad));
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) a[i][j] = cost[rows[i]][cols[j]] - lo;
    const double total = square_matching_cost(a);
    return total - (n - k) * pad + k * lo;
}

} // namespace

AssignmentResult hungarian(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const int m = n == 0 ? 0 : static_cast<int>(cost[0].size());
    for (const auto& row : cost) {
        if (static_cast<int>(row.size()) != m) throw std::invalid_argument("hungarian: ragged matrix");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("hungarian: non-finite cost");
    }
    AssignmentResult res;
    res.row_to_col.assign(n, -1);
    if (n == 0 || m == 0) return res;

    const int k = std::min(n, m);
    std::vector<int> all_rows(n), active_cols(m);
    for (int i = 0; i < n; ++i) all_rows[i] = i;
    for (int j = 0; j < m; ++j) active_cols[j] = j;
    const double base = submatrix_matching_cost(cost, all_rows, active_cols);
    const double tol = 1e-9 * std::max(1.0, std::abs(base));

    // Fix rows in order, choosing the smallest column that preserves the
    // optimal total; a row goes unmatched only when no column does.
    double accum = 0;
    int matched = 0;
    for (int r = 0; r < n; ++r) {
        std::vector<int> rest_rows;
        for (int i = r + 1; i < n; ++i) rest_rows.push_back(i);
        int chosen = -1;
        for (size_t ci = 0; ci < active_cols.size(); ++ci) {
            const int c = active_cols[ci];
            const int need = k - matched - 1;
            if (need > static_cast<int>(rest_rows.size()) ||
                need > static_cast<int>(active_cols.size()) - 1)
                continue;
            std::vector<int> rest_cols;
            for (int cc : active_cols)
                if (cc != c) rest_cols.push_back(cc);
            const double rest = submatrix_matching_cost(cost, rest_rows, rest_cols);
            if (std::abs(accum + cost[r][c] + rest - base) <= tol) {
                chosen = c;
                accum += cost[r][c];
                ++matched;
                active_cols.erase(active_cols.begin() + ci);
                break;
            }
        }
        res.row_to_col[r] = chosen;
    }
    res.cost = base;
    return res;
}

// ---------------------------------------------------------------------------
// Kalman filter

namespace {

using namespace kalman_defaults;

constexpr int kNx = 7;

std::array<double, 4> box_to_z(const Box& b) {
    const double w = b.width(), h = b.height();
    return {b.center_x(), b.center_y(), w * h, w / h};
}

} // namespace

KalmanBox::KalmanBox(const Box& b) {
    const auto z = box_to_z(b);
    x_ = {z[0], z[1], z[2], z[3], 0, 0, 0};
    for (int i = 0; i < kNx; ++i)
        for (int j = 0; j < kNx; ++j) p_[i][j] = 0;
    for (int i = 0; i < 4; ++i) p_[i][i] = kInitPosVar;
    for (int i = 4; i < kNx; ++i) p_[i][i] = kInitVelVar;
}

void KalmanBox::predict() {
    if (x_[2] + x_[6] <= 0) x_[6] = 0; // keep predicted area positive
    // x = F x with F = I + shift of velocities onto positions.
    x_[0] += x_[4];
    x_[1] += x_[5];
    x_[2] += x_[6];
    // P = F P F^T + Q. F has ones at (0,4), (1,5), (2,6).
    std::array<std::array<double, 7>, 7> fp{};
    for (int i = 0; i < kNx; ++i)
        for (int j = 0; j < kNx; ++j) fp[i][j] = p_[i][j];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < kNx; ++j) fp[i][j] += p_[i + 4][j];
    std::array<std::array<double, 7>, 7> fpf{};
    for (int i = 0; i < kNx; ++i)
        for (int j = 0; j < kNx; ++j) fpf[i][j] = fp[i][j];
    for (int i = 0; i < kNx; ++i)
        for (int j = 0; j < 3; ++j) fpf[i][j] += fp[i][j + 4];
    p_ = fpf;
    for (int i = 0; i < 4; ++i) p_[i][i] += kProcessPosVar;
    for (int i = 0; i < 3; ++i) p_[i + 4][i + 4] += kProcessVelVar[i];
}

void KalmanBox::predict_steps(int steps) {
    for (int s = 0; s < steps; ++s) predict();
}

void KalmanBox::update(const Box& measurement) {
    const auto z = box_to_z(measurement);
    // Innovation y = z - H x; S = H P H^T + R; K = P H^T S^-1.
    double y[4];
    for (int i = 0; i < 4; ++i) y[i] = z[i] - x_[i];
    double s[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s[i][j] = p_[i][j] + (i == j ? kMeasVar[i] : 0.0);
    // Invert S (4x4) by Gauss-Jordan.
    double inv[4][8];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 8; ++j) inv[i][j] = j < 4 ? s[i][j] : (j - 4 == i ? 1.0 : 0.0);
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(inv[r][col]) > std::abs(inv[piv][col])) piv = r;
        for (int j = 0; j < 8; ++j) std::swap(inv[col][j], inv[piv][j]);
        const double d = inv[col][col];
        for (int j = 0; j < 8; ++j) inv[col][j] /= d;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = inv[r][col];
            for (int j = 0; j < 8; ++j) inv[r][j] -= f * inv[col][j];
        }
    }
    double kgain[kNx][4];
    for (int i = 0; i < kNx; ++i)
        for (int j = 0; j < 4; ++j) {
            double acc = 0;
            for (int l = 0; l < 4; ++l) acc += p_[i][l] * inv[l][j + 4];
            kgain[i][j] = acc;
        }
    for (int i = 0; i < kNx; ++i) {
        double acc = 0;
        for (int j = 0; j < 4; ++j) acc += kgain[i][j] * y[j];
        x_[i] += acc;
    }
    // P = (I - K H) P; K H affects the first four columns of the update.
    std::array<std::array<double, 7>, 7> np{};
    for (int i = 0; i < kNx; ++i)
        for (int j = 0; j < kNx; ++j) {
            double acc = p_[i][j];
            for (int l = 0; l < 4; ++l) acc -= kgain[i][l] * p_[l][j];
            np[i][j] = acc;
        }
    p_ = np;
}

Box KalmanBox::box() const {
    const double s = std::max(x_[2], 1e-6);
    const double r = std::max(x_[3], 1e-6);
    const double w = std::sqrt(s * r);
    const double h = s / w;
    return {x_[0] - w / 2, x_[1] - h / 2, x_[0] + w / 2, x_[1] + h / 2};
}

// ---------------------------------------------------------------------------
// SORT

SortTracker::SortTracker(const TrackerConfig& cfg) : cfg_(cfg) {
    if (cfg.max_age < 1 || cfg.min_hits < 1)
        throw std::invalid_argument("tracker config: max_age and min_hits must be >= 1");
}

std::vector<TrackRow> SortTracker::step(int frame, const std::vector<Detection>& detections) {
    if (frame <= last_frame_)
        throw std::invalid_argument("track_step: frame index must be strictly increasing");
    const int gap = last_frame_ < 0 ? 0 : frame - last_frame_;
    last_frame_ = frame;
    ++steps_;

    for (Entry& t : tracks_) t.kf.predict_steps(gap);

    const int nt = static_cast<int>(tracks_.size());
    const int nd = static_cast<int>(detections.size());
    std::vector<int> det_of_track(nt, -1);
    if (nt > 0 && nd > 0) {
        std::vector<std::vector<double>> cost(nt, std::vector<double>(nd));
        std::vector<std::vector<double>> sim(nt, std::vector<double>(nd));
        for (int i = 0; i < nt; ++i) {
            const Box pb = tracks_[i].kf.box();
            for (int j = 0; j < nd; ++j) {
                sim[i][j] = iou(pb, detections[j].box);
                cost[i][j] = 1.0 - sim[i][j];
            }
        }
        const AssignmentResult a = hungarian(cost);
        for (int i = 0; i < nt; ++i) {
            const int j = a.row_to_col[i];
            if (j >= 0 && sim[i][j] >= cfg_.iou_threshold) det_of_track[i] = j;
        }
    }

    std::vector<TrackRow> rows;
    std::vector<char> det_used(nd, 0);
    for (int i = 0; i < nt; ++i) {
        const int j = det_of_track[i];
        if (j < 0) continue;
        det_used[j] = 1;
        Entry& t = tracks_[i];
        t.kf.update(detections[j].box);
        t.last_update_frame = frame;
        ++t.hits;
        if (t.hits >= cfg_.min_hits || steps_ <= cfg_.min_hits)
            rows.push_back({frame, t.id, detections[j].box, j});
    }
    for (int j = 0; j < nd; ++j) {
        if (det_used[j]) continue;
        Entry t{next_id_++, KalmanBox(detections[j].box), frame, 1};
        if (t.hits >= cfg_.min_hits || steps_ <= cfg_.min_hits)
            rows.push_back({frame, t.id, detections[j].box, j});
        tracks_.push_back(std::move(t));
    }
    std::erase_if(tracks_, [&](const Entry& t) { return frame - t.last_update_frame > cfg_.max_age; });
    return rows;
}

TrackerFactory make_tracker_factory(const std::string& name) {
    if (name == "sort") {
        return [] { return std::make_unique<SortTracker>(TrackerConfig{}); };
    }
    if (name == "user") {
        // Stand-in for the user-provided slot: SORT with a looser gate and
        // longer memory.
        TrackerConfig cfg;
        cfg.max_age = 5;
        cfg.iou_threshold = 0.2;
        return [cfg] { return std::make_unique<SortTracker>(cfg); };
    }
    throw std::invalid_argument("unknown tracker: " + name);
}

std::vector<std::string> tracker_names() { return {"sort", "user"}; }

std::vector<Track> track_all(Tracker& tracker, const std::vector<std::vector<Detection>>& dets_by_frame,
                             const std::vector<int>& frames) {
    std::vector<TrackRow> rows;
    static const std::vector<Detection> kEmpty;
    for (int f : frames) {
        const auto& dets = f < static_cast<int>(dets_by_frame.size()) ? dets_by_frame[f] : kEmpty;
        auto emitted = tracker.step(f, dets);
        rows.insert(rows.end(), emitted.begin(), emitted.end());
    }
    return collect_tracks(rows);
}

std::vector<Track> collect_tracks(const std::vector<TrackRow>& rows) {
    std::map<int, Track> by_id;
    for (const TrackRow& r : rows) {
        Track& t = by_id[r.track_id];
        t.id = r.track_id;
        t.observations.push_back({r.frame, r.box, r.det_index});
    }
    std::vector<Track> out;
    for (auto& [id, t] : by_id) {
        std::sort(t.observations.begin(), t.observations.end(),
                  [](const TrackObservation& a, const TrackObservation& b) { return a.frame < b.frame; });
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Track> interpolate_tracks(const std::vector<Track>& tracks) {
    std::vector<Track> out;
    out.reserve(tracks.size());
    for (const Track& t : tracks) {
        Track filled;
        filled.id = t.id;
        for (size_t i = 0; i < t.observations.size(); ++i) {
            const TrackObservation& cur = t.observations[i];
            if (i > 0) {
                const TrackObservation& prev = t.observations[i - 1];
                for (int f = prev.frame + 1; f < cur.frame; ++f) {
                    const double u = static_cast<double>(f - prev.frame) / (cur.frame - prev.frame);
                    Box b{prev.box.x1 + u * (cur.box.x1 - prev.box.x1),
                          prev.box.y1 + u * (cur.box.y1 - prev.box.y1),
                          prev.box.x2 + u * (cur.box.x2 - prev.box.x2),
                          prev.box.y2 + u * (cur.box.y2 - prev.box.y2)};
                    filled.observations.push_back({f, b, -1});
                }
            }
            filled.observations.push_back(cur);
        }
        out.push_back(std::move(filled));
    }
    return out;
}

std::string tracks_to_csv(const std::vector<Track>& tracks) {
    std::vector<std::pair<std::pair<int, int>, const TrackObservation*>> keyed;
    for (const Track& t : tracks)
        for (const TrackObservation& o : t.observations) keyed.push_back({{o.frame, t.id}, &o});
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ostringstream out;
    out << "frame,track_id,x,y,w,h\n";
    for (const auto& [key, o] : keyed) {
        out << key.first << ',' << key.second << ',' << format_number(o->box.x1) << ','
            << format_number(o->box.y1) << ',' << format_number(o->box.width()) << ','
            << format_number(o->box.height()) << '\n';
    }
    return out.str();
}

std::vector<Track> tracks_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<TrackRow> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.rfind("frame", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        TrackRow r;
        double x, y, w, h;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf", &r.frame, &r.track_id, &x, &y, &w, &h) != 6)
            throw std::runtime_error("bad track CSV line: " + line);
        r.box = {x, y, x + w, y + h};
        rows.push_back(r);
    }
    return collect_tracks(rows);
}

void save_tracks_csv(const std::vector<Track>& tracks, const std::string& path) {
    atomic_write_text(path, tracks_to_csv(tracks));
}

std::vector<Track> load_tracks_csv(const std::string& path) { return tracks_from_csv(read_text(path)); }

} // namespace tiletrack
