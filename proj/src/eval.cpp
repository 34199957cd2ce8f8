#include "tiletrack/eval.hpp"

#include <map>
#include <sstream>
#include <unordered_map>

#include "tiletrack/io.hpp"
#include "tiletrack/parallel.hpp"

namespace tiletrack {

// ---------------------------------------------------------------------------
// HOTA

namespace {

struct FrameEntry {
    std::vector<int> ids; // dense ids
    std::vector<Box> boxes;
};

std::vector<FrameEntry> index_tracks(const std::vector<Track>& tracks, int min_frame, int max_frame,
                                     std::map<int, int>& dense) {
    std::vector<FrameEntry> by_frame(max_frame - min_frame + 1);
    for (const Track& t : tracks) {
        if (!dense.count(t.id)) {
            const int next = static_cast<int>(dense.size());
            dense[t.id] = next;
        }
        for (const TrackObservation& o : t.observations) {
            FrameEntry& e = by_frame[o.frame - min_frame];
            e.ids.push_back(dense[t.id]);
            e.boxes.push_back(o.box);
        }
    }
    return by_frame;
}

} // namespace

HotaScore hota(const std::vector<Track>& predicted_in, const std::vector<Track>& reference_in) {
    const std::vector<Track> reference = interpolate_tracks(reference_in);
    const std::vector<Track> predicted = interpolate_tracks(predicted_in);

    bool seeded = false;
    int min_frame = 0, max_frame = 0;
    for (const auto* set : {&reference, &predicted}) {
        for (const Track& t : *set) {
            if (t.observations.empty()) continue;
            if (!seeded) {
                min_frame = t.observations.front().frame;
                max_frame = t.observations.back().frame;
                seeded = true;
            }
            min_frame = std::min(min_frame, t.observations.front().frame);
            max_frame = std::max(max_frame, t.observations.back().frame);
        }
    }
    bool reference_has_obs = false;
    for (const Track& t : reference)
        if (!t.observations.empty()) reference_has_obs = true;
    if (!reference_has_obs) throw std::invalid_argument("hota: empty reference");

    std::map<int, int> ref_dense, pred_dense;
    const auto ref_frames = index_tracks(reference, min_frame, max_frame, ref_dense);
    const auto pred_frames = index_tracks(predicted, min_frame, max_frame, pred_dense);
    const int n_ref = static_cast<int>(ref_dense.size());
    const int n_pred = static_cast<int>(pred_dense.size());

    std::vector<long long> ref_count(n_ref, 0), pred_count(n_pred, 0);
    std::vector<std::vector<double>> potential(n_ref, std::vector<double>(n_pred, 0.0));

    // Global alignment pass.
    std::vector<std::vector<std::vector<double>>> sims(ref_frames.size());
    for (size_t fi = 0; fi < ref_frames.size(); ++fi) {
        const FrameEntry& rf = ref_frames[fi];
        const FrameEntry& pf = pred_frames[fi];
        for (int g : rf.ids) ++ref_count[g];
        for (int p : pf.ids) ++pred_count[p];
        auto& sim = sims[fi];
        sim.assign(rf.ids.size(), std::vector<double>(pf.ids.size(), 0.0));
        if (rf.ids.empty() || pf.ids.empty()) continue;
        std::vector<double> row_sum(rf.ids.size(), 0.0), col_sum(pf.ids.size(), 0.0);
        for (size_t i = 0; i < rf.ids.size(); ++i)
            for (size_t j = 0; j < pf.ids.size(); ++j) {
                sim[i][j] = iou(rf.boxes[i], pf.boxes[j]);
                row_sum[i] += sim[i][j];
                col_sum[j] += sim[i][j];
            }
        for (size_t i = 0; i < rf.ids.size(); ++i)
            for (size_t j = 0; j < pf.ids.size(); ++j) {
                const double denom = row_sum[i] + col_sum[j] - sim[i][j];
                if (denom > 1e-12) potential[rf.ids[i]][pf.ids[j]] += sim[i][j] / denom;
            }
    }
    std::vector<std::vector<double>> alignment(n_ref, std::vector<double>(n_pred, 0.0));
    for (int g = 0; g < n_ref; ++g)
        for (int p = 0; p < n_pred; ++p) {
            const double denom = ref_count[g] + pred_count[p] - potential[g][p];
            if (denom > 1e-12) alignment[g][p] = potential[g][p] / denom;
        }

    HotaScore score;
    for (int a = 1; a <= 19; ++a) score.alphas.push_back(a * 0.05);
    const int n_alpha = static_cast<int>(score.alphas.size());

    std::vector<long long> tp(n_alpha, 0), fn(n_alpha, 0), fp(n_alpha, 0);
    std::vector<std::map<std::pair<int, int>, long long>> match_counts(n_alpha);

    for (size_t fi = 0; fi < ref_frames.size(); ++fi) {
        const FrameEntry& rf = ref_frames[fi];
        const FrameEntry& pf = pred_frames[fi];
        const auto& sim = sims[fi];
        const int nr = static_cast<int>(rf.ids.size());
        const int np = static_cast<int>(pf.ids.size());
        if (nr == 0 || np == 0) {
            for (int a = 0; a < n_alpha; ++a) {
                fn[a] += nr;
                fp[a] += np;
            }
            continue;
        }
        std::vector<std::vector<double>> cost(nr, std::vector<double>(np));
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < np; ++j) cost[i][j] = -(alignment[rf.ids[i]][pf.ids[j]] * sim[i][j]);
        const AssignmentResult assign = hungarian(cost);
        for (int a = 0; a < n_alpha; ++a) {
            const double alpha = score.alphas[a];
            int matched = 0;
            for (int i = 0; i < nr; ++i) {
                const int j = assign.row_to_col[i];
                if (j < 0 || sim[i][j] < alpha - 1e-12) continue;
                ++matched;
                ++match_counts[a][{rf.ids[i], pf.ids[j]}];
            }
            tp[a] += matched;
            fn[a] += nr - matched;
            fp[a] += np - matched;
        }
    }

    for (int a = 0; a < n_alpha; ++a) {
        const double det =
            tp[a] + fn[a] + fp[a] > 0 ? static_cast<double>(tp[a]) / (tp[a] + fn[a] + fp[a]) : 0.0;
        double ass = 0.0;
        if (tp[a] > 0) {
            double acc = 0.0;
            for (const auto& [pair, count] : match_counts[a]) {
                const auto [g, p] = pair;
                const double tpa = static_cast<double>(count);
                const double fna = ref_count[g] - tpa;
                const double fpa = pred_count[p] - tpa;
                acc += tpa / (tpa + fna + fpa) * count;
            }
            ass = acc / tp[a];
        }
        score.det_alpha.push_back(det);
        score.ass_alpha.push_back(ass);
        score.hota_alpha.push_back(std::sqrt(det * ass));
    }
    for (int a = 0; a < n_alpha; ++a) {
        score.hota += score.hota_alpha[a];
        score.det_a += score.det_alpha[a];
        score.ass_a += score.ass_alpha[a];
    }
    score.hota /= n_alpha;
    score.det_a /= n_alpha;
    score.ass_a /= n_alpha;
    return score;
}

// ---------------------------------------------------------------------------
// Observation statistics

ObservationStats observation_stats(const Scenario& video) {
    video.validate();
    const TileGrid& grid = video.grid;
    ObservationStats stats;
    stats.relevance_pct = Grid2D<double>(grid.rows, grid.cols, 0.0);

    Grid2D<long long> counts(grid.rows, grid.cols, 0);
    double overhead_sum = 0;
    for (int f = 1; f <= video.n_frames; ++f) {
        const ScoreMatrix m = oracle_relevance(video, f, grid);
        for (int r = 0; r < grid.rows; ++r)
            for (int c = 0; c < grid.cols; ++c)
                if (m.scores.at(r, c) > 0) ++counts.at(r, c);
        for (const Polyomino& p : extract_polyominoes(threshold_scores(m, 0.5))) {
            overhead_sum += window_overhead(p);
            ++stats.polyomino_count;
        }
    }
    double pct_sum = 0;
    for (int r = 0; r < grid.rows; ++r)
        for (int c = 0; c < grid.cols; ++c) {
            const double pct = 100.0 * counts.at(r, c) / video.n_frames;
            stats.relevance_pct.at(r, c) = pct;
            pct_sum += pct;
        }
    stats.mean_relevance_pct = pct_sum / (grid.rows * grid.cols);
    stats.mean_window_overhead = stats.polyomino_count > 0 ? overhead_sum / stats.polyomino_count : 0.0;
    return stats;
}

// ---------------------------------------------------------------------------
// Configuration sweep

namespace {

std::string config_key(const Config& c) {
    std::ostringstream os;
    os << "s=" << c.sampling_rate << ",T_r=" << c.relevance_threshold << ",M_bar=";
    if (c.mistrack_tolerance)
        os << *c.mistrack_tolerance;
    else
        os << "none";
    os << ",P=" << to_string(c.padding) << ",A=" << c.tracker;
    return os.str();
}

} // namespace

SweepResult sweep(const Scenario& validation, const std::map<std::string, MissRateTensor>& tensors,
                  const SweepOptions& options) {
    SweepResult result;
    result.reference_tracks = reference_run(validation, options.reference_tracker).tracks;

    std::vector<Config> configs;
    for (int s : options.s_values)
        for (double tr : options.thresholds)
            for (const auto& tol : options.tolerances)
                for (PaddingMode pad : options.paddings)
                    for (const std::string& tracker : options.trackers) {
                        Config c;
                        c.sampling_rate = s;
                        c.relevance_threshold = tr;
                        c.mistrack_tolerance = tol;
                        c.padding = pad;
                        c.tracker = tracker;
                        c.window_frames = options.window_frames;
                        c.gammas = options.gammas;
                        c.scorer = options.scorer;
                        if (std::find(configs.begin(), configs.end(), c) == configs.end())
                            configs.push_back(c);
                    }

    // Gap matrices per (tracker, tolerance), derived once.
    std::map<std::pair<std::string, double>, GapMatrix> gap_cache;
    for (const Config& c : configs) {
        if (!c.mistrack_tolerance) continue;
        const auto key = std::make_pair(c.tracker, *c.mistrack_tolerance);
        if (gap_cache.count(key)) continue;
        auto it = tensors.find(c.tracker);
        if (it == tensors.end())
            throw std::invalid_argument("sweep: no mistrack tensor for tracker option '" + c.tracker + "'");
        gap_cache[key] = derive_gap_matrix(it->second, *c.mistrack_tolerance);
    }

    result.points.resize(configs.size());
    parallel_for(static_cast<int>(configs.size()), [&](int i) {
        const Config& c = configs[i];
        const GapMatrix* gaps = nullptr;
        if (c.mistrack_tolerance) gaps = &gap_cache.at({c.tracker, *c.mistrack_tolerance});
        const RunReport report = run(validation, c, gaps);
        OperatingPoint& point = result.points[i];
        point.config = c;
        point.throughput_fps = report.throughput_fps;
        point.detector_calls = report.detector_calls;
        point.hota = hota(report.tracks, result.reference_tracks).hota;
    });
    return result;
}

std::vector<OperatingPoint> pareto(const std::vector<OperatingPoint>& points) {
    std::vector<OperatingPoint> frontier;
    for (const OperatingPoint& p : points) {
        bool dominated = false;
        for (const OperatingPoint& q : points) {
            if (&q == &p) continue;
            if (q.throughput_fps >= p.throughput_fps && q.hota >= p.hota &&
                (q.throughput_fps > p.throughput_fps || q.hota > p.hota)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) frontier.push_back(p);
    }
    std::sort(frontier.begin(), frontier.end(), [](const OperatingPoint& a, const OperatingPoint& b) {
        if (a.throughput_fps != b.throughput_fps) return a.throughput_fps < b.throughput_fps;
        if (a.hota != b.hota) return a.hota < b.hota;
        return config_key(a.config) < config_key(b.config);
    });
    return frontier;
}

std::optional<OperatingPoint> select(const std::vector<OperatingPoint>& frontier, SelectMode mode,
                                     double value, double reference_accuracy) {
    std::optional<OperatingPoint> best;
    for (const OperatingPoint& p : frontier) {
        if (mode == SelectMode::min_throughput) {
            if (p.throughput_fps < value) continue;
            if (!best || p.hota > best->hota ||
                (p.hota == best->hota && p.throughput_fps > best->throughput_fps))
                best = p;
        } else {
            if (p.hota < (1.0 - value) * reference_accuracy) continue;
            if (!best || p.throughput_fps > best->throughput_fps ||
                (p.throughput_fps == best->throughput_fps && p.hota > best->hota))
                best = p;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// File formats

nlohmann::json config_to_json(const Config& cfg) {
    nlohmann::json j;
    j["s"] = cfg.sampling_rate;
    j["T_r"] = cfg.relevance_threshold;
    if (cfg.mistrack_tolerance)
        j["M_bar"] = *cfg.mistrack_tolerance;
    else
        j["M_bar"] = "none";
    j["padding"] = to_string(cfg.padding);
    j["tracker"] = cfg.tracker;
    j["window_N"] = cfg.window_frames;
    j["gamma"] = cfg.gammas.gammas;
    j["scorer"] = to_string(cfg.scorer);
    return j;
}

Config config_from_json(const nlohmann::json& j) {
    Config cfg;
    cfg.sampling_rate = j.at("s").get<int>();
    cfg.relevance_threshold = j.at("T_r").get<double>();
    if (j.contains("M_bar") && !j.at("M_bar").is_string()) cfg.mistrack_tolerance = j.at("M_bar").get<double>();
    if (j.contains("padding")) {
        auto p = padding_from_string(j.at("padding").get<std::string>());
        if (!p) throw std::invalid_argument("config: bad padding value");
        cfg.padding = *p;
    }
    if (j.contains("tracker")) cfg.tracker = j.at("tracker").get<std::string>();
    if (j.contains("window_N")) cfg.window_frames = j.at("window_N").get<int>();
    if (j.contains("gamma")) cfg.gammas.gammas = j.at("gamma").get<std::vector<int>>();
    if (j.contains("scorer")) {
        auto s = scorer_from_string(j.at("scorer").get<std::string>());
        if (!s) throw std::invalid_argument("config: bad scorer value");
        cfg.scorer = *s;
    }
    cfg.validate();
    return cfg;
}

nlohmann::json report_to_json(const RunReport& report, const Config* cfg) {
    nlohmann::json j;
    j["n_frames"] = report.n_frames;
    j["n_retained"] = report.n_retained;
    j["detector_calls"] = report.detector_calls;
    j["tiles_total"] = report.tiles_total;
    j["tiles_selected"] = report.tiles_selected;
    j["pruning_ratio"] = report.pruning_ratio();
    j["packing_efficacy"] = report.packing_efficacy;
    j["throughput_fps"] = report.throughput_fps;
    j["non_optimal_windows"] = report.non_optimal_windows;
    j["stage_ms"] = {{"classify", report.stage_ms.classify_ms}, {"prune", report.stage_ms.prune_ms},
                     {"pack", report.stage_ms.pack_ms},         {"render", report.stage_ms.render_ms},
                     {"detect", report.stage_ms.detect_ms},     {"track", report.stage_ms.track_ms}};
    if (cfg) j["config"] = config_to_json(*cfg);
    return j;
}

nlohmann::json hota_to_json(const HotaScore& score) {
    nlohmann::json j;
    j["hota"] = score.hota;
    j["det_a"] = score.det_a;
    j["ass_a"] = score.ass_a;
    j["alphas"] = score.alphas;
    j["hota_alpha"] = score.hota_alpha;
    j["det_alpha"] = score.det_alpha;
    j["ass_alpha"] = score.ass_alpha;
    return j;
}

static nlohmann::json point_to_json(const OperatingPoint& p) {
    nlohmann::json j;
    j["config"] = config_to_json(p.config);
    j["throughput_fps"] = p.throughput_fps;
    j["hota"] = p.hota;
    j["detector_calls"] = p.detector_calls;
    return j;
}

void save_sweep(const SweepResult& result, const std::string& path, const nlohmann::json& metadata) {
    nlohmann::json j = metadata.is_object() ? metadata : nlohmann::json::object();
    j["points"] = nlohmann::json::array();
    for (const OperatingPoint& p : result.points) j["points"].push_back(point_to_json(p));
    save_json(j, path);
}

std::vector<OperatingPoint> load_sweep_points(const std::string& path) {
    const nlohmann::json j = load_json(path);
    std::vector<OperatingPoint> points;
    for (const auto& jp : j.at("points")) {
        OperatingPoint p;
        p.config = config_from_json(jp.at("config"));
        p.throughput_fps = jp.at("throughput_fps").get<double>();
        p.hota = jp.at("hota").get<double>();
        if (jp.contains("detector_calls")) p.detector_calls = jp.at("detector_calls").get<long long>();
        points.push_back(std::move(p));
    }
    return points;
}

std::string frontier_to_csv(const std::vector<OperatingPoint>& frontier) {
    std::ostringstream os;
    os << "throughput_fps,hota,s,T_r,M_bar,padding,tracker\n";
    for (const OperatingPoint& p : frontier) {
        os << format_number(p.throughput_fps) << ',' << format_number(p.hota) << ','
           << p.config.sampling_rate << ',' << format_number(p.config.relevance_threshold) << ',';
        if (p.config.mistrack_tolerance)
            os << format_number(*p.config.mistrack_tolerance);
        else
            os << "none";
        os << ',' << to_string(p.config.padding) << ',' << p.config.tracker << '\n';
    }
    return os.str();
}

} // namespace tiletrack
