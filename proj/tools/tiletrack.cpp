// tiletrack: tile-level track extraction on synthetic stationary scenes.
//
// Workflow: simulate -> reference -> learn-gaps -> sweep -> pareto -> extract
// -> evaluate, plus analyze for scene statistics. Exit codes: 0 ok,
// 2 infeasible selection constraint, 1 any other error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "tiletrack/eval.hpp"
#include "tiletrack/io.hpp"
#include "tiletrack/parallel.hpp"

using namespace tiletrack;

namespace {

void ensure_parent_dir(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::vector<int> parse_gamma(const std::string& csv) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        out.push_back(std::stoi(csv.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

MissRateTensor learn_tensor(const std::vector<std::string>& scenario_paths, const GapSet& gaps,
                            const std::string& tracker) {
    const auto factory = make_tracker_factory(tracker);
    MissRateTensor total;
    bool first = true;
    for (const std::string& path : scenario_paths) {
        const Scenario sc = load_scenario(path);
        const auto dets = reference_detections(sc);
        std::vector<int> frames;
        for (int f = 1; f <= sc.n_frames; ++f) frames.push_back(f);
        auto ref_tracker = factory();
        const auto reference = track_all(*ref_tracker, dets, frames);
        MissRateTensor t = measure_mistracks(reference, dets, gaps, sc.grid, factory);
        if (first) {
            total = std::move(t);
            first = false;
        } else {
            accumulate(total, t);
        }
    }
    total.tracker = tracker;
    return total;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tile-level track extraction engine"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware default, 1 = serial)");

    // --- simulate ---
    auto* sim_cmd = app.add_subcommand("simulate", "write a deterministic scenario file");
    std::string sim_preset = "highway", sim_out, sim_gt_out;
    presets::PresetOptions sim_opt;
    sim_cmd->add_option("--preset", sim_preset, "highway | intersection | sparse")->required();
    sim_cmd->add_option("--seed", sim_opt.seed, "scenario seed");
    sim_cmd->add_option("--frames", sim_opt.n_frames, "frame count");
    sim_cmd->add_option("--frame-w", sim_opt.frame_w, "frame width px (0 = preset default)");
    sim_cmd->add_option("--frame-h", sim_opt.frame_h, "frame height px (0 = preset default)");
    sim_cmd->add_option("--tile-size", sim_opt.tile_size, "tile size px");
    sim_cmd->add_option("--fps", sim_opt.fps, "nominal source frame rate");
    sim_cmd->add_option("--out", sim_out, "scenario JSON path")->required();
    sim_cmd->add_option("--gt-tracks", sim_gt_out, "also write ground-truth tracks CSV");

    // --- reference ---
    auto* ref_cmd = app.add_subcommand("reference", "run the full-frame every-frame baseline");
    std::string ref_scenario, ref_tracker = "sort", ref_out, ref_report;
    ref_cmd->add_option("--scenario", ref_scenario)->required()->check(CLI::ExistingFile);
    ref_cmd->add_option("--tracker", ref_tracker, "sort | user");
    ref_cmd->add_option("--out", ref_out, "tracks CSV path")->required();
    ref_cmd->add_option("--report", ref_report, "run report JSON path");

    // --- learn-gaps ---
    auto* learn_cmd = app.add_subcommand("learn-gaps", "measure mistrack rates and derive gap matrices");
    std::vector<std::string> learn_scenarios;
    std::string learn_tracker = "sort", learn_gamma = "1,2,4,8,16", learn_out;
    std::vector<double> learn_tolerances{0.4, 0.6, 0.8};
    learn_cmd->add_option("--scenario", learn_scenarios, "training scenario(s)")
        ->required()
        ->check(CLI::ExistingFile);
    learn_cmd->add_option("--tracker", learn_tracker, "sort | user");
    learn_cmd->add_option("--gamma", learn_gamma, "candidate gaps, must include 1");
    learn_cmd->add_option("--tolerances", learn_tolerances, "tolerances for emitted gap matrices");
    learn_cmd->add_option("--out", learn_out, "mistrack tensor JSON path")->required();

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate the configuration grid");
    std::string sweep_scenario, sweep_out, sweep_frontier, sweep_ref_tracker = "sort",
                sweep_scorer = "oracle";
    std::vector<std::string> sweep_tensors;
    sweep_cmd->add_option("--scenario", sweep_scenario)->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--tensor", sweep_tensors, "mistrack tensor JSON, one per tracker option")
        ->required()
        ->check(CLI::ExistingFile);
    sweep_cmd->add_option("--reference-tracker", sweep_ref_tracker, "tracker for the reference tracks");
    sweep_cmd->add_option("--scorer", sweep_scorer, "oracle | motion");
    sweep_cmd->add_option("--out", sweep_out, "sweep JSON path")->required();
    sweep_cmd->add_option("--frontier", sweep_frontier, "also write the frontier CSV");

    // --- pareto ---
    auto* pareto_cmd = app.add_subcommand("pareto", "extract the frontier and select a point");
    std::string pareto_sweep, pareto_out, pareto_selected, pareto_selected_config;
    double min_fps = -1, max_hota_loss = -1;
    pareto_cmd->add_option("--sweep", pareto_sweep)->required()->check(CLI::ExistingFile);
    pareto_cmd->add_option("--out", pareto_out, "frontier CSV path");
    pareto_cmd->add_option("--min-fps", min_fps, "select the most accurate point at or above this rate");
    pareto_cmd->add_option("--max-hota-loss", max_hota_loss,
                           "select the fastest point within this accuracy loss");
    pareto_cmd->add_option("--selected", pareto_selected, "write the selected point JSON");
    pareto_cmd->add_option("--selected-config", pareto_selected_config,
                           "write just the selected config JSON (extract input)");

    // --- extract ---
    auto* extract_cmd = app.add_subcommand("extract", "run the engine under a configuration");
    std::string ex_scenario, ex_config, ex_gaps, ex_out, ex_report, ex_manifest, ex_renders;
    extract_cmd->add_option("--scenario", ex_scenario)->required()->check(CLI::ExistingFile);
    extract_cmd->add_option("--config", ex_config, "config JSON")->required()->check(CLI::ExistingFile);
    extract_cmd->add_option("--gaps", ex_gaps, "gap matrix JSON (required when M_bar is set)")
        ->check(CLI::ExistingFile);
    extract_cmd->add_option("--out", ex_out, "tracks CSV path")->required();
    extract_cmd->add_option("--report", ex_report, "run report JSON path");
    extract_cmd->add_option("--dump-canvases", ex_manifest, "canvas manifest JSON path");
    extract_cmd->add_option("--dump-renders", ex_renders, "directory for raw rendered canvases");

    // --- evaluate ---
    auto* eval_cmd = app.add_subcommand("evaluate", "score tracks with HOTA");
    std::string ev_tracks, ev_reference, ev_ground_truth;
    eval_cmd->add_option("--tracks", ev_tracks)->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--reference", ev_reference, "reference tracks CSV")->check(CLI::ExistingFile);
    eval_cmd->add_option("--ground-truth", ev_ground_truth, "scenario JSON for ground-truth tracks")
        ->check(CLI::ExistingFile);

    // --- analyze ---
    auto* an_cmd = app.add_subcommand("analyze", "per-tile relevance and window overhead statistics");
    std::string an_scenario;
    an_cmd->add_option("--scenario", an_scenario)->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);
    set_thread_count(threads);

    try {
        if (*sim_cmd) {
            if (sim_opt.n_frames < 1) throw std::invalid_argument("simulate: --frames must be >= 1");
            const Scenario sc = presets::by_name(sim_preset, sim_opt);
            ensure_parent_dir(sim_out);
            save_scenario(sc, sim_out);
            if (!sim_gt_out.empty()) {
                ensure_parent_dir(sim_gt_out);
                save_tracks_csv(ground_truth_tracks(sc), sim_gt_out);
            }
            std::cout << "wrote " << sim_out << " (" << sc.objects.size() << " objects, " << sc.n_frames
                      << " frames)\n";
        } else if (*ref_cmd) {
            const Scenario sc = load_scenario(ref_scenario);
            const RunReport report = reference_run(sc, ref_tracker);
            ensure_parent_dir(ref_out);
            save_tracks_csv(report.tracks, ref_out);
            if (!ref_report.empty()) {
                ensure_parent_dir(ref_report);
                save_json(report_to_json(report), ref_report);
            }
            std::cout << "wrote " << ref_out << " (" << report.tracks.size() << " tracks)\n";
        } else if (*learn_cmd) {
            GapSet gaps;
            gaps.gammas = parse_gamma(learn_gamma);
            gaps.validate();
            MissRateTensor tensor = learn_tensor(learn_scenarios, gaps, learn_tracker);
            tensor.sources = learn_scenarios;
            ensure_parent_dir(learn_out);
            save_tensor(tensor, learn_out);
            std::cout << "wrote " << learn_out << "\n";
            for (double tol : learn_tolerances) {
                const GapMatrix m = derive_gap_matrix(tensor, tol);
                std::string path = learn_out;
                const size_t dot = path.rfind(".json");
                const std::string suffix = ".gaps_m" + format_number(tol) + ".json";
                path = dot == std::string::npos ? path + suffix : path.substr(0, dot) + suffix;
                save_gap_matrix(m, path);
                std::cout << "wrote " << path << "\n";
            }
        } else if (*sweep_cmd) {
            const Scenario sc = load_scenario(sweep_scenario);
            std::map<std::string, MissRateTensor> tensors;
            for (const std::string& path : sweep_tensors) {
                MissRateTensor t = load_tensor(path);
                if (t.tracker.empty()) throw std::invalid_argument("tensor without tracker tag: " + path);
                tensors.emplace(t.tracker, std::move(t));
            }
            SweepOptions options;
            options.reference_tracker = sweep_ref_tracker;
            const auto scorer = scorer_from_string(sweep_scorer);
            if (!scorer) throw std::invalid_argument("bad --scorer value: " + sweep_scorer);
            options.scorer = *scorer;
            const SweepResult result = sweep(sc, tensors, options);
            ensure_parent_dir(sweep_out);
            nlohmann::json meta;
            meta["scenario"] = sweep_scenario;
            meta["scenario_seed"] = sc.seed;
            meta["reference_tracker"] = sweep_ref_tracker;
            meta["scorer"] = sweep_scorer;
            meta["detector_cost_s"] = kDetectorCostSeconds;
            save_sweep(result, sweep_out, meta);
            std::cout << "wrote " << sweep_out << " (" << result.points.size() << " points)\n";
            if (!sweep_frontier.empty()) {
                ensure_parent_dir(sweep_frontier);
                atomic_write_text(sweep_frontier, frontier_to_csv(pareto(result.points)));
                std::cout << "wrote " << sweep_frontier << "\n";
            }
        } else if (*pareto_cmd) {
            const auto points = load_sweep_points(pareto_sweep);
            const auto frontier = pareto(points);
            if (!pareto_out.empty()) {
                ensure_parent_dir(pareto_out);
                atomic_write_text(pareto_out, frontier_to_csv(frontier));
                std::cout << "wrote " << pareto_out << " (" << frontier.size() << " points)\n";
            }
            if (min_fps >= 0 || max_hota_loss >= 0) {
                if (min_fps >= 0 && max_hota_loss >= 0)
                    throw std::invalid_argument("choose one of --min-fps / --max-hota-loss");
                const auto chosen = min_fps >= 0
                                        ? select(frontier, SelectMode::min_throughput, min_fps)
                                        : select(frontier, SelectMode::max_accuracy_loss, max_hota_loss);
                if (!chosen) {
                    std::cerr << "no frontier point satisfies the constraint\n";
                    return 2;
                }
                nlohmann::json j;
                j["config"] = config_to_json(chosen->config);
                j["throughput_fps"] = chosen->throughput_fps;
                j["hota"] = chosen->hota;
                std::cout << j.dump(2) << "\n";
                if (!pareto_selected.empty()) {
                    ensure_parent_dir(pareto_selected);
                    save_json(j, pareto_selected);
                }
                if (!pareto_selected_config.empty()) {
                    ensure_parent_dir(pareto_selected_config);
                    save_json(config_to_json(chosen->config), pareto_selected_config);
                }
            }
        } else if (*extract_cmd) {
            const Scenario sc = load_scenario(ex_scenario);
            const Config cfg = config_from_json(load_json(ex_config));
            GapMatrix gaps;
            const GapMatrix* gaps_ptr = nullptr;
            if (cfg.mistrack_tolerance) {
                if (ex_gaps.empty())
                    throw std::invalid_argument("config sets M_bar but no --gaps file was given");
                gaps = load_gap_matrix(ex_gaps);
                gaps_ptr = &gaps;
            }
            RunArtifacts artifacts;
            artifacts.keep_rendered = !ex_renders.empty();
            const bool want_artifacts = !ex_manifest.empty() || !ex_renders.empty();
            const RunReport report = run(sc, cfg, gaps_ptr, want_artifacts ? &artifacts : nullptr);
            ensure_parent_dir(ex_out);
            save_tracks_csv(report.tracks, ex_out);
            if (!ex_report.empty()) {
                ensure_parent_dir(ex_report);
                save_json(report_to_json(report, &cfg), ex_report);
            }
            if (!ex_manifest.empty()) {
                ensure_parent_dir(ex_manifest);
                save_canvas_manifest(artifacts.canvases, ex_manifest);
            }
            if (!ex_renders.empty()) {
                std::filesystem::create_directories(ex_renders);
                for (const RenderedCanvas& rc : artifacts.rendered)
                    save_rendered_raw(rc, ex_renders + "/canvas_" + std::to_string(rc.canvas.id) + ".gray");
            }
            std::cout << "wrote " << ex_out << " (detector calls " << report.detector_calls << " of "
                      << report.n_frames << " frames)\n";
        } else if (*eval_cmd) {
            if (ev_reference.empty() == ev_ground_truth.empty())
                throw std::invalid_argument("evaluate: give exactly one of --reference / --ground-truth");
            const auto predicted = load_tracks_csv(ev_tracks);
            const auto reference = ev_reference.empty()
                                       ? ground_truth_tracks(load_scenario(ev_ground_truth))
                                       : load_tracks_csv(ev_reference);
            const HotaScore score = hota(predicted, reference);
            std::cout << hota_to_json(score).dump(2) << "\n";
        } else if (*an_cmd) {
            const Scenario sc = load_scenario(an_scenario);
            const ObservationStats stats = observation_stats(sc);
            nlohmann::json j;
            j["grid"] = {{"rows", sc.grid.rows}, {"cols", sc.grid.cols}};
            j["mean_relevance_pct"] = stats.mean_relevance_pct;
            j["mean_window_overhead"] = stats.mean_window_overhead;
            j["polyomino_count"] = stats.polyomino_count;
            nlohmann::json rows = nlohmann::json::array();
            for (int r = 0; r < stats.relevance_pct.rows(); ++r) {
                nlohmann::json row = nlohmann::json::array();
                for (int c = 0; c < stats.relevance_pct.cols(); ++c)
                    row.push_back(stats.relevance_pct.at(r, c));
                rows.push_back(std::move(row));
            }
            j["relevance_pct"] = std::move(rows);
            std::cout << j.dump(2) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
