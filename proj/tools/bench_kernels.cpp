// Times the OpenMP kernels against their serial reference implementations:
// frame synthesis, motion scoring, canvas rendering, and the configuration
// sweep. Outputs wall-clock per kernel and the speedup.

#include <chrono>
#include <cstdio>
#include <vector>

#include "tiletrack/eval.hpp"
#include "tiletrack/parallel.hpp"

using namespace tiletrack;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e18;
    for (int i = 0; i < reps; ++i) {
        const auto start = Clock::now();
        fn();
        best = std::min(best, ms_since(start));
    }
    return best;
}

std::vector<ScoreMatrix> score_serial(const Scenario& sc, const std::vector<FrameImage>& frames,
                                      const Grid2D<double>& prior) {
    std::vector<ScoreMatrix> out(frames.size());
    for (size_t k = 0; k < frames.size(); ++k)
        out[k] = motion_relevance(k == 0 ? frames[0] : frames[k - 1], frames[k], sc.grid, prior, 0);
    return out;
}

std::vector<ScoreMatrix> score_parallel(const Scenario& sc, const std::vector<FrameImage>& frames,
                                        const Grid2D<double>& prior) {
    std::vector<ScoreMatrix> out(frames.size());
    parallel_for(static_cast<int>(frames.size()), [&](int k) {
        out[k] = motion_relevance(k == 0 ? frames[0] : frames[k - 1], frames[k], sc.grid, prior, 0);
    });
    return out;
}

} // namespace

int main() {
    presets::PresetOptions opt;
    opt.seed = 1;
    opt.n_frames = 300;
    opt.frame_w = 640;
    opt.frame_h = 480;
    const Scenario sc = presets::intersection(opt);
    std::vector<int> frames;
    for (int f = 1; f <= sc.n_frames; ++f) frames.push_back(f);

    std::printf("%-24s %10s %10s %8s\n", "kernel", "serial ms", "omp ms", "speedup");

    set_thread_count(0);
    const int reps = 3;

    const double synth_serial = time_best_of(reps, [&] { serial::synthesize_frames(sc, frames); });
    const double synth_omp = time_best_of(reps, [&] { synthesize_frames(sc, frames); });
    std::printf("%-24s %10.1f %10.1f %7.2fx\n", "synthesize_frames", synth_serial, synth_omp,
                synth_serial / synth_omp);

    const auto frames_px = synthesize_frames(sc, frames);
    const Grid2D<double> prior(sc.grid.rows, sc.grid.cols, 1.0);
    const double score_ser = time_best_of(reps, [&] { score_serial(sc, frames_px, prior); });
    const double score_omp = time_best_of(reps, [&] { score_parallel(sc, frames_px, prior); });
    std::printf("%-24s %10.1f %10.1f %7.2fx\n", "motion_relevance", score_ser, score_omp,
                score_ser / score_omp);

    std::vector<PaddedPolyomino> polys;
    for (int f = 1; f <= sc.n_frames; ++f)
        for (const Polyomino& p :
             extract_polyominoes(threshold_scores(oracle_relevance(sc, f, sc.grid), 0.5)))
            polys.push_back(pad_polyomino(p, PaddingMode::none, sc.grid));
    const auto canvases = pack(polys, sc.grid.rows, sc.grid.cols);
    const FrameProvider provider = [&](int f) -> const FrameImage& { return frames_px[f - 1]; };
    const double render_ser =
        time_best_of(reps, [&] { serial::render_canvases(canvases, provider, sc.grid); });
    const double render_omp = time_best_of(reps, [&] { render_canvases(canvases, provider, sc.grid); });
    std::printf("%-24s %10.1f %10.1f %7.2fx\n", "render_canvases", render_ser, render_omp,
                render_ser / render_omp);

    presets::PresetOptions sweep_opt;
    sweep_opt.seed = 2;
    sweep_opt.n_frames = 120;
    const Scenario small = presets::intersection(sweep_opt);
    SweepOptions sweep_options;
    sweep_options.tolerances = {std::nullopt};
    sweep_options.trackers = {"sort"};
    const double sweep_ser = time_best_of(1, [&] {
        set_thread_count(1);
        sweep(small, {}, sweep_options);
    });
    const double sweep_omp = time_best_of(1, [&] {
        set_thread_count(0);
        sweep(small, {}, sweep_options);
    });
    std::printf("%-24s %10.1f %10.1f %7.2fx\n", "config_sweep", sweep_ser, sweep_omp,
                sweep_ser / sweep_omp);
    return 0;
}
