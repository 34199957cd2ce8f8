#pragma once

#include <string>
#include <vector>

#include "tiletrack/gaps.hpp"
#include "tiletrack/grid.hpp"

namespace tiletrack {

/// One window of the coverage-constrained selection problem. Frames are
/// consecutive sampling ordinals f_start..f_end; frames[t] lists the
/// polyominoes of ordinal f_start + t. last_covered carries cross-window
/// state: per tile, the ordinal of the last selected covering polyomino
/// before this window (0 = none).
struct PruneInstance {
    int f_start = 1;
    int f_end = 1;
    std::vector<std::vector<Polyomino>> frames;
    Grid2D<int> gaps;
    Grid2D<int> last_covered;

    int n_frames() const { return f_end - f_start + 1; }
    int n_variables() const;
    long long total_tiles() const;
};

/// Selection variables are indexed by (frame ordinal, k).
struct VarRef {
    int frame = 0; // ordinal
    int k = 0;     // index within the frame's polyomino list
    auto operator<=>(const VarRef&) const = default;
};

/// An at-least-one constraint over selection variables (indices into the
/// instance's flattened variable order).
using Constraint = std::vector<int>;

/// Flattened variable order: ascending (frame ordinal, k).
std::vector<VarRef> variable_order(const PruneInstance& inst);

/// Emit the coverage constraints: for every tile and every start ordinal
/// whose full gap-length span lies inside the window, a nonempty coverage
/// span must contain a selected polyomino. Carried-in coverage adds a
/// boundary constraint when its deadline falls inside the window. Duplicate
/// variable sets are emitted once.
std::vector<Constraint> build_constraints(const PruneInstance& inst);

struct PruneSolution {
    std::vector<VarRef> selected; // sorted ascending
    long long objective = 0;      // total selected tiles
    bool optimal = true;          // false when the solver hit its node budget
};

/// Exact branch-and-bound over the 0-1 program, greedy set-cover upper
/// bound, disjoint-constraint lower bound. Deterministic: among optima it
/// returns the lexicographically smallest selected index set. Falls back to
/// the greedy feasible solution (flagged non-optimal) past `node_budget`.
PruneSolution solve_exact(const PruneInstance& inst, long long node_budget = 50'000'000);

/// Exhaustive enumeration oracle; rejects instances above 20 variables.
PruneSolution solve_bruteforce(const PruneInstance& inst);

/// Independent feasibility re-check of a selection against the instance.
bool selection_feasible(const PruneInstance& inst, const std::vector<VarRef>& selected);

PruneInstance load_instance(const std::string& path);
void save_instance(const PruneInstance& inst, const std::string& path);
void save_solution(const PruneSolution& sol, const std::string& path);

} // namespace tiletrack
